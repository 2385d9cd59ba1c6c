use proptest::prelude::*;

use super::*;
use crate::scalar::{GaussRat, Params, RatFunc};

fn alg(n: usize) -> Arc<Algebra<RatFunc>> {
    Arc::new(Algebra::new(&IndexData::new(n).unwrap(), &Params::symbolic()).unwrap())
}

fn calc(n: usize, kind: Kind) -> Calculus<RatFunc> {
    Calculus::new(alg(n), kind).unwrap()
}

fn pair(n: usize) -> (Calculus<RatFunc>, Calculus<RatFunc>) {
    let a = alg(n);
    (Calculus::new(a.clone(), Kind::Unbarred).unwrap(), Calculus::new(a, Kind::Barred).unwrap())
}

fn num_pair(n: usize, s0: i64) -> (Calculus<GaussRat>, Calculus<GaussRat>) {
    let p = Params::numeric(GaussRat::from_int(s0)).unwrap();
    let a = Arc::new(Algebra::new(&IndexData::new(n).unwrap(), &p).unwrap());
    (Calculus::new(a.clone(), Kind::Unbarred).unwrap(), Calculus::new(a, Kind::Barred).unwrap())
}

#[test]
fn n3_top_coordinate_passes_its_own_differential() {
    let c = calc(3, Kind::Unbarred);
    // x^1 ξ^1 = q^2 ξ^1 x^1, i.e. ξ^1 x^1 = q^-2 x^1 ξ^1
    let w = c.parse("xi1 * x1").unwrap();
    let want = c.parse("x1 * xi1").unwrap().scale(&c.algebra().q_pow(-2));
    assert!(c.equal(&w, &want), "{}", c.render(&w));
    let p1 = c.algebra().index().pos(1);
    assert_eq!(c.x_xi_rule(p1, p1).len(), 1);
    assert_eq!(c.x_xi_rule(p1, p1)[0].0, c.algebra().q_pow(2));
}

#[test]
fn reordering_is_involutive() {
    for n in [3, 4] {
        for kind in [Kind::Unbarred, Kind::Barred] {
            let c = calc(n, kind);
            let idx = c.algebra().index().clone();
            for i in 0..n {
                for j in 0..n {
                    // x^i ξ^j written with ξ on the left, then moved back
                    let mut back = c.zero(1);
                    for (v, k, l) in c.x_xi_rule(i, j) {
                        back = back.add(&c.xi_times(*k, &c.algebra().x(idx.label(*l))).unwrap().scale(v));
                    }
                    let direct = c.left_mul(&c.algebra().x(idx.label(i)), &c.xi(idx.label(j)));
                    assert!(c.equal(&back, &direct), "N={n} {kind} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn classical_limit_commutes() {
    let c = calc(4, Kind::Unbarred);
    let one = GaussRat::one();
    for i in 0..4 {
        for j in 0..4 {
            for (v, k, l) in c.x_xi_rule(i, j) {
                let at1 = v.eval(&one).ok();
                let want = if (*k, *l) == (j, i) { 1 } else { 0 };
                assert_eq!(at1, Some(GaussRat::from_int(want)), "({i},{j}) -> ({k},{l})");
            }
        }
    }
}

#[test]
fn wedge_basis_shape() {
    for n in [3, 4, 5] {
        let c = calc(n, Kind::Unbarred);
        assert_eq!(c.pair_basis().len(), n * (n - 1) / 2);
        for (b, &(a1, a2)) in c.pair_basis().iter().enumerate() {
            let w = c.wedge_pair(a1, a2);
            for (k, comp) in w.comps().iter().enumerate() {
                let want = if k == b { Element::one() } else { Element::zero() };
                assert_eq!(comp, &want);
            }
        }
    }
}

#[test]
fn wedge_examples() {
    let c = calc(3, Kind::Unbarred);
    let top = c.algebra().index().pos(1);
    assert!(c.wedge_pair(top, top).is_trivially_zero());
    // g_{ij} ξ^i ξ^j = 0
    let idx = c.algebra().index().clone();
    let mut tr = c.zero(2);
    for &i in idx.labels() {
        let g = c.algebra().metric().get(i, -i);
        tr = tr.add(&c.wedge_pair(idx.pos(i), idx.pos(-i)).scale(&g));
    }
    assert!(tr.is_trivially_zero(), "{}", c.render(&tr));
}

#[test]
fn wedge_respects_projectors() {
    // P_s and P_t rows vanish, for both calculi
    for n in [3, 4] {
        let c = calc(n, Kind::Barred);
        let idx = c.algebra().index().clone();
        let pr = c.algebra().projectors();
        for m in [&pr.sym, &pr.trace] {
            for &i in idx.labels() {
                for &j in idx.labels() {
                    let mut w = c.zero(2);
                    for ((k, l), v) in m.row(i, j) {
                        w = w.add(&c.wedge_pair(idx.pos(k), idx.pos(l)).scale(v));
                    }
                    assert!(w.is_trivially_zero(), "N={n} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn d_examples() {
    let c = calc(3, Kind::Unbarred);
    let a = c.algebra().clone();
    let f = c.function(a.x(1));
    assert!(c.equal(&c.d(&f).unwrap(), &c.xi(1)));
    // d(x^i x^j) = ξ^i x^j + x^i ξ^j
    let f = c.function(a.mul(&a.x(-1), &a.x(1)));
    let want = c.parse("xi-1 * x1 + x-1 * xi1").unwrap();
    assert!(c.equal(&c.d(&f).unwrap(), &want));
    // d(r^2) = g_{kl} (ξ^k x^l + x^k ξ^l)
    let r2 = c.function(a.radius_square(1));
    let mut want = c.zero(1);
    for &k in a.index().labels() {
        let g = a.metric().get(k, -k);
        let t = c.right_mul(&c.xi(k), &a.x(-k)).unwrap().add(&c.left_mul(&a.x(k), &c.xi(-k)));
        want = want.add(&t.scale(&g));
    }
    assert!(c.equal(&c.d(&r2).unwrap(), &want));
}

#[test]
fn d_commutes_with_lambda_up_to_q() {
    for kind in [Kind::Unbarred, Kind::Barred] {
        let c = calc(4, kind);
        let a = c.algebra().clone();
        let f = a.mul(&a.x(2), &a.x(-1));
        let lf = c.d(&c.function(a.mul(&a.lambda(1), &f))).unwrap();
        let want = c.left_mul(&a.lambda(1), &c.d(&c.function(f)).unwrap()).scale(&a.q_pow(-kind.sign()));
        assert!(c.equal(&lf, &want), "{kind}");
    }
}

#[test]
fn d_squared_vanishes() {
    for n in [3, 4] {
        for kind in [Kind::Unbarred, Kind::Barred] {
            let c = calc(n, kind);
            let count = c.check_d_squared(3).unwrap();
            assert!(count > 0);
        }
    }
}

#[test]
fn leibniz_rule() {
    let c = calc(4, Kind::Unbarred);
    let a = c.algebra().clone();
    let mons = c.monomials(2);
    for f in &mons {
        for g in &mons {
            let fg = c.d(&c.function(a.mul(f, g))).unwrap();
            let df = c.d(&c.function(f.clone())).unwrap();
            let dg = c.d(&c.function(g.clone())).unwrap();
            let rhs = c.right_mul(&df, g).unwrap().add(&c.left_mul(f, &dg));
            assert!(c.equal(&fg, &rhs));
        }
    }
}

#[test]
fn calculi_are_conjugate() {
    for n in [3, 4, 5] {
        let (u, b) = pair(n);
        assert_eq!(u.check_conjugation(&b).unwrap(), n * n);
        assert_eq!(b.check_conjugation(&u).unwrap(), n * n);
    }
    for s0 in [2, 3, 5] {
        let (u, b) = num_pair(4, s0);
        u.check_conjugation(&b).unwrap();
    }
}

#[test]
fn star_examples() {
    let (u, b) = pair(3);
    let p0 = u.algebra().index().pos(0);
    assert!(b.equal(&u.star_xi(&b, p0), &b.xi(0)));
    for p in 0..3 {
        let once = u.star(&b, &u.xi(u.algebra().index().label(p))).unwrap();
        let twice = b.star(&u, &once).unwrap();
        assert!(u.equal(&twice, &u.xi(u.algebra().index().label(p))));
    }
}

#[test]
fn star_reverses_products() {
    let (u, b) = pair(4);
    let a = u.algebra().clone();
    let w = u.parse("[s^2] * x1 * xi-2 + x2 * xi1").unwrap();
    let f = a.mul(&a.x(-1), &a.x(2));
    let lhs = u.star(&b, &u.right_mul(&w, &f).unwrap()).unwrap();
    let rhs = b.left_mul(&a.star(&f), &u.star(&b, &w).unwrap());
    assert!(b.equal(&lhs, &rhs));
    let ww = u.mul(&u.xi(1), &u.xi(-2)).unwrap();
    let lhs = u.star(&b, &ww).unwrap();
    let rhs = b.mul(&u.star(&b, &u.xi(-2)).unwrap(), &u.star(&b, &u.xi(1)).unwrap()).unwrap();
    assert!(b.equal(&lhs, &rhs));
}

#[test]
fn full_radius_is_central_only_up_to_q_squared() {
    for n in [3, 4, 5] {
        let (u, b) = pair(n);
        let rank = u.algebra().index().rank();
        for &j in u.algebra().index().labels() {
            assert_eq!(u.radius_exchange(rank, j), Some(u.algebra().q_pow(-2)));
            assert_eq!(b.radius_exchange(rank, j), Some(b.algebra().q_pow(2)));
        }
    }
}

#[test]
fn radius_rule_candidate_is_rejected() {
    for n in [3, 4] {
        for kind in [Kind::Unbarred, Kind::Barred] {
            let err = calc(n, kind).check_radius_postulate().unwrap_err();
            assert!(err.contains("r"), "{err}");
        }
    }
}

#[test]
fn radius_square_reorders_both_ways() {
    // ξ^k (x^j r_i^2) against ξ^k (q^p r_i^2 x^j)
    for n in [3, 4] {
        let c = calc(n, Kind::Unbarred);
        let a = c.algebra().clone();
        for i in 1..=a.index().rank() {
            let r2 = a.radius_square(i);
            for &j in a.index().labels() {
                let p = a.swap_power(crate::ncalgebra::Letter::X(j as i8), crate::ncalgebra::Letter::R(i as u8));
                let left = a.mul(&a.x(j), &r2);
                let right = a.mul(&r2, &a.x(j)).scale(&a.q_pow(2 * p));
                for k in 0..n {
                    let one = c.xi_times(k, &left).unwrap();
                    let two = c.xi_times(k, &right).unwrap();
                    assert!(c.equal(&one, &two), "N={n} i={i} j={j} k={k}");
                }
            }
        }
    }
}

#[test]
fn parse_and_render() {
    let c = calc(3, Kind::Barred);
    let w = c.parse("x1 * xibar0 - [s^-1] * xibar1 * x0").unwrap();
    let back = c.parse(&c.render(&w)).unwrap();
    assert!(c.equal(&w, &back));
    assert!(c.parse("xi1").is_err());
    assert!(c.parse("xibar1 * xibar0 * xibar-1").is_err());
    assert!(c.parse("xibar7").is_err());
}

#[test]
fn localized_inputs_are_out_of_scope() {
    let c = calc(4, Kind::Unbarred);
    let a = c.algebra().clone();
    let r = a.r(2, -1).unwrap();
    assert!(matches!(c.xi_times(0, &r), Err(AlgebraError::OutOfScope(_))));
    assert!(matches!(c.d(&c.function(r)), Err(AlgebraError::OutOfScope(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forms_associate(i in 0usize..4, j in 0usize..4, k in 0usize..4, l in 0usize..4) {
        let c = calc(4, Kind::Unbarred);
        let a = c.algebra().clone();
        let idx = a.index().clone();
        let xj = a.x(idx.label(j));
        let xk = a.x(idx.label(k));
        // (ξ^i x^j) x^k = ξ^i (x^j x^k)
        let one = c.right_mul(&c.right_mul(&c.xi(idx.label(i)), &xj).unwrap(), &xk).unwrap();
        let two = c.right_mul(&c.xi(idx.label(i)), &a.mul(&xj, &xk)).unwrap();
        prop_assert!(c.equal(&one, &two));
        // (ξ^i x^j) ξ^l = ξ^i (x^j ξ^l)
        let left = c.mul(&c.right_mul(&c.xi(idx.label(i)), &xj).unwrap(), &c.xi(idx.label(l))).unwrap();
        let right = c.mul(&c.xi(idx.label(i)), &c.left_mul(&xj, &c.xi(idx.label(l)))).unwrap();
        prop_assert!(c.equal(&left, &right));
    }
}
