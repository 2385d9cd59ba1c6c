use super::*;
use crate::scalar::{GaussRat, RatFunc};

fn sym(n: usize) -> Algebra<RatFunc> {
    Algebra::new(&IndexData::new(n).unwrap(), &Params::symbolic()).unwrap()
}

fn num(n: usize, s0: i64) -> Algebra<GaussRat> {
    Algebra::new(&IndexData::new(n).unwrap(), &Params::numeric(GaussRat::from_int(s0)).unwrap()).unwrap()
}

#[test]
fn n3_rules_have_the_expected_shape() {
    let a = sym(3);
    let q = a.q_pow(1);
    // x^0 x^1 = q x^1 x^0 and x^-1 x^0 = q x^0 x^-1
    let lhs = a.mul(&a.x(0), &a.x(1));
    assert_eq!(lhs, a.mul(&a.x(1), &a.x(0)).scale(&q), "{}", a.render(&lhs));
    let lhs = a.mul(&a.x(-1), &a.x(0));
    assert_eq!(lhs, a.mul(&a.x(0), &a.x(-1)).scale(&q));
    // x^1 x^-1 - x^-1 x^1 is a multiple of (x^0)^2
    let d = a.comm(&a.x(1), &a.x(-1));
    let x00 = a.mul(&a.x(0), &a.x(0));
    assert!(a.ratio(&d, &x00).is_some(), "{}", a.render(&d));
}

#[test]
fn rule_counts() {
    for n in [3, 4, 5] {
        let a = sym(n);
        let nontrivial = a.rules().iter().filter(|(_, _, r)| r.len() > 1).count();
        assert_eq!(a.rules().iter().count(), n * (n - 1) / 2);
        assert!(nontrivial >= 1, "N={n}");
    }
}

#[test]
fn confluence_symbolic() {
    for n in [3, 4, 5] {
        let a = sym(n);
        let c = a.check_confluence().unwrap();
        assert_eq!(c, n * (n - 1) * (n - 2) / 6);
    }
}

#[test]
fn defining_relations_reduce_to_zero() {
    for n in [3, 4] {
        let a = sym(n);
        for &i in a.index().labels() {
            for &j in a.index().labels() {
                assert!(a.is_zero(&a.relation(i, j)), "N={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn radius_exchange_is_consistent() {
    for n in [3, 4, 5, 6] {
        a_check(n);
    }
    fn a_check(n: usize) {
        let a = num(n, 3);
        assert_eq!(a.check_radius_exchange(), Ok(()), "N={n}");
    }
}

#[test]
fn n4_middle_pair_enters_the_long_rule() {
    let a = sym(4);
    let idx = a.index();
    let rhs = a.rules().rule(idx.pos(-2), idx.pos(2));
    let pairs: Vec<(i32, i32)> = rhs.iter().map(|(_, u, v)| (idx.label(*u), idx.label(*v))).collect();
    assert_eq!(pairs.len(), 2);
    assert!(pairs.contains(&(2, -2)) && pairs.contains(&(1, -1)));
    // x^1 x^-1 and x^-1 x^1 agree, so both spellings of the correction coincide
    assert_eq!(a.mul(&a.x(1), &a.x(-1)), a.mul(&a.x(-1), &a.x(1)));
}

#[test]
fn classical_limit_commutes() {
    let one = GaussRat::one();
    for n in [3, 4, 5] {
        let a = sym(n);
        for (x, y, rhs) in a.rules().iter() {
            let vals: Vec<(GaussRat, usize, usize)> =
                rhs.iter().map(|(c, u, v)| (c.eval(&one).unwrap(), *u, *v)).filter(|(c, _, _)| !c.is_zero()).collect();
            assert_eq!(vals, vec![(GaussRat::one(), y, x)], "N={n}");
        }
    }
}

#[test]
fn exchange_examples() {
    let a = sym(5);
    let q = a.q_pow(1);
    // x^2 r_1 = q^{-1} r_1 x^2, x^1 r_1 = r_1 x^1
    let r1 = a.r(1, 1).unwrap();
    assert_eq!(a.mul(&a.x(2), &r1), a.mul(&r1, &a.x(2)).scale(&q.inv().unwrap()));
    assert_eq!(a.mul(&a.x(1), &r1), a.mul(&r1, &a.x(1)));
    assert_eq!(a.mul(&a.x(-2), &r1), a.mul(&r1, &a.x(-2)).scale(&q));
    // x^0 Λ = q Λ x^0
    let l = a.lambda(1);
    assert_eq!(a.mul(&a.x(0), &l), a.mul(&l, &a.x(0)).scale(&q));
    assert_eq!(a.render(&a.mul(&a.x(0), &l)), "[(s^2)/(1)] * L * x0");
    let a4 = sym(4);
    let k = a4.kappa(1).unwrap();
    assert_eq!(a4.mul(&k, &a4.x(1)), a4.mul(&a4.x(1), &k).scale(&q));
    assert_eq!(a4.mul(&k, &a4.x(-1)), a4.mul(&a4.x(-1), &k).scale(&q.inv().unwrap()));
    assert_eq!(a4.mul(&k, &a4.x(2)), a4.mul(&a4.x(2), &k));
    let rules = a4.extended_rules();
    assert!(rules.contains(&(Letter::X(2), Letter::R(1), -1)));
    assert!(rules.contains(&(Letter::X(-1), Letter::K, 1)));
}

#[test]
fn normal_form_examples() {
    let a = sym(3);
    let x11 = a.mul(&a.x(1), &a.x(1));
    assert_eq!(x11.len(), 1);
    assert_eq!(a.render(&x11), "[(1)/(1)] * x1^2");
    let d = a.comm(&a.x(1), &a.x(-1));
    let x00 = a.mul(&a.x(0), &a.x(0));
    assert_eq!(a.ratio(&d, &x00), Some(a.params().h()));
}

#[test]
fn zero_test_examples() {
    let a = sym(3);
    let r1sq = a.pow(&a.r(1, 1).unwrap(), 2);
    assert!(a.is_zero(&r1sq.sub(&a.radius_square(1))));
    let bad = a.mul(&a.x(1), &a.x(-1)).sub(&a.mul(&a.x(-1), &a.x(1)).scale(&a.q_pow(2)));
    assert!(!a.is_zero(&bad));
    let ll = a.mul(&a.lambda(1), &a.lambda(-1));
    assert!(a.is_zero(&ll.sub(&Element::one())));
    // r_1^{-1} r_1^2 - r_1 and a localized inverse
    let r = a.r(1, 1).unwrap();
    let e = a.mul(&a.r(1, -1).unwrap(), &a.radius_square(1)).sub(&r);
    assert!(a.is_zero(&e));
    let x0 = a.x(0);
    let e = a.mul(&a.mul(&x0, &a.x(1)), &a.x_pow(0, -1).unwrap()).sub(&a.x(1).scale(&a.q_pow(1)));
    assert!(a.is_zero(&e));
}

#[test]
fn star_examples() {
    let a = sym(3);
    // (x^1)^* = x^-1 g_{-1,1} = q^{-1/2} x^-1
    assert_eq!(a.star(&a.x(1)), a.x(-1).scale(&a.params().s_pow(-1)));
    assert_eq!(a.star(&a.x(0)), a.x(0));
    for &i in a.index().labels() {
        assert_eq!(a.star(&a.star(&a.x(i))), a.x(i));
    }
    assert_eq!(a.star(&a.lambda(2)), a.lambda(-2));
    let c = RatFunc::imag_unit();
    assert_eq!(a.star(&a.x(0).scale(&c)), a.x(0).scale(&-c));
}

#[test]
fn star_maps_relations_to_relations() {
    for n in [3, 4, 5] {
        let a = sym(n);
        for &i in a.index().labels() {
            for &j in a.index().labels() {
                assert!(a.is_zero(&a.star(&a.relation(i, j))), "N={n} ({i},{j})");
            }
        }
        for (x, y, rhs) in a.rules().iter() {
            let l = |p| a.index().label(p);
            let mut e = a.mul(&a.x(l(x)), &a.x(l(y)));
            for (c, u, v) in rhs {
                e = e.sub(&a.mul(&a.x(l(*u)), &a.x(l(*v))).scale(c));
            }
            assert!(e.is_zero());
            assert!(a.is_zero(&a.star(&e)));
        }
    }
}

#[test]
fn star_is_an_antihomomorphism_with_lambda() {
    let a = sym(3);
    let e = a.parse("[(s^2 + 1)/(s)] * L * x1 * x-1 + 3 * L^-1 * x0").unwrap();
    let f = a.parse("x1 * L^2 + x0^2").unwrap();
    assert_eq!(a.star(&a.mul(&e, &f)), a.mul(&a.star(&f), &a.star(&e)));
}

#[test]
fn parse_round_trip() {
    for n in [3, 4] {
        let a = sym(n);
        let src = if n == 3 { "L^-2 * r1^-1 * x-1 * x1 + [(s)/(1)] * x0^-1" } else { "K * x1^-1 * x2 - 2 * L * r2 * x-1^-2" };
        let e = a.parse(src).unwrap();
        assert_eq!(a.parse(&a.render(&e)).unwrap(), e);
    }
    let a = sym(3);
    let e = a.parse("x1 * x0").unwrap();
    assert_eq!(e, a.mul(&a.x(1), &a.x(0)));
    assert_eq!(a.parse("0").unwrap(), Element::zero());
}

#[test]
fn malformed_inputs_are_rejected() {
    let a = sym(3);
    assert!(matches!(a.parse("x1^-1"), Err(AlgebraError::NotLocalized(1))));
    assert!(matches!(a.parse("K"), Err(AlgebraError::NoSuchGenerator(_))));
    assert!(matches!(a.parse("r2"), Err(AlgebraError::NoSuchGenerator(_))));
    assert!(matches!(a.parse("x0 * xi1"), Err(AlgebraError::Parse(_))));
    let mut b = sym(3);
    b.set_exponent_cap(4);
    assert!(matches!(b.parse("x0^3 * x0^3"), Err(AlgebraError::ExponentCap(..))));
}

#[test]
fn numeric_mode_agrees_with_symbolic() {
    let s0 = GaussRat::from_frac(7, 3);
    let a = sym(4);
    let b = Algebra::new(&IndexData::new(4).unwrap(), &Params::numeric(s0.clone()).unwrap()).unwrap();
    let src = "x-2 * x2 * x1 * r1^-1 + L * x-1 * x2^2 * K";
    let e = a.parse(src).unwrap();
    let f = b.parse(src).unwrap();
    let projected = e.map_coeffs(|c| c.eval(&s0).unwrap());
    assert_eq!(projected, f);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn word() -> impl Strategy<Value = Vec<(i32, i16)>> {
        // (letter code, exponent): codes 0..5 are x^{2..-2}, 5 is Λ, 6 is r_1, 7 is r_2
        prop::collection::vec((0i32..8, -2i16..3), 0..5)
    }

    fn build(a: &Algebra<GaussRat>, w: &[(i32, i16)]) -> Element<GaussRat> {
        let mut acc = Element::one();
        for &(c, e) in w {
            let f = match c {
                0..=4 => {
                    let l = 2 - c;
                    a.x_pow(l, if l == 0 { e } else { e.abs() }).unwrap()
                }
                5 => a.lambda(e),
                6 => a.r(1, e).unwrap(),
                _ => a.r(2, e).unwrap(),
            };
            acc = a.mul(&acc, &f);
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn associativity(u in word(), v in word(), w in word()) {
            let a = num(5, 2);
            let (x, y, z) = (build(&a, &u), build(&a, &v), build(&a, &w));
            prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
        }

        #[test]
        fn grading_is_preserved(u in word(), v in word()) {
            let a = num(5, 3);
            let (x, y) = (build(&a, &u), build(&a, &v));
            let g = |e: &Element<GaussRat>| e.terms().next().map(|(m, _)| m.grading());
            let p = a.mul(&x, &y);
            if let (Some(gx), Some(gy)) = (g(&x), g(&y)) {
                for (m, _) in p.terms() {
                    prop_assert_eq!(m.grading(), (gx.0 + gy.0, gx.1 + gy.1, gx.2 + gy.2));
                }
            }
        }

        #[test]
        fn normal_form_is_idempotent(u in word()) {
            let a = num(5, 2);
            let x = build(&a, &u);
            let again = a.parse(&a.render(&x)).unwrap();
            prop_assert_eq!(again, x);
        }
    }
}
