use super::*;
use crate::scalar::{GaussRat, IndexData, Params, RatFunc};

type R = RatFunc;

fn algebra(n: usize) -> Arc<Algebra<R>> {
    Arc::new(Algebra::new(&IndexData::new(n).unwrap(), &Params::symbolic()).unwrap())
}

fn frame(alg: &Arc<Algebra<R>>, kind: Kind, choice: &GammaChoice) -> Frame<R> {
    let calc = Arc::new(Calculus::new(alg.clone(), kind).unwrap());
    let g = choice.resolve(alg.params(), alg.index(), kind).unwrap();
    Frame::new(calc, LambdaFamily::new(alg, kind, g).unwrap())
}

fn kinds() -> [Kind; 2] {
    [Kind::Unbarred, Kind::Barred]
}

#[test]
fn required_products_match_closed_forms() {
    // [PAPER] N = 3: γ_0 = -q^{-1/2} h^{-1}, γ_1 γ_{-1} = -q^{-1} h^{-2};
    // barred: γ̄_0 = q^{1/2} h^{-1}, γ̄_1 γ̄_{-1} = -q h^{-2}
    let alg = algebra(3);
    let p = alg.params();
    let idx = alg.index();
    let hi = p.h().inv().unwrap();
    let cases = [
        (Kind::Unbarred, 0, -(p.s_pow(-1) * &hi)),
        (Kind::Unbarred, 1, -(p.q_pow(-1) * &hi * &hi)),
        (Kind::Barred, 0, p.s_pow(1) * &hi),
        (Kind::Barred, 1, -(p.q() * &hi * &hi)),
    ];
    for (kind, a, want) in cases {
        assert_eq!(required_product(p, idx, kind, a), want, "{kind} a={a}");
    }
    // N = 4: γ_1 γ_{-1} = k^{-2}, γ_2 γ_{-2} = -q^{-1} k^{-2} ω_2 ω_1
    let alg = algebra(4);
    let p = alg.params();
    let ki = p.k().inv().unwrap();
    assert_eq!(required_product(p, alg.index(), Kind::Unbarred, 1), ki.clone() * &ki);
    let want = -(p.q_pow(-1) * &ki * &ki * &p.omega(alg.index(), 2) * &p.omega(alg.index(), 1));
    assert_eq!(required_product(p, alg.index(), Kind::Unbarred, 2), want);
}

#[test]
fn default_choice_meets_constraints() {
    for n in 3..=6 {
        let alg = algebra(n);
        for kind in kinds() {
            let g = GammaChoice::default().resolve(alg.params(), alg.index(), kind).unwrap();
            check_constraints(alg.params(), alg.index(), kind, &g).unwrap();
        }
    }
}

#[test]
fn gamma_choice_text_round_trip() {
    let c: GammaChoice = "gamma0=2*default, gammabar1=[s^2], gamma-1=default".parse().unwrap();
    assert_eq!(c.overrides.len(), 3);
    assert_eq!(c.overrides[1].kind, Kind::Barred);
    assert_eq!(c.overrides[2].label, -1);
    let again: GammaChoice = c.to_string().parse().unwrap();
    assert_eq!(again, c);
    assert!("delta0=default".parse::<GammaChoice>().is_err());
    assert!("gamma0=twice".parse::<GammaChoice>().is_err());
    let alg = algebra(3);
    assert!("gamma2=default".parse::<GammaChoice>().unwrap().resolve(alg.params(), alg.index(), Kind::Unbarred).is_err());
}

#[test]
fn frame_n3() {
    let alg = algebra(3);
    for kind in kinds() {
        let f = frame(&alg, kind, &GammaChoice::default());
        f.lambda.check_constraints(&alg).unwrap();
        check_lambda_relations(&alg, &f.lambda).unwrap();
        assert_eq!(f.check_commutation(), Ok(12), "{kind}");
        assert_eq!(f.check_duality(), Ok(3), "{kind}");
        f.check_wedge().unwrap();
        f.check_dirac_closed_form().unwrap();
        f.check_dirac_derivative(2).unwrap();
        assert!(f.check_k_exchange().is_none());
    }
}

#[test]
fn frame_n4() {
    let alg = algebra(4);
    for kind in kinds() {
        let f = frame(&alg, kind, &GammaChoice::default());
        check_lambda_relations(&alg, &f.lambda).unwrap();
        f.check_commutation().unwrap();
        f.check_duality().unwrap();
        f.check_wedge().unwrap();
        f.check_dirac_closed_form().unwrap();
        f.check_dirac_derivative(1).unwrap();
        f.check_k_exchange().unwrap().unwrap();
        // θ^{±1} carry K-weight, so they do not commute with K
        let k = alg.kappa(1).unwrap();
        assert!(f.check_exchange(1, &k, 0).is_err());
        assert!(f.check_exchange(-1, &k, 0).is_err());
        assert!(f.check_exchange(2, &k, 0).is_ok());
    }
}

#[test]
fn perturbed_gamma_breaks_duality_not_commutation() {
    let alg = algebra(3);
    let choice: GammaChoice = "gamma0=2*default".parse().unwrap();
    let f = frame(&alg, Kind::Unbarred, &choice);
    assert!(f.lambda.check_constraints(&alg).is_err());
    assert!(f.check_duality().is_err());
    assert!(f.check_dirac_closed_form().is_err());
    f.check_commutation().unwrap();
}

#[test]
fn l_matrices_n3() {
    let alg = algebra(3);
    for kind in kinds() {
        let f = frame(&alg, kind, &GammaChoice::default());
        let l = l_matrix(&alg, &f.lambda);
        assert_eq!(check_rll(&alg, alg.rhat(), &l), Ok(81));
        assert_eq!(check_triangular(&alg, &l, kind), Ok(3));
        let (c, cp) = gll_constants(&alg, &l).unwrap();
        assert_eq!((c, cp), (R::one(), R::one()));
    }
}

#[test]
fn l_matrices_n4() {
    let alg = algebra(4);
    for kind in kinds() {
        let f = frame(&alg, kind, &GammaChoice::default());
        let l = l_matrix(&alg, &f.lambda);
        check_rll(&alg, alg.rhat(), &l).unwrap();
        check_triangular(&alg, &l, kind).unwrap();
        gll_constants(&alg, &l).unwrap();
    }
}

#[test]
fn plain_order_reading_fails() {
    // negating labels turns the reversed reading into the plain one
    let alg = algebra(3);
    let f = frame(&alg, Kind::Unbarred, &GammaChoice::default());
    let l = l_matrix(&alg, &f.lambda);
    let t = ElementMatrix {
        entries: (0..3).map(|i| (0..3).map(|j| l.entries[2 - i][2 - j].clone()).collect()).collect(),
    };
    assert!(check_rll(&alg, alg.rhat(), &t).is_err());
}

#[test]
fn glued_constants_n3() {
    let alg = algebra(3);
    let (g, gb) = GammaChoice::default().resolve_glued(alg.params(), alg.index()).unwrap();
    check_constraints(alg.params(), alg.index(), Kind::Unbarred, &g).unwrap();
    check_constraints(alg.params(), alg.index(), Kind::Barred, &gb).unwrap();
    let lm = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Unbarred, g).unwrap());
    let lp = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Barred, gb).unwrap());
    check_rll(&alg, alg.rhat(), &lm).unwrap();
    check_rll(&alg, alg.rhat(), &lp).unwrap();
    assert_eq!(check_mixed(&alg, alg.rhat(), &lm, &lp), Ok(81));
}

#[test]
fn default_split_does_not_glue() {
    let alg = algebra(3);
    let d = GammaChoice::default();
    let lm = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Unbarred, d.resolve(alg.params(), alg.index(), Kind::Unbarred).unwrap()).unwrap());
    let lp = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Barred, d.resolve(alg.params(), alg.index(), Kind::Barred).unwrap()).unwrap());
    assert!(check_mixed(&alg, alg.rhat(), &lm, &lp).is_err());
}

#[test]
fn even_n_does_not_glue() {
    let alg = algebra(4);
    let d = GammaChoice::default();
    assert!(d.resolve_glued(alg.params(), alg.index()).is_err());
    let lm = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Unbarred, d.resolve(alg.params(), alg.index(), Kind::Unbarred).unwrap()).unwrap());
    let lp = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Barred, d.resolve(alg.params(), alg.index(), Kind::Barred).unwrap()).unwrap());
    assert!(check_mixed(&alg, alg.rhat(), &lm, &lp).is_err());
}

#[test]
fn glued_constants_n5_numeric() {
    let idx = IndexData::new(5).unwrap();
    let p = Params::<GaussRat>::numeric("7/5".parse().unwrap()).unwrap();
    let alg = Algebra::new(&idx, &p).unwrap();
    let (g, gb) = GammaChoice::default().resolve_glued(&p, &idx).unwrap();
    check_constraints(&p, &idx, Kind::Unbarred, &g).unwrap();
    check_constraints(&p, &idx, Kind::Barred, &gb).unwrap();
    let lm = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Unbarred, g).unwrap());
    let lp = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Barred, gb).unwrap());
    assert_eq!(check_mixed(&alg, alg.rhat(), &lm, &lp), Ok(625));
}

#[test]
fn gluing_ignores_the_split() {
    // γ_1 = q γ_{-1} instead of γ_{-1} = q γ_1
    let alg = algebra(3);
    let p = alg.params();
    let idx = alg.index();
    let hi = p.h().inv().unwrap();
    let mut g = vec![R::zero(); 3];
    g[idx.pos(0)] = required_product(p, idx, Kind::Unbarred, 0);
    g[idx.pos(-1)] = R::imag_unit() * &p.q_pow(-1) * &hi;
    g[idx.pos(1)] = R::imag_unit() * &hi;
    let gb: Vec<R> = g.iter().map(|v| v.clone() * &(-p.q())).collect();
    check_constraints(p, idx, Kind::Unbarred, &g).unwrap();
    check_constraints(p, idx, Kind::Barred, &gb).unwrap();
    let lm = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Unbarred, g).unwrap());
    let lp = l_matrix(&alg, &LambdaFamily::new(&alg, Kind::Barred, gb).unwrap());
    check_mixed(&alg, alg.rhat(), &lm, &lp).unwrap();
}

#[test]
fn numeric_frame_n5() {
    let idx = IndexData::new(5).unwrap();
    let p = Params::<GaussRat>::numeric("7/5".parse().unwrap()).unwrap();
    let alg = Arc::new(Algebra::new(&idx, &p).unwrap());
    for kind in kinds() {
        let calc = Arc::new(Calculus::new(alg.clone(), kind).unwrap());
        let g = GammaChoice::default().resolve(alg.params(), alg.index(), kind).unwrap();
        let f = Frame::new(calc, LambdaFamily::new(&alg, kind, g).unwrap());
        f.check_commutation().unwrap();
        f.check_duality().unwrap();
        f.check_dirac_closed_form().unwrap();
        let l = l_matrix(&alg, &f.lambda);
        check_rll(&alg, alg.rhat(), &l).unwrap();
        gll_constants(&alg, &l).unwrap();
    }
}

