use std::sync::Arc;

use super::*;
use crate::calculus::Calculus;
use crate::frame::{GammaChoice, LambdaFamily};
use crate::scalar::{GaussRat, IndexData, Params, RatFunc};

fn frame<F: Field>(alg: &Arc<Algebra<F>>, kind: Kind) -> Frame<F> {
    let calc = Arc::new(Calculus::new(alg.clone(), kind).unwrap());
    let g = GammaChoice::default().resolve(alg.params(), alg.index(), kind).unwrap();
    Frame::new(calc, LambdaFamily::new(alg, kind, g).unwrap())
}

fn symbolic(n: usize) -> Arc<Algebra<RatFunc>> {
    Arc::new(Algebra::new(&IndexData::new(n).unwrap(), &Params::symbolic()).unwrap())
}

#[test]
fn bilinearity_holds_for_both_variants() {
    for n in 3..=5 {
        let alg = symbolic(n);
        for v in SigmaVariant::ALL {
            let s = SigmaMap::new(&alg, v);
            check_torsion_bilinearity(&alg, &s).unwrap();
            s.check_braid().unwrap();
        }
    }
}

#[test]
fn wrong_scaling_breaks_bilinearity() {
    let alg = symbolic(3);
    let q2 = alg.params().q_pow(2);
    let s = SigmaMap::custom("q^2 R", alg.rhat().scale(&q2));
    assert!(check_torsion_bilinearity(&alg, &s).is_err());
}

#[test]
fn compatibility_factors() {
    // [PAPER] S g S = q^{±2} g δ, never exact for generic q
    for n in [3, 4] {
        let alg = symbolic(n);
        let p = alg.params();
        let qr = compatibility_factor(&alg, &SigmaMap::new(&alg, SigmaVariant::QR)).unwrap();
        let qi = compatibility_factor(&alg, &SigmaMap::new(&alg, SigmaVariant::QRInverse)).unwrap();
        assert_eq!(qr, p.q_pow(2), "N={n}");
        assert_eq!(qi, p.q_pow(-2), "N={n}");
        for v in SigmaVariant::ALL {
            assert!(check_exact_compatibility(&alg, &SigmaMap::new(&alg, v)).is_err());
        }
    }
}

#[test]
fn compatibility_factor_classical_limit() {
    let alg = symbolic(3);
    let c = compatibility_factor(&alg, &SigmaMap::new(&alg, SigmaVariant::QR)).unwrap();
    assert_eq!(c.eval(&GaussRat::one()).unwrap(), GaussRat::one());
}

#[test]
fn frame_geometry_n3() {
    let alg = symbolic(3);
    for kind in [Kind::Unbarred, Kind::Barred] {
        let f = frame(&alg, kind);
        check_theta_square(&f).unwrap();
        check_metric_coordinates(&f).unwrap();
        for v in SigmaVariant::ALL {
            let s = SigmaMap::new(&alg, v);
            check_torsion_bilinearity_on_frame(&f, &s).unwrap();
            check_sigma_coordinates(&f, &s).unwrap();
            let d = Connection::new(&f, &s);
            assert_eq!(d.check_torsion(), Ok(3), "{kind} {v}");
            d.check_right_leibniz().unwrap();
            assert_eq!(d.check_curvature(), Ok(3), "{kind} {v}");
        }
    }
}

#[test]
fn frame_geometry_n4() {
    let alg = symbolic(4);
    for kind in [Kind::Unbarred, Kind::Barred] {
        let f = frame(&alg, kind);
        check_theta_square(&f).unwrap();
        check_metric_coordinates(&f).unwrap();
        for v in SigmaVariant::ALL {
            let s = SigmaMap::new(&alg, v);
            let d = Connection::new(&f, &s);
            d.check_torsion().unwrap();
            d.check_curvature().unwrap();
        }
    }
}

#[test]
fn wrong_sigma_has_curvature() {
    let alg = symbolic(3);
    let f = frame(&alg, Kind::Unbarred);
    let s = SigmaMap::custom("R", alg.rhat().clone());
    let d = Connection::new(&f, &s);
    assert!(d.check_curvature().is_err());
    assert!(d.check_torsion().is_err());
}

#[test]
fn numeric_geometry_n5() {
    let idx = IndexData::new(5).unwrap();
    let p = Params::<GaussRat>::numeric("3/2".parse().unwrap()).unwrap();
    let alg = Arc::new(Algebra::new(&idx, &p).unwrap());
    let f = frame(&alg, Kind::Barred);
    for v in SigmaVariant::ALL {
        let s = SigmaMap::new(&alg, v);
        let d = Connection::new(&f, &s);
        d.check_torsion().unwrap();
        d.check_curvature().unwrap();
    }
}
