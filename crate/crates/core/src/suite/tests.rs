use super::*;
use crate::rmatrix::BraidTensor;

fn cfg(dims: &[usize]) -> RunConfig {
    RunConfig { dims: dims.to_vec(), ..RunConfig::default() }
}

#[test]
fn n3_symbolic_is_green() {
    let r = run(&cfg(&[3])).unwrap();
    let bad: Vec<_> = r.failures().collect();
    assert!(bad.is_empty(), "{bad:#?}");
    assert!(r.summary.green);
    assert!(r.records.iter().any(|x| x.id == "frame.gluing"));
    let gll = r.records.iter().find(|x| x.id == "frame.gll").unwrap();
    assert_eq!(gll.value.as_deref(), Some("c = (1)/(1), c' = (1)/(1)"));
}

#[test]
fn same_seed_same_report() {
    let c = RunConfig { mode: Mode::Numeric, samples: 2, seed: 11, only: vec!["frame.duality".into()], ..cfg(&[4]) };
    let a = run(&c).unwrap().to_json();
    let b = run(&c).unwrap().to_json();
    assert_eq!(a, b);
    let other = run(&RunConfig { seed: 12, ..c }).unwrap().to_json();
    assert_ne!(a, other);
}

#[test]
fn sample_points_are_distinct_and_real() {
    let pts = sample_points(5, 6);
    assert_eq!(pts.len(), 6);
    for (i, p) in pts.iter().enumerate() {
        assert!(!pts[..i].contains(p));
        assert!(p.is_real());
    }
}

#[test]
fn budget_guard() {
    let c = cfg(&[6]);
    assert_eq!(c.validate(), Err(ConfigError::Budget(6)));
    assert!(RunConfig { force: true, ..c.clone() }.validate().is_ok());
    assert!(RunConfig { mode: Mode::Numeric, ..c }.validate().is_ok());
}

#[test]
fn config_errors() {
    assert!(matches!(cfg(&[2]).validate(), Err(ConfigError::Dim(_))));
    assert!(matches!(RunConfig { only: vec!["bogus".into()], ..cfg(&[3]) }.validate(), Err(ConfigError::Only(_))));
    assert!(matches!(
        RunConfig { mode: Mode::Numeric, samples: 0, ..cfg(&[3]) }.validate(),
        Err(ConfigError::Samples)
    ));
    let gamma = "gamma3=default".parse().unwrap();
    assert!(matches!(RunConfig { gamma, ..cfg(&[4]) }.validate(), Err(ConfigError::Gamma(_))));
    assert!("sideways".parse::<Mode>().is_err());
    assert!("neither".parse::<CalculusChoice>().is_err());
}

#[test]
fn perturbed_gamma_is_not_green() {
    let c = RunConfig { gamma: "gamma0=2*default".parse().unwrap(), only: vec!["frame".into()], ..cfg(&[3]) };
    let r = run(&c).unwrap();
    assert!(!r.summary.green);
    let ids: Vec<&str> = r.failures().map(|x| x.id.as_str()).collect();
    assert!(ids.contains(&"frame.duality"));
    assert!(ids.contains(&"frame.gamma_constraints"));
    assert!(r.failures().all(|x| x.witness.is_some()));
}

#[test]
fn controls_fail_with_witnesses() {
    let c = RunConfig { controls: true, only: vec!["control".into()], calculus: CalculusChoice::Unbarred, ..cfg(&[3]) };
    let r = run(&c).unwrap();
    assert_eq!(r.records.len(), 4);
    for rec in &r.records {
        assert_eq!(rec.outcome, Outcome::Failed, "{}", rec.id);
        assert!(rec.witness.is_some());
    }
    assert!(r.summary.green);
}

#[test]
fn only_filters_records() {
    let r = run(&RunConfig { only: vec!["rhat".into()], ..cfg(&[3, 4]) }).unwrap();
    assert_eq!(r.records.len(), 6);
    assert!(r.records.iter().all(|x| x.id.starts_with("rhat.")));
}

#[test]
fn export_round_trips() {
    let alg = Algebra::<RatFunc>::new(&IndexData::new(3).unwrap(), &Params::symbolic()).unwrap();
    let g = GammaChoice::default();
    let v = export(&alg, &g, ExportItem::Rhat).unwrap();
    let json: crate::rmatrix::TensorJson = serde_json::from_value(v).unwrap();
    assert_eq!(&BraidTensor::<RatFunc>::from_json(&json).unwrap(), alg.rhat());
    let v = export(&alg, &g, ExportItem::Frame).unwrap();
    let m: export::PerCalculus<export::MatrixJson> = serde_json::from_value(v).unwrap();
    let comps = crate::frame::frame_components(
        &alg,
        &LambdaFamily::new(&alg, Kind::Barred, g.resolve(alg.params(), alg.index(), Kind::Barred).unwrap()).unwrap(),
    );
    for (row, want) in m.barred.entries.iter().zip(&comps.entries) {
        for (s, e) in row.iter().zip(want) {
            assert!(alg.equal(&alg.parse(s).unwrap(), e), "{s}");
        }
    }
}

#[test]
fn export_lambda_n4_has_k() {
    let alg = Algebra::<RatFunc>::new(&IndexData::new(4).unwrap(), &Params::symbolic()).unwrap();
    let v = export(&alg, &GammaChoice::default(), ExportItem::Lambda).unwrap();
    let per: export::PerCalculus<Vec<export::LabelledJson>> = serde_json::from_value(v).unwrap();
    assert_eq!(per.unbarred.len(), 4);
    let with_k = per.unbarred.iter().filter(|l| l.element.contains('K')).count();
    assert_eq!(with_k, 2);
}
