use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qeuclid_core::calculus::{Calculus, Kind};
use qeuclid_core::frame::{Frame, GammaChoice, LambdaFamily};
use qeuclid_core::ncalgebra::Algebra;
use qeuclid_core::rmatrix::{build_rhat, verify_braid};
use qeuclid_core::scalar::{Field, GaussRat, IndexData, Params, RatFunc};
use qeuclid_core::suite::{self, RunConfig};

fn numeric() -> Params<GaussRat> {
    let s0 = GaussRat::from_int(7).checked_div(&GaussRat::from_int(5)).unwrap();
    Params::numeric(s0).unwrap()
}

fn rhat(c: &mut Criterion) {
    let p = Params::<RatFunc>::symbolic();
    let mut g = c.benchmark_group("rhat");
    for n in 3..=5 {
        let idx = IndexData::new(n).unwrap();
        g.bench_with_input(BenchmarkId::new("build", n), &idx, |b, idx| b.iter(|| build_rhat(black_box(idx), &p)));
        let r = build_rhat(&idx, &p);
        g.bench_with_input(BenchmarkId::new("braid", n), &r, |b, r| b.iter(|| verify_braid(r).unwrap()));
    }
    g.finish();
}

fn word<F: Field>(alg: &Algebra<F>) -> qeuclid_core::ncalgebra::Element<F> {
    alg.mul_all(&[&alg.x(-2), &alg.x(1), &alg.x(2), &alg.x(-1), &alg.x(2), &alg.x(-2)])
}

fn normal_form(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_form");
    let idx = IndexData::new(4).unwrap();
    let sym = Algebra::new(&idx, &Params::<RatFunc>::symbolic()).unwrap();
    let num = Algebra::new(&idx, &numeric()).unwrap();
    g.bench_function("symbolic_n4", |b| b.iter(|| word(&sym)));
    g.bench_function("numeric_n4", |b| b.iter(|| word(&num)));
    g.finish();
}

fn frame_checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("frame");
    g.sample_size(10);
    let p = Params::<RatFunc>::symbolic();
    let idx = IndexData::new(3).unwrap();
    let alg = Arc::new(Algebra::new(&idx, &p).unwrap());
    let calc = Arc::new(Calculus::new(alg.clone(), Kind::Unbarred).unwrap());
    let gamma = GammaChoice::default().resolve(&p, &idx, Kind::Unbarred).unwrap();
    let frame = Frame::new(calc, LambdaFamily::new(&alg, Kind::Unbarred, gamma).unwrap());
    g.bench_function("commutation_n3", |b| b.iter(|| frame.check_commutation().unwrap()));
    g.bench_function("duality_n3", |b| b.iter(|| frame.check_duality().unwrap()));
    g.finish();
}

fn suite_run(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    g.bench_function("verify_n3_symbolic", |b| b.iter(|| suite::run(&RunConfig::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, rhat, normal_form, frame_checks, suite_run);
criterion_main!(benches);
