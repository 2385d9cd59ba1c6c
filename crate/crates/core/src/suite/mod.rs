//! The identity suite behind `qeuclid verify`, and the JSON export.
//!
//! Records come out in a fixed order and carry no timings, so a run is a
//! pure function of its configuration.

mod export;
#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{Calculus, Kind};
use crate::frame::{
    check_lambda_relations, check_mixed, check_rll, check_triangular, gll_constants, l_matrix, Frame, GammaChoice,
    LambdaFamily,
};
use crate::geometry::{
    check_exact_compatibility, check_metric_coordinates, check_sigma_coordinates, check_theta_square,
    check_torsion_bilinearity, check_torsion_bilinearity_on_frame, compatibility_factor, Connection, SigmaMap,
    SigmaVariant,
};
use crate::ncalgebra::Algebra;
use crate::rmatrix::{spectral_projectors, verify_braid, verify_characteristic, RHAT_CONVENTION};
use crate::scalar::{Field, GaussRat, IndexData, Params, RatFunc};

pub use export::{export, ExportItem};

/// Largest `N` run symbolically without `force`.
pub const SYMBOLIC_LIMIT: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("--N: {0}")]
    Dim(String),
    #[error("--samples: numeric mode needs at least one sample")]
    Samples,
    #[error("--gamma: {0}")]
    Gamma(String),
    #[error("--N {0} in symbolic mode exceeds the time budget; use --mode numeric or --force")]
    Budget(usize),
    #[error("--only: unknown identity prefix '{0}'")]
    Only(String),
    #[error("{field}: unknown value '{value}'")]
    Value { field: &'static str, value: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
}

impl FromStr for Mode {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "numeric" => Ok(Mode::Numeric),
            _ => Err(ConfigError::Value { field: "--mode", value: s.into() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalculusChoice {
    Unbarred,
    Barred,
    Both,
}

impl CalculusChoice {
    pub fn kinds(self) -> Vec<Kind> {
        match self {
            CalculusChoice::Unbarred => vec![Kind::Unbarred],
            CalculusChoice::Barred => vec![Kind::Barred],
            CalculusChoice::Both => vec![Kind::Unbarred, Kind::Barred],
        }
    }
}

impl FromStr for CalculusChoice {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "unbarred" => Ok(CalculusChoice::Unbarred),
            "barred" => Ok(CalculusChoice::Barred),
            "both" => Ok(CalculusChoice::Both),
            _ => Err(ConfigError::Value { field: "--calculus", value: s.into() }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub dims: Vec<usize>,
    pub calculus: CalculusChoice,
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    pub gamma: GammaChoice,
    /// Identity id prefixes to run; empty runs everything.
    pub only: Vec<String>,
    /// Also run the deliberately broken inputs.
    pub controls: bool,
    pub force: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dims: vec![3],
            calculus: CalculusChoice::Both,
            mode: Mode::Symbolic,
            samples: 3,
            seed: 0,
            gamma: GammaChoice::default(),
            only: Vec::new(),
            controls: false,
            force: false,
        }
    }
}

/// Every identity id the suite can emit.
pub const IDENTITIES: &[&str] = &[
    "rhat.braid",
    "rhat.characteristic",
    "rhat.projector_ranks",
    "algebra.confluence",
    "algebra.radius_exchange",
    "calculus.d_squared",
    "calculus.conjugation",
    "calculus.radius_postulate",
    "frame.gamma_constraints",
    "frame.commutation",
    "frame.k_exchange",
    "frame.duality",
    "frame.lambda_relations",
    "frame.wedge",
    "frame.dirac_closed_form",
    "frame.dirac_derivative",
    "frame.rll",
    "frame.gll",
    "frame.triangular",
    "frame.gluing",
    "frame.mixed_even",
    "geometry.sigma_braid",
    "geometry.bilinearity",
    "geometry.bilinearity_frame",
    "geometry.compatibility_factor",
    "geometry.exact_compatibility",
    "geometry.theta_square",
    "geometry.metric_coordinates",
    "geometry.sigma_coordinates",
    "geometry.torsion",
    "geometry.right_leibniz",
    "geometry.curvature",
    "control.perturbed_gamma0",
    "control.perturbed_rhat",
    "control.sigma_scaling",
    "control.wrong_sigma",
];

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dims.is_empty() {
            return Err(ConfigError::Dim("no dimension given".into()));
        }
        for &n in &self.dims {
            if n < 3 {
                return Err(ConfigError::Dim(format!("N = {n} is below 3")));
            }
            if self.mode == Mode::Symbolic && n > SYMBOLIC_LIMIT && !self.force {
                return Err(ConfigError::Budget(n));
            }
            let idx = IndexData::new(n).map_err(|e| ConfigError::Dim(e.to_string()))?;
            for kind in self.calculus.kinds() {
                self.gamma
                    .resolve(&Params::<RatFunc>::symbolic(), &idx, kind)
                    .map_err(|e| ConfigError::Gamma(e.to_string()))?;
            }
        }
        if self.mode == Mode::Numeric && self.samples == 0 {
            return Err(ConfigError::Samples);
        }
        if let Some(p) = self.only.iter().find(|p| !IDENTITIES.iter().any(|id| id.starts_with(p.as_str()))) {
            return Err(ConfigError::Only(p.clone()));
        }
        Ok(())
    }

    fn wanted(&self, id: &str) -> bool {
        let control = id.starts_with("control.");
        if control && !self.controls {
            return false;
        }
        self.only.is_empty() || self.only.iter().any(|p| id.starts_with(p.as_str()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Held,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calculus: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaVariant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<String>,
    pub expect: Expect,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Record {
    pub fn ok(&self) -> bool {
        matches!((self.expect, self.outcome), (Expect::Holds, Outcome::Held) | (Expect::Fails, Outcome::Failed))
    }

    pub fn is_control(&self) -> bool {
        self.id.starts_with("control.")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(rename = "N")]
    pub dims: Vec<usize>,
    pub calculus: CalculusChoice,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<String>>,
    pub seed: u64,
    pub gamma: String,
    pub only: Vec<String>,
    pub controls: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub not_ok: usize,
    pub controls: usize,
    pub green: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub engine_version: String,
    pub rhat_convention: String,
    pub config: ConfigEcho,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Real sample points `s_0 = a/b` with `b < a <= 3b`, drawn from the seed.
pub fn sample_points(seed: u64, count: usize) -> Vec<GaussRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<GaussRat> = Vec::with_capacity(count);
    while out.len() < count {
        let b: i64 = rng.gen_range(2..=9);
        let a: i64 = rng.gen_range(b + 1..=3 * b);
        let s = GaussRat::from_int(a).checked_div(&GaussRat::from_int(b)).expect("b is nonzero");
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Runs every requested identity.
pub fn run(cfg: &RunConfig) -> Result<VerificationReport, ConfigError> {
    cfg.validate()?;
    let samples = (cfg.mode == Mode::Numeric).then(|| sample_points(cfg.seed, cfg.samples));
    let mut records = Vec::new();
    for &n in &cfg.dims {
        let idx = IndexData::new(n).map_err(|e| ConfigError::Dim(e.to_string()))?;
        match &samples {
            None => Runner { cfg, idx: &idx, sample: None, out: &mut records }.run(&Params::<RatFunc>::symbolic()),
            Some(points) => {
                for s0 in points {
                    let p = Params::<GaussRat>::numeric(s0.clone()).expect("sample points are nonzero");
                    Runner { cfg, idx: &idx, sample: Some(s0.to_string()), out: &mut records }.run(&p);
                }
            }
        }
    }
    let not_ok = records.iter().filter(|r| !r.ok()).count();
    let summary = Summary {
        total: records.len(),
        ok: records.len() - not_ok,
        not_ok,
        controls: records.iter().filter(|r| r.is_control()).count(),
        green: not_ok == 0,
    };
    Ok(VerificationReport {
        engine_version: env!("CARGO_PKG_VERSION").into(),
        rhat_convention: RHAT_CONVENTION.into(),
        config: ConfigEcho {
            dims: cfg.dims.clone(),
            calculus: cfg.calculus,
            mode: cfg.mode,
            samples: samples.map(|v| v.iter().map(|s| s.to_string()).collect()),
            seed: cfg.seed,
            gamma: cfg.gamma.to_string(),
            only: cfg.only.clone(),
            controls: cfg.controls,
        },
        records,
        summary,
    })
}

/// What a passing check reports besides success.
#[derive(Default)]
struct Detail {
    components: Option<usize>,
    value: Option<String>,
}

impl From<usize> for Detail {
    fn from(c: usize) -> Self {
        Detail { components: Some(c), value: None }
    }
}

impl From<()> for Detail {
    fn from(_: ()) -> Self {
        Detail::default()
    }
}

fn value(v: impl fmt::Display) -> Detail {
    Detail { components: None, value: Some(v.to_string()) }
}

#[derive(Clone, Copy)]
struct Tag {
    kind: Option<Kind>,
    sigma: Option<SigmaVariant>,
    expect: Expect,
}

const PLAIN: Tag = Tag { kind: None, sigma: None, expect: Expect::Holds };

impl Tag {
    fn kind(kind: Kind) -> Tag {
        Tag { kind: Some(kind), ..PLAIN }
    }

    fn fails(self) -> Tag {
        Tag { expect: Expect::Fails, ..self }
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    idx: &'a IndexData,
    sample: Option<String>,
    out: &'a mut Vec<Record>,
}

impl Runner<'_> {
    fn check<D: Into<Detail>>(&mut self, id: &str, tag: Tag, f: impl FnOnce() -> Result<D, String>) {
        if !self.cfg.wanted(id) {
            return;
        }
        let (outcome, detail, witness) = match f() {
            Ok(d) => (Outcome::Held, d.into(), None),
            Err(w) => (Outcome::Failed, Detail::default(), Some(w)),
        };
        self.out.push(Record {
            id: id.into(),
            n: self.idx.dim(),
            calculus: tag.kind,
            sigma: tag.sigma,
            sample: self.sample.clone(),
            expect: tag.expect,
            outcome,
            components: detail.components,
            value: detail.value,
            witness,
        });
    }

    fn any_wanted(&self, prefix: &str) -> bool {
        IDENTITIES.iter().any(|id| id.starts_with(prefix) && self.cfg.wanted(id))
    }

    fn run<F: Field>(&mut self, p: &Params<F>) {
        let alg = match Algebra::new(self.idx, p) {
            Ok(a) => Arc::new(a),
            Err(e) => {
                self.check("rhat.characteristic", PLAIN, || Err::<(), _>(e.to_string()));
                return;
            }
        };
        self.rmatrix(&alg);
        self.algebra(&alg);
        let kinds = self.cfg.calculus.kinds();
        let calcs: Vec<Arc<Calculus<F>>> = kinds
            .iter()
            .map(|&k| Arc::new(Calculus::new(alg.clone(), k).expect("calculus from a consistent algebra")))
            .collect();
        self.calculus(&calcs);
        if !(self.any_wanted("frame") || self.any_wanted("geometry") || self.cfg.controls) {
            return;
        }
        let frames: Vec<Frame<F>> = calcs
            .iter()
            .map(|c| {
                let g = self.cfg.gamma.resolve(p, self.idx, c.kind()).expect("validated");
                Frame::new(c.clone(), LambdaFamily::new(&alg, c.kind(), g).expect("lambda shapes exist"))
            })
            .collect();
        for f in &frames {
            self.frame(&alg, f);
        }
        self.gluing(&alg);
        self.geometry(&alg, &frames);
        if self.cfg.controls {
            self.controls(&alg, &calcs);
        }
    }

    fn rmatrix<F: Field>(&mut self, alg: &Algebra<F>) {
        let n = self.idx.dim();
        self.check("rhat.braid", PLAIN, || verify_braid(alg.rhat()).map_err(|e| e.to_string()));
        self.check("rhat.characteristic", PLAIN, || {
            verify_characteristic(alg.rhat(), alg.params()).map_err(|e| e.to_string())
        });
        self.check("rhat.projector_ranks", PLAIN, || {
            let pr = alg.projectors();
            let got = (pr.sym.rank(), pr.anti.rank(), pr.trace.rank());
            let want = (n * (n + 1) / 2 - 1, n * (n - 1) / 2, 1);
            if got == want {
                Ok(value(format!("{got:?}")))
            } else {
                Err(format!("ranks {got:?}, want {want:?}"))
            }
        });
    }

    fn algebra<F: Field>(&mut self, alg: &Algebra<F>) {
        self.check("algebra.confluence", PLAIN, || alg.check_confluence().map_err(|e| e.to_string()));
        self.check("algebra.radius_exchange", PLAIN, || {
            alg.check_radius_exchange().map_err(|(i, j)| format!("x{j} r{i}^2"))
        });
    }

    fn calculus<F: Field>(&mut self, calcs: &[Arc<Calculus<F>>]) {
        for c in calcs {
            let t = Tag::kind(c.kind());
            self.check("calculus.d_squared", t, || c.check_d_squared(3));
            // the copied r-exchange candidate is known to be wrong
            self.check("calculus.radius_postulate", t.fails(), || c.check_radius_postulate());
        }
        if let [a, b] = calcs {
            self.check("calculus.conjugation", PLAIN, || a.check_conjugation(b));
        }
    }

    fn frame<F: Field>(&mut self, alg: &Algebra<F>, f: &Frame<F>) {
        let t = Tag::kind(f.calc.kind());
        self.check("frame.gamma_constraints", t, || f.lambda.check_constraints(alg));
        self.check("frame.commutation", t, || f.check_commutation());
        if let Some(r) = f.check_k_exchange() {
            self.check("frame.k_exchange", t, || r);
        }
        self.check("frame.duality", t, || f.check_duality());
        self.check("frame.lambda_relations", t, || check_lambda_relations(alg, &f.lambda));
        self.check("frame.wedge", t, || f.check_wedge());
        self.check("frame.dirac_closed_form", t, || f.check_dirac_closed_form());
        self.check("frame.dirac_derivative", t, || f.check_dirac_derivative(2));
        if self.any_wanted("frame.rll") || self.any_wanted("frame.gll") || self.any_wanted("frame.triangular") {
            let l = l_matrix(alg, &f.lambda);
            self.check("frame.rll", t, || check_rll(alg, alg.rhat(), &l));
            self.check("frame.gll", t, || gll_constants(alg, &l).map(|(c, cp)| value(format!("c = {c}, c' = {cp}"))));
            self.check("frame.triangular", t, || check_triangular(alg, &l, f.calc.kind()));
        }
    }

    fn gluing<F: Field>(&mut self, alg: &Algebra<F>) {
        let p = alg.params();
        if self.idx.is_odd() {
            if !self.cfg.wanted("frame.gluing") {
                return;
            }
            self.check("frame.gluing", PLAIN, || {
                let (g, gb) = self.cfg.gamma.resolve_glued(p, self.idx).map_err(|e| e.to_string())?;
                let lm = LambdaFamily::new(alg, Kind::Unbarred, g).map_err(|e| e.to_string())?;
                let lp = LambdaFamily::new(alg, Kind::Barred, gb).map_err(|e| e.to_string())?;
                lm.check_constraints(alg)?;
                lp.check_constraints(alg)?;
                let (lm, lp) = (l_matrix(alg, &lm), l_matrix(alg, &lp));
                check_rll(alg, alg.rhat(), &lm)?;
                check_rll(alg, alg.rhat(), &lp)?;
                check_mixed(alg, alg.rhat(), &lm, &lp)
            });
        } else {
            if !self.cfg.wanted("frame.mixed_even") {
                return;
            }
            // even N: no assignment glues the halves
            self.check("frame.mixed_even", PLAIN.fails(), || {
                let g = self.cfg.gamma.resolve(p, self.idx, Kind::Unbarred).map_err(|e| e.to_string())?;
                let gb = self.cfg.gamma.resolve(p, self.idx, Kind::Barred).map_err(|e| e.to_string())?;
                let lm = l_matrix(alg, &LambdaFamily::new(alg, Kind::Unbarred, g).map_err(|e| e.to_string())?);
                let lp = l_matrix(alg, &LambdaFamily::new(alg, Kind::Barred, gb).map_err(|e| e.to_string())?);
                check_mixed(alg, alg.rhat(), &lm, &lp)
            });
        }
    }

    fn geometry<F: Field>(&mut self, alg: &Algebra<F>, frames: &[Frame<F>]) {
        if !self.any_wanted("geometry") {
            return;
        }
        for v in SigmaVariant::ALL {
            let s = SigmaMap::new(alg, v);
            let t = Tag { sigma: Some(v), ..PLAIN };
            self.check("geometry.sigma_braid", t, || s.check_braid());
            self.check("geometry.bilinearity", t, || check_torsion_bilinearity(alg, &s));
            self.check("geometry.compatibility_factor", t, || {
                let c = compatibility_factor(alg, &s)?;
                let e = match v {
                    SigmaVariant::QR => 2,
                    SigmaVariant::QRInverse => -2,
                };
                if c == alg.params().q_pow(e) {
                    Ok(value(format!("q^{e}")))
                } else {
                    Err(format!("factor {c}, want q^{e}"))
                }
            });
            self.check("geometry.exact_compatibility", t.fails(), || check_exact_compatibility(alg, &s));
        }
        for f in frames {
            let kind = f.calc.kind();
            self.check("geometry.theta_square", Tag::kind(kind), || check_theta_square(f));
            self.check("geometry.metric_coordinates", Tag::kind(kind), || check_metric_coordinates(f));
            for v in SigmaVariant::ALL {
                let s = SigmaMap::new(alg, v);
                let t = Tag { kind: Some(kind), sigma: Some(v), expect: Expect::Holds };
                self.check("geometry.bilinearity_frame", t, || check_torsion_bilinearity_on_frame(f, &s));
                self.check("geometry.sigma_coordinates", t, || check_sigma_coordinates(f, &s));
                let d = Connection::new(f, &s);
                self.check("geometry.torsion", t, || d.check_torsion());
                self.check("geometry.right_leibniz", t, || d.check_right_leibniz());
                self.check("geometry.curvature", t, || d.check_curvature());
            }
        }
    }

    fn controls<F: Field>(&mut self, alg: &Arc<Algebra<F>>, calcs: &[Arc<Calculus<F>>]) {
        let p = alg.params();
        let calc = &calcs[0];
        let kind = calc.kind();
        let t = Tag::kind(kind).fails();
        self.check("control.perturbed_gamma0", t, || {
            let mut g = self.cfg.gamma.resolve(p, self.idx, kind).map_err(|e| e.to_string())?;
            // the first constant is γ_0 for odd N and γ_n for even N
            g[0] = g[0].clone() * &F::from_i64(2);
            let f = Frame::new(calc.clone(), LambdaFamily::new(alg, kind, g).map_err(|e| e.to_string())?);
            f.check_duality()
        });
        self.check("control.perturbed_rhat", PLAIN.fails(), || {
            let mut r = alg.rhat().clone();
            let n = self.idx.rank() as i32;
            let v = r.entry(n, -n, n, -n) + F::one();
            r.set(n, -n, n, -n, v);
            verify_braid(&r).map_err(|e| e.to_string())?;
            verify_characteristic(&r, p).map_err(|e| e.to_string())?;
            spectral_projectors(&r, p).map(|_| ()).map_err(|e| e.to_string())
        });
        self.check("control.sigma_scaling", PLAIN.fails(), || {
            let s = SigmaMap::custom("q^2 R", alg.rhat().scale(&p.q_pow(2)));
            check_torsion_bilinearity(alg, &s)
        });
        let g = self.cfg.gamma.resolve(p, self.idx, kind).expect("validated");
        let f = Frame::new(calc.clone(), LambdaFamily::new(alg, kind, g).expect("lambda shapes exist"));
        self.check("control.wrong_sigma", t, || {
            let s = SigmaMap::custom("R", alg.rhat().clone());
            Connection::new(&f, &s).check_curvature()
        });
    }
}
