//! The `SO_q(N)` braid matrix `R̂`, the metric `g` and the spectral projectors.
//!
//! `R̂` is assembled from the Faddeev–Reshetikhin–Takhtajan vector-representation
//! R-matrix, composed with the flip. The labels run `n, ..., -n` (without `0` for
//! even `N`); the FRT index `1..N` corresponds to the labels `-n, ..., n`.
//! Acceptance of the table rests on its invariants: the braid equation, the
//! cubic characteristic identity and `P_t = g ⊗ g / (g_{mn} g^{mn})`.

mod sparse;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, IndexData, Params, ScalarError};

pub use sparse::SparseMatrix;
pub(crate) use sparse::dense_rank;

/// Convention tag recorded in reports.
pub const RHAT_CONVENTION: &str = "FRT vector representation, R̂ = P·R, eigenvalues (q, -1/q, q^(1-N))";

#[derive(Debug, Error)]
pub enum RMatrixError {
    #[error("degenerate q: eigenvalues {0} coincide; use symbolic mode")]
    DegenerateQ(&'static str),
    #[error("braid equation violated at component {0:?}")]
    BraidViolation([i32; 6]),
    #[error("characteristic identity violated at entry {0:?}")]
    CharacteristicViolation([i32; 4]),
    #[error("malformed tensor json: {0}")]
    Json(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// An `N^2 x N^2` matrix with row index `(i, j)` and column index `(k, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BraidTensor<F: Field> {
    idx: IndexData,
    mat: SparseMatrix<F>,
}

impl<F: Field> BraidTensor<F> {
    pub fn from_matrix(idx: IndexData, mat: SparseMatrix<F>) -> Self {
        assert_eq!(mat.dim(), idx.dim() * idx.dim());
        BraidTensor { idx, mat }
    }

    pub fn identity(idx: &IndexData) -> Self {
        let d = idx.dim();
        BraidTensor { idx: idx.clone(), mat: SparseMatrix::identity(d * d) }
    }

    pub fn index(&self) -> &IndexData {
        &self.idx
    }

    pub fn matrix(&self) -> &SparseMatrix<F> {
        &self.mat
    }

    /// Flat position of the ordered label pair `(i, j)`.
    pub fn pair(&self, i: i32, j: i32) -> usize {
        self.idx.pos(i) * self.idx.dim() + self.idx.pos(j)
    }

    /// Label pair at a flat position.
    pub fn unpair(&self, p: usize) -> (i32, i32) {
        let d = self.idx.dim();
        (self.idx.label(p / d), self.idx.label(p % d))
    }

    /// `T^{ij}_{kl}`.
    pub fn entry(&self, i: i32, j: i32, k: i32, l: i32) -> F {
        self.mat.get(self.pair(i, j), self.pair(k, l))
    }

    /// Nonzero entries of row `(i, j)` as `((k, l), value)`.
    pub fn row(&self, i: i32, j: i32) -> impl Iterator<Item = ((i32, i32), &F)> + '_ {
        self.mat.row(self.pair(i, j)).iter().map(move |(c, v)| (self.unpair(*c), v))
    }

    pub fn set(&mut self, i: i32, j: i32, k: i32, l: i32, v: F) {
        let (r, c) = (self.pair(i, j), self.pair(k, l));
        self.mat.set(r, c, v);
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        BraidTensor { idx: self.idx.clone(), mat: self.mat.mul(&rhs.mat) }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        BraidTensor { idx: self.idx.clone(), mat: self.mat.add(&rhs.mat) }
    }

    pub fn scale(&self, c: &F) -> Self {
        BraidTensor { idx: self.idx.clone(), mat: self.mat.scale(c) }
    }

    /// `self + c * 1`.
    pub fn shift(&self, c: &F) -> Self {
        BraidTensor { idx: self.idx.clone(), mat: self.mat.shift(c) }
    }

    pub fn inverse(&self) -> Option<Self> {
        self.mat.inverse().map(|mat| BraidTensor { idx: self.idx.clone(), mat })
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn trace(&self) -> F {
        self.mat.trace()
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    /// First nonzero entry as `(i, j, k, l)`.
    pub fn first_nonzero(&self) -> Option<[i32; 4]> {
        self.mat.iter().next().map(|(r, c, _)| {
            let (i, j) = self.unpair(r);
            let (k, l) = self.unpair(c);
            [i, j, k, l]
        })
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> BraidTensor<G> {
        let mut mat = SparseMatrix::zeros(self.mat.dim());
        for (r, c, v) in self.mat.iter() {
            mat.set(r, c, f(v));
        }
        BraidTensor { idx: self.idx.clone(), mat }
    }
}

/// The metric `g_{ij} = g^{ij} = q^{-rho_i} δ_{i,-j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTensor<F: Field> {
    idx: IndexData,
    /// `g_{i,-i}` by label position of `i`.
    anti: Vec<F>,
}

impl<F: Field> MetricTensor<F> {
    /// `g_{ij}`; numerically equal to `g^{ij}`.
    pub fn get(&self, i: i32, j: i32) -> F {
        if i == -j {
            self.anti[self.idx.pos(i)].clone()
        } else {
            F::zero()
        }
    }

    /// `g_{i,-i}`, the only nonzero entry in row `i`.
    pub fn anti(&self, i: i32) -> &F {
        &self.anti[self.idx.pos(i)]
    }

    pub fn index(&self) -> &IndexData {
        &self.idx
    }

    /// `g_{mn} g^{mn}`.
    pub fn norm(&self) -> F {
        self.anti.iter().fold(F::zero(), |acc, v| acc + v.clone() * v)
    }
}

pub fn build_metric<F: Field>(idx: &IndexData, params: &Params<F>) -> MetricTensor<F> {
    let anti = idx.labels().iter().map(|&i| params.s_pow(-idx.rho2(i))).collect();
    MetricTensor { idx: idx.clone(), anti }
}

/// Builds `R̂` from the FRT entry formula.
pub fn build_rhat<F: Field>(idx: &IndexData, params: &Params<F>) -> BraidTensor<F> {
    let dim = idx.dim();
    let mut r = BraidTensor { idx: idx.clone(), mat: SparseMatrix::zeros(dim * dim) };
    let k = params.k();
    let lab = |p: usize| idx.label(p);
    // FRT R^{ab}_{cd} on positions a, b with a' = N-1-a, where position a carries
    // the label -lab(a); then R̂ = P·R.
    let mut frt = |a: usize, b: usize, c: usize, d: usize, v: F| {
        let (i, j, kk, l) = (-lab(a), -lab(b), -lab(c), -lab(d));
        let cur = r.entry(j, i, kk, l);
        r.set(j, i, kk, l, cur + v);
    };
    let prime = |a: usize| dim - 1 - a;
    for a in 0..dim {
        for b in 0..dim {
            if a == b {
                let v = if a == prime(a) { F::one() } else { params.q() };
                frt(a, a, a, a, v);
            } else if b == prime(a) {
                frt(a, b, a, b, params.q_pow(-1));
            } else {
                frt(a, b, a, b, F::one());
            }
            if a > b {
                frt(a, b, b, a, k.clone());
                let rho = idx.rho2(-lab(a)) - idx.rho2(-lab(b));
                frt(a, prime(a), b, prime(b), -(k.clone() * params.s_pow(rho)));
            }
        }
    }
    r
}

/// `(R̂ - q)(R̂ + q^{-1})(R̂ - q^{1-N})`; zero for a valid braid matrix.
pub fn characteristic_residual<F: Field>(rhat: &BraidTensor<F>, params: &Params<F>) -> BraidTensor<F> {
    let (ms, ma, mt) = eigenvalues(rhat.index(), params);
    rhat.shift(&-ms).mul(&rhat.shift(&-ma)).mul(&rhat.shift(&-mt))
}

pub fn verify_characteristic<F: Field>(rhat: &BraidTensor<F>, params: &Params<F>) -> Result<(), RMatrixError> {
    match characteristic_residual(rhat, params).first_nonzero() {
        None => Ok(()),
        Some(w) => Err(RMatrixError::CharacteristicViolation(w)),
    }
}

/// `(q, -q^{-1}, q^{1-N})`.
pub fn eigenvalues<F: Field>(idx: &IndexData, params: &Params<F>) -> (F, F, F) {
    (params.q(), -params.q_pow(-1), params.q_pow(1 - idx.dim() as i32))
}

#[derive(Clone, Debug)]
pub struct Projectors<F: Field> {
    pub sym: BraidTensor<F>,
    pub anti: BraidTensor<F>,
    pub trace: BraidTensor<F>,
}

/// Lagrange interpolation `P_α = Π_{β≠α} (R̂ - μ_β)/(μ_α - μ_β)`.
pub fn spectral_projectors<F: Field>(rhat: &BraidTensor<F>, params: &Params<F>) -> Result<Projectors<F>, RMatrixError> {
    let (ms, ma, mt) = eigenvalues(rhat.index(), params);
    let lagrange = |mu: &F, o1: &F, o2: &F, name: &'static str| -> Result<BraidTensor<F>, RMatrixError> {
        let den = (mu.clone() - o1) * (mu.clone() - o2);
        let inv = den.inv().ok_or(RMatrixError::DegenerateQ(name))?;
        Ok(rhat.shift(&-o1.clone()).mul(&rhat.shift(&-o2.clone())).scale(&inv))
    };
    Ok(Projectors {
        sym: lagrange(&ms, &ma, &mt, "q, -1/q or q^(1-N)")?,
        anti: lagrange(&ma, &ms, &mt, "-1/q, q or q^(1-N)")?,
        trace: lagrange(&mt, &ms, &ma, "q^(1-N), q or -1/q")?,
    })
}

/// `g^{ij} g_{kl} / (g_{mn} g^{mn})`, the expected trace projector.
pub fn metric_trace_projector<F: Field>(g: &MetricTensor<F>) -> BraidTensor<F> {
    let idx = g.index();
    let inv = g.norm().inv().expect("metric norm is nonzero");
    let mut t = BraidTensor::from_matrix(idx.clone(), SparseMatrix::zeros(idx.dim() * idx.dim()));
    for &i in idx.labels() {
        for &k in idx.labels() {
            t.set(i, -i, k, -k, g.anti(i).clone() * g.anti(k) * &inv);
        }
    }
    t
}

/// Checks `(R̂⊗1)(1⊗R̂)(R̂⊗1) = (1⊗R̂)(R̂⊗1)(1⊗R̂)` on all `N^3` components.
///
/// The witness is `(a, b, c, d, e, f)`: output component `(a, b, c)` of the
/// image of basis vector `(d, e, f)`.
pub fn verify_braid<F: Field>(rhat: &BraidTensor<F>) -> Result<(), RMatrixError> {
    let idx = rhat.index();
    let d = idx.dim();
    let apply12 = |v: &[F]| -> Vec<F> {
        let mut out = vec![F::zero(); d * d * d];
        for r in 0..d * d {
            for (c, val) in rhat.matrix().row(r) {
                for z in 0..d {
                    let src = &v[c * d + z];
                    if !src.is_zero() {
                        out[r * d + z] = out[r * d + z].clone() + val.clone() * src;
                    }
                }
            }
        }
        out
    };
    let apply23 = |v: &[F]| -> Vec<F> {
        let mut out = vec![F::zero(); d * d * d];
        for a in 0..d {
            for r in 0..d * d {
                for (c, val) in rhat.matrix().row(r) {
                    let src = &v[a * d * d + c];
                    if !src.is_zero() {
                        out[a * d * d + r] = out[a * d * d + r].clone() + val.clone() * src;
                    }
                }
            }
        }
        out
    };
    for col in 0..d * d * d {
        let mut e = vec![F::zero(); d * d * d];
        e[col] = F::one();
        let lhs = apply12(&apply23(&apply12(&e)));
        let rhs = apply23(&apply12(&apply23(&e)));
        if let Some(row) = (0..d * d * d).find(|&r| lhs[r] != rhs[r]) {
            let l = |p: usize| idx.label(p);
            return Err(RMatrixError::BraidViolation([
                l(row / (d * d)),
                l((row / d) % d),
                l(row % d),
                l(col / (d * d)),
                l((col / d) % d),
                l(col % d),
            ]));
        }
    }
    Ok(())
}

/// Wire format `{"N": int, "entries": [[i, j, k, l, "scalar"], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    #[serde(rename = "N")]
    pub dim: usize,
    pub entries: Vec<(i32, i32, i32, i32, String)>,
}

impl<F: Field> BraidTensor<F> {
    pub fn to_json(&self) -> TensorJson {
        let entries = self
            .mat
            .iter()
            .map(|(r, c, v)| {
                let (i, j) = self.unpair(r);
                let (k, l) = self.unpair(c);
                (i, j, k, l, v.to_string())
            })
            .collect();
        TensorJson { dim: self.idx.dim(), entries }
    }
}

impl<F> BraidTensor<F>
where
    F: Field + std::str::FromStr<Err = ScalarError>,
{
    pub fn from_json(json: &TensorJson) -> Result<Self, RMatrixError> {
        let idx = IndexData::new(json.dim)?;
        let d = idx.dim();
        let mut t = BraidTensor { idx: idx.clone(), mat: SparseMatrix::zeros(d * d) };
        for (i, j, k, l, v) in &json.entries {
            if ![*i, *j, *k, *l].iter().all(|&a| idx.has_label(a)) {
                return Err(RMatrixError::Json(format!("label out of range in entry ({i},{j},{k},{l})")));
            }
            t.set(*i, *j, *k, *l, v.parse()?);
        }
        Ok(t)
    }
}

impl<F: Field> MetricTensor<F> {
    pub fn to_json(&self) -> TensorJson {
        let entries = self.idx.labels().iter().map(|&i| (i, -i, 0, 0, self.anti(i).to_string())).collect();
        TensorJson { dim: self.idx.dim(), entries }
    }
}

impl<F: Field> fmt::Display for BraidTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, c, v) in self.mat.iter() {
            let (i, j) = self.unpair(r);
            let (k, l) = self.unpair(c);
            writeln!(f, "[{i},{j};{k},{l}] = {v}")?;
        }
        Ok(())
    }
}
