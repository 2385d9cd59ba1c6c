//! Exact scalars: the field `Q(i)(s)` with `s = q^{1/2}`, and its numeric
//! avatar `Q(i)` obtained by substituting a sample point for `s`.
//!
//! Every algebraic structure in this crate is generic over [`Field`], so the
//! same code runs symbolically (`RatFunc`) or as a probabilistic identity
//! test at a Gaussian-rational point (`GaussRat`).

mod gauss;
mod index;
mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub use gauss::GaussRat;
pub use index::{IndexData, MAX_DIM};
pub use poly::Poly;
pub use ratfunc::RatFunc;

/// The symbolic scalar type.
pub type Scalar = RatFunc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the sample point; retry with a fresh point")]
    Pole,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficient field for the engine.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_gauss(g: &GaussRat) -> Self;
    /// Complex conjugation of coefficients; `s` is fixed (real deformation parameter).
    fn conj(&self) -> Self;
    /// Parses the exact string form produced by `Display`.
    fn parse_scalar(src: &str) -> Result<Self, ScalarError>;

    fn from_i64(v: i64) -> Self {
        Self::from_gauss(&GaussRat::from_int(v))
    }

    fn imag_unit() -> Self {
        Self::from_gauss(&GaussRat::i())
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }
}

impl Field for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn one() -> Self {
        GaussRat::one()
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn is_one(&self) -> bool {
        GaussRat::is_one(self)
    }
    fn inv(&self) -> Option<Self> {
        GaussRat::inv(self)
    }
    fn from_gauss(g: &GaussRat) -> Self {
        g.clone()
    }
    fn conj(&self) -> Self {
        GaussRat::conj(self)
    }
    fn parse_scalar(src: &str) -> Result<Self, ScalarError> {
        src.parse()
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn is_one(&self) -> bool {
        RatFunc::is_one(self)
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
    fn from_gauss(g: &GaussRat) -> Self {
        RatFunc::constant(g.clone())
    }
    fn conj(&self) -> Self {
        RatFunc::conj(self)
    }
    fn parse_scalar(src: &str) -> Result<Self, ScalarError> {
        src.parse()
    }
}

/// Exact evaluation of a symbolic scalar at `s = s0`.
pub fn eval_numeric(a: &Scalar, s0: &GaussRat) -> Result<GaussRat, ScalarError> {
    a.eval(s0)
}

/// The deformation parameter realised in a coefficient field, with a cache of
/// its integer powers. `s` is `q^{1/2}`; `q^m` for half-integer `m` is `s^{2m}`.
#[derive(Clone, Debug)]
pub struct Params<F: Field> {
    s: F,
    pos: Vec<F>,
    neg: Vec<F>,
}

const POW_CACHE: usize = 96;

impl<F: Field> Params<F> {
    /// Fails when `s` is zero.
    pub fn new(s: F) -> Result<Self, ScalarError> {
        let inv = s.inv().ok_or(ScalarError::DivisionByZero)?;
        let mut pos = vec![F::one()];
        let mut neg = vec![F::one()];
        for i in 1..POW_CACHE {
            pos.push(pos[i - 1].clone() * &s);
            neg.push(neg[i - 1].clone() * &inv);
        }
        Ok(Params { s, pos, neg })
    }

    pub fn s(&self) -> &F {
        &self.s
    }

    /// `s^e`.
    pub fn s_pow(&self, e: i32) -> F {
        let a = e.unsigned_abs() as usize;
        let table = if e >= 0 { &self.pos } else { &self.neg };
        if a < POW_CACHE {
            return table[a].clone();
        }
        let mut acc = table[POW_CACHE - 1].clone();
        for _ in POW_CACHE - 1..a {
            acc = acc * &table[1];
        }
        acc
    }

    /// `q^e` for integer `e`.
    pub fn q_pow(&self, e: i32) -> F {
        self.s_pow(2 * e)
    }

    pub fn q(&self) -> F {
        self.q_pow(1)
    }

    /// `h = q^{1/2} - q^{-1/2}`.
    pub fn h(&self) -> F {
        self.s_pow(1) - self.s_pow(-1)
    }

    /// `k = q - q^{-1}`.
    pub fn k(&self) -> F {
        self.s_pow(2) - self.s_pow(-2)
    }

    /// `omega_i = q^{rho_i} + q^{-rho_i}`.
    pub fn omega(&self, idx: &IndexData, label: i32) -> F {
        let r = idx.rho2(label);
        self.s_pow(r) + self.s_pow(-r)
    }
}

impl Params<RatFunc> {
    pub fn symbolic() -> Self {
        Params::new(RatFunc::s()).expect("s is nonzero")
    }
}

impl Params<GaussRat> {
    pub fn numeric(s0: GaussRat) -> Result<Self, ScalarError> {
        Params::new(s0)
    }
}

/// The named constants `h`, `k` and `omega_i` for one index set.
#[derive(Clone, Debug)]
pub struct NamedConstants<F: Field> {
    pub h: F,
    pub k: F,
    /// `(label, omega_label)` in index order.
    pub omega: Vec<(i32, F)>,
}

pub fn named_constants<F: Field>(idx: &IndexData, params: &Params<F>) -> NamedConstants<F> {
    NamedConstants {
        h: params.h(),
        k: params.k(),
        omega: idx.labels().iter().map(|&i| (i, params.omega(idx, i))).collect(),
    }
}

impl<F: Field> NamedConstants<F> {
    pub fn omega_of(&self, label: i32) -> Option<&F> {
        self.omega.iter().find(|(i, _)| *i == label).map(|(_, w)| w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym() -> Params<RatFunc> {
        Params::symbolic()
    }

    #[test]
    fn k_factors_through_s() {
        let p = sym();
        let a = p.s_pow(1) - p.s_pow(-1);
        let b = p.s_pow(1) + p.s_pow(-1);
        assert_eq!(a * &b, p.k());
        assert_eq!(p.h() * (p.s_pow(1) + p.s_pow(-1)), p.k());
    }

    #[test]
    fn numeric_examples() {
        let p = sym();
        let two = GaussRat::from_int(2);
        assert_eq!(eval_numeric(&p.k(), &two).unwrap(), GaussRat::from_frac(15, 4));
        assert_eq!(eval_numeric(&p.h(), &two).unwrap(), GaussRat::from_frac(3, 2));
        let idx5 = IndexData::new(5).unwrap();
        let w1 = p.omega(&idx5, 1);
        assert_eq!(eval_numeric(&w1, &GaussRat::from_int(3)).unwrap(), GaussRat::from_frac(10, 3));
    }

    #[test]
    fn omega_values() {
        let p = sym();
        let c3 = named_constants(&IndexData::new(3).unwrap(), &p);
        assert_eq!(c3.omega_of(0).unwrap(), &RatFunc::from_i64(2));
        assert_eq!(c3.omega_of(1).unwrap(), &(p.s_pow(1) + p.s_pow(-1)));
        let c4 = named_constants(&IndexData::new(4).unwrap(), &p);
        assert_eq!(c4.omega_of(1).unwrap(), &RatFunc::from_i64(2));
        let c6 = named_constants(&IndexData::new(6).unwrap(), &p);
        assert_eq!(c6.omega_of(2).unwrap(), &(p.q() + p.q_pow(-1)));
    }

    #[test]
    fn pole_is_reported() {
        let p = sym();
        let inv_h = p.h().inv().unwrap();
        assert_eq!(eval_numeric(&inv_h, &GaussRat::one()), Err(ScalarError::Pole));
    }

    fn small_scalar() -> impl Strategy<Value = RatFunc> {
        (prop::collection::vec((-3i32..=3, -4i64..=4), 1..4), prop::collection::vec((0i32..=3, -3i64..=3), 0..3))
            .prop_map(|(n, d)| {
                let num = RatFunc::laurent(&n);
                let den = RatFunc::laurent(&d) + RatFunc::s_pow(5);
                num.checked_div(&den).unwrap_or_else(RatFunc::zero)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in small_scalar(), b in small_scalar(), c in small_scalar()) {
            prop_assert_eq!((a.clone() * &b) * &c, a.clone() * (b.clone() * &c));
            prop_assert_eq!(a.clone() * (b.clone() + &c), a.clone() * &b + a.clone() * &c);
            prop_assert!((a.clone() - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((a.clone() * a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in small_scalar(), b in small_scalar(), p in 2i64..9, d in 1i64..5) {
            let s0 = GaussRat::from_frac(p, d);
            if let (Ok(x), Ok(y)) = (a.eval(&s0), b.eval(&s0)) {
                prop_assert_eq!((a.clone() * &b).eval(&s0).unwrap(), &x * &y);
                prop_assert_eq!((a.clone() + &b).eval(&s0).unwrap(), &x + &y);
            }
        }
    }
}
