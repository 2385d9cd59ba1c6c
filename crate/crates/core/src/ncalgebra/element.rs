use std::collections::BTreeMap;

use crate::scalar::{Field, IndexData, MAX_DIM};

pub(crate) const LAM: usize = 0;
pub(crate) const KAP: usize = 1;
pub(crate) const R_BASE: usize = 2;
pub(crate) const MAX_RANK: usize = MAX_DIM / 2;
pub(crate) const X_BASE: usize = R_BASE + MAX_RANK;
const SLOTS: usize = X_BASE + MAX_DIM;

/// Exponents of the x-letters, indexed by label position.
pub type XWord = [i16; MAX_DIM];

/// A generator of the extended algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// The dilatator `Λ`.
    Lambda,
    /// The Cartan generator `K` (even `N` only).
    K,
    /// The partial radius `r_i`, `1 <= i <= n`.
    R(u8),
    /// The coordinate `x^i`, by label.
    X(i8),
}

/// An ordered monomial `Λ^a K^b r_n^{e_n}..r_1^{e_1} x^n..x^{-n}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono {
    e: [i16; SLOTS],
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn lambda(&self) -> i16 {
        self.e[LAM]
    }

    pub fn kappa(&self) -> i16 {
        self.e[KAP]
    }

    /// Exponent of `r_i`.
    pub fn r(&self, i: usize) -> i16 {
        self.e[R_BASE + i - 1]
    }

    /// Exponent of the x-letter at label position `p`.
    pub fn x(&self, p: usize) -> i16 {
        self.e[X_BASE + p]
    }

    pub fn xword(&self) -> XWord {
        let mut w = [0; MAX_DIM];
        w.copy_from_slice(&self.e[X_BASE..X_BASE + MAX_DIM]);
        w
    }

    pub fn with_xword(mut self, w: &XWord) -> Self {
        self.e[X_BASE..X_BASE + MAX_DIM].copy_from_slice(w);
        self
    }

    pub fn set_lambda(&mut self, v: i16) {
        self.e[LAM] = v;
    }

    pub fn set_kappa(&mut self, v: i16) {
        self.e[KAP] = v;
    }

    pub fn set_r(&mut self, i: usize, v: i16) {
        self.e[R_BASE + i - 1] = v;
    }

    pub fn set_x(&mut self, p: usize, v: i16) {
        self.e[X_BASE + p] = v;
    }

    pub fn is_one(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }

    /// The Λ, K and r part only.
    pub fn prefix(&self) -> Mono {
        let mut m = *self;
        m.e[X_BASE..].fill(0);
        m
    }

    /// `(Λ-degree, K-degree, x-degree)` where `r_i` counts as x-degree one.
    pub fn grading(&self) -> (i32, i32, i32) {
        let xdeg: i32 = self.e[R_BASE..].iter().map(|&v| v as i32).sum();
        (self.lambda() as i32, self.kappa() as i32, xdeg)
    }

    pub fn max_abs_exponent(&self) -> i16 {
        self.e.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Single-letter monomial.
    pub fn letter(idx: &IndexData, l: Letter, exp: i16) -> Mono {
        let mut m = Mono::one();
        match l {
            Letter::Lambda => m.set_lambda(exp),
            Letter::K => m.set_kappa(exp),
            Letter::R(i) => m.set_r(i as usize, exp),
            Letter::X(j) => m.set_x(idx.pos(j as i32), exp),
        }
        m
    }

    /// Letters with nonzero exponent in normal order.
    pub fn letters(&self, idx: &IndexData) -> Vec<(Letter, i16)> {
        let mut out = Vec::new();
        if self.lambda() != 0 {
            out.push((Letter::Lambda, self.lambda()));
        }
        if self.kappa() != 0 {
            out.push((Letter::K, self.kappa()));
        }
        for i in (1..=idx.rank()).rev() {
            if self.r(i) != 0 {
                out.push((Letter::R(i as u8), self.r(i)));
            }
        }
        for (p, &l) in idx.labels().iter().enumerate() {
            if self.x(p) != 0 {
                out.push((Letter::X(l as i8), self.x(p)));
            }
        }
        out
    }

    pub fn render(&self, idx: &IndexData) -> String {
        let parts: Vec<String> = self
            .letters(idx)
            .into_iter()
            .map(|(l, e)| {
                let name = match l {
                    Letter::Lambda => "L".to_string(),
                    Letter::K => "K".to_string(),
                    Letter::R(i) => format!("r{i}"),
                    Letter::X(j) => format!("x{j}"),
                };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    }
}

/// A finite sum of scalar multiples of ordered monomials, kept in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<F: Field> {
    terms: BTreeMap<Mono, F>,
}

impl<F: Field> Default for Element<F> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<F: Field> Element<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(F::one(), Mono::one())
    }

    pub fn scalar(c: F) -> Self {
        Self::term(c, Mono::one())
    }

    pub fn term(c: F, m: Mono) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn mono(m: Mono) -> Self {
        Self::term(F::one(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&F> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let nv = v.clone() + c;
                if nv.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = nv;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add_scaled(&mut self, rhs: &Self, c: &F) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &rhs.terms {
            self.add_term(*m, v.clone() * c);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(rhs, &(-F::one()));
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Element { terms: self.terms.iter().map(|(m, v)| (*m, v.clone() * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-F::one()))
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Element<G> {
        let mut out = Element::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, f(v));
        }
        out
    }

    /// The constant term, if the element is a scalar multiple of `1`.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn max_abs_exponent(&self) -> i16 {
        self.terms.keys().map(Mono::max_abs_exponent).max().unwrap_or(0)
    }

    /// Renders as `[c1] * L * x1 + [c2] * x0^2`; parsed back by the element parser.
    pub fn render(&self, idx: &IndexData) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| if m.is_one() { format!("[{c}]") } else { format!("[{c}] * {}", m.render(idx)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
