//! The extended coordinate algebra of `R^N_q`: the coordinates `x^i` with the
//! quadratic relations `P_a xx = 0`, the dilatator `Λ`, the partial radii `r_i`
//! and (for even `N`) the Cartan generator `K`.
//!
//! Elements are always stored in normal order. Products are computed by a
//! memoized right-multiplication of x-words by single letters, which applies the
//! rewrite rules derived from `P_a`. The letters `Λ`, `K`, `r_i` only q-commute,
//! so they are collected on the left with a power of `q`.

mod element;
mod parse;
mod rules;

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

use crate::rmatrix::{build_metric, build_rhat, spectral_projectors, BraidTensor, MetricTensor, Projectors, RMatrixError};
use crate::scalar::{Field, IndexData, Params, ScalarError, MAX_DIM};

pub use element::{Element, Letter, Mono, XWord};
pub use parse::{parse_terms, RawTerm, Sym};
pub use rules::QuadraticRules;
pub(crate) use rules::rref;

/// Default bound on any exponent in user-supplied or computed elements.
pub const DEFAULT_EXPONENT_CAP: i16 = 256;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("rule derivation failed: {0}")]
    RuleDerivation(String),
    #[error("non-confluent overlap x{0} x{1} x{2}")]
    NonConfluent(i32, i32, i32),
    #[error("x{0} is not localized and cannot carry a negative exponent")]
    NotLocalized(i32),
    #[error("generator {0} does not exist for this N")]
    NoSuchGenerator(String),
    #[error("exponent {0} exceeds the cap {1}")]
    ExponentCap(i32, i16),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is outside the supported input class")]
    OutOfScope(String),
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

type Expansion<F> = Arc<Vec<(F, XWord)>>;

/// The algebra over one coefficient field at one `N`.
pub struct Algebra<F: Field> {
    idx: IndexData,
    params: Params<F>,
    rhat: BraidTensor<F>,
    proj: Projectors<F>,
    metric: MetricTensor<F>,
    rules: QuadraticRules<F>,
    memo: RwLock<HashMap<(XWord, u8, i16), Expansion<F>>>,
    radii: Vec<Element<F>>,
    cap: i16,
}

impl<F: Field> Algebra<F> {
    pub fn new(idx: &IndexData, params: &Params<F>) -> Result<Self, AlgebraError> {
        let rhat = build_rhat(idx, params);
        let proj = spectral_projectors(&rhat, params)?;
        Self::with_rhat(idx, params, rhat, proj)
    }

    /// Builds the algebra from a given braid matrix and its projectors.
    pub fn with_rhat(
        idx: &IndexData,
        params: &Params<F>,
        rhat: BraidTensor<F>,
        proj: Projectors<F>,
    ) -> Result<Self, AlgebraError> {
        let rules = QuadraticRules::from_relations(idx, &proj.anti)?;
        for (p, &l) in idx.labels().iter().enumerate() {
            if !idx.is_localized(l) {
                continue;
            }
            for o in 0..idx.dim() {
                let (a, b) = if p > o { (p, o) } else { (o, p) };
                if a != b && rules.swap_factor(a, b).is_none() {
                    return Err(AlgebraError::RuleDerivation(format!(
                        "localized x{l} does not q-commute with x{}",
                        idx.label(o)
                    )));
                }
            }
        }
        let mut alg = Algebra {
            idx: idx.clone(),
            params: params.clone(),
            metric: build_metric(idx, params),
            rhat,
            proj,
            rules,
            memo: RwLock::new(HashMap::new()),
            radii: Vec::new(),
            cap: DEFAULT_EXPONENT_CAP,
        };
        alg.radii = (1..=idx.rank()).map(|i| alg.radius_square(i)).collect();
        Ok(alg)
    }

    pub fn set_exponent_cap(&mut self, cap: i16) {
        self.cap = cap;
    }

    pub fn index(&self) -> &IndexData {
        &self.idx
    }

    pub fn params(&self) -> &Params<F> {
        &self.params
    }

    pub fn rhat(&self) -> &BraidTensor<F> {
        &self.rhat
    }

    pub fn projectors(&self) -> &Projectors<F> {
        &self.proj
    }

    pub fn metric(&self) -> &MetricTensor<F> {
        &self.metric
    }

    pub fn rules(&self) -> &QuadraticRules<F> {
        &self.rules
    }

    pub fn q_pow(&self, e: i32) -> F {
        self.params.q_pow(e)
    }

    // ---- generators ----

    pub fn x(&self, label: i32) -> Element<F> {
        Element::mono(Mono::letter(&self.idx, Letter::X(label as i8), 1))
    }

    /// `(x^label)^e`; negative `e` only for localized letters.
    pub fn x_pow(&self, label: i32, e: i16) -> Result<Element<F>, AlgebraError> {
        self.letter(Letter::X(label as i8), e)
    }

    pub fn lambda(&self, e: i16) -> Element<F> {
        Element::mono(Mono::letter(&self.idx, Letter::Lambda, e))
    }

    /// `K^e`; only for even `N`.
    pub fn kappa(&self, e: i16) -> Result<Element<F>, AlgebraError> {
        self.letter(Letter::K, e)
    }

    /// `r_i^e`, where `r_0` means `x^0` for odd `N`.
    pub fn r(&self, i: usize, e: i16) -> Result<Element<F>, AlgebraError> {
        if i == 0 {
            return if self.idx.is_odd() {
                self.x_pow(0, e)
            } else {
                Err(AlgebraError::NoSuchGenerator("r0".into()))
            };
        }
        self.letter(Letter::R(i as u8), e)
    }

    pub fn letter(&self, l: Letter, e: i16) -> Result<Element<F>, AlgebraError> {
        match l {
            Letter::Lambda => {}
            Letter::K if self.idx.is_odd() => return Err(AlgebraError::NoSuchGenerator("K".into())),
            Letter::K => {}
            Letter::R(i) if i == 0 || i as usize > self.idx.rank() => {
                return Err(AlgebraError::NoSuchGenerator(format!("r{i}")))
            }
            Letter::R(_) => {}
            Letter::X(j) if !self.idx.has_label(j as i32) => {
                return Err(AlgebraError::NoSuchGenerator(format!("x{j}")))
            }
            Letter::X(j) if e < 0 && !self.idx.is_localized(j as i32) => {
                return Err(AlgebraError::NotLocalized(j as i32))
            }
            Letter::X(_) => {}
        }
        if e.abs() > self.cap {
            return Err(AlgebraError::ExponentCap(e as i32, self.cap));
        }
        Ok(Element::mono(Mono::letter(&self.idx, l, e)))
    }

    pub fn constant(&self, c: F) -> Element<F> {
        Element::scalar(c)
    }

    /// `r_i^2 = Σ_{k,l=-i..i} g_{kl} x^k x^l` as a polynomial in `x`.
    pub fn radius_square(&self, i: usize) -> Element<F> {
        let mut out = Element::zero();
        for &k in self.idx.labels() {
            if k.unsigned_abs() as usize > i {
                continue;
            }
            let g = self.metric.get(k, -k);
            out.add_scaled(&self.mul(&self.x(k), &self.x(-k)), &g);
        }
        out
    }

    // ---- exchange rules ----

    /// `p` in `A B = q^p B A`, for `A` after `B` in the monomial order
    /// (`Λ < K < r < x`), between letters that only q-commute.
    pub fn swap_power(&self, left: Letter, right: Letter) -> i32 {
        match (left, right) {
            (Letter::X(_) | Letter::R(_), Letter::Lambda) => 1,
            (Letter::K, Letter::Lambda) => 0,
            (Letter::X(j), Letter::K) => match j {
                1 => -1,
                -1 => 1,
                _ => 0,
            },
            (Letter::R(_), Letter::K) => 0,
            (Letter::X(j), Letter::R(i)) => {
                let (j, i) = (j as i32, i as i32);
                if j.abs() <= i {
                    0
                } else if j < -i {
                    1
                } else {
                    -1
                }
            }
            (Letter::R(_), Letter::R(_)) => 0,
            (a, b) if a == b => 0,
            (Letter::X(_), Letter::X(_)) => panic!("distinct coordinates are reordered by the quadratic rules"),
            (a, b) => -self.swap_power(b, a),
        }
    }

    /// The Λ, K and r exchange rules as `(left, right, p)` with `left·right = q^p right·left`.
    pub fn extended_rules(&self) -> Vec<(Letter, Letter, i32)> {
        let mut heads = vec![Letter::Lambda];
        if !self.idx.is_odd() {
            heads.push(Letter::K);
        }
        heads.extend((1..=self.idx.rank()).rev().map(|i| Letter::R(i as u8)));
        let mut tails = heads.clone();
        tails.extend(self.idx.labels().iter().map(|&l| Letter::X(l as i8)));
        let mut out = Vec::new();
        for (hi, &h) in heads.iter().enumerate() {
            for &t in &tails[hi + 1..] {
                out.push((t, h, self.swap_power(t, h)));
            }
        }
        out
    }

    // ---- multiplication ----

    fn fpow(c: &F, e: i32) -> F {
        let base = if e < 0 { c.inv().expect("swap factors are invertible") } else { c.clone() };
        (0..e.unsigned_abs()).fold(F::one(), |acc, _| acc * &base)
    }

    /// `w · y_p^e` in normal order, with `e = ±1`.
    fn mul_letter(&self, w: &XWord, p: usize, e: i16) -> Expansion<F> {
        let n = self.idx.dim();
        let Some(t) = (p + 1..n).rev().find(|&t| w[t] != 0) else {
            let mut u = *w;
            u[p] += e;
            return Arc::new(vec![(F::one(), u)]);
        };
        let key = (*w, p as u8, e);
        if let Some(hit) = self.memo.read().get(&key) {
            return hit.clone();
        }
        let f = w[t];
        let mut acc: HashMap<XWord, F> = HashMap::new();
        if let Some(c) = self.rules.swap_factor(t, p) {
            let mut rest = *w;
            rest[t] = 0;
            let factor = Self::fpow(c, f as i32 * e as i32);
            for (v, mut u) in self.mul_letter(&rest, p, e).iter().cloned() {
                debug_assert_eq!(u[t], 0);
                u[t] = f;
                add_into(&mut acc, u, v * &factor);
            }
        } else {
            debug_assert!(f > 0 && e == 1);
            let mut rest = *w;
            rest[t] -= 1;
            for (c, a, b) in self.rules.rule(t, p) {
                for (v1, u1) in self.mul_letter(&rest, *a, 1).iter() {
                    for (v2, u2) in self.mul_letter(u1, *b, 1).iter() {
                        add_into(&mut acc, *u2, c.clone() * v1 * v2);
                    }
                }
            }
        }
        let out: Expansion<F> = Arc::new(acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(u, v)| (v, u)).collect());
        self.memo.write().insert(key, out.clone());
        out
    }

    /// Product of two normal-ordered x-words.
    pub fn mul_xwords(&self, w1: &XWord, w2: &XWord) -> Vec<(F, XWord)> {
        let mut cur: HashMap<XWord, F> = HashMap::from([(*w1, F::one())]);
        for p in 0..self.idx.dim() {
            let e = w2[p];
            let step = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                let mut next = HashMap::new();
                for (u, c) in &cur {
                    for (v, u2) in self.mul_letter(u, p, step).iter() {
                        add_into(&mut next, *u2, c.clone() * v);
                    }
                }
                cur = next;
            }
        }
        cur.into_iter().filter(|(_, v)| !v.is_zero()).map(|(u, v)| (v, u)).collect()
    }

    /// Product of two monomials.
    pub fn mul_mono(&self, m1: &Mono, m2: &Mono) -> Element<F> {
        let left = m1.letters(&self.idx);
        let mut qexp = 0i32;
        for (b, beta) in m2.prefix().letters(&self.idx) {
            for &(a, alpha) in &left {
                if a > b {
                    qexp += alpha as i32 * beta as i32 * self.swap_power(a, b);
                }
            }
        }
        let factor = self.q_pow(qexp);
        let mut prefix = Mono::one();
        prefix.set_lambda(m1.lambda() + m2.lambda());
        prefix.set_kappa(m1.kappa() + m2.kappa());
        for i in 1..=self.idx.rank() {
            prefix.set_r(i, m1.r(i) + m2.r(i));
        }
        let mut out = Element::zero();
        for (c, w) in self.mul_xwords(&m1.xword(), &m2.xword()) {
            out.add_term(prefix.with_xword(&w), c * &factor);
        }
        out
    }

    pub fn mul(&self, a: &Element<F>, b: &Element<F>) -> Element<F> {
        let mut out = Element::zero();
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                let c = c1.clone() * c2;
                out.add_scaled(&self.mul_mono(m1, m2), &c);
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[&Element<F>]) -> Element<F> {
        factors.iter().fold(Element::one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, a: &Element<F>, e: u32) -> Element<F> {
        (0..e).fold(Element::one(), |acc, _| self.mul(&acc, a))
    }

    /// `[a, b] = ab - ba`.
    pub fn comm(&self, a: &Element<F>, b: &Element<F>) -> Element<F> {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Normal form of a product of raw letter sequences.
    pub fn normal_form(&self, raw: &[RawTerm<F>]) -> Result<Element<F>, AlgebraError> {
        let mut out = Element::zero();
        for t in raw {
            let mut acc = Element::scalar(t.coeff.clone());
            for &(sym, e) in &t.factors {
                let e16 = i16::try_from(e).map_err(|_| AlgebraError::ExponentCap(e, self.cap))?;
                let l = match sym {
                    Sym::Lambda => self.lambda(e16),
                    Sym::K => self.kappa(e16)?,
                    Sym::R(i) => self.r(i as usize, e16)?,
                    Sym::X(j) => self.x_pow(j as i32, e16)?,
                    Sym::Xi(_) | Sym::XiBar(_) => {
                        return Err(AlgebraError::Parse("form letters are not algebra elements".into()))
                    }
                };
                if l.max_abs_exponent() > self.cap {
                    return Err(AlgebraError::ExponentCap(e, self.cap));
                }
                acc = self.mul(&acc, &l);
            }
            out.add_assign(&acc);
        }
        if out.max_abs_exponent() > self.cap {
            return Err(AlgebraError::ExponentCap(out.max_abs_exponent() as i32, self.cap));
        }
        Ok(out)
    }

    pub fn parse(&self, src: &str) -> Result<Element<F>, AlgebraError> {
        self.normal_form(&parse_terms::<F>(src)?)
    }

    pub fn render(&self, e: &Element<F>) -> String {
        e.render(&self.idx)
    }

    // ---- zero test ----

    /// Clears negative `r` powers by a left factor `Π r_i^{2m_i}` and expands
    /// every even `r` power through `r_i^2 = Σ g_{kl} x^k x^l`. An element is
    /// zero iff its canonical form is empty.
    pub fn canonical(&self, e: &Element<F>) -> Element<F> {
        self.canonical_cleared(e, &self.clearing(&[e]))
    }

    /// The smallest left factor `Π r_i^{2m_i}` removing negative `r` powers from all of `es`.
    fn clearing(&self, es: &[&Element<F>]) -> Mono {
        let mut clear = Mono::one();
        for i in 1..=self.idx.rank() {
            let low = es.iter().flat_map(|e| e.terms().map(|(m, _)| m.r(i))).min().unwrap_or(0);
            if low < 0 {
                clear.set_r(i, 2 * ((-low + 1) / 2));
            }
        }
        clear
    }

    fn canonical_cleared(&self, e: &Element<F>, clear: &Mono) -> Element<F> {
        let n = self.idx.rank();
        let cleared = if clear.is_one() { e.clone() } else { self.mul(&Element::mono(*clear), e) };
        let mut out = Element::zero();
        for (m, c) in cleared.terms() {
            if (1..=n).all(|i| m.r(i) < 2) {
                out.add_term(*m, c.clone());
                continue;
            }
            let mut head = m.prefix();
            let mut body = Element::one();
            for i in 1..=n {
                let ri = m.r(i);
                head.set_r(i, ri % 2);
                body = self.mul(&body, &self.pow(&self.radii[i - 1], (ri / 2) as u32));
            }
            let tail = Element::mono(Mono::one().with_xword(&m.xword()));
            let t = self.mul_all(&[&Element::mono(head), &body, &tail]);
            out.add_scaled(&t, c);
        }
        out
    }

    pub fn is_zero(&self, e: &Element<F>) -> bool {
        e.is_zero() || self.canonical(e).is_zero()
    }

    pub fn equal(&self, a: &Element<F>, b: &Element<F>) -> bool {
        self.is_zero(&a.sub(b))
    }

    /// `Some(c)` when `a = c · b` in the algebra, `b ≠ 0`.
    pub fn ratio(&self, a: &Element<F>, b: &Element<F>) -> Option<F> {
        let clear = self.clearing(&[a, b]);
        let ca = self.canonical_cleared(a, &clear);
        let cb = self.canonical_cleared(b, &clear);
        let (m, vb) = cb.terms().next()?;
        let c = ca.coeff(m).cloned().unwrap_or_else(F::zero).checked_div(vb)?;
        ca.sub(&cb.scale(&c)).is_zero().then_some(c)
    }

    // ---- star ----

    /// `(x^i)^* = x^j g_{ji}`, `Λ^* = Λ^{-1}`, `r_i^* = r_i`, `K^* = K`,
    /// extended as an antilinear antihomomorphism.
    pub fn star(&self, e: &Element<F>) -> Element<F> {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            let mut acc = Element::scalar(c.conj());
            for (l, ex) in m.letters(&self.idx).into_iter().rev() {
                let f = match l {
                    Letter::Lambda => self.lambda(-ex),
                    Letter::X(j) => {
                        let g = self.metric.get(-(j as i32), j as i32).conj();
                        Element::term(Self::fpow(&g, ex as i32), Mono::letter(&self.idx, Letter::X(-j), ex))
                    }
                    other => Element::mono(Mono::letter(&self.idx, other, ex)),
                };
                acc = self.mul(&acc, &f);
            }
            out.add_assign(&acc);
        }
        out
    }

    // ---- consistency checks ----

    /// Normal form of a word of x-positions.
    fn word_nf(&self, letters: &[usize]) -> HashMap<XWord, F> {
        let mut cur: HashMap<XWord, F> = HashMap::from([([0; MAX_DIM], F::one())]);
        for &p in letters {
            let mut next = HashMap::new();
            for (u, c) in &cur {
                for (v, u2) in self.mul_letter(u, p, 1).iter() {
                    add_into(&mut next, *u2, c.clone() * v);
                }
            }
            cur = next;
        }
        cur.retain(|_, v| !v.is_zero());
        cur
    }

    /// Resolves every overlap `x_a x_b x_c` with `a > b > c` both ways.
    pub fn check_confluence(&self) -> Result<usize, AlgebraError> {
        let n = self.idx.dim();
        let mut count = 0;
        for a in 0..n {
            for b in 0..a {
                for c in 0..b {
                    let mut left: HashMap<XWord, F> = HashMap::new();
                    for (k, u, v) in self.rules.rule(a, b) {
                        for (w, val) in self.word_nf(&[*u, *v, c]) {
                            add_into(&mut left, w, val * k);
                        }
                    }
                    let mut right: HashMap<XWord, F> = HashMap::new();
                    for (k, u, v) in self.rules.rule(b, c) {
                        for (w, val) in self.word_nf(&[a, *u, *v]) {
                            add_into(&mut right, w, val * k);
                        }
                    }
                    left.retain(|_, v| !v.is_zero());
                    right.retain(|_, v| !v.is_zero());
                    if left != right {
                        let l = |p| self.idx.label(p);
                        return Err(AlgebraError::NonConfluent(l(a), l(b), l(c)));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// `P_a^{ij}_{kl} x^k x^l` for one pair `(i, j)`.
    pub fn relation(&self, i: i32, j: i32) -> Element<F> {
        let mut out = Element::zero();
        for ((k, l), v) in self.proj.anti.row(i, j) {
            out.add_scaled(&self.mul(&self.x(k), &self.x(l)), v);
        }
        out
    }

    /// `[r_i^2, x^j]` from the x-rules against `(1 - q^{2p}) r_i^2 x^j` from
    /// the postulated exchange `x^j r_i = q^p r_i x^j`. Returns the first failing `(i, j)`.
    pub fn check_radius_exchange(&self) -> Result<(), (usize, i32)> {
        for i in 1..=self.idx.rank() {
            let r2 = &self.radii[i - 1];
            for &j in self.idx.labels() {
                let xj = self.x(j);
                let p = self.swap_power(Letter::X(j as i8), Letter::R(i as u8));
                // x^j r^2 = q^{2p} r^2 x^j
                let lhs = self.mul(&xj, r2);
                let rhs = self.mul(r2, &xj).scale(&self.q_pow(2 * p));
                if !lhs.sub(&rhs).is_zero() {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }
}

fn add_into<F: Field>(acc: &mut HashMap<XWord, F>, w: XWord, v: F) {
    if v.is_zero() {
        return;
    }
    match acc.get_mut(&w) {
        Some(e) => *e = e.clone() + v,
        None => {
            acc.insert(w, v);
        }
    }
}

#[cfg(test)]
mod tests;
