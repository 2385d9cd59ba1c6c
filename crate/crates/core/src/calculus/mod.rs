//! The two covariant differential calculi on `R^N_q`.
//!
//! A form is stored with all algebra coefficients on the left of the
//! 1-form generators: `Σ f_l ξ^l` in degree one and `Σ f_B β_B` in degree two,
//! where `β_B` runs over a basis of ordered pairs `ξ^a ξ^b` chosen once per `N`.
//! Moving `ξ` to the right of coordinates uses `ξ^i x^j = q^{-1} (R̂^{-1})^{ij}_{kl} x^k ξ^l`
//! in the unbarred calculus and `ξ̄^i x^j = q R̂^{ij}_{kl} x^k ξ̄^l` in the barred one.

#[cfg(test)]
mod tests;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::ncalgebra::{parse_terms, Algebra, AlgebraError, Element, Mono, RawTerm, Sym, XWord};
use crate::rmatrix::BraidTensor;
use crate::scalar::{Field, IndexData};

/// Which of the two conjugate calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Unbarred,
    Barred,
}

impl Kind {
    pub fn tag(self) -> &'static str {
        match self {
            Kind::Unbarred => "unbarred",
            Kind::Barred => "barred",
        }
    }

    pub fn other(self) -> Kind {
        match self {
            Kind::Unbarred => Kind::Barred,
            Kind::Barred => Kind::Unbarred,
        }
    }

    /// `+1` unbarred, `-1` barred.
    pub fn sign(self) -> i32 {
        match self {
            Kind::Unbarred => 1,
            Kind::Barred => -1,
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Kind::Unbarred => "xi",
            Kind::Barred => "xibar",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A form of degree 0, 1 or 2 with left coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<F: Field> {
    degree: u8,
    comps: Vec<Element<F>>,
}

impl<F: Field> Form<F> {
    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn comps(&self) -> &[Element<F>] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Element<F> {
        &self.comps[i]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        Form { degree: self.degree, comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "subtracting forms of different degree");
        Form { degree: self.degree, comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Form { degree: self.degree, comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_trivially_zero(&self) -> bool {
        self.comps.iter().all(Element::is_zero)
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> Form<G> {
        Form { degree: self.degree, comps: self.comps.iter().map(|e| e.map_coeffs(f)).collect() }
    }
}

/// One calculus over an algebra.
pub struct Calculus<F: Field> {
    alg: Arc<Algebra<F>>,
    kind: Kind,
    /// `ξ^i x^j = Σ c x^k ξ^l`, indexed by positions `[i][j]`, entries `(c, k, l)`.
    xi_x: Vec<Vec<Vec<(F, usize, usize)>>>,
    /// `x^i ξ^j = Σ c ξ^k x^l`, the displayed form of the cross relations.
    x_xi: Vec<Vec<Vec<(F, usize, usize)>>>,
    basis: Vec<(usize, usize)>,
    /// Coordinates of `ξ^a ξ^b` in the pair basis.
    wedge: Vec<Vec<Vec<(usize, F)>>>,
    memo: RwLock<HashMap<(usize, XWord), Arc<Vec<Element<F>>>>>,
}

fn table<F: Field>(idx: &IndexData, m: &BraidTensor<F>, c: &F) -> Vec<Vec<Vec<(F, usize, usize)>>> {
    let n = idx.dim();
    let mut out = vec![vec![Vec::new(); n]; n];
    for (pi, &i) in idx.labels().iter().enumerate() {
        for (pj, &j) in idx.labels().iter().enumerate() {
            out[pi][pj] = m.row(i, j).map(|((k, l), v)| (v.clone() * c, idx.pos(k), idx.pos(l))).collect();
        }
    }
    out
}

impl<F: Field> Calculus<F> {
    pub fn new(alg: Arc<Algebra<F>>, kind: Kind) -> Result<Self, AlgebraError> {
        let idx = alg.index().clone();
        let rhat = alg.rhat();
        let rinv = rhat.inverse().ok_or_else(|| AlgebraError::RuleDerivation("R̂ is singular".into()))?;
        let q = alg.q_pow(1);
        let qi = alg.q_pow(-1);
        let (xi_x, x_xi) = match kind {
            Kind::Unbarred => (table(&idx, &rinv, &qi), table(&idx, rhat, &q)),
            Kind::Barred => (table(&idx, rhat, &q), table(&idx, &rinv, &qi)),
        };
        let (basis, wedge) = wedge_basis(&idx, &alg.projectors().anti)?;
        Ok(Calculus { alg, kind, xi_x, x_xi, basis, wedge, memo: RwLock::new(HashMap::new()) })
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.alg
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    fn n(&self) -> usize {
        self.alg.index().dim()
    }

    /// The ordered pairs `(a, b)` (positions) spanning the 2-forms.
    pub fn pair_basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    /// Rules `ξ^i x^j -> Σ c x^k ξ^l` by positions.
    pub fn xi_x_rule(&self, i: usize, j: usize) -> &[(F, usize, usize)] {
        &self.xi_x[i][j]
    }

    /// Rules `x^i ξ^j -> Σ c ξ^k x^l` by positions.
    pub fn x_xi_rule(&self, i: usize, j: usize) -> &[(F, usize, usize)] {
        &self.x_xi[i][j]
    }

    // ---- constructors ----

    pub fn zero(&self, degree: u8) -> Form<F> {
        let len = match degree {
            0 => 1,
            1 => self.n(),
            2 => self.basis.len(),
            _ => panic!("forms of degree {degree} are not supported"),
        };
        Form { degree, comps: vec![Element::zero(); len] }
    }

    pub fn function(&self, f: Element<F>) -> Form<F> {
        Form { degree: 0, comps: vec![f] }
    }

    /// `ξ^label`.
    pub fn xi(&self, label: i32) -> Form<F> {
        let mut out = self.zero(1);
        out.comps[self.alg.index().pos(label)] = Element::one();
        out
    }

    /// `Σ_l comps[l] ξ^l`.
    pub fn one_form(&self, comps: Vec<Element<F>>) -> Form<F> {
        assert_eq!(comps.len(), self.n());
        Form { degree: 1, comps }
    }

    /// `ξ^a ξ^b` for positions `a`, `b`, reduced to the pair basis.
    pub fn wedge_pair(&self, a: usize, b: usize) -> Form<F> {
        let mut out = self.zero(2);
        for (k, v) in &self.wedge[a][b] {
            out.comps[*k] = Element::scalar(v.clone());
        }
        out
    }

    // ---- products ----

    pub fn left_mul(&self, f: &Element<F>, w: &Form<F>) -> Form<F> {
        Form { degree: w.degree, comps: w.comps.iter().map(|c| self.alg.mul(f, c)).collect() }
    }

    /// `ξ^p · w` for an x-word, as left coefficients of `ξ^l`.
    fn xi_word(&self, p: usize, w: &XWord) -> Arc<Vec<Element<F>>> {
        let key = (p, *w);
        if let Some(hit) = self.memo.read().get(&key) {
            return hit.clone();
        }
        let n = self.n();
        let mut cur: Vec<Element<F>> = vec![Element::zero(); n];
        cur[p] = Element::one();
        for (pos, &e) in w.iter().enumerate().take(n) {
            for _ in 0..e {
                let mut next = vec![Element::zero(); n];
                for (l, coef) in cur.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    for (c, k, l2) in &self.xi_x[l][pos] {
                        let xk = self.alg.x(self.alg.index().label(*k));
                        next[*l2].add_scaled(&self.alg.mul(coef, &xk), c);
                    }
                }
                cur = next;
            }
        }
        let out = Arc::new(cur);
        self.memo.write().insert(key, out.clone());
        out
    }

    /// `ξ^p · g` as a 1-form; `g` may contain `Λ`, `K` and nonnegative powers of `x`.
    pub fn xi_times(&self, p: usize, g: &Element<F>) -> Result<Form<F>, AlgebraError> {
        let idx = self.alg.index();
        let mut out = self.zero(1);
        for (m, c) in g.terms() {
            if (1..=idx.rank()).any(|i| m.r(i) != 0) {
                return Err(AlgebraError::OutOfScope(format!("moving {}{} past r", self.kind.letter(), idx.label(p))));
            }
            let w = m.xword();
            if w.iter().any(|&e| e < 0) {
                return Err(AlgebraError::OutOfScope(format!(
                    "moving {}{} past an inverted coordinate",
                    self.kind.letter(),
                    idx.label(p)
                )));
            }
            // ξ^p Λ^a = Λ^a ξ^p and ξ^{±1} K^b = q^{∓b} K^b ξ^{±1}
            let qe = match idx.label(p) {
                1 => -(m.kappa() as i32),
                -1 => m.kappa() as i32,
                _ => 0,
            };
            let mut prefix = Mono::one();
            prefix.set_lambda(m.lambda());
            prefix.set_kappa(m.kappa());
            let head = Element::term(c.clone() * &self.alg.q_pow(qe), prefix);
            for (l, coef) in self.xi_word(p, &w).iter().enumerate() {
                if !coef.is_zero() {
                    out.comps[l].add_assign(&self.alg.mul(&head, coef));
                }
            }
        }
        Ok(out)
    }

    /// Right multiplication of a form by an algebra element.
    pub fn right_mul(&self, w: &Form<F>, g: &Element<F>) -> Result<Form<F>, AlgebraError> {
        match w.degree {
            0 => Ok(self.function(self.alg.mul(&w.comps[0], g))),
            1 => {
                let mut out = self.zero(1);
                for (l, f) in w.comps.iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    out = out.add(&self.left_mul(f, &self.xi_times(l, g)?));
                }
                Ok(out)
            }
            _ => {
                let mut out = self.zero(2);
                for (b, f) in w.comps.iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    let (a1, a2) = self.basis[b];
                    let inner = self.xi_times(a2, g)?;
                    for (m, h) in inner.comps.iter().enumerate() {
                        if h.is_zero() {
                            continue;
                        }
                        let outer = self.xi_times(a1, h)?;
                        for (l, k) in outer.comps.iter().enumerate() {
                            if !k.is_zero() {
                                out = out.add(&self.left_mul(&self.alg.mul(f, k), &self.wedge_pair(l, m)));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Product of two forms of total degree at most 2.
    pub fn mul(&self, a: &Form<F>, b: &Form<F>) -> Result<Form<F>, AlgebraError> {
        match (a.degree, b.degree) {
            (0, _) => Ok(self.left_mul(&a.comps[0], b)),
            (_, 0) => self.right_mul(a, &b.comps[0]),
            (1, 1) => {
                let mut out = self.zero(2);
                for (l, f) in a.comps.iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    for (m, g) in b.comps.iter().enumerate() {
                        if g.is_zero() {
                            continue;
                        }
                        let moved = self.xi_times(l, g)?;
                        for (l2, h) in moved.comps.iter().enumerate() {
                            if !h.is_zero() {
                                out = out.add(&self.left_mul(&self.alg.mul(f, h), &self.wedge_pair(l2, m)));
                            }
                        }
                    }
                }
                Ok(out)
            }
            (da, db) => Err(AlgebraError::OutOfScope(format!("product of forms of degree {da} and {db}"))),
        }
    }

    /// Graded commutator `a b - (-1)^{|a||b|} b a`.
    pub fn graded_comm(&self, a: &Form<F>, b: &Form<F>) -> Result<Form<F>, AlgebraError> {
        let ab = self.mul(a, b)?;
        let ba = self.mul(b, a)?;
        Ok(if a.degree * b.degree % 2 == 1 { ab.add(&ba) } else { ab.sub(&ba) })
    }

    // ---- exterior derivative ----

    /// `d f` for `f` a polynomial in `x` and `Λ`, with `Λ d = q d Λ`
    /// (unbarred) and the mirrored `Λ d̄ = q^{-1} d̄ Λ` (barred).
    pub fn d(&self, f: &Form<F>) -> Result<Form<F>, AlgebraError> {
        match f.degree {
            0 => self.d_function(&f.comps[0]),
            1 => {
                let mut out = self.zero(2);
                for (l, c) in f.comps.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let dc = self.d_function(c)?;
                    out = out.add(&self.mul(&dc, &self.xi(self.alg.index().label(l)))?);
                }
                Ok(out)
            }
            _ if f.is_trivially_zero() => Ok(self.zero(2)),
            _ => Err(AlgebraError::OutOfScope("d of a 2-form".into())),
        }
    }

    fn d_function(&self, f: &Element<F>) -> Result<Form<F>, AlgebraError> {
        let idx = self.alg.index();
        let mut out = self.zero(1);
        for (m, c) in f.terms() {
            if m.kappa() != 0 || (1..=idx.rank()).any(|i| m.r(i) != 0) || m.xword().iter().any(|&e| e < 0) {
                return Err(AlgebraError::OutOfScope(format!("d of {}", m.render(idx))));
            }
            let lam = m.lambda();
            let factor = c.clone() * &self.alg.q_pow(-(lam as i32) * self.kind.sign());
            let letters: Vec<usize> =
                (0..idx.dim()).flat_map(|p| std::iter::repeat_n(p, m.x(p) as usize)).collect();
            let mut lam_mono = Mono::one();
            lam_mono.set_lambda(lam);
            for t in 0..letters.len() {
                let mut before = Element::mono(lam_mono);
                for &p in &letters[..t] {
                    before = self.alg.mul(&before, &self.alg.x(idx.label(p)));
                }
                let mut after = Element::one();
                for &p in &letters[t + 1..] {
                    after = self.alg.mul(&after, &self.alg.x(idx.label(p)));
                }
                let moved = self.xi_times(letters[t], &after)?;
                out = out.add(&self.left_mul(&before, &moved).scale(&factor));
            }
        }
        Ok(out)
    }

    // ---- checks and text ----

    pub fn is_zero(&self, w: &Form<F>) -> bool {
        w.comps.iter().all(|c| self.alg.is_zero(c))
    }

    pub fn equal(&self, a: &Form<F>, b: &Form<F>) -> bool {
        self.is_zero(&a.sub(b))
    }

    /// First component where the form fails to vanish, rendered.
    pub fn witness(&self, w: &Form<F>) -> Option<String> {
        w.comps.iter().enumerate().find(|(_, c)| !self.alg.is_zero(c)).map(|(i, c)| {
            let tail = self.basis_name(w.degree, i);
            format!("({}){}", self.alg.render(c), if tail.is_empty() { String::new() } else { format!(" * {tail}") })
        })
    }

    fn basis_name(&self, degree: u8, i: usize) -> String {
        let idx = self.alg.index();
        let l = self.kind.letter();
        match degree {
            0 => String::new(),
            1 => format!("{l}{}", idx.label(i)),
            _ => {
                let (a, b) = self.basis[i];
                format!("{l}{} * {l}{}", idx.label(a), idx.label(b))
            }
        }
    }

    pub fn render(&self, w: &Form<F>) -> String {
        let mut parts = Vec::new();
        for (i, c) in w.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let tail = self.basis_name(w.degree, i);
            for (m, v) in c.terms() {
                let mut s = format!("[{v}]");
                if !m.is_one() {
                    s.push_str(" * ");
                    s.push_str(&m.render(self.alg.index()));
                }
                if !tail.is_empty() {
                    s.push_str(" * ");
                    s.push_str(&tail);
                }
                parts.push(s);
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Normal form of a sum of raw products, which may contain up to two
    /// 1-form letters of this calculus.
    pub fn normal_form(&self, raw: &[RawTerm<F>]) -> Result<Form<F>, AlgebraError> {
        let mut total: Option<Form<F>> = None;
        for t in raw {
            let mut acc = self.function(Element::scalar(t.coeff.clone()));
            for &(sym, e) in &t.factors {
                let piece = match (sym, self.kind) {
                    (Sym::Xi(l), Kind::Unbarred) | (Sym::XiBar(l), Kind::Barred) => {
                        if e != 1 {
                            return Err(AlgebraError::Parse("1-form letters take no exponent".into()));
                        }
                        if !self.alg.index().has_label(l as i32) {
                            return Err(AlgebraError::NoSuchGenerator(format!("{}{l}", self.kind.letter())));
                        }
                        self.xi(l as i32)
                    }
                    (Sym::Xi(_) | Sym::XiBar(_), _) => {
                        return Err(AlgebraError::Parse(format!("letter of the other calculus in a {} form", self.kind)))
                    }
                    _ => {
                        let single = [RawTerm { coeff: F::one(), factors: vec![(sym, e)] }];
                        self.function(self.alg.normal_form(&single)?)
                    }
                };
                acc = self.mul(&acc, &piece)?;
            }
            total = Some(match total {
                None => acc,
                Some(s) if s.degree == acc.degree => s.add(&acc),
                Some(_) => return Err(AlgebraError::Parse("terms of mixed degree".into())),
            });
        }
        Ok(total.unwrap_or_else(|| self.zero(0)))
    }

    pub fn parse(&self, src: &str) -> Result<Form<F>, AlgebraError> {
        self.normal_form(&parse_terms::<F>(src)?)
    }
}

/// Chooses ordered pairs whose images under `e_{ab} -> row (a,b) of P_a`
/// are independent, and expresses every pair in that basis.
#[allow(clippy::type_complexity)]
fn wedge_basis<F: Field>(
    idx: &IndexData,
    pa: &BraidTensor<F>,
) -> Result<(Vec<(usize, usize)>, Vec<Vec<Vec<(usize, F)>>>), AlgebraError> {
    let n = idx.dim();
    let image = |a: usize, b: usize| -> Vec<F> {
        let mut v = vec![F::zero(); n * n];
        for ((k, l), val) in pa.row(idx.label(a), idx.label(b)) {
            v[idx.pos(k) * n + idx.pos(l)] = val.clone();
        }
        v
    };
    // columns: candidate in-order pairs a < b, then every pair as a right-hand side
    let mut basis = Vec::new();
    let mut acc: Vec<Vec<F>> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut trial = acc.clone();
            trial.push(image(a, b));
            if crate::rmatrix::dense_rank(trial.clone()) == trial.len() {
                acc = trial;
                basis.push((a, b));
            }
        }
    }
    if basis.len() != n * (n - 1) / 2 {
        return Err(AlgebraError::RuleDerivation(format!("2-form basis has {} elements", basis.len())));
    }
    // solve Σ_B c_B image(B) = image(a, b) through the transposed system
    let nb = basis.len();
    let mut wedge = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let target = image(a, b);
            let mut rows: Vec<Vec<F>> = (0..n * n)
                .map(|r| {
                    let mut row: Vec<F> = acc.iter().map(|v| v[r].clone()).collect();
                    row.push(target[r].clone());
                    row
                })
                .collect();
            let pivots = crate::ncalgebra::rref(&mut rows);
            if pivots.contains(&nb) {
                return Err(AlgebraError::RuleDerivation("pair outside the P_a image".into()));
            }
            wedge[a][b] = pivots
                .iter()
                .enumerate()
                .filter(|(r, _)| !rows[*r][nb].is_zero())
                .map(|(r, &c)| (c, rows[r][nb].clone()))
                .collect();
        }
    }
    Ok((basis, wedge))
}

impl<F: Field> Calculus<F> {
    /// `μ` with `ξ^j r_i^2 = μ r_i^2 ξ^j`, if the product has that shape.
    pub fn radius_exchange(&self, i: usize, j: i32) -> Option<F> {
        let idx = self.alg.index();
        let r2 = self.alg.radius_square(i);
        let pj = idx.pos(j);
        let moved = self.xi_times(pj, &r2).ok()?;
        if moved.comps.iter().enumerate().any(|(l, c)| l != pj && !self.alg.is_zero(c)) {
            return None;
        }
        self.alg.ratio(&moved.comps[pj], &r2)
    }

    /// Tests the candidate rule `ξ^j r_i = q^p r_i ξ^j`, with `p` copied from
    /// `x^j r_i = q^p r_i x^j`, against `ξ^j r_i^2` computed from the cross relations.
    /// Returns the number of pairs checked, or the first failing pair.
    pub fn check_radius_postulate(&self) -> Result<usize, String> {
        let idx = self.alg.index();
        let mut count = 0;
        for i in 1..=idx.rank() {
            for &j in idx.labels() {
                let p = self.alg.swap_power(crate::ncalgebra::Letter::X(j as i8), crate::ncalgebra::Letter::R(i as u8));
                let want = self.alg.q_pow(2 * p);
                match self.radius_exchange(i, j) {
                    Some(mu) if mu == want => count += 1,
                    Some(mu) => {
                        return Err(format!(
                            "{l}{j} r{i}^2 = [{mu}] r{i}^2 {l}{j}, the candidate rule gives [{want}]",
                            l = self.kind.letter()
                        ))
                    }
                    None => {
                        return Err(format!(
                            "{l}{j} r{i}^2 is not a multiple of r{i}^2 {l}{j}",
                            l = self.kind.letter()
                        ))
                    }
                }
            }
        }
        Ok(count)
    }

    /// `(ξ^p)^*` in the conjugate calculus `other`.
    pub fn star_xi(&self, other: &Calculus<F>, p: usize) -> Form<F> {
        let idx = self.alg.index();
        let l = idx.label(p);
        other.xi(-l).scale(&self.alg.metric().get(-l, l).conj())
    }

    /// The star of a form, landing in `other`.
    pub fn star(&self, other: &Calculus<F>, w: &Form<F>) -> Result<Form<F>, AlgebraError> {
        let mut out = other.zero(w.degree);
        for (b, f) in w.comps.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let fs = other.function(self.alg.star(f));
            let term = match w.degree {
                0 => fs,
                1 => other.mul(&self.star_xi(other, b), &fs)?,
                _ => {
                    let (a1, a2) = self.basis[b];
                    let pair = other.mul(&self.star_xi(other, a2), &self.star_xi(other, a1))?;
                    other.mul(&pair, &fs)?
                }
            };
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Applies the star to both sides of every cross relation `x^i ξ^j = Σ c ξ^k x^l`
    /// and checks the images agree in `other`.
    pub fn check_conjugation(&self, other: &Calculus<F>) -> Result<usize, String> {
        let idx = self.alg.index();
        let n = idx.dim();
        let sx = |p: usize| other.function(self.alg.star(&self.alg.x(idx.label(p))));
        let err = |e: AlgebraError| e.to_string();
        for i in 0..n {
            for j in 0..n {
                let lhs = other.mul(&self.star_xi(other, j), &sx(i)).map_err(err)?;
                let mut rhs = other.zero(1);
                for (c, k, l) in &self.x_xi[i][j] {
                    let t = other.mul(&sx(*l), &self.star_xi(other, *k)).map_err(err)?;
                    rhs = rhs.add(&t.scale(&c.conj()));
                }
                if let Some(w) = other.witness(&lhs.sub(&rhs)) {
                    return Err(format!("x{} {}{}: {w}", idx.label(i), self.kind.letter(), idx.label(j)));
                }
            }
        }
        Ok(n * n)
    }

    /// Every normal-ordered x-monomial of degree at most `deg`.
    pub fn monomials(&self, deg: usize) -> Vec<Element<F>> {
        fn rec(n: usize, from: usize, left: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
            out.push(*cur);
            if left == 0 {
                return;
            }
            for p in from..n {
                cur.set_x(p, cur.x(p) + 1);
                rec(n, p, left - 1, cur, out);
                cur.set_x(p, cur.x(p) - 1);
            }
        }
        let mut out = Vec::new();
        rec(self.n(), 0, deg, &mut Mono::one(), &mut out);
        out.into_iter().map(Element::mono).collect()
    }

    /// `d d f = 0` on every x-monomial of degree at most `deg`, times `Λ^m` for `|m| <= 1`.
    pub fn check_d_squared(&self, deg: usize) -> Result<usize, String> {
        let mut count = 0;
        for f in self.monomials(deg) {
            for m in -1..=1 {
                let g = self.alg.mul(&self.alg.lambda(m), &f);
                let dd = self.d(&self.function(g.clone())).and_then(|w| self.d(&w)).map_err(|e| e.to_string())?;
                if let Some(w) = self.witness(&dd) {
                    return Err(format!("d d({}) = {w}", self.alg.render(&g)));
                }
                count += 1;
            }
        }
        Ok(count)
    }
}
