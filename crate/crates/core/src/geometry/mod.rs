//! Flip `σ`, metric, covariant derivative, torsion and curvature in the frame basis.
//!
//! A tensor `Σ T_{cd} θ^c ⊗ θ^d` is stored as its left coefficients by
//! position pair; frame elements commute with the algebra, so the
//! coefficients can always be pulled to the left.

#[cfg(test)]
mod tests;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{Form, Kind};
use crate::frame::Frame;
use crate::ncalgebra::{Algebra, Element};
use crate::rmatrix::{verify_braid, BraidTensor};
use crate::scalar::Field;

/// The two admissible flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SigmaVariant {
    /// `S = q R̂`.
    #[serde(rename = "qR")]
    QR,
    /// `S = (q R̂)^{-1}`.
    #[serde(rename = "qR^-1")]
    QRInverse,
}

impl SigmaVariant {
    pub const ALL: [SigmaVariant; 2] = [SigmaVariant::QR, SigmaVariant::QRInverse];
}

impl fmt::Display for SigmaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SigmaVariant::QR => "qR",
            SigmaVariant::QRInverse => "qR^-1",
        })
    }
}

/// `σ(θ^a ⊗ θ^b) = S^{ab}_{cd} θ^c ⊗ θ^d` with constant `S`.
#[derive(Clone, Debug)]
pub struct SigmaMap<F: Field> {
    pub name: String,
    pub tensor: BraidTensor<F>,
}

impl<F: Field> SigmaMap<F> {
    pub fn new(alg: &Algebra<F>, variant: SigmaVariant) -> Self {
        let q = alg.params().q();
        let tensor = match variant {
            SigmaVariant::QR => alg.rhat().scale(&q),
            SigmaVariant::QRInverse => alg
                .rhat()
                .inverse()
                .expect("R̂ is invertible")
                .scale(&q.inv().expect("q is nonzero")),
        };
        SigmaMap { name: variant.to_string(), tensor }
    }

    /// An arbitrary constant flip, for negative controls.
    pub fn custom(name: impl Into<String>, tensor: BraidTensor<F>) -> Self {
        SigmaMap { name: name.into(), tensor }
    }

    pub fn check_braid(&self) -> Result<(), String> {
        verify_braid(&self.tensor).map_err(|e| e.to_string())
    }

    fn entry(&self, a: i32, b: i32, c: i32, d: i32) -> F {
        self.tensor.entry(a, b, c, d)
    }
}

/// `(S + 1) P_a = 0`, the matrix form of `π ∘ (σ + 1) = 0`.
pub fn check_torsion_bilinearity<F: Field>(alg: &Algebra<F>, sigma: &SigmaMap<F>) -> Result<(), String> {
    let m = sigma.tensor.shift(&F::one()).mul(&alg.projectors().anti);
    match m.first_nonzero() {
        None => Ok(()),
        Some([a, b, c, d]) => Err(format!(
            "((S + 1) P_a)^({a},{b})_({c},{d}) = {}",
            m.entry(a, b, c, d)
        )),
    }
}

/// `Σ (S + 1)^{ab}_{cd} θ^c θ^d = 0` computed on the frame 2-forms.
pub fn check_torsion_bilinearity_on_frame<F: Field>(frame: &Frame<F>, sigma: &SigmaMap<F>) -> Result<usize, String> {
    let alg = frame.calc.algebra();
    let labels = alg.index().labels().to_vec();
    let tt = theta_squares(frame);
    let n = labels.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let fails: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let mut sum = tt[a * n + b].clone();
            for ((c, d), v) in sigma.tensor.row(labels[a], labels[b]) {
                sum = sum.add(&tt[alg.index().pos(c) * n + alg.index().pos(d)].scale(v));
            }
            frame.calc.witness(&sum).map(|w| format!("pi (sigma + 1)(theta{} x theta{}) = {w}", labels[a], labels[b]))
        })
        .collect();
    first(fails, pairs.len())
}

fn theta_squares<F: Field>(frame: &Frame<F>) -> Vec<Form<F>> {
    let labels = frame.calc.algebra().index().labels().to_vec();
    let pairs: Vec<(i32, i32)> = labels.iter().flat_map(|&a| labels.iter().map(move |&b| (a, b))).collect();
    pairs.par_iter().map(|&(a, b)| frame.theta_theta(a, b)).collect()
}

/// The scalar `c` in `S^{ae}_{df} g^{fg} S^{cb}_{eg} = c g^{ac} δ^b_d`.
pub fn compatibility_factor<F: Field>(alg: &Algebra<F>, sigma: &SigmaMap<F>) -> Result<F, String> {
    let labels = alg.index().labels().to_vec();
    let g = alg.metric();
    let mut factor: Option<F> = None;
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    let mut sum = F::zero();
                    for &e in &labels {
                        for &f in &labels {
                            let s1 = sigma.entry(a, e, d, f);
                            if s1.is_zero() {
                                continue;
                            }
                            let s2 = sigma.entry(c, b, e, -f);
                            if !s2.is_zero() {
                                sum = sum + s1 * &g.get(f, -f) * &s2;
                            }
                        }
                    }
                    let want = if b == d { g.get(a, c) } else { F::zero() };
                    if want.is_zero() {
                        if !sum.is_zero() {
                            return Err(format!("(S g S)^({a},{b},{c})_({d}) = {sum} where g delta vanishes"));
                        }
                        continue;
                    }
                    let r = sum.checked_div(&want).expect("nonzero");
                    match &factor {
                        None => factor = Some(r),
                        Some(prev) if *prev == r => {}
                        Some(prev) => return Err(format!("(S g S)^({a},{b},{c})_({d}) gives {r}, elsewhere {prev}")),
                    }
                }
            }
        }
    }
    Ok(factor.expect("nonempty index set"))
}

/// Exact compatibility `S^{ae}_{df} g^{fg} S^{bc}_{eg} = g^{ab} δ^c_d`.
pub fn check_exact_compatibility<F: Field>(alg: &Algebra<F>, sigma: &SigmaMap<F>) -> Result<(), String> {
    let labels = alg.index().labels().to_vec();
    let g = alg.metric();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    let mut sum = F::zero();
                    for &e in &labels {
                        for &f in &labels {
                            sum = sum + sigma.entry(a, e, d, f) * &g.get(f, -f) * &sigma.entry(b, c, e, -f);
                        }
                    }
                    let want = if c == d { g.get(a, b) } else { F::zero() };
                    if sum != want {
                        return Err(format!("(S g S)^({a},{b},{c})_({d}) = {sum}, want {want}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `θ² = λ_a λ_b θ^a θ^b = 0`, which makes `d α = -θα - αθ` on 1-forms.
pub fn check_theta_square<F: Field>(frame: &Frame<F>) -> Result<(), String> {
    let alg = frame.calc.algebra();
    let labels = alg.index().labels().to_vec();
    let tt = theta_squares(frame);
    let n = labels.len();
    let mut sum = frame.calc.zero(2);
    for (a, &la) in labels.iter().enumerate() {
        for (b, &lb) in labels.iter().enumerate() {
            let c = alg.mul(frame.lambda.get(alg, la), frame.lambda.get(alg, lb));
            sum = sum.add(&frame.calc.left_mul(&c, &tt[a * n + b]));
        }
    }
    frame.calc.witness(&sum).map_or(Ok(()), |w| Err(format!("theta^2 = {w}")))
}

/// `e_a(x^i) = [λ_a, x^i]`, so that `ξ^i = e_a(x^i) θ^a`.
fn vielbein<F: Field>(frame: &Frame<F>) -> Vec<Vec<Element<F>>> {
    let alg = frame.calc.algebra();
    let labels = alg.index().labels().to_vec();
    labels
        .par_iter()
        .map(|&i| labels.iter().map(|&a| alg.comm(frame.lambda.get(alg, a), &alg.x(i))).collect())
        .collect()
}

/// `g(ξ^i ⊗ ξ^j) = e_a(x^i) e_b(x^j) g^{ab} = g^{ij} Λ^{±2}`.
pub fn check_metric_coordinates<F: Field>(frame: &Frame<F>) -> Result<usize, String> {
    let alg = frame.calc.algebra();
    let labels = alg.index().labels().to_vec();
    let e = vielbein(frame);
    let g = alg.metric();
    let lam = alg.lambda(match frame.calc.kind() {
        Kind::Unbarred => 2,
        Kind::Barred => -2,
    });
    let n = labels.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let fails: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let mut sum = Element::zero();
            for (a, &la) in labels.iter().enumerate() {
                let b = alg.index().pos(-la);
                sum.add_scaled(&alg.mul(&e[i][a], &e[j][b]), &g.get(la, -la));
            }
            let want = lam.scale(&g.get(labels[i], labels[j]));
            let diff = sum.sub(&want);
            (!alg.is_zero(&diff))
                .then(|| format!("g(xi{} x xi{}) - g Lambda^2 = {}", labels[i], labels[j], alg.render(&alg.canonical(&diff))))
        })
        .collect();
    first(fails, pairs.len())
}

/// `σ(ξ^i ⊗ ξ^j) = S^{ij}_{hk} ξ^h ⊗ ξ^k`, compared in the frame basis.
pub fn check_sigma_coordinates<F: Field>(frame: &Frame<F>, sigma: &SigmaMap<F>) -> Result<usize, String> {
    let alg = frame.calc.algebra();
    let labels = alg.index().labels().to_vec();
    let e = vielbein(frame);
    let n = labels.len();
    let pos = |l: i32| alg.index().pos(l);
    // e_a(x^i) e_b(x^j) by (i, j, a, b)
    let quads: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).flat_map(move |a| (0..n).map(move |b| (i, j, a, b)))))
        .collect();
    let ee: Vec<Element<F>> = quads.par_iter().map(|&(i, j, a, b)| alg.mul(&e[i][a], &e[j][b])).collect();
    let at = |i: usize, j: usize, a: usize, b: usize| &ee[((i * n + j) * n + a) * n + b];
    let fails: Vec<String> = quads
        .par_iter()
        .filter_map(|&(i, j, c, d)| {
            let mut lhs = Element::zero();
            for a in 0..n {
                for b in 0..n {
                    let v = sigma.entry(labels[a], labels[b], labels[c], labels[d]);
                    if !v.is_zero() {
                        lhs.add_scaled(at(i, j, a, b), &v);
                    }
                }
            }
            let mut rhs = Element::zero();
            for ((h, k), v) in sigma.tensor.row(labels[i], labels[j]) {
                rhs.add_scaled(at(pos(h), pos(k), c, d), v);
            }
            let diff = lhs.sub(&rhs);
            (!alg.is_zero(&diff)).then(|| {
                format!(
                    "sigma(xi{} x xi{}) at theta{} x theta{}: {}",
                    labels[i],
                    labels[j],
                    labels[c],
                    labels[d],
                    alg.render(&alg.canonical(&diff))
                )
            })
        })
        .collect();
    first(fails, quads.len())
}

/// `D ξ = -θ ⊗ ξ + σ(ξ ⊗ θ)` on the frame:
/// `D θ^a = C^a_{cd} θ^c ⊗ θ^d` with `C^a_{cd} = λ_c δ^a_d - λ_b S^{ab}_{cd}`.
pub struct Connection<'a, F: Field> {
    pub frame: &'a Frame<F>,
    pub sigma: &'a SigmaMap<F>,
    /// `C^a_{cd}` by `(a, c, d)` positions.
    coeffs: Vec<Element<F>>,
}

impl<'a, F: Field> Connection<'a, F> {
    pub fn new(frame: &'a Frame<F>, sigma: &'a SigmaMap<F>) -> Self {
        let alg = frame.calc.algebra();
        let labels = alg.index().labels().to_vec();
        let n = labels.len();
        let coeffs = (0..n * n * n)
            .into_par_iter()
            .map(|t| {
                let (a, c, d) = (t / (n * n), (t / n) % n, t % n);
                let mut out = Element::zero();
                if a == d {
                    out.add_assign(frame.lambda.get(alg, labels[c]));
                }
                for (b, &lb) in labels.iter().enumerate() {
                    let v = sigma.entry(labels[a], lb, labels[c], labels[d]);
                    if !v.is_zero() {
                        out.add_scaled(&frame.lambda.lambda[b], &(-v));
                    }
                }
                out
            })
            .collect();
        Connection { frame, sigma, coeffs }
    }

    fn alg(&self) -> &Algebra<F> {
        self.frame.calc.algebra()
    }

    fn n(&self) -> usize {
        self.alg().index().dim()
    }

    /// `C^a_{cd}` by labels.
    pub fn coeff(&self, a: i32, c: i32, d: i32) -> &Element<F> {
        let idx = self.alg().index();
        let n = self.n();
        &self.coeffs[(idx.pos(a) * n + idx.pos(c)) * n + idx.pos(d)]
    }

    fn c(&self, a: usize, c: usize, d: usize) -> &Element<F> {
        let n = self.n();
        &self.coeffs[(a * n + c) * n + d]
    }

    /// `Θ(θ^a) = dθ^a - π Dθ^a` with `dθ^a = -θθ^a - θ^aθ`.
    pub fn check_torsion(&self) -> Result<usize, String> {
        let frame = self.frame;
        let alg = self.alg();
        let labels = alg.index().labels().to_vec();
        let n = self.n();
        let tt = theta_squares(frame);
        let fails: Vec<String> = (0..n)
            .into_par_iter()
            .filter_map(|a| {
                let mut t = frame.calc.zero(2);
                for b in 0..n {
                    let lb = &frame.lambda.lambda[b];
                    t = t.add(&frame.calc.left_mul(lb, &tt[b * n + a].add(&tt[a * n + b])));
                }
                for c in 0..n {
                    for d in 0..n {
                        let coef = self.c(a, c, d);
                        if !coef.is_zero() {
                            t = t.sub(&frame.calc.left_mul(coef, &tt[c * n + d]));
                        }
                    }
                }
                frame.calc.witness(&t).map(|w| format!("torsion(theta{}) = {w}", labels[a]))
            })
            .collect();
        first(fails, n)
    }

    /// The right Leibniz rule `D(θ^a x^j) = σ(θ^a ⊗ dx^j) + (Dθ^a) x^j`,
    /// with `D(θ^a x^j)` from the defining formula.
    pub fn check_right_leibniz(&self) -> Result<usize, String> {
        let frame = self.frame;
        let alg = self.alg();
        let labels = alg.index().labels().to_vec();
        let n = self.n();
        let e = vielbein(frame);
        let jobs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |j| (a, j))).collect();
        let fails: Vec<String> = jobs
            .par_iter()
            .filter_map(|&(a, j)| {
                let xj = alg.x(labels[j]);
                for c in 0..n {
                    for d in 0..n {
                        // D(x^j θ^a) = dx^j ⊗ θ^a + x^j Dθ^a, since θ x^j = x^j θ - dx^j
                        let mut lhs = alg.mul(&xj, self.c(a, c, d));
                        if d == a {
                            lhs.add_assign(&e[j][c]);
                        }
                        let mut rhs = alg.mul(self.c(a, c, d), &xj);
                        for (b, &lb) in labels.iter().enumerate() {
                            let v = self.sigma.entry(labels[a], lb, labels[c], labels[d]);
                            if !v.is_zero() {
                                rhs.add_scaled(&e[j][b], &v);
                            }
                        }
                        let diff = lhs.sub(&rhs);
                        if !alg.is_zero(&diff) {
                            return Some(format!(
                                "D(theta{} x{}) at theta{} x theta{}: {}",
                                labels[a],
                                labels[j],
                                labels[c],
                                labels[d],
                                alg.render(&alg.canonical(&diff))
                            ));
                        }
                    }
                }
                None
            })
            .collect();
        first(fails, jobs.len())
    }

    /// `Curv(θ^a) = π_12 D_2 Dθ^a` as coefficients `T_{ij,k}` of
    /// `θ^i θ^j ⊗ θ^k`, before reduction of the 2-form part.
    pub fn curvature_raw(&self, a: usize) -> Vec<Element<F>> {
        let alg = self.alg();
        let n = self.n();
        let lam = &self.frame.lambda.lambda;
        let mut t = vec![Element::zero(); n * n * n];
        let at = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        let labels = alg.index().labels();
        for c in 0..n {
            for d in 0..n {
                let cacd = self.c(a, c, d);
                if cacd.is_zero() {
                    continue;
                }
                // d C^a_{cd} ⊗ θ^c ⊗ θ^d
                for b in 0..n {
                    t[at(b, c, d)].add_assign(&alg.comm(&lam[b], cacd));
                }
                // C^a_{cd} Dθ^c ⊗ θ^d
                for e in 0..n {
                    for f in 0..n {
                        let c2 = self.c(c, e, f);
                        if !c2.is_zero() {
                            t[at(e, f, d)].add_assign(&alg.mul(cacd, c2));
                        }
                    }
                }
                // C^a_{cd} σ_12(θ^c ⊗ Dθ^d)
                for e in 0..n {
                    for f in 0..n {
                        let c2 = self.c(d, e, f);
                        if c2.is_zero() {
                            continue;
                        }
                        let prod = alg.mul(cacd, c2);
                        for ((g, h), v) in self.sigma.tensor.row(labels[c], labels[e]) {
                            t[at(alg.index().pos(g), alg.index().pos(h), f)].add_scaled(&prod, v);
                        }
                    }
                }
            }
        }
        t
    }

    /// `Curv(θ^a) = 0` for every `a`, reducing `θ^iθ^j` by `P_a`.
    pub fn check_curvature(&self) -> Result<usize, String> {
        let alg = self.alg();
        let labels = alg.index().labels().to_vec();
        let n = self.n();
        let pa = &alg.projectors().anti;
        let fails: Vec<String> = (0..n)
            .into_par_iter()
            .filter_map(|a| {
                let t = self.curvature_raw(a);
                for k in 0..n {
                    let mut reduced = vec![Element::zero(); n * n];
                    for i in 0..n {
                        for j in 0..n {
                            let v = &t[(i * n + j) * n + k];
                            if v.is_zero() {
                                continue;
                            }
                            for ((m, l), p) in pa.row(labels[i], labels[j]) {
                                reduced[alg.index().pos(m) * n + alg.index().pos(l)].add_scaled(v, p);
                            }
                        }
                    }
                    if let Some((ml, v)) = reduced.iter().enumerate().find(|(_, v)| !alg.is_zero(v)) {
                        return Some(format!(
                            "Curv(theta{}) at theta{} theta{} x theta{}: {}",
                            labels[a],
                            labels[ml / n],
                            labels[ml % n],
                            labels[k],
                            alg.render(&alg.canonical(v))
                        ));
                    }
                }
                None
            })
            .collect();
        first(fails, n)
    }
}

fn first(fails: Vec<String>, total: usize) -> Result<usize, String> {
    match fails.into_iter().next() {
        None => Ok(total),
        Some(w) => Err(w),
    }
}
