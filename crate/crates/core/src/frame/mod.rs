//! Inner derivations `λ_a`, frames `θ^a`, the `L±` images and Dirac operators.
//!
//! All index loops run over labels; `g^{ab}` and `g_{ab}` are antidiagonal,
//! so each contraction with the metric collapses to a single term.

mod gamma;
#[cfg(test)]
mod tests;

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::calculus::{Calculus, Form, Kind};
use crate::ncalgebra::{Algebra, AlgebraError, Element, Letter};
use crate::rmatrix::BraidTensor;
use crate::scalar::Field;

pub use gamma::{check_constraints, required_product, GammaChoice, GammaOverride, GammaValue};

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("gamma choice: {0}")]
    Gamma(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `λ_a` without its constant, by label.
pub fn lambda_shape<F: Field>(alg: &Algebra<F>, kind: Kind, a: i32) -> Result<Element<F>, AlgebraError> {
    let idx = alg.index();
    let lam = alg.lambda(kind.sign() as i16);
    let tail = if idx.is_odd() && a == 0 {
        alg.x_pow(0, -1)?
    } else if !idx.is_odd() && a.abs() == 1 {
        let k = alg.kappa((-a * kind.sign()) as i16)?;
        alg.mul(&alg.x_pow(a, -1)?, &k)
    } else {
        let i = a.unsigned_abs() as usize;
        alg.mul_all(&[&alg.r(i, -1)?, &alg.r(i - 1, -1)?, &alg.x(-a)])
    };
    Ok(alg.mul(&lam, &tail))
}

/// The elements `λ_a` (or `λ̄_a`) of one calculus.
#[derive(Clone, Debug)]
pub struct LambdaFamily<F: Field> {
    pub kind: Kind,
    /// Constants by position.
    pub gamma: Vec<F>,
    /// `λ_a` by position.
    pub lambda: Vec<Element<F>>,
}

impl<F: Field> LambdaFamily<F> {
    pub fn new(alg: &Algebra<F>, kind: Kind, gamma: Vec<F>) -> Result<Self, AlgebraError> {
        let idx = alg.index();
        let lambda = idx
            .labels()
            .iter()
            .zip(&gamma)
            .map(|(&a, g)| Ok(lambda_shape(alg, kind, a)?.scale(g)))
            .collect::<Result<_, AlgebraError>>()?;
        Ok(LambdaFamily { kind, gamma, lambda })
    }

    pub fn get(&self, alg: &Algebra<F>, label: i32) -> &Element<F> {
        &self.lambda[alg.index().pos(label)]
    }

    pub fn check_constraints(&self, alg: &Algebra<F>) -> Result<(), String> {
        check_constraints(alg.params(), alg.index(), self.kind, &self.gamma)
    }
}

/// `g^{i,-i} Λ^e [λ_{-i}, x^{-j}] g_{-j,j}`, the shared shape of `L` and `θ`.
fn dressed<F: Field>(alg: &Algebra<F>, fam: &LambdaFamily<F>, e: i16, i: i32, j: i32) -> Element<F> {
    let g = alg.metric();
    let c = alg.comm(fam.get(alg, -i), &alg.x(-j));
    alg.mul(&alg.lambda(e), &c).scale(&(g.get(i, -i) * &g.get(-j, j)))
}

/// A square matrix of algebra elements indexed by positions.
#[derive(Clone, Debug)]
pub struct ElementMatrix<F: Field> {
    pub entries: Vec<Vec<Element<F>>>,
}

impl<F: Field> ElementMatrix<F> {
    pub fn get(&self, alg: &Algebra<F>, i: i32, j: i32) -> &Element<F> {
        let idx = alg.index();
        &self.entries[idx.pos(i)][idx.pos(j)]
    }
}

/// The image of `L^-` (unbarred family) or `L^+` (barred family):
/// `g^{ih} Λ^{∓1} [λ_h, x^k] g_{kj}`.
pub fn l_matrix<F: Field>(alg: &Algebra<F>, fam: &LambdaFamily<F>) -> ElementMatrix<F> {
    let labels = alg.index().labels().to_vec();
    let e = -(fam.kind.sign() as i16);
    let entries = labels.par_iter().map(|&i| labels.iter().map(|&j| dressed(alg, fam, e, i, j)).collect()).collect();
    ElementMatrix { entries }
}

/// Frame components `θ^a_l = Λ^{∓2} g^{ab} [λ_b, x^j] g_{jl}`.
pub fn frame_components<F: Field>(alg: &Algebra<F>, fam: &LambdaFamily<F>) -> ElementMatrix<F> {
    let labels = alg.index().labels().to_vec();
    let e = -2 * fam.kind.sign() as i16;
    let entries = labels.par_iter().map(|&a| labels.iter().map(|&l| dressed(alg, fam, e, a, l)).collect()).collect();
    ElementMatrix { entries }
}

/// A frame together with its calculus.
pub struct Frame<F: Field> {
    pub calc: Arc<Calculus<F>>,
    pub lambda: LambdaFamily<F>,
    pub comps: ElementMatrix<F>,
}

impl<F: Field> Frame<F> {
    pub fn new(calc: Arc<Calculus<F>>, lambda: LambdaFamily<F>) -> Self {
        assert_eq!(calc.kind(), lambda.kind, "frame and calculus disagree");
        let comps = frame_components(calc.algebra(), &lambda);
        Frame { calc, lambda, comps }
    }

    fn alg(&self) -> &Algebra<F> {
        self.calc.algebra()
    }

    fn label(&self, p: usize) -> i32 {
        self.alg().index().label(p)
    }

    /// `θ^a` as a 1-form.
    pub fn theta(&self, a: i32) -> Form<F> {
        self.calc.one_form(self.comps.entries[self.alg().index().pos(a)].clone())
    }

    /// `θ^a θ^b = θ^b_m θ^a_l ξ^l ξ^m`, using that `θ^a` commutes with the
    /// components of `θ^b`.
    pub fn theta_theta(&self, a: i32, b: i32) -> Form<F> {
        let alg = self.alg();
        let pa = &self.comps.entries[alg.index().pos(a)];
        let pb = &self.comps.entries[alg.index().pos(b)];
        let mut out = self.calc.zero(2);
        for (m, tb) in pb.iter().enumerate() {
            if tb.is_zero() {
                continue;
            }
            for (l, ta) in pa.iter().enumerate() {
                if ta.is_zero() {
                    continue;
                }
                out = out.add(&self.calc.left_mul(&alg.mul(tb, ta), &self.calc.wedge_pair(l, m)));
            }
        }
        out
    }

    /// `[θ^a, f] = 0` for `f` among `x^j` and `Λ`.
    pub fn check_commutation(&self) -> Result<usize, String> {
        let alg = self.alg();
        let idx = alg.index();
        let mut gens: Vec<(String, Element<F>)> = idx.labels().iter().map(|&j| (format!("x{j}"), alg.x(j))).collect();
        gens.push(("L".into(), alg.lambda(1)));
        let jobs: Vec<(i32, usize)> =
            idx.labels().iter().flat_map(|&a| (0..gens.len()).map(move |g| (a, g))).collect();
        let fails: Vec<String> = jobs
            .par_iter()
            .filter_map(|&(a, g)| {
                let f = &gens[g].1;
                self.check_exchange(a, f, 0).err().map(|w| format!("[theta{a}, {}] = {w}", gens[g].0))
            })
            .collect();
        first_failure(fails, jobs.len())
    }

    /// `θ^a f - q^p f θ^a` or its first nonzero component.
    pub fn check_exchange(&self, a: i32, f: &Element<F>, p: i32) -> Result<(), String> {
        let th = self.theta(a);
        let c = self.calc.right_mul(&th, f).map_err(|e| e.to_string())?;
        let c = c.sub(&self.calc.left_mul(f, &th).scale(&self.alg().q_pow(p)));
        self.calc.witness(&c).map_or(Ok(()), Err)
    }

    /// `K θ^a = q^p θ^a K` with `p` the weight of `x^a`, so `[θ^a, K]`
    /// vanishes exactly for `|a| > 1`. `None` for odd `N`.
    pub fn check_k_exchange(&self) -> Option<Result<usize, String>> {
        let alg = self.alg();
        let idx = alg.index();
        if idx.is_odd() {
            return None;
        }
        let k = alg.kappa(1).expect("even N has K");
        let labels = idx.labels().to_vec();
        let fails: Vec<String> = labels
            .par_iter()
            .filter_map(|&a| {
                let p = alg.swap_power(Letter::K, Letter::X(a as i8));
                self.check_exchange(a, &k, -p).err().map(|w| format!("theta{a} K - q^{} K theta{a} = {w}", -p))
            })
            .collect();
        Some(first_failure(fails, labels.len()))
    }

    /// Duality `d x^j = [λ_a, x^j] θ^a`.
    pub fn check_duality(&self) -> Result<usize, String> {
        let alg = self.alg();
        let labels = alg.index().labels().to_vec();
        let fails: Vec<String> = labels
            .par_iter()
            .filter_map(|&j| {
                let mut sum = self.calc.zero(1);
                for &a in &labels {
                    let c = alg.comm(self.lambda.get(alg, a), &alg.x(j));
                    sum = sum.add(&self.calc.left_mul(&c, &self.theta(a)));
                }
                let diff = sum.sub(&self.calc.xi(j));
                self.calc.witness(&diff).map(|w| format!("[lambda_a, x{j}] theta^a - d x{j} = {w}"))
            })
            .collect();
        first_failure(fails, labels.len())
    }

    /// `P_s θθ = 0` and `P_t θθ = 0`, which with `P_s + P_a + P_t = 1`
    /// is `P_a θθ = θθ`.
    pub fn check_wedge(&self) -> Result<usize, String> {
        let alg = self.alg();
        let labels = alg.index().labels().to_vec();
        let pairs: Vec<(i32, i32)> = labels.iter().flat_map(|&c| labels.iter().map(move |&d| (c, d))).collect();
        let tt: Vec<Form<F>> = pairs.par_iter().map(|&(c, d)| self.theta_theta(c, d)).collect();
        let n = labels.len();
        let at = |c: i32, d: i32| &tt[alg.index().pos(c) * n + alg.index().pos(d)];
        let pr = alg.projectors();
        let fails: Vec<String> = pairs
            .par_iter()
            .filter_map(|&(a, b)| {
                for (name, p) in [("P_s", &pr.sym), ("P_t", &pr.trace)] {
                    let mut sum = self.calc.zero(2);
                    for ((c, d), v) in p.row(a, b) {
                        sum = sum.add(&at(c, d).scale(v));
                    }
                    if let Some(w) = self.calc.witness(&sum) {
                        return Some(format!("({name} theta theta)^({a},{b}) = {w}"));
                    }
                }
                None
            })
            .collect();
        first_failure(fails, 2 * pairs.len())
    }

    /// `θ = -λ_a θ^a`.
    pub fn dirac(&self) -> Form<F> {
        let alg = self.alg();
        let mut out = self.calc.zero(1);
        for &a in alg.index().labels() {
            out = out.sub(&self.calc.left_mul(self.lambda.get(alg, a), &self.theta(a)));
        }
        out
    }

    /// `±ω_n q^{±N/2} k^{-1} r^{-2} g_{ij} x^i ξ^j`.
    pub fn dirac_closed_form(&self) -> Form<F> {
        let alg = self.alg();
        let idx = alg.index();
        let p = alg.params();
        let sign = self.calc.kind().sign();
        let n = idx.rank() as i32;
        let c = p.omega(idx, n) * &p.s_pow(sign * idx.dim() as i32) * &p.k().inv().expect("k is nonzero")
            * &F::from_i64(sign as i64);
        let r2 = alg.r(idx.rank(), -2).expect("full radius");
        let comps = idx
            .labels()
            .iter()
            .map(|&j| alg.mul(&r2, &alg.x(-j)).scale(&(c.clone() * &alg.metric().get(-j, j))))
            .collect();
        self.calc.one_form(comps)
    }

    pub fn check_dirac_closed_form(&self) -> Result<usize, String> {
        let diff = self.dirac().sub(&self.dirac_closed_form());
        match self.calc.witness(&diff) {
            None => Ok(self.alg().index().dim()),
            Some(w) => Err(format!("-lambda_a theta^a minus the closed form = {w}")),
        }
    }

    /// `d f = -[θ, f]` on x-monomials of degree at most `deg`.
    pub fn check_dirac_derivative(&self, deg: usize) -> Result<usize, String> {
        let theta = self.dirac();
        let alg = self.alg();
        let mons = self.calc.monomials(deg);
        let fails: Vec<String> = mons
            .par_iter()
            .filter_map(|f| {
                let df = match self.calc.d(&self.calc.function(f.clone())) {
                    Ok(v) => v,
                    Err(e) => return Some(e.to_string()),
                };
                let tf = match self.calc.right_mul(&theta, f) {
                    Ok(v) => v,
                    Err(e) => return Some(e.to_string()),
                };
                let comm = tf.sub(&self.calc.left_mul(f, &theta));
                self.calc.witness(&df.add(&comm)).map(|w| format!("d({}) + [theta, .] = {w}", alg.render(f)))
            })
            .collect();
        first_failure(fails, mons.len())
    }

    /// Position order used for witnesses.
    pub fn labels(&self) -> Vec<i32> {
        (0..self.alg().index().dim()).map(|p| self.label(p)).collect()
    }
}

fn first_failure(fails: Vec<String>, total: usize) -> Result<usize, String> {
    match fails.into_iter().next() {
        None => Ok(total),
        Some(w) => Err(w),
    }
}

/// `Σ P_a^{ab}_{cd} λ_a λ_b = 0` for every `(c, d)`.
pub fn check_lambda_relations<F: Field>(alg: &Algebra<F>, fam: &LambdaFamily<F>) -> Result<usize, String> {
    let labels = alg.index().labels().to_vec();
    let pa = &alg.projectors().anti;
    let n = labels.len();
    let prods: Vec<Element<F>> = labels
        .par_iter()
        .flat_map_iter(|&a| labels.iter().map(move |&b| (a, b)).collect::<Vec<_>>())
        .map(|(a, b)| alg.mul(fam.get(alg, a), fam.get(alg, b)))
        .collect();
    let mut cols: Vec<Vec<(i32, i32, F)>> = vec![Vec::new(); n * n];
    for &a in &labels {
        for &b in &labels {
            for ((c, d), v) in pa.row(a, b) {
                cols[alg.index().pos(c) * n + alg.index().pos(d)].push((a, b, v.clone()));
            }
        }
    }
    let pairs: Vec<(i32, i32)> = labels.iter().flat_map(|&c| labels.iter().map(move |&d| (c, d))).collect();
    let fails: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(c, d)| {
            let mut sum = Element::zero();
            for (a, b, v) in &cols[alg.index().pos(c) * n + alg.index().pos(d)] {
                sum.add_scaled(&prods[alg.index().pos(*a) * n + alg.index().pos(*b)], v);
            }
            (!alg.is_zero(&sum)).then(|| format!("(P_a lambda lambda)_({c},{d}) = {}", alg.render(&alg.canonical(&sum))))
        })
        .collect();
    first_failure(fails, pairs.len())
}

/// `R̂^{ij}_{kl} A^k_m B^l_n = C^i_k D^j_l R̂^{kl}_{mn}` with every product of
/// two generators mapped to the reversed product of their images, so the
/// left side reads `B^l_n A^k_m`. In the label order used here the images
/// compose that way.
pub fn check_frt<F: Field>(
    alg: &Algebra<F>,
    rhat: &BraidTensor<F>,
    [a, b]: [&ElementMatrix<F>; 2],
    [c, d]: [&ElementMatrix<F>; 2],
) -> Result<usize, String> {
    let labels = alg.index().labels().to_vec();
    let n = labels.len();
    let pos = |l: i32| alg.index().pos(l);
    // images of A^k_m B^l_n and C^i_k D^j_l
    let quads: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|p| (0..n).flat_map(move |q| (0..n).flat_map(move |r| (0..n).map(move |s| (p, q, r, s)))))
        .collect();
    let ab: Vec<Element<F>> =
        quads.par_iter().map(|&(k, m, l, nn)| alg.mul(&b.entries[l][nn], &a.entries[k][m])).collect();
    let cd: Vec<Element<F>> =
        quads.par_iter().map(|&(i, k, j, l)| alg.mul(&d.entries[j][l], &c.entries[i][k])).collect();
    let at = |v: &Vec<Element<F>>, p: usize, q: usize, r: usize, s: usize| v[((p * n + q) * n + r) * n + s].clone();
    let fails: Vec<String> = quads
        .par_iter()
        .filter_map(|&(i, j, m, nn)| {
            let mut lhs = Element::zero();
            for ((k, l), v) in rhat.row(labels[i], labels[j]) {
                lhs.add_scaled(&at(&ab, pos(k), m, pos(l), nn), v);
            }
            let mut rhs = Element::zero();
            for k in 0..n {
                for l in 0..n {
                    let v = rhat.entry(labels[k], labels[l], labels[m], labels[nn]);
                    if !v.is_zero() {
                        rhs.add_scaled(&at(&cd, i, k, j, l), &v);
                    }
                }
            }
            let diff = lhs.sub(&rhs);
            (!alg.is_zero(&diff)).then(|| {
                format!(
                    "component ({},{};{},{}): {}",
                    labels[i],
                    labels[j],
                    labels[m],
                    labels[nn],
                    alg.render(&alg.canonical(&diff))
                )
            })
        })
        .collect();
    first_failure(fails, quads.len())
}

/// `L^-` vanishes below the diagonal and `L^+` above it, with labels
/// ordered by weight.
pub fn check_triangular<F: Field>(alg: &Algebra<F>, l: &ElementMatrix<F>, kind: Kind) -> Result<usize, String> {
    let labels = alg.index().labels();
    let mut count = 0;
    for &i in labels {
        for &j in labels {
            let zero_side = match kind {
                Kind::Unbarred => i < j,
                Kind::Barred => i > j,
            };
            if zero_side {
                count += 1;
                if !alg.is_zero(l.get(alg, i, j)) {
                    return Err(format!("L^{i}_{j} = {}", alg.render(l.get(alg, i, j))));
                }
            }
        }
    }
    Ok(count)
}

/// RLL for one matrix.
pub fn check_rll<F: Field>(alg: &Algebra<F>, rhat: &BraidTensor<F>, l: &ElementMatrix<F>) -> Result<usize, String> {
    check_frt(alg, rhat, [l, l], [l, l])
}

/// The mixed relation `R̂ L⁻_1 L⁺_2 = L⁺_1 L⁻_2 R̂`.
pub fn check_mixed<F: Field>(
    alg: &Algebra<F>,
    rhat: &BraidTensor<F>,
    minus: &ElementMatrix<F>,
    plus: &ElementMatrix<F>,
) -> Result<usize, String> {
    check_frt(alg, rhat, [minus, plus], [plus, minus])
}

/// The scalars `c`, `c'` in `L^i_k g^{kl} L^j_l = c g^{ij}` and
/// `L^k_i g_{kl} L^l_j = c' g_{ij}`, products reversed as in [`check_rll`].
pub fn gll_constants<F: Field>(alg: &Algebra<F>, l: &ElementMatrix<F>) -> Result<(F, F), String> {
    let labels = alg.index().labels().to_vec();
    let g = alg.metric();
    let mut found: [Option<F>; 2] = [None, None];
    for (which, slot) in found.iter_mut().enumerate() {
        for &i in &labels {
            for &j in &labels {
                let mut sum = Element::zero();
                for &k in &labels {
                    let t = if which == 0 {
                        alg.mul(l.get(alg, j, -k), l.get(alg, i, k))
                    } else {
                        alg.mul(l.get(alg, -k, j), l.get(alg, k, i))
                    };
                    sum.add_scaled(&t, &g.get(k, -k));
                }
                let name = if which == 0 { "L g L^T" } else { "L^T g L" };
                if j != -i {
                    if !alg.is_zero(&sum) {
                        return Err(format!("({name})^({i},{j}) = {} off the metric support", alg.render(&sum)));
                    }
                    continue;
                }
                let c = alg
                    .ratio(&sum, &Element::scalar(g.get(i, j)))
                    .ok_or_else(|| format!("({name})^({i},{j}) = {} is not a scalar", alg.render(&sum)))?;
                match slot {
                    None => *slot = Some(c),
                    Some(prev) if *prev == c => {}
                    Some(prev) => return Err(format!("({name}) scalar {c} at ({i},{j}) differs from {prev}")),
                }
            }
        }
    }
    let [c, cp] = found;
    Ok((c.expect("nonempty index set"), cp.expect("nonempty index set")))
}
