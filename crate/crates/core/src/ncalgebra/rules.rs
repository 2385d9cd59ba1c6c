use crate::rmatrix::BraidTensor;
use crate::scalar::{Field, IndexData};

use super::AlgebraError;

/// Ordering rules for a quadratic algebra on `N` letters: every out-of-order
/// product `y_a y_b` (position `a > b`) is a combination of in-order products.
#[derive(Clone, Debug)]
pub struct QuadraticRules<F: Field> {
    dim: usize,
    rules: Vec<Vec<Vec<(F, usize, usize)>>>,
    swap: Vec<Vec<Option<F>>>,
}

impl<F: Field> QuadraticRules<F> {
    /// Rewrites of `y_a y_b` for `a > b`; every term `(c, u, v)` has `b <= u <= v <= a`.
    pub fn rule(&self, a: usize, b: usize) -> &[(F, usize, usize)] {
        &self.rules[a][b]
    }

    /// `c` when the rule for `a > b` is the single swap `y_a y_b = c y_b y_a`.
    pub fn swap_factor(&self, a: usize, b: usize) -> Option<&F> {
        self.swap[a][b].as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All rules as `(a, b, rhs)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &[(F, usize, usize)])> {
        (0..self.dim).flat_map(move |a| (0..a).map(move |b| (a, b, self.rules[a][b].as_slice())))
    }

    /// The relations `Σ_{kl} M^{ij}_{kl} y_k y_l = 0` solved for the out-of-order pairs.
    pub fn from_relations(idx: &IndexData, m: &BraidTensor<F>) -> Result<Self, AlgebraError> {
        let n = idx.dim();
        let mut cols: Vec<(usize, usize)> = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..a {
                cols.push((a, b));
            }
        }
        let n_out = cols.len();
        for a in 0..n {
            for b in a..n {
                cols.push((a, b));
            }
        }
        let mut col_of = vec![vec![0usize; n]; n];
        for (c, &(a, b)) in cols.iter().enumerate() {
            col_of[a][b] = c;
        }
        let mut rows: Vec<Vec<F>> = Vec::new();
        for &i in idx.labels() {
            for &j in idx.labels() {
                let mut row = vec![F::zero(); n * n];
                let mut any = false;
                for ((k, l), v) in m.row(i, j) {
                    let c = col_of[idx.pos(k)][idx.pos(l)];
                    row[c] = row[c].clone() + v;
                    any = true;
                }
                if any {
                    rows.push(row);
                }
            }
        }
        let pivots = rref(&mut rows);
        if pivots.len() != n_out || pivots.iter().enumerate().any(|(r, &c)| r != c) {
            return Err(AlgebraError::RuleDerivation(format!(
                "relation space has pivots {pivots:?}, expected the {n_out} out-of-order pairs"
            )));
        }
        let mut rules = vec![vec![Vec::new(); n]; n];
        let mut swap = vec![vec![None; n]; n];
        for (r, &(a, b)) in cols[..n_out].iter().enumerate() {
            let rhs: Vec<(F, usize, usize)> = (n_out..n * n)
                .filter(|&c| !rows[r][c].is_zero())
                .map(|c| (-rows[r][c].clone(), cols[c].0, cols[c].1))
                .collect();
            if let Some(&(_, u, v)) = rhs.iter().find(|&&(_, u, v)| u < b || v > a) {
                return Err(AlgebraError::RuleDerivation(format!(
                    "rule for ({}, {}) leaves the interval: ({}, {})",
                    idx.label(a),
                    idx.label(b),
                    idx.label(u),
                    idx.label(v)
                )));
            }
            if rhs.len() == 1 && rhs[0].1 == b && rhs[0].2 == a {
                swap[a][b] = Some(rhs[0].0.clone());
            }
            rules[a][b] = rhs;
        }
        Ok(QuadraticRules { dim: n, rules, swap })
    }
}

/// Reduced row echelon form in place; returns the pivot columns and drops zero rows.
pub(crate) fn rref<F: Field>(rows: &mut Vec<Vec<F>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for c in col..ncols {
            if !rows[r][c].is_zero() {
                rows[r][c] = rows[r][c].clone() * &inv;
            }
        }
        for k in 0..rows.len() {
            if k == r || rows[k][col].is_zero() {
                continue;
            }
            let f = rows[k][col].clone();
            for c in col..ncols {
                if !rows[r][c].is_zero() {
                    rows[k][c] = rows[k][c].clone() - f.clone() * &rows[r][c];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}
