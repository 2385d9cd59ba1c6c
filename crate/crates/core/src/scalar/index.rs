use serde::{Deserialize, Serialize};

use super::ScalarError;

/// Largest dimension the engine supports (monomials use fixed-size storage).
pub const MAX_DIM: usize = 9;

/// Index bookkeeping for `R^N_q`: labels `-n..n` (without `0` for even `N`)
/// and the half-integer weights `rho_i`, stored doubled.
///
/// The weight list `(n-1/2, ..., 1/2, 0, -1/2, ..., 1/2-n)` is read in the
/// label order `-n, ..., n`, so `rho_{-n} = n - 1/2` and `rho_n = 1/2 - n`.
/// This is the reading under which `r^2 = g_{kl} x^k x^l` is central together
/// with `x^{-1} x^0 = q x^0 x^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexData {
    dim: usize,
    labels: Vec<i32>,
}

impl IndexData {
    pub fn new(dim: usize) -> Result<Self, ScalarError> {
        if !(3..=MAX_DIM).contains(&dim) {
            return Err(ScalarError::Parse(format!("dimension N must lie in 3..={MAX_DIM}, got {dim}")));
        }
        let n = (dim / 2) as i32;
        let labels = (-n..=n).rev().filter(|&i| i != 0 || dim % 2 == 1).collect();
        Ok(IndexData { dim, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank `n = floor(N/2)`.
    pub fn rank(&self) -> usize {
        self.dim / 2
    }

    pub fn is_odd(&self) -> bool {
        self.dim % 2 == 1
    }

    /// Labels in descending order `n, ..., -n`; this is also the monomial order.
    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    /// Position of a label in [`labels`](Self::labels).
    pub fn pos(&self, label: i32) -> usize {
        let n = self.rank() as i32;
        debug_assert!(label.abs() <= n && (label != 0 || self.is_odd()), "bad label {label}");
        if label > 0 || self.is_odd() {
            (n - label) as usize
        } else {
            (n - label - 1) as usize
        }
    }

    pub fn label(&self, pos: usize) -> i32 {
        self.labels[pos]
    }

    pub fn has_label(&self, label: i32) -> bool {
        label.abs() <= self.rank() as i32 && (label != 0 || self.is_odd())
    }

    /// `2 rho_i`; positive for negative labels.
    pub fn rho2(&self, label: i32) -> i32 {
        let a = label.abs();
        let r = match (a, self.is_odd()) {
            (0, _) => 0,
            (a, true) => 2 * a - 1,
            (a, false) => 2 * a - 2,
        };
        if label > 0 {
            -r
        } else {
            r
        }
    }

    /// The coordinates that are inverted in the extended algebra:
    /// `x^0` for odd `N`, `x^{+1}` and `x^{-1}` for even `N`.
    pub fn is_localized(&self, label: i32) -> bool {
        if self.is_odd() {
            label == 0
        } else {
            label.abs() == 1
        }
    }
}
