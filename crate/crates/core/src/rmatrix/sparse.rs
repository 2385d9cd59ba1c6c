use crate::scalar::Field;

/// Square sparse matrix stored by rows; each row is sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F: Field> {
    dim: usize,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, F::one())
    }

    pub fn scalar(dim: usize, c: F) -> Self {
        let mut m = Self::zeros(dim);
        if !c.is_zero() {
            for (r, row) in m.rows.iter_mut().enumerate() {
                row.push((r, c.clone()));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[(usize, F)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        match self.rows[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(p) => self.rows[r][p].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(k, _)| *k) {
            Ok(p) if v.is_zero() => {
                row.remove(p);
            }
            Ok(p) => row[p].1 = v,
            Err(_) if v.is_zero() => {}
            Err(p) => row.insert(p, (c, v)),
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: F) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zeros(self.dim);
        }
        SparseMatrix {
            dim: self.dim,
            rows: self.rows.iter().map(|row| row.iter().map(|(k, v)| (*k, v.clone() * c)).collect()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_to(r, c, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&(-F::one())))
    }

    /// `self + c * 1`.
    pub fn shift(&self, c: &F) -> Self {
        self.add(&Self::scalar(self.dim, c.clone()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, F> = std::collections::BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &rhs.rows[*k] {
                    let t = a.clone() * b;
                    match acc.get_mut(c) {
                        Some(e) => *e = e.clone() + t,
                        None => {
                            acc.insert(*c, t);
                        }
                    }
                }
            }
            out.rows[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (r, c, v) in self.iter() {
            out.rows[c].push((r, v.clone()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn trace(&self) -> F {
        (0..self.dim).fold(F::zero(), |acc, r| acc + self.get(r, r))
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a: Vec<Vec<F>> = (0..n).map(|r| (0..n).map(|c| self.get(r, c)).collect()).collect();
        let mut inv: Vec<Vec<F>> = (0..n).map(|r| (0..n).map(|c| if r == c { F::one() } else { F::zero() }).collect()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv()?;
            for c in 0..n {
                a[col][c] = a[col][c].clone() * &p;
                inv[col][c] = inv[col][c].clone() * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    if !a[col][c].is_zero() {
                        a[r][c] = a[r][c].clone() - f.clone() * &a[col][c];
                    }
                    if !inv[col][c].is_zero() {
                        inv[r][c] = inv[r][c].clone() - f.clone() * &inv[col][c];
                    }
                }
            }
        }
        let mut out = Self::zeros(n);
        for (r, row) in inv.into_iter().enumerate() {
            out.rows[r] = row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
        Some(out)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<F>> = (0..self.dim).map(|r| (0..self.dim).map(|c| self.get(r, c)).collect()).collect();
        dense_rank(rows)
    }
}

pub(crate) fn dense_rank<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank][col].inv().expect("nonzero pivot");
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone() * &p;
            for c in col..ncols {
                if !rows[rank][c].is_zero() {
                    rows[r][c] = rows[r][c].clone() - f.clone() * &rows[rank][c];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    #[test]
    fn inverse_round_trip() {
        let mut m = SparseMatrix::<GaussRat>::identity(3);
        m.set(0, 1, GaussRat::from_int(2));
        m.set(2, 0, GaussRat::from_int(-1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SparseMatrix::identity(3));
        assert_eq!(m.rank(), 3);
    }
}
