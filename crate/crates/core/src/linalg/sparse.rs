use std::collections::BTreeMap;

use super::dense::DenseSym;

/// Square sparse matrix with row-wise ordered storage.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<BTreeMap<usize, f64>>,
}

impl SparseMatrix {
    pub fn new(n: usize) -> Self {
        SparseMatrix { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::new(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.add(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(&j).copied().unwrap_or(0.0)
    }

    /// Accumulates `value` into entry `(i, j)`. Explicit zeros are kept out
    /// of the pattern.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        if value != 0.0 {
            *self.rows[i].entry(j).or_insert(0.0) += value;
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(&j, &v)| (i, j, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(self.n);
        for (i, j, v) in self.iter() {
            t.add(j, i, v);
        }
        t
    }

    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = SparseMatrix::new(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            let out_row = &mut out.rows[i];
            for (&k, &a) in row {
                for (&j, &b) in &other.rows[k] {
                    *out_row.entry(j).or_insert(0.0) += a * b;
                }
            }
        }
        out
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SparseMatrix, s: f64) -> SparseMatrix {
        let mut out = self.clone();
        for (i, j, v) in other.iter() {
            *out.rows[i].entry(j).or_insert(0.0) += s * v;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, _, v)| v.abs()).fold(0.0, f64::max)
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        self.iter().map(|(i, j, v)| (v - self.get(j, i)).abs()).fold(0.0, f64::max)
    }

    /// Dense symmetric copy built from the lower triangle.
    pub fn to_dense_sym(&self) -> DenseSym {
        let mut d = DenseSym::zeros(self.n);
        for (i, j, v) in self.iter() {
            if j <= i {
                d.set(i, j, v);
            }
        }
        d
    }
}
