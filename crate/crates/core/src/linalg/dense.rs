use super::tridiag::{implicit_ql, sort_ascending, sort_with_vectors};
use crate::error::{Error, Result};

/// Dense real symmetric matrix. Only the lower triangle is writable; reads
/// of the upper triangle are mirrored, so the stored matrix is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    n: usize,
    // Row-major; only entries with col <= row are meaningful.
    data: Vec<f64>,
}

impl DenseSym {
    pub fn zeros(n: usize) -> Self {
        DenseSym { n, data: vec![0.0; n * n] }
    }

    /// Builds a symmetric matrix from the lower triangle of `f(i, j)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        self.data[r * self.n + c]
    }

    /// Writes entry `(i, j)` and, implicitly, `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        self.data[r * self.n + c] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if j <= i { (i, j) } else { (j, i) };
        self.data[r * self.n + c] += value;
    }

    /// Row-major copy of the full matrix.
    pub fn to_full(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    pub fn one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Output of [`eig_sym_dense`].
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `k` is the eigenvector of `values[k]`.
    pub vectors: Option<Vec<f64>>,
}

/// Eigenvalues (ascending) and optionally orthonormal eigenvectors of a
/// dense symmetric matrix.
///
/// Two-by-two problems without vectors use the closed-form quadratic; larger
/// ones go through Householder tridiagonalization and implicit QL.
pub fn eig_sym_dense(m: &DenseSym, want_vectors: bool) -> Result<SymEigen> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::invalid("m", "matrix must have at least one row"));
    }
    if n == 1 {
        return Ok(SymEigen {
            values: vec![m.get(0, 0)],
            vectors: want_vectors.then(|| vec![1.0]),
        });
    }
    if n == 2 && !want_vectors {
        let (lo, hi) = eig_2x2(m.get(0, 0), m.get(1, 0), m.get(1, 1));
        return Ok(SymEigen { values: vec![lo, hi], vectors: None });
    }

    let mut work = m.data.clone();
    let reduction = householder_tridiagonalize(&mut work, n);
    let mut d = reduction.diag.clone();
    let mut e = reduction.off.clone();
    e.push(0.0);

    if !want_vectors {
        implicit_ql(&mut d, &mut e, None)?;
        sort_ascending(&mut d);
        return Ok(SymEigen { values: d, vectors: None });
    }

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    implicit_ql(&mut d, &mut e, Some(&mut z))?;
    reduction.apply_q(&mut z, n);
    let (values, vectors) = sort_with_vectors(d, z);
    Ok(SymEigen { values, vectors: Some(vectors) })
}

/// Closed-form eigenvalues of `[[a, b], [b, c]]`, ascending.
pub fn eig_2x2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let radius = (0.5 * (a - c)).hypot(b);
    (mean - radius, mean + radius)
}

struct Reflector {
    start: usize,
    v: Vec<f64>,
    beta: f64,
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    reflectors: Vec<Reflector>,
}

impl Tridiagonal {
    /// Overwrites `z` with `Q z`, where `A = Q T Q^T`.
    fn apply_q(&self, z: &mut [f64], n: usize) {
        let mut scratch = vec![0.0; n];
        for r in self.reflectors.iter().rev() {
            // scratch = v^T Z[start.., :]
            scratch.iter_mut().for_each(|x| *x = 0.0);
            for (vi, row) in r.v.iter().zip(z[r.start * n..].chunks_exact(n)) {
                axpy(*vi, row, &mut scratch);
            }
            for (vi, row) in r.v.iter().zip(z[r.start * n..].chunks_exact_mut(n)) {
                axpy(-r.beta * vi, &scratch, row);
            }
        }
    }
}

/// Householder reduction of the symmetric matrix held in the lower triangle
/// of `a` (row-major, `n x n`). Only the lower triangle is read or written.
fn householder_tridiagonalize(a: &mut [f64], n: usize) -> Tridiagonal {
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut reflectors = Vec::new();
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let mut v: Vec<f64> = (start..n).map(|i| a[i * n + k]).collect();
        let tail_norm = v[1..].iter().map(|x| x * x).sum::<f64>();
        if tail_norm == 0.0 {
            off[k] = v[0];
            continue;
        }
        let norm = (v[0] * v[0] + tail_norm).sqrt();
        let alpha = -norm.copysign(v[0]);
        v[0] -= alpha;
        // v^T v = 2 norm (norm + |x0|) > 0 since the tail is nonzero.
        let beta = 2.0 / dot(&v, &v);
        off[k] = alpha;

        // p = beta * A22 v, reading only the lower triangle.
        let p = &mut p[..m];
        p.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..m {
            let row = &a[(start + i) * n + start..(start + i) * n + start + i];
            let vi = v[i];
            let s = dot(row, &v[..i]);
            axpy(vi, row, &mut p[..i]);
            p[i] += s + a[(start + i) * n + start + i] * vi;
        }
        p.iter_mut().for_each(|x| *x *= beta);
        let kappa = 0.5 * beta * dot(&v, p);
        for (pi, vi) in p.iter_mut().zip(&v) {
            *pi -= kappa * vi;
        }
        // A22 -= v w^T + w v^T on the lower triangle (p now holds w).
        for i in 0..m {
            let row = &mut a[(start + i) * n + start..(start + i) * n + start + i + 1];
            let (vi, wi) = (v[i], p[i]);
            for ((x, vj), wj) in row.iter_mut().zip(&v[..=i]).zip(&p[..=i]) {
                *x -= vi * wj + wi * vj;
            }
        }
        // Column k is now (alpha, 0, ..., 0) below the diagonal.
        a[start * n + k] = alpha;
        for i in start + 1..n {
            a[i * n + k] = 0.0;
        }
        reflectors.push(Reflector { start, v, beta });
    }

    if n >= 2 {
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    Tridiagonal { diag, off, reflectors }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// General dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik != 0.0 {
                    axpy(aik, &other.data[k * n..(k + 1) * n], out_row);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Matrix, s: f64) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect();
        Matrix { n: self.n, data }
    }

    pub fn one_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Top-left `size x size` window.
    pub fn window(&self, size: usize) -> Matrix {
        Matrix::from_fn(size, |i, j| self.get(i, j))
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut x = rhs.data.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| lu[a * n + col].abs().total_cmp(&lu[b * n + col].abs()))
                .unwrap_or(col);
            if lu[pivot * n + col] == 0.0 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(pivot * n + j, col * n + j);
                    x.swap(pivot * n + j, col * n + j);
                }
            }
            let diag = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / diag;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
                for j in 0..n {
                    x[r * n + j] -= factor * x[col * n + j];
                }
            }
        }
        for col in (0..n).rev() {
            let diag = lu[col * n + col];
            for j in 0..n {
                x[col * n + j] /= diag;
            }
            for r in 0..col {
                let factor = lu[r * n + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    x[r * n + j] -= factor * x[col * n + j];
                }
            }
        }
        Ok(Matrix { n, data: x })
    }

    /// Determinant via LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| lu[a * n + col].abs().total_cmp(&lu[b * n + col].abs()))
                .unwrap_or(col);
            if lu[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let diag = lu[col * n + col];
            det *= diag;
            for r in col + 1..n {
                let factor = lu[r * n + col] / diag;
                for j in col..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
            }
        }
        det
    }
}
