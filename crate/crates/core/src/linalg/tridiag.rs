use crate::error::{Error, Result};

/// Iteration budget per eigenvalue for the implicit QL sweep.
const MAX_QL_ITERATIONS: usize = 60;

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagMatrix {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagMatrix {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("diag", "matrix must have at least one row"));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::invalid(
                "off",
                format!("expected {} off-diagonal entries, got {}", diag.len() - 1, off.len()),
            ));
        }
        if diag.iter().chain(off.iter()).any(|x| !x.is_finite()) {
            return Err(Error::invalid("diag", "entries must be finite"));
        }
        Ok(TridiagMatrix { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut s = self.diag[j].abs();
                if j > 0 {
                    s += self.off[j - 1].abs();
                }
                if j + 1 < n {
                    s += self.off[j].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// LDL^T pivots of `T - x I`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0_f64;
        for (i, &d) in self.diag.iter().enumerate() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = d - x - if i == 0 { 0.0 } else { coupling / q };
            if q == 0.0 {
                q = f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix in ascending order.
pub fn eig_sym_tridiag(t: &TridiagMatrix) -> Result<Vec<f64>> {
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    implicit_ql(&mut d, &mut e, None)?;
    sort_ascending(&mut d);
    Ok(d)
}

/// Eigenvalues (ascending) and eigenvectors of a symmetric tridiagonal
/// matrix. The eigenvector for `values[k]` is column `k` of the returned
/// row-major `n x n` matrix.
pub fn eig_sym_tridiag_vectors(t: &TridiagMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = t.dim();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    implicit_ql(&mut d, &mut e, Some(&mut z))?;
    Ok(sort_with_vectors(d, z))
}

/// Implicit-shift QL on a tridiagonal matrix. `e[i]` couples `d[i]` and
/// `d[i + 1]`; `e[n - 1]` must be zero on entry. When `z` is given, the
/// plane rotations are accumulated into its columns (row-major, `n x n`).
pub(crate) fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { iterations, index: l });
            }

            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Underflow: split and restart on the shorter block.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let row = &mut z[k * n..(k + 1) * n];
                        let zf = row[i + 1];
                        row[i + 1] = s * row[i] + c * zf;
                        row[i] = c * row[i] - s * zf;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Stable ascending sort; ties keep their original index order.
pub(crate) fn sort_ascending(v: &mut [f64]) {
    v.sort_by(|a, b| a.total_cmp(b));
}

pub(crate) fn sort_with_vectors(d: Vec<f64>, z: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + new_col] = z[row * n + old_col];
        }
    }
    (values, vectors)
}
