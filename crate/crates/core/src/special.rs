//! Jacobi polynomials and the factorial/Gamma ratio that normalizes the
//! squeezing matrix elements.

use crate::error::{Error, Result};

/// Arguments of a Jacobi polynomial `P_n^{(a, b)}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

impl JacobiParams {
    pub fn new(n: usize, a: f64, b: f64, x: f64) -> Result<Self> {
        if !(a > -1.0) {
            return Err(Error::invalid("a", format!("Jacobi exponent must exceed -1, got {a}")));
        }
        if !(b > -1.0) {
            return Err(Error::invalid("b", format!("Jacobi exponent must exceed -1, got {b}")));
        }
        if !x.is_finite() {
            return Err(Error::invalid("x", "argument must be finite"));
        }
        Ok(JacobiParams { n, a, b, x })
    }
}

/// `P_n^{(a, b)}(x)` by forward three-term recurrence in the degree.
pub fn jacobi_poly(p: &JacobiParams) -> Result<f64> {
    let JacobiParams { n, a, b, x } = JacobiParams::new(p.n, p.a, p.b, p.x)?;
    Ok(jacobi_unchecked(n, a, b, x))
}

pub(crate) fn jacobi_unchecked(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
    if n == 1 {
        return p1;
    }
    let (mut prev, mut cur) = (p0, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c0 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// `½ [ln n! + ln Γ(2κ + m) − ln m! − ln Γ(2κ + n)]`.
///
/// The Gamma functions are never formed: the ratio telescopes into
/// `|m − n|` factors `(2κ + k) / (k + 1)`, which are summed in log space.
pub fn log_gamma_ratio(n: u64, m: u64, two_kappa: f64) -> Result<f64> {
    if !(two_kappa > 0.0) || !two_kappa.is_finite() {
        return Err(Error::invalid("two_kappa", format!("must be positive, got {two_kappa}")));
    }
    let (lo, hi, sign) = if m >= n { (n, m, 1.0) } else { (m, n, -1.0) };
    let shift = two_kappa - 1.0;
    let sum: f64 = (lo..hi).map(|k| (shift / (k as f64 + 1.0)).ln_1p()).sum();
    Ok(0.5 * sign * sum)
}
