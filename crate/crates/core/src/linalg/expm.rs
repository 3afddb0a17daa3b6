//! Matrix exponential of a real antisymmetric generator by scaling and
//! squaring with the degree-13 Padé approximant.

use super::dense::Matrix;
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled [13/13] approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371920351148152;

const ANTISYMMETRY_TOL: f64 = 1e-14;

/// `exp(g)` for antisymmetric `g`; the result is orthogonal.
pub fn expm_antisymmetric(g: &Matrix) -> Result<Matrix> {
    let n = g.dim();
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| g.get(i, j).abs())
        .fold(1.0_f64, f64::max);
    let deviation = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (g.get(i, j) + g.get(j, i)).abs())
        .fold(0.0_f64, f64::max);
    if deviation > ANTISYMMETRY_TOL * scale {
        return Err(Error::NotAntisymmetric { deviation });
    }
    expm_pade13(g)
}

/// General scaling-and-squaring exponential.
pub(crate) fn expm_pade13(a: &Matrix) -> Result<Matrix> {
    let n = a.dim();
    if n == 0 {
        return Ok(Matrix::zeros(0));
    }
    let norm = a.one_norm();
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.scale(0.5_f64.powi(squarings));

    let b = &PADE13;
    let ident = Matrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let u_inner = a6
        .scale(b[13])
        .add_scaled(&a4, b[11])
        .add_scaled(&a2, b[9]);
    let u = a.matmul(
        &a6.matmul(&u_inner)
            .add_scaled(&a6, b[7])
            .add_scaled(&a4, b[5])
            .add_scaled(&a2, b[3])
            .add_scaled(&ident, b[1]),
    );
    let v_inner = a6
        .scale(b[12])
        .add_scaled(&a4, b[10])
        .add_scaled(&a2, b[8]);
    let v = a6
        .matmul(&v_inner)
        .add_scaled(&a6, b[6])
        .add_scaled(&a4, b[4])
        .add_scaled(&a2, b[2])
        .add_scaled(&ident, b[0]);

    let numer = v.add_scaled(&u, 1.0);
    let denom = v.add_scaled(&u, -1.0);
    let mut r = denom.solve(&numer)?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    Ok(r)
}
