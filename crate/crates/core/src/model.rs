//! The two-mode two-photon Rabi Hamiltonian
//!
//! ```text
//! H = ω₁ a†a + ω₂ b†b + J σx + λ σz (ab + a†b†)
//! ```
//!
//! on a hard Fock cutoff, its two-mode parity `P = exp[iπ/2 N(N−1)]`
//! (`N = a†a + b†b`) and the reduction to symmetric tridiagonal sector
//! problems labelled by a spin branch `s = ±1` and the conserved photon
//! number difference `Δ = a†a − b†b`.
//!
//! Sector states are `|n + |Δ|, n⟩` for `Δ ≥ 0` and `|n, n + |Δ|⟩` for
//! `Δ < 0`, indexed by `n = 0, 1, ...`; the excess always sits in mode `a`
//! for positive `Δ`, so that `ω₁ a†a + ω₂ b†b = ω₊ N + ω₋ Δ` on a sector.
//! On that basis `P` is diagonal with entries `(−1)^n c_Δ`, where
//! `c_Δ = (−1)^{|Δ|(|Δ|−1)/2}` is kept exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, TridiagMatrix};

/// Physical parameters `ω₁, ω₂, J, λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega1: f64,
    omega2: f64,
    j: f64,
    lam: f64,
}

impl ModelParams {
    /// Validates `ω₁, ω₂ > 0` and `λ ≥ 0`. `J` may take either sign.
    pub fn new(omega1: f64, omega2: f64, j: f64, lam: f64) -> Result<Self> {
        if !(omega1 > 0.0) || !omega1.is_finite() {
            return Err(Error::invalid("omega1", format!("must be positive and finite, got {omega1}")));
        }
        if !(omega2 > 0.0) || !omega2.is_finite() {
            return Err(Error::invalid("omega2", format!("must be positive and finite, got {omega2}")));
        }
        if !j.is_finite() {
            return Err(Error::invalid("j", format!("must be finite, got {j}")));
        }
        if !(lam >= 0.0) || !lam.is_finite() {
            return Err(Error::invalid("lambda", format!("must be non-negative and finite, got {lam}")));
        }
        Ok(ModelParams { omega1, omega2, j, lam })
    }

    /// Degenerate modes `ω₁ = ω₂ = ω`.
    pub fn resonant(omega: f64, j: f64, lam: f64) -> Result<Self> {
        Self::new(omega, omega, j, lam)
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn lambda(&self) -> f64 {
        self.lam
    }

    pub fn omega_plus(&self) -> f64 {
        0.5 * (self.omega1 + self.omega2)
    }

    pub fn omega_minus(&self) -> f64 {
        0.5 * (self.omega1 - self.omega2)
    }

    pub fn with_lambda(&self, lam: f64) -> Result<Self> {
        Self::new(self.omega1, self.omega2, self.j, lam)
    }

    pub fn with_j(&self, j: f64) -> Result<Self> {
        Self::new(self.omega1, self.omega2, j, self.lam)
    }

    /// Same model with the two modes exchanged.
    pub fn swapped_modes(&self) -> Self {
        ModelParams { omega1: self.omega2, omega2: self.omega1, ..*self }
    }
}

/// Spin block of the Fulton-Gouterman decoupled Hamiltonian `H^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Branch {
        if sign < 0.0 {
            Branch::Minus
        } else {
            Branch::Plus
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A symmetry block `H^s_Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorKey {
    pub branch: Branch,
    pub delta: i64,
}

impl SectorKey {
    pub fn new(branch: Branch, delta: i64) -> Self {
        SectorKey { branch, delta }
    }

    pub fn abs_delta(&self) -> u64 {
        self.delta.unsigned_abs()
    }

    /// `c_Δ`, the sector-constant phase of the parity.
    pub fn parity_phase(&self) -> f64 {
        f64::from(parity_sign_total(self.abs_delta()))
    }

    /// The sign `s·c_Δ` multiplying `J (−1)^n` on the sector diagonal.
    ///
    /// Dropping the phase `c_Δ` relabels the branches of sectors with
    /// `c_Δ = −1`; this is the branch label in that convention. Its `Minus`
    /// block holds the lowest state of the `Δ` sector when `J > 0`.
    pub fn alternating_branch(&self) -> Branch {
        Branch::from_sign(self.branch.sign() * self.parity_phase())
    }

    /// Mode occupations `(n_a, n_b)` of sector state `n`.
    pub fn occupations(&self, n: u64) -> (u64, u64) {
        let d = self.abs_delta();
        if self.delta >= 0 {
            (n + d, n)
        } else {
            (n, n + d)
        }
    }
}

impl fmt::Display for SectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, Δ={})", self.branch, self.delta)
    }
}

/// Eigenvalue of `exp[iπ/2 N(N−1)]` on total photon number `N`.
pub fn parity_sign_total(n_total: u64) -> i32 {
    // N(N-1)/2 is odd exactly when N mod 4 is 2 or 3.
    match n_total % 4 {
        0 | 1 => 1,
        _ => -1,
    }
}

/// Parity eigenvalue of sector state `n`; equals `(−1)^n c_Δ`.
pub fn sector_parity_sign(n: u64, delta: i64) -> i32 {
    parity_sign_total(2 * n + delta.unsigned_abs())
}

/// `H^s_Δ` on the first `cutoff` sector states.
pub fn build_sector_hamiltonian(params: &ModelParams, sector: SectorKey, cutoff: usize) -> Result<TridiagMatrix> {
    if cutoff == 0 {
        return Err(Error::invalid("cutoff", "sector cutoff must be at least 1"));
    }
    let s = sector.branch.sign();
    let d = sector.abs_delta() as f64;
    let diag = (0..cutoff as u64)
        .map(|n| {
            let (na, nb) = sector.occupations(n);
            params.omega1 * na as f64
                + params.omega2 * nb as f64
                + s * params.j * f64::from(sector_parity_sign(n, sector.delta))
        })
        .collect();
    let off = (0..cutoff.saturating_sub(1))
        .map(|n| {
            let n = n as f64;
            s * params.lam * ((n + 1.0) * (n + 1.0 + d)).sqrt()
        })
        .collect();
    TridiagMatrix::new(diag, off)
}

/// Parity restricted to a sector, as its diagonal.
pub fn sector_parity_diagonal(delta: i64, cutoff: usize) -> Vec<f64> {
    (0..cutoff as u64).map(|n| f64::from(sector_parity_sign(n, delta))).collect()
}

/// Bosonic Fock space of two modes with occupations `0..=n_max` each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    pub n_max: usize,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::invalid("n_max", "per-mode cutoff must be at least 1"));
        }
        Ok(FockSpace { n_max })
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 1)
    }

    pub fn index(&self, na: usize, nb: usize) -> usize {
        na * (self.n_max + 1) + nb
    }

    pub fn states(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.n_max;
        (0..=m).flat_map(move |na| (0..=m).map(move |nb| (na, nb)))
    }

    /// `ω₁ a†a + ω₂ b†b`.
    pub fn number_part(&self, params: &ModelParams) -> SparseMatrix {
        let diag: Vec<f64> = self
            .states()
            .map(|(na, nb)| params.omega1 * na as f64 + params.omega2 * nb as f64)
            .collect();
        SparseMatrix::diagonal(&diag)
    }

    /// `ab + a†b†` (without the coupling constant).
    pub fn pair_coupling(&self) -> SparseMatrix {
        let mut v = SparseMatrix::new(self.dim());
        for (na, nb) in self.states() {
            if na < self.n_max && nb < self.n_max {
                let lo = self.index(na, nb);
                let hi = self.index(na + 1, nb + 1);
                let amp = (((na + 1) * (nb + 1)) as f64).sqrt();
                v.add(lo, hi, amp);
                v.add(hi, lo, amp);
            }
        }
        v
    }

    /// `exp[iπ/2 N(N−1)]` as a diagonal matrix.
    pub fn parity(&self) -> SparseMatrix {
        SparseMatrix::diagonal(&self.parity_diagonal())
    }

    pub fn parity_diagonal(&self) -> Vec<f64> {
        self.states().map(|(na, nb)| f64::from(parity_sign_total((na + nb) as u64))).collect()
    }
}

/// The full spin-boson Hamiltonian on `|σ⟩ ⊗ |n_a⟩ ⊗ |n_b⟩`, spin-major with
/// `σz = +1` first:
///
/// ```text
/// [ H_b + V    J   ]
/// [   J     H_b − V ]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct FullHamiltonian {
    space: FockSpace,
    matrix: SparseMatrix,
}

impl FullHamiltonian {
    pub fn dim(&self) -> usize {
        2 * self.space.dim()
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }
}

pub fn build_full_hamiltonian(params: &ModelParams, n_max: usize) -> Result<FullHamiltonian> {
    let space = FockSpace::new(n_max)?;
    let dim = space.dim();
    let number = space.number_part(params);
    let coupling = space.pair_coupling();
    let mut h = SparseMatrix::new(2 * dim);
    for (i, j, v) in number.iter() {
        h.add(i, j, v);
        h.add(dim + i, dim + j, v);
    }
    for (i, j, v) in coupling.iter() {
        h.add(i, j, params.lam * v);
        h.add(dim + i, dim + j, -params.lam * v);
    }
    for i in 0..dim {
        h.add(i, dim + i, params.j);
        h.add(dim + i, i, params.j);
    }
    Ok(FullHamiltonian { space, matrix: h })
}

/// `U = (1/√2) [[1, −P], [P, 1]]` on the truncated spin-boson space.
pub fn fulton_gouterman_unitary(space: FockSpace) -> SparseMatrix {
    let dim = space.dim();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = SparseMatrix::new(2 * dim);
    for (i, p) in space.parity_diagonal().into_iter().enumerate() {
        u.add(i, i, r);
        u.add(dim + i, dim + i, r);
        u.add(i, dim + i, -r * p);
        u.add(dim + i, i, r * p);
    }
    u
}

/// `U† H U` for the Fulton-Gouterman unitary.
pub fn fulton_gouterman_transform(params: &ModelParams, n_max: usize) -> Result<SparseMatrix> {
    let h = build_full_hamiltonian(params, n_max)?;
    let u = fulton_gouterman_unitary(h.space);
    Ok(u.transpose().matmul(&h.matrix).matmul(&u))
}

/// Largest entry of the spin off-diagonal blocks of `U† H U`.
pub fn fulton_gouterman_residual(params: &ModelParams, n_max: usize) -> Result<f64> {
    let n_max = n_max.max(1);
    let dim = FockSpace::new(n_max)?.dim();
    let t = fulton_gouterman_transform(params, n_max)?;
    Ok(t.iter()
        .filter(|&(i, j, _)| (i < dim) != (j < dim))
        .map(|(_, _, v)| v.abs())
        .fold(0.0, f64::max))
}
