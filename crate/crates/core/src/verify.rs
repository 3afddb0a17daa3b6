//! Self-check suite run by `tmrabi verify`.
//!
//! Every check records its tolerance and measured value; failures are
//! collected rather than raised.

use std::fmt;
use std::time::Instant;

use crate::approx::{
    collapse_point, sgrwa_energies, squeeze_element, squeeze_elements_closed, squeeze_elements_oracle, squeeze_frame,
    rwa_energies,
};
use crate::error::{Error, Result};
use crate::linalg::{eig_sym_dense, eig_sym_tridiag, expm_antisymmetric, DenseSym, Matrix, SparseMatrix, TridiagMatrix};
use crate::model::{
    build_full_hamiltonian, build_sector_hamiltonian, sector_parity_diagonal, Branch, FockSpace, ModelParams, SectorKey,
};
use crate::spectra::{
    accuracy_report, exact_full_spectrum, exact_sector_spectrum, lambda_sweep, sector_union_spectrum, LambdaGrid, Method,
    SweepConfig,
};
use crate::special::{jacobi_poly, log_gamma_ratio, JacobiParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(Error::invalid("level", format!("expected `fast` or `full`, got `{s}`"))),
        }
    }
}

/// Deliberate defects for exercising the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Flips the parity eigenvalue of the two-photon states.
    CorruptParitySign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub measured: f64,
    pub passed: bool,
    pub seconds: f64,
    pub note: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<34} measured={:<11.3e} tol={:<9.1e} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            self.seconds
        )?;
        if let Some(note) = &self.note {
            write!(f, " {note}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Measured value with an optional comment, or an error that fails the check.
type Outcome = Result<(f64, Option<String>)>;

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn run(&mut self, name: &'static str, tolerance: f64, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f));
        let seconds = start.elapsed().as_secs_f64();
        let (measured, passed, note) = match outcome {
            Ok(Ok((m, note))) => (m, m <= tolerance, note),
            Ok(Err(e)) => (f64::NAN, false, Some(format!("error: {e}"))),
            Err(_) => (f64::NAN, false, Some("panicked".to_string())),
        };
        self.checks.push(Check { name, tolerance, measured, passed, seconds, note });
    }
}

struct Sizes {
    parity_cutoff: usize,
    tridiag_dim: usize,
    oracle_alphas: &'static [f64],
    oracle_deltas: &'static [u64],
    oracle_window: usize,
    oracle_cutoff: usize,
    union_n_max: usize,
    union_lambdas: &'static [f64],
    frame_cutoff: usize,
    frame_lambdas: &'static [f64],
    sweep_cutoff: usize,
    sweep_count: usize,
}

const FAST: Sizes = Sizes {
    parity_cutoff: 12,
    tridiag_dim: 60,
    oracle_alphas: &[0.1, 0.3467],
    oracle_deltas: &[0, 1],
    oracle_window: 10,
    oracle_cutoff: 80,
    union_n_max: 10,
    union_lambdas: &[0.3],
    frame_cutoff: 60,
    frame_lambdas: &[0.2, 0.5],
    sweep_cutoff: 40,
    sweep_count: 8,
};

const FULL: Sizes = Sizes {
    parity_cutoff: 100,
    tridiag_dim: 400,
    oracle_alphas: &[0.1, 0.3467, 0.8],
    oracle_deltas: &[0, 1, 2, 4],
    oracle_window: 20,
    oracle_cutoff: 240,
    union_n_max: 30,
    union_lambdas: &[0.0, 0.3, 0.6],
    frame_cutoff: 150,
    frame_lambdas: &[0.0, 0.2, 0.4, 0.6, 0.8],
    sweep_cutoff: 100,
    sweep_count: 31,
};

fn parity_diagonal(space: FockSpace, fault: Fault) -> Vec<f64> {
    let mut p = space.parity_diagonal();
    if fault == Fault::CorruptParitySign {
        for (k, (na, nb)) in space.states().enumerate() {
            if na + nb == 2 {
                p[k] = -p[k];
            }
        }
    }
    p
}

fn sector_parity(delta: i64, cutoff: usize, fault: Fault) -> Vec<f64> {
    let mut p = sector_parity_diagonal(delta, cutoff);
    if fault == Fault::CorruptParitySign && delta == 0 && cutoff > 1 {
        p[1] = -p[1];
    }
    p
}

fn fg_residual(params: &ModelParams, n_max: usize, parity: &[f64]) -> Result<f64> {
    let h = build_full_hamiltonian(params, n_max)?;
    let dim = h.space().dim();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = SparseMatrix::new(2 * dim);
    for (i, &p) in parity.iter().enumerate() {
        u.add(i, i, r);
        u.add(dim + i, dim + i, r);
        u.add(i, dim + i, -r * p);
        u.add(dim + i, i, r * p);
    }
    let t = u.transpose().matmul(h.matrix()).matmul(&u);
    Ok(t.iter()
        .filter(|&(i, j, _)| (i < dim) != (j < dim))
        .map(|(_, _, v)| v.abs())
        .fold(0.0, f64::max))
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs the suite at `level`, optionally with an injected fault.
pub fn run(level: Level, fault: Fault) -> Report {
    let sz = match level {
        Level::Fast => FAST,
        Level::Full => FULL,
    };
    let mut r = Runner { checks: Vec::new() };
    let resonance = |lam: f64| ModelParams::resonant(1.0, 1.0, lam);

    // linalg
    r.run("tridiag-laplacian-closed-form", 1e-12, || {
        let n = sz.tridiag_dim;
        let t = TridiagMatrix::new(vec![2.0; n], vec![-1.0; n - 1])?;
        let got = eig_sym_tridiag(&t)?;
        let h = std::f64::consts::PI / (n + 1) as f64;
        let expect: Vec<f64> = (1..=n).map(|k| 2.0 - 2.0 * (k as f64 * h).cos()).collect();
        Ok((max_dev(&got, &expect), None))
    });
    r.run("dense-matches-tridiag", 1e-10, || {
        let p = ModelParams::new(1.0, 1.3, 0.7, 0.4)?;
        let t = build_sector_hamiltonian(&p, SectorKey::new(Branch::Plus, 1), 40)?;
        let d = DenseSym::from_fn(40, |i, j| t.get(i, j));
        Ok((max_dev(&eig_sym_dense(&d, false)?.values, &eig_sym_tridiag(&t)?), None))
    });
    r.run("expm-orthogonal", 1e-12, || {
        let n = 30;
        let g = Matrix::from_fn(n, |i, j| {
            let x = ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.5;
            let y = ((j * 7 + i * 3) % 11) as f64 / 11.0 - 0.5;
            x - y
        });
        let q = expm_antisymmetric(&g)?;
        Ok((q.transpose().matmul(&q).max_abs_diff(&Matrix::identity(n)), None))
    });

    // special functions
    r.run("jacobi-endpoint", 1e-10, || {
        let mut worst: f64 = 0.0;
        for n in 0..40 {
            let v = jacobi_poly(&JacobiParams::new(n, 3.0, 0.0, -1.0)?)?;
            worst = worst.max((v - if n % 2 == 0 { 1.0 } else { -1.0 }).abs());
        }
        Ok((worst, None))
    });
    r.run("log-gamma-ratio-factorials", 1e-13, || {
        // two_kappa = 1: ½ ln(n! m! / (m! n!)) = 0; two_kappa = 2: ½ ln((m+1)/(n+1)).
        let mut worst: f64 = 0.0;
        for n in 0..25u64 {
            for m in 0..25u64 {
                worst = worst.max(log_gamma_ratio(n, m, 1.0)?.abs());
                let expect = 0.5 * ((m + 1) as f64 / (n + 1) as f64).ln();
                worst = worst.max((log_gamma_ratio(n, m, 2.0)? - expect).abs());
            }
        }
        Ok((worst, None))
    });

    // model: parity algebra
    let space = FockSpace::new(sz.parity_cutoff).expect("positive cutoff");
    let parity = parity_diagonal(space, fault);
    let p = SparseMatrix::diagonal(&parity);
    r.run("parity-squared-identity", 0.0, || {
        let pp = p.matmul(&p).add_scaled(&SparseMatrix::identity(space.dim()), -1.0);
        Ok((pp.max_abs(), None))
    });
    r.run("parity-commutes-number-part", 0.0, || {
        let h0 = space.number_part(&ModelParams::new(1.0, 1.7, 1.0, 0.0)?);
        Ok((p.matmul(&h0).add_scaled(&h0.matmul(&p), -1.0).max_abs(), None))
    });
    r.run("parity-anticommutes-coupling", 0.0, || {
        let v = space.pair_coupling();
        Ok((p.matmul(&v).add_scaled(&v.matmul(&p), 1.0).max_abs(), None))
    });
    r.run("sector-parity-anticommutes", 0.0, || {
        let mut worst: f64 = 0.0;
        for delta in -4i64..=4 {
            let cutoff = sz.parity_cutoff;
            let t = build_sector_hamiltonian(&resonance(0.7)?, SectorKey::new(Branch::Plus, delta), cutoff)?;
            let pd = sector_parity(delta, cutoff, fault);
            for (n, &e) in t.off().iter().enumerate() {
                worst = worst.max((pd[n] * e + e * pd[n + 1]).abs());
            }
        }
        Ok((worst, None))
    });
    r.run("fulton-gouterman-residual", 1e-12, || {
        let n_max = sz.parity_cutoff.min(40);
        let fg_space = FockSpace::new(n_max)?;
        let params = ModelParams::new(1.0, 1.4, 0.6, 0.5)?;
        Ok((fg_residual(&params, n_max, &parity_diagonal(fg_space, fault))?, None))
    });

    // approximants
    r.run("squeeze-closed-vs-oracle", 1e-8, || {
        let mut worst: f64 = 0.0;
        for &alpha in sz.oracle_alphas {
            for &d in sz.oracle_deltas {
                let lam = (2.0 * alpha).tanh();
                let frame = squeeze_frame(&ModelParams::resonant(1.0, 1.0, lam)?, d as i64)?;
                let closed = squeeze_elements_closed(&frame, d as i64, sz.oracle_window)?;
                let oracle = squeeze_elements_oracle(&frame, d as i64, sz.oracle_window, sz.oracle_cutoff)?;
                worst = worst.max(closed.entries.max_abs_diff(&oracle.entries));
            }
        }
        Ok((worst, Some(format!("oracle cutoff {}", sz.oracle_cutoff))))
    });
    r.run("squeeze-frame-identity", 1e-14, || {
        let mut worst: f64 = 0.0;
        for &lam in &[0.1, 0.45, 0.75, 0.995] {
            for d in 0..5i64 {
                let f = squeeze_frame(&resonance(lam)?, d)?;
                let lhs = (1.0 - f.eta * f.eta).powf(f.kappa);
                let rhs = f.alpha.cosh().recip().powi(d as i32 + 1);
                worst = worst.max((lhs - rhs).abs());
            }
        }
        Ok((worst, None))
    });
    r.run("squeeze-inverse-is-transpose", 1e-10, || {
        let mut worst: f64 = 0.0;
        for d in 0..4u64 {
            for m in 0..20u64 {
                for n in 0..20u64 {
                    let fwd = squeeze_element(0.9, d, m, n);
                    let back = squeeze_element(-0.9, d, n, m);
                    worst = worst.max((fwd - back).abs());
                }
            }
        }
        Ok((worst, None))
    });
    r.run("sgrwa-full-block-exactness", 1e-6, || {
        let mut worst: f64 = 0.0;
        for &lam in sz.frame_lambdas {
            let params = resonance(lam)?;
            for delta in 0..3i64 {
                for branch in Branch::BOTH {
                    let sector = SectorKey::new(branch, delta);
                    let cutoff = sz.frame_cutoff;
                    let exact = exact_sector_spectrum(&params, sector, cutoff, 10)?;
                    let approx = sgrwa_energies(&params, sector, cutoff, cutoff)?;
                    worst = worst.max(max_dev(&exact, &approx[..10]));
                }
            }
        }
        Ok((worst, Some(format!("cutoff {}", sz.frame_cutoff))))
    });
    r.run("collapse-at-omega-plus", 0.0, || {
        let params = ModelParams::new(0.8, 1.2, 1.0, 0.5)?;
        let lc = collapse_point(&params);
        let at = squeeze_frame(&params.with_lambda(lc)?, 0);
        let below = squeeze_frame(&params.with_lambda(lc * (1.0 - 1e-9))?, 0)?;
        let ok = matches!(at, Err(Error::CollapseRegime { lambda_c, .. }) if lambda_c == 1.0);
        Ok((if ok && below.omega_tilde > 0.0 { 0.0 } else { 1.0 }, None))
    });
    r.run("omega-tilde-monotone", 0.0, || {
        let mut prev = f64::INFINITY;
        let mut violations = 0usize;
        for k in 0..200 {
            let lam = k as f64 / 200.0;
            let w = squeeze_frame(&resonance(lam)?, 0)?.omega_tilde;
            if w >= prev {
                violations += 1;
            }
            prev = w;
        }
        let last = squeeze_frame(&resonance(1.0 - 1e-10)?, 0)?.omega_tilde;
        Ok((violations as f64, Some(format!("omega_tilde(lambda_c - 1e-10) = {last:.2e}"))))
    });

    // spectra
    r.run("sector-union-equivalence", 1e-8, || {
        let mut worst: f64 = 0.0;
        for &lam in sz.union_lambdas {
            let params = resonance(lam)?;
            let full = exact_full_spectrum(&params, sz.union_n_max, 10)?;
            let union = sector_union_spectrum(&params, sz.union_n_max)?;
            worst = worst.max(max_dev(&full, &union[..10]));
        }
        Ok((worst, Some(format!("n_max {}", sz.union_n_max))))
    });
    let sweep = SweepConfig {
        params: resonance(0.0).expect("valid"),
        grid: LambdaGrid { start: 0.0, stop: 0.99, count: sz.sweep_count },
        sectors: (0..3).flat_map(|d| Branch::BOTH.map(|b| SectorKey::new(b, d))).collect(),
        methods: vec![Method::ExactSector, Method::Rwa, Method::Sgrwa],
        cutoff: sz.sweep_cutoff,
        block_size: 2,
        report_levels: 6,
        full_n_max: 4,
    };
    r.run("ground-state-alternating-branch", 0.0, || {
        let table = lambda_sweep(&sweep)?;
        let mut violations = 0usize;
        for lam in sweep.grid.points() {
            for d in 0..3i64 {
                let ground = |b: Branch| {
                    table
                        .records
                        .iter()
                        .find(|r| r.method == Method::ExactSector && r.lambda == lam && r.level == 0 && r.sector == Some(SectorKey::new(b, d)))
                        .map(|r| r.energy)
                };
                let lower = SectorKey::new(Branch::Minus, d).alternating_branch();
                let (Some(lo), Some(hi)) = (ground(lower), ground(lower.flip())) else {
                    violations += 1;
                    continue;
                };
                if lo > hi {
                    violations += 1;
                }
            }
        }
        Ok((violations as f64, None))
    });
    r.run("sweep-deterministic-csv", 0.0, || {
        let a = lambda_sweep(&sweep)?.to_csv();
        let b = lambda_sweep(&sweep)?.to_csv();
        Ok((if a == b { 0.0 } else { 1.0 }, None))
    });
    r.run("sgrwa-beats-rwa-excited", 0.0, || {
        let cfg = SweepConfig {
            grid: LambdaGrid { start: 0.0, stop: 0.3, count: 16 },
            sectors: vec![SectorKey::new(Branch::Plus, 0), SectorKey::new(Branch::Minus, 0)],
            ..sweep.clone()
        };
        let report = accuracy_report(&lambda_sweep(&cfg)?, Method::ExactSector)?;
        let mut excess: f64 = 0.0;
        for sector in &cfg.sectors {
            let sg = report.mean_over_levels(Method::Sgrwa, Some(*sector), 1..5).ok_or(Error::MissingReference("sgrwa".into()))?;
            let rwa = report.mean_over_levels(Method::Rwa, Some(*sector), 1..5).ok_or(Error::MissingReference("rwa".into()))?;
            excess = excess.max(sg - rwa);
        }
        Ok((excess.max(0.0), None))
    });
    r.run("rwa-no-collapse", 0.0, || {
        // At 0.99 lambda_c the RWA spectrum stays spread: its lowest gap does
        // not shrink with the squeezed frequency.
        let params = resonance(0.99)?;
        let sector = SectorKey::new(Branch::Minus, 0);
        let e = rwa_energies(&params, sector, sz.sweep_cutoff)?;
        let omega_tilde = squeeze_frame(&params, 0)?.omega_tilde;
        let min_gap = e.windows(2).take(5).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        Ok((if min_gap > omega_tilde { 0.0 } else { 1.0 }, Some(format!("min gap {min_gap:.3}"))))
    });

    Report { level, checks: r.checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_parses() {
        assert_eq!("fast".parse::<Level>().unwrap(), Level::Fast);
        assert!("medium".parse::<Level>().is_err());
    }
}
