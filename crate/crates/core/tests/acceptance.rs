//! Acceptance criteria, one PASS/FAIL line each. Informational lines start
//! with `INFO`. Exits nonzero when any criterion fails.

use std::time::Instant;

use tmrabi::approx::{
    sgrwa_energies, squeeze_element, squeeze_elements_closed, squeeze_elements_oracle, squeeze_frame,
};
use tmrabi::linalg::SparseMatrix;
use tmrabi::model::{build_sector_hamiltonian, fulton_gouterman_residual, sector_parity_diagonal, FockSpace};
use tmrabi::spectra::{
    accuracy_report, exact_full_spectrum, exact_sector_spectrum, lambda_sweep, sector_union_spectrum, LambdaGrid,
    Method, SweepConfig,
};
use tmrabi::special::{jacobi_poly, JacobiParams};
use tmrabi::verify::{self, Fault, Level};
use tmrabi::{Branch, Error, ModelParams, SectorKey};

struct Outcome {
    passed: bool,
    summary: String,
}

fn report(id: u32, title: &str, seconds: f64, outcome: Outcome) -> bool {
    println!(
        "{} C{id} {title}: {} [{seconds:.2}s]",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.summary
    );
    outcome.passed
}

fn info(msg: impl AsRef<str>) {
    println!("INFO {}", msg.as_ref());
}

fn resonance(lam: f64) -> ModelParams {
    ModelParams::resonant(1.0, 1.0, lam).unwrap()
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn sectors(deltas: std::ops::RangeInclusive<i64>) -> Vec<SectorKey> {
    deltas.flat_map(|d| Branch::BOTH.map(|b| SectorKey::new(b, d))).collect()
}

fn parity_algebra() -> Outcome {
    let mut algebra: f64 = 0.0;
    for n_max in [10, 50, 100] {
        let space = FockSpace::new(n_max).unwrap();
        let p = space.parity();
        let h0 = space.number_part(&ModelParams::new(1.0, 1.6, 1.0, 0.0).unwrap());
        let v = space.pair_coupling();
        algebra = algebra
            .max(p.matmul(&p).add_scaled(&SparseMatrix::identity(space.dim()), -1.0).max_abs())
            .max(p.matmul(&h0).add_scaled(&h0.matmul(&p), -1.0).max_abs())
            .max(p.matmul(&v).add_scaled(&v.matmul(&p), 1.0).max_abs());
    }
    for delta in -4..=4 {
        let cutoff = 100;
        let pd = sector_parity_diagonal(delta, cutoff);
        let t = build_sector_hamiltonian(&resonance(0.7), SectorKey::new(Branch::Plus, delta), cutoff).unwrap();
        for (n, &e) in t.off().iter().enumerate() {
            algebra = algebra.max((pd[n] * e + e * pd[n + 1]).abs()).max((pd[n] * pd[n] - 1.0).abs());
        }
    }
    let mut fg: f64 = 0.0;
    for n_max in [10, 100] {
        let p = ModelParams::new(1.0, 1.3, 0.8, 0.6).unwrap();
        fg = fg.max(fulton_gouterman_residual(&p, n_max).unwrap());
    }
    Outcome {
        passed: algebra == 0.0 && fg <= 1e-12,
        summary: format!("max algebra defect={algebra:e} (tol 0), FG residual={fg:.3e} (tol 1e-12)"),
    }
}

fn oracle_deviation(cutoff: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for alpha in [0.1, 0.3467, 0.8] {
        for d in [0i64, 1, 2, 4] {
            let frame = squeeze_frame(&resonance((2.0f64 * alpha).tanh()), d).unwrap();
            let closed = squeeze_elements_closed(&frame, d, 20).unwrap();
            let oracle = squeeze_elements_oracle(&frame, d, 20, cutoff).unwrap();
            worst = worst.max(closed.entries.max_abs_diff(&oracle.entries));
        }
    }
    worst
}

/// Deviation from the oracle of the two rejected readings: elements in
/// `tanh α` instead of `tanh 2α`, and diagonal elements with `P_{2n}`.
fn rejected_conventions() -> (f64, f64) {
    let (mut half_angle, mut doubled_index): (f64, f64) = (0.0, 0.0);
    for alpha in [0.1, 0.3467] {
        for d in [0u64, 1, 2] {
            let frame = squeeze_frame(&resonance((2.0f64 * alpha).tanh()), d as i64).unwrap();
            let oracle = squeeze_elements_oracle(&frame, d as i64, 10, 80).unwrap();
            let t = frame.element_ratio();
            for m in 0..10 {
                for n in 0..10 {
                    let alt = squeeze_element(frame.alpha, d, m as u64, n as u64);
                    half_angle = half_angle.max((alt - oracle.get(m, n)).abs());
                }
                let p2n = jacobi_poly(&JacobiParams::new(2 * m, d as f64, 0.0, 2.0 * t * t - 1.0).unwrap()).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let alt = sign * (1.0 - t * t).powf(frame.kappa) * p2n;
                doubled_index = doubled_index.max((alt - oracle.get(m, m)).abs());
            }
        }
    }
    (half_angle, doubled_index)
}

fn squeeze_oracle() -> Outcome {
    let worst = oracle_deviation(120);
    let (half_angle, doubled_index) = rejected_conventions();
    let convention_pinned = half_angle > 1e-3 && doubled_index > 1e-3;
    Outcome {
        passed: worst <= 1e-8 && convention_pinned,
        summary: format!(
            "max |closed - oracle| = {worst:.3e} (tol 1e-8, oracle cutoff 120); \
             rejected conventions deviate by {half_angle:.2e} (tanh a) and {doubled_index:.2e} (P_2n)"
        ),
    }
}

fn symmetry_decomposition() -> Outcome {
    let mut worst: f64 = 0.0;
    for lam in [0.0, 0.3, 0.6] {
        let p = resonance(lam);
        let full = exact_full_spectrum(&p, 30, 10).unwrap();
        let union = sector_union_spectrum(&p, 30).unwrap();
        worst = worst.max(max_dev(&full, &union[..10]));
    }
    Outcome { passed: worst <= 1e-8, summary: format!("max deviation {worst:.3e} (tol 1e-8, n_max 30)") }
}

fn frame_exactness_at(cutoff: usize) -> (f64, f64) {
    let mut worst: f64 = 0.0;
    let mut worst_lam = 0.0;
    for lam in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let p = resonance(lam);
        for s in sectors(0..=2) {
            let exact = exact_sector_spectrum(&p, s, cutoff, 10).unwrap();
            let approx = sgrwa_energies(&p, s, cutoff, cutoff).unwrap();
            let dev = max_dev(&exact, &approx);
            if dev > worst {
                worst = dev;
                worst_lam = lam;
            }
        }
    }
    (worst, worst_lam)
}

fn frame_exactness() -> Outcome {
    let (worst, lam) = frame_exactness_at(100);
    Outcome {
        passed: worst <= 1e-6,
        summary: format!("max deviation {worst:.3e} at lambda={lam} (tol 1e-6, cutoff 100)"),
    }
}

fn spectral_collapse() -> Outcome {
    let p = ModelParams::new(0.7, 1.5, 1.0, 0.0).unwrap();
    let wp = p.omega_plus();
    let at = squeeze_frame(&p.with_lambda(wp).unwrap(), 0);
    let errors_at_collapse = matches!(at, Err(Error::CollapseRegime { lambda_c, .. }) if lambda_c == wp);
    let just_below = squeeze_frame(&p.with_lambda(wp * (1.0 - 1e-12)).unwrap(), 0).is_ok();

    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for k in 0..1000 {
        let w = squeeze_frame(&p.with_lambda(wp * k as f64 / 1000.0).unwrap(), 0).unwrap().omega_tilde;
        monotone &= w < prev;
        prev = w;
    }
    let tail = squeeze_frame(&p.with_lambda(wp * (1.0 - 1e-10)).unwrap(), 0).unwrap().omega_tilde;
    let vanishes = monotone && tail < 1e-4 * wp;

    let rp = resonance(0.99);
    let mut max_spacing: f64 = 0.0;
    for s in sectors(0..=2) {
        let e = exact_sector_spectrum(&rp, s, 100, 6).unwrap();
        for w in e.windows(2) {
            max_spacing = max_spacing.max(w[1] - w[0]);
        }
    }
    let spacing_ok = max_spacing < 0.15;
    Outcome {
        passed: errors_at_collapse && just_below && vanishes && spacing_ok,
        summary: format!(
            "error at lambda_c={errors_at_collapse}, omega_tilde->0 monotone={vanishes} \
             (omega_tilde(lambda_c-1e-10)={tail:.2e}); max spacing of lowest 6 at 0.99 lambda_c = {max_spacing:.4} \
             (tol 0.15)"
        ),
    }
}

fn figure_one() -> Outcome {
    let sector_list = vec![SectorKey::new(Branch::Plus, 0), SectorKey::new(Branch::Minus, 0)];
    let weak = SweepConfig {
        params: resonance(0.0),
        grid: LambdaGrid { start: 0.0, stop: 0.3, count: 31 },
        sectors: sector_list.clone(),
        methods: vec![Method::ExactSector, Method::Rwa, Method::Sgrwa],
        cutoff: 100,
        block_size: 2,
        report_levels: 5,
        full_n_max: 4,
    };
    let rep = accuracy_report(&lambda_sweep(&weak).unwrap(), Method::ExactSector).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    let baselines = [(Branch::Plus, 4.261913e-2, 2.243552e-2), (Branch::Minus, 3.590649e-1, 2.362728e-1)];
    for (branch, rwa_base, sg_base) in baselines {
        let s = Some(SectorKey::new(branch, 0));
        let rwa = rep.mean_over_levels(Method::Rwa, s, 1..5).unwrap();
        let sg = rep.mean_over_levels(Method::Sgrwa, s, 1..5).unwrap();
        ok &= sg <= rwa;
        ok &= (rwa - rwa_base).abs() < 1e-6 * rwa_base && (sg - sg_base).abs() < 1e-6 * sg_base;
        parts.push(format!("branch {branch}: sgrwa {sg:.4e} <= rwa {rwa:.4e}"));
    }
    for g in &rep.ground_level {
        info(format!(
            "C6 ground level {}: rwa {:.3e}, sgrwa {:.3e}, rwa more accurate = {}",
            g.sector, g.rwa_mean_abs, g.sgrwa_mean_abs, g.rwa_more_accurate
        ));
    }

    // Over [0, 0.9] the S-GRWA follows the exact levels 1-4 more closely than
    // the RWA, and near lambda_c only the RWA keeps its spread.
    let wide = SweepConfig { grid: LambdaGrid { start: 0.0, stop: 0.9, count: 91 }, ..weak.clone() };
    let rep = accuracy_report(&lambda_sweep(&wide).unwrap(), Method::ExactSector).unwrap();
    for s in &sector_list {
        let rwa = rep.mean_over_levels(Method::Rwa, Some(*s), 1..5).unwrap();
        let sg = rep.mean_over_levels(Method::Sgrwa, Some(*s), 1..5).unwrap();
        ok &= sg < rwa;
        info(format!("C6 lambda in [0,0.9], levels 1-4, {s}: mean error sgrwa {sg:.3e}, rwa {rwa:.3e}"));
    }
    let near = SweepConfig { grid: LambdaGrid { start: 0.99, stop: 0.99, count: 1 }, ..weak };
    let table = lambda_sweep(&near).unwrap();
    let spread = |m: Method| {
        let e: Vec<f64> = table
            .records
            .iter()
            .filter(|r| r.method == m && r.sector == Some(SectorKey::new(Branch::Minus, 0)))
            .map(|r| r.energy)
            .collect();
        e[e.len() - 1] - e[0]
    };
    let (exact, sg, rwa) = (spread(Method::ExactSector), spread(Method::Sgrwa), spread(Method::Rwa));
    ok &= rwa > 2.0 * exact && sg < 0.75 * rwa;
    parts.push(format!("spread of lowest 5 at 0.99: exact {exact:.3}, sgrwa {sg:.3}, rwa {rwa:.3}"));
    Outcome { passed: ok, summary: parts.join("; ") }
}

fn ground_branch() -> Outcome {
    let grid = LambdaGrid { start: 0.0, stop: 0.99, count: 34 };
    let (mut checked, mut violations, mut raw_violations, mut raw_elsewhere) = (0, 0, 0, 0);
    for j in [1.0, 0.5] {
        for lam in grid.points() {
            let p = resonance(lam).with_j(j).unwrap();
            for delta in 0..=4 {
                let ground = |b: Branch| exact_sector_spectrum(&p, SectorKey::new(b, delta), 100, 1).unwrap()[0];
                let (minus, plus) = (ground(Branch::Minus), ground(Branch::Plus));
                let lower = SectorKey::new(Branch::Minus, delta).alternating_branch();
                let (lo, hi) = if lower == Branch::Minus { (minus, plus) } else { (plus, minus) };
                checked += 1;
                if lo > hi {
                    violations += 1;
                }
                if minus > plus {
                    raw_violations += 1;
                    if SectorKey::new(Branch::Minus, delta).parity_phase() > 0.0 {
                        raw_elsewhere += 1;
                    }
                }
            }
        }
    }
    info(format!(
        "C7 with the raw branch label, min H- > min H+ in {raw_violations}/{checked} cases, \
         {raw_elsewhere} of them in sectors with c_delta = +1"
    ));
    Outcome {
        passed: violations == 0,
        summary: format!("{violations}/{checked} violations, ground branch labelled by the alternating diagonal -J(-1)^n"),
    }
}

fn determinism() -> Outcome {
    let cfg = SweepConfig {
        params: resonance(0.0),
        grid: LambdaGrid { start: 0.0, stop: 0.99, count: 50 },
        sectors: sectors(0..=2),
        methods: Method::ALL.to_vec(),
        cutoff: 100,
        block_size: 2,
        report_levels: 6,
        full_n_max: 8,
    };
    let a = lambda_sweep(&cfg).unwrap().to_csv();
    let b = lambda_sweep(&cfg).unwrap().to_csv();
    let start = Instant::now();
    let full = verify::run(Level::Full, Fault::None);
    let seconds = start.elapsed().as_secs_f64();
    for c in full.failures() {
        info(format!("C8 verify full failure: {c}"));
    }
    Outcome {
        passed: a == b && full.passed() && seconds < 180.0,
        summary: format!(
            "CSV identical={} ({} bytes); full verification passed={} in {seconds:.1}s (limit 180s)",
            a == b,
            a.len(),
            full.passed()
        ),
    }
}

fn main() {
    let mut all = true;
    let criteria: [(u32, &str, fn() -> Outcome, Option<f64>); 8] = [
        (1, "parity algebra", parity_algebra, Some(1.0)),
        (2, "squeeze-element oracle equivalence", squeeze_oracle, Some(10.0)),
        (3, "symmetry-decomposition equivalence", symmetry_decomposition, Some(30.0)),
        (4, "squeezed-frame exactness", frame_exactness, None),
        (5, "spectral collapse", spectral_collapse, None),
        (6, "figure 1 reproduction", figure_one, None),
        (7, "ground-state branch", ground_branch, None),
        (8, "determinism", determinism, None),
    ];
    for (id, title, f, limit) in criteria {
        let start = Instant::now();
        let mut outcome = f();
        let seconds = start.elapsed().as_secs_f64();
        if let Some(limit) = limit {
            if seconds >= limit {
                outcome.passed = false;
                outcome.summary.push_str(&format!("; runtime over {limit}s"));
            }
        }
        all &= report(id, title, seconds, outcome);
        match id {
            2 => info(format!("C2 same comparison at oracle cutoff 200: {:.3e}", oracle_deviation(200))),
            4 => {
                let (worst, lam) = frame_exactness_at(150);
                info(format!("C4 same comparison at cutoff 150: {worst:.3e} (worst at lambda={lam})"));
            }
            _ => {}
        }
    }
    if !all {
        std::process::exit(1);
    }
}
