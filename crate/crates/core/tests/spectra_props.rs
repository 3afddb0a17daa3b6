use tmrabi::spectra::{
    accuracy_report, exact_full_spectrum, exact_sector_spectrum, lambda_sweep, sector_union_spectrum, LambdaGrid,
    Method, SweepConfig,
};
use tmrabi::{Branch, ModelParams, SectorKey};

fn resonance(lam: f64) -> ModelParams {
    ModelParams::resonant(1.0, 1.0, lam).unwrap()
}

fn config(params: ModelParams, grid: LambdaGrid, sectors: Vec<SectorKey>, methods: Vec<Method>) -> SweepConfig {
    SweepConfig { params, grid, sectors, methods, cutoff: 100, block_size: 2, report_levels: 5, full_n_max: 10 }
}

fn all_sectors(deltas: std::ops::RangeInclusive<i64>) -> Vec<SectorKey> {
    deltas.flat_map(|d| Branch::BOTH.map(|b| SectorKey::new(b, d))).collect()
}

#[test]
fn sector_spectrum_stable_under_cutoff_doubling() {
    let p = resonance(0.5);
    for branch in Branch::BOTH {
        let s = SectorKey::new(branch, 0);
        let a = exact_sector_spectrum(&p, s, 100, 10).unwrap();
        let b = exact_sector_spectrum(&p, s, 200, 10).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-8);
        }
    }
}

#[test]
fn full_and_sector_union_agree_detuned() {
    let p = ModelParams::new(0.9, 1.3, 0.6, 0.4).unwrap();
    let full = exact_full_spectrum(&p, 16, 10).unwrap();
    let union = sector_union_spectrum(&p, 16).unwrap();
    for (a, b) in full.iter().zip(&union) {
        assert!((a - b).abs() <= 1e-8);
    }
}

#[test]
fn ground_energy_nonincreasing_in_coupling() {
    let mut prev = f64::INFINITY;
    for k in 0..40 {
        let lam = 0.98 * k as f64 / 39.0;
        let e0 = exact_full_spectrum(&resonance(lam), 14, 1).unwrap()[0];
        assert!(e0 <= prev + 1e-12, "lam={lam}: {e0} > {prev}");
        prev = e0;
    }
}

#[test]
fn sweep_is_byte_deterministic() {
    let cfg = config(
        resonance(0.0),
        LambdaGrid { start: 0.0, stop: 0.99, count: 23 },
        all_sectors(0..=2),
        Method::ALL.to_vec(),
    );
    assert_eq!(lambda_sweep(&cfg).unwrap().to_csv(), lambda_sweep(&cfg).unwrap().to_csv());
}

#[test]
fn figure_two_layout_has_six_panels() {
    let grid = LambdaGrid { start: 0.0, stop: 0.99, count: 12 };
    let methods = vec![Method::ExactSector, Method::Sgrwa];
    let mut panels = std::collections::BTreeSet::new();
    for j in [1.0, 0.5] {
        let table = lambda_sweep(&config(resonance(0.0).with_j(j).unwrap(), grid, all_sectors(0..=2), methods.clone()))
            .unwrap();
        assert!(table.warnings.is_empty());
        for r in &table.records {
            panels.insert((j.to_bits(), r.sector.unwrap().delta));
        }
        for s in all_sectors(0..=2) {
            for m in &methods {
                assert_eq!(table.curves(*m, Some(s)).len(), 5);
            }
        }
    }
    assert_eq!(panels.len(), 6);
}

#[test]
fn figure_one_collapse_shape() {
    // The exact and S-GRWA level spacing near λ_c shrink well below the
    // λ = 0 spacing; RWA spacings do not.
    let cfg = config(
        resonance(0.0),
        LambdaGrid { start: 0.0, stop: 0.99, count: 100 },
        vec![SectorKey::new(Branch::Plus, 0), SectorKey::new(Branch::Minus, 0)],
        vec![Method::ExactSector, Method::Rwa, Method::Sgrwa],
    );
    let table = lambda_sweep(&cfg).unwrap();
    let spread = |m: Method| {
        let top: Vec<f64> = table
            .records
            .iter()
            .filter(|r| r.method == m && r.lambda == 0.99 && r.sector == Some(SectorKey::new(Branch::Minus, 0)))
            .map(|r| r.energy)
            .collect();
        top[top.len() - 1] - top[0]
    };
    // Lowest five levels span 4ω at λ = 0.
    assert!(spread(Method::ExactSector) < 2.5);
    assert!(spread(Method::Sgrwa) < 2.5);
    assert!(spread(Method::Rwa) > 4.0);
}

#[test]
fn accuracy_regression_baselines() {
    let sectors = vec![SectorKey::new(Branch::Plus, 0), SectorKey::new(Branch::Minus, 0)];
    let cfg = SweepConfig {
        params: resonance(0.0),
        grid: LambdaGrid { start: 0.0, stop: 0.3, count: 31 },
        sectors: sectors.clone(),
        methods: vec![Method::ExactSector, Method::Rwa, Method::Sgrwa],
        cutoff: 100,
        block_size: 2,
        report_levels: 5,
        full_n_max: 4,
    };
    let report = accuracy_report(&lambda_sweep(&cfg).unwrap(), Method::ExactSector).unwrap();
    let baselines = [
        (Method::Rwa, Branch::Plus, 4.261913e-2),
        (Method::Sgrwa, Branch::Plus, 2.243552e-2),
        (Method::Rwa, Branch::Minus, 3.590649e-1),
        (Method::Sgrwa, Branch::Minus, 2.362728e-1),
    ];
    for (m, b, expect) in baselines {
        let got = report.mean_over_levels(m, Some(SectorKey::new(b, 0)), 1..5).unwrap();
        assert!((got - expect).abs() < 1e-6 * expect, "{m} {b}: {got:.6e}");
    }
    for s in sectors {
        let sg = report.mean_over_levels(Method::Sgrwa, Some(s), 1..5).unwrap();
        let rwa = report.mean_over_levels(Method::Rwa, Some(s), 1..5).unwrap();
        assert!(sg <= rwa);
    }
    // Ground level: reported, with the RWA ahead in the lower branch.
    let minus = report.ground_level.iter().find(|g| g.sector.branch == Branch::Minus).unwrap();
    assert!(minus.rwa_more_accurate);
}

#[test]
fn ground_state_lies_in_alternating_branch() {
    let grid = LambdaGrid { start: 0.0, stop: 0.99, count: 34 };
    for j in [1.0, 0.5, 0.1] {
        for lam in grid.points() {
            let p = resonance(lam).with_j(j).unwrap();
            for delta in 0..5 {
                let lower = SectorKey::new(Branch::Minus, delta).alternating_branch();
                let lo = exact_sector_spectrum(&p, SectorKey::new(lower, delta), 100, 1).unwrap()[0];
                let hi = exact_sector_spectrum(&p, SectorKey::new(lower.flip(), delta), 100, 1).unwrap()[0];
                assert!(lo <= hi, "J={j} lam={lam} delta={delta}");
            }
        }
    }
}
