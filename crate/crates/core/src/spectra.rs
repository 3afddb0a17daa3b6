//! Exact reference spectra, λ sweeps and method comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::approx::{rwa_energies, sgrwa_energies};
use crate::error::{Error, Result};
use crate::linalg::{eig_sym_dense, eig_sym_tridiag};
use crate::model::{build_full_hamiltonian, build_sector_hamiltonian, Branch, ModelParams, SectorKey};

/// Largest full spin-boson dimension handed to the dense solver.
pub const MAX_FULL_DIM: usize = 6000;

/// Lowest `k` eigenvalues of `H^s_Δ` truncated to `cutoff` states.
/// Only the lowest third of a truncated spectrum is treated as converged.
pub fn exact_sector_spectrum(params: &ModelParams, sector: SectorKey, cutoff: usize, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > cutoff / 3 {
        return Err(Error::invalid("levels", format!("need 1 <= k <= cutoff/3 = {}, got {k}", cutoff / 3)));
    }
    let h = build_sector_hamiltonian(params, sector, cutoff)?;
    let mut ev = eig_sym_tridiag(&h)?;
    ev.truncate(k);
    Ok(ev)
}

/// Lowest `k` eigenvalues of the full truncated Hamiltonian by dense
/// Householder reduction; no symmetry is used.
pub fn exact_full_spectrum(params: &ModelParams, n_max: usize, k: usize) -> Result<Vec<f64>> {
    let h = build_full_hamiltonian(params, n_max)?;
    let dim = h.dim();
    if dim > MAX_FULL_DIM {
        return Err(Error::invalid("n_max", format!("full dimension {dim} exceeds {MAX_FULL_DIM}")));
    }
    if k == 0 || k > dim {
        return Err(Error::invalid("levels", format!("need 1 <= k <= {dim}, got {k}")));
    }
    let mut ev = eig_sym_dense(&h.matrix().to_dense_sym(), false)?.values;
    ev.truncate(k);
    Ok(ev)
}

/// Every eigenvalue of the sector matrices that tile the full truncated
/// space with per-mode cutoff `n_max`, ascending.
pub fn sector_union_spectrum(params: &ModelParams, n_max: usize) -> Result<Vec<f64>> {
    if n_max == 0 {
        return Err(Error::invalid("n_max", "per-mode cutoff must be at least 1"));
    }
    let mut all = Vec::with_capacity(2 * (n_max + 1) * (n_max + 1));
    for branch in Branch::BOTH {
        for delta in -(n_max as i64)..=n_max as i64 {
            let cutoff = n_max + 1 - delta.unsigned_abs() as usize;
            let h = build_sector_hamiltonian(params, SectorKey::new(branch, delta), cutoff)?;
            all.extend(eig_sym_tridiag(&h)?);
        }
    }
    all.sort_by(|a, b| a.total_cmp(b));
    Ok(all)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    ExactFull,
    ExactSector,
    Rwa,
    Sgrwa,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::ExactFull, Method::ExactSector, Method::Rwa, Method::Sgrwa];

    pub fn tag(self) -> &'static str {
        match self {
            Method::ExactFull => "exact-full",
            Method::ExactSector => "exact-sector",
            Method::Rwa => "rwa",
            Method::Sgrwa => "sgrwa",
        }
    }

    /// Methods that only exist below the collapse point.
    pub fn needs_squeeze_frame(self) -> bool {
        matches!(self, Method::Sgrwa)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::invalid("method", format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord {
    pub method: Method,
    /// S-GRWA block size; zero for every other method.
    pub block_size: usize,
    /// `None` for full-space spectra.
    pub sector: Option<SectorKey>,
    pub lambda: f64,
    pub level: usize,
    pub energy: f64,
}

impl SpectrumRecord {
    fn sort_key(&self) -> (Method, usize, Option<SectorKey>, u64, usize) {
        (self.method, self.block_size, self.sector, ordered_bits(self.lambda), self.level)
    }
}

/// Total-order bit pattern for non-negative floats.
fn ordered_bits(x: f64) -> u64 {
    let bits = x.to_bits();
    if x.is_sign_negative() {
        !bits
    } else {
        bits | (1 << 63)
    }
}

pub const CSV_HEADER: &str = "method,branch,delta,block_size,lambda,level,energy";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumTable {
    pub records: Vec<SpectrumRecord>,
    pub warnings: Vec<String>,
}

impl SpectrumTable {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Canonical order: method, block size, branch, Δ, λ, level.
    pub fn sort_canonical(&mut self) {
        self.records.sort_by_key(SpectrumRecord::sort_key);
    }

    pub fn extend(&mut self, other: SpectrumTable) {
        self.records.extend(other.records);
        self.warnings.extend(other.warnings);
    }

    /// Energies of one `(method, sector)` curve family, keyed by level and
    /// ordered by λ.
    pub fn curves(&self, method: Method, sector: Option<SectorKey>) -> BTreeMap<usize, Vec<(f64, f64)>> {
        let mut out: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
        for r in self.records.iter().filter(|r| r.method == method && r.sector == sector) {
            out.entry(r.level).or_default().push((r.lambda, r.energy));
        }
        for pts in out.values_mut() {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let (branch, delta) = match r.sector {
                Some(s) => (s.branch.symbol().to_string(), s.delta.to_string()),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.method,
                branch,
                delta,
                r.block_size,
                format_float(r.lambda),
                r.level,
                format_float(r.energy)
            ));
        }
        out
    }
}

/// Shortest round-trip decimal of `x` after rounding to 12 significant
/// digits. Negative zero prints as `0`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl LambdaGrid {
    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Base parameters; λ is replaced by each grid point.
    pub params: ModelParams,
    pub grid: LambdaGrid,
    pub sectors: Vec<SectorKey>,
    pub methods: Vec<Method>,
    /// Sector truncation for exact-sector, RWA and S-GRWA.
    pub cutoff: usize,
    pub block_size: usize,
    pub report_levels: usize,
    /// Per-mode cutoff for exact-full.
    pub full_n_max: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid.count == 0 {
            return Err(Error::invalid("lambda_count", "grid needs at least one point"));
        }
        if !(self.grid.start >= 0.0) || !(self.grid.stop >= self.grid.start) || !self.grid.stop.is_finite() {
            return Err(Error::invalid("lambda", "grid must satisfy 0 <= start <= stop < inf"));
        }
        if self.report_levels == 0 {
            return Err(Error::invalid("levels", "must report at least one level"));
        }
        let sector_methods = self.methods.iter().any(|m| *m != Method::ExactFull);
        if sector_methods && self.sectors.is_empty() {
            return Err(Error::invalid("sectors", "sector methods requested without sectors"));
        }
        if self.methods.contains(&Method::ExactSector) && self.report_levels > self.cutoff / 3 {
            return Err(Error::invalid(
                "levels",
                format!("exact-sector reports at most cutoff/3 = {} levels", self.cutoff / 3),
            ));
        }
        if self.methods.contains(&Method::Rwa) && self.cutoff < 2 {
            return Err(Error::invalid("cutoff", "RWA needs cutoff >= 2"));
        }
        if self.methods.contains(&Method::Sgrwa) && (self.block_size == 0 || self.block_size > self.cutoff) {
            return Err(Error::invalid("block_size", format!("must lie in 1..={}", self.cutoff)));
        }
        if self.methods.contains(&Method::ExactFull) {
            let dim = 2 * (self.full_n_max + 1) * (self.full_n_max + 1);
            if self.full_n_max == 0 || dim > MAX_FULL_DIM {
                return Err(Error::invalid("full_n_max", format!("full dimension {dim} out of range")));
            }
        }
        Ok(())
    }
}

/// Rows for one grid point.
fn sweep_point(cfg: &SweepConfig, lam: f64) -> Result<(Vec<SpectrumRecord>, Vec<Method>)> {
    let params = cfg.params.with_lambda(lam)?;
    let k = cfg.report_levels;
    let mut rows = Vec::new();
    let mut clipped = Vec::new();
    let push = |rows: &mut Vec<SpectrumRecord>, method, block_size, sector, energies: Vec<f64>| {
        rows.extend(energies.into_iter().take(k).enumerate().map(|(level, energy)| SpectrumRecord {
            method,
            block_size,
            sector,
            lambda: lam,
            level,
            energy,
        }));
    };
    for &method in &cfg.methods {
        if method.needs_squeeze_frame() && lam >= params.omega_plus() {
            clipped.push(method);
            continue;
        }
        match method {
            Method::ExactFull => {
                let ev = exact_full_spectrum(&params, cfg.full_n_max, k)?;
                push(&mut rows, method, 0, None, ev);
            }
            Method::ExactSector => {
                for &sector in &cfg.sectors {
                    let ev = exact_sector_spectrum(&params, sector, cfg.cutoff, k)?;
                    push(&mut rows, method, 0, Some(sector), ev);
                }
            }
            Method::Rwa => {
                for &sector in &cfg.sectors {
                    let ev = rwa_energies(&params, sector, cfg.cutoff)?;
                    push(&mut rows, method, 0, Some(sector), ev);
                }
            }
            Method::Sgrwa => {
                for &sector in &cfg.sectors {
                    let ev = sgrwa_energies(&params, sector, cfg.cutoff, cfg.block_size)?;
                    push(&mut rows, method, cfg.block_size, Some(sector), ev);
                }
            }
        }
    }
    Ok((rows, clipped))
}

/// Evaluates every `(λ, method, sector)` combination of `cfg`.
///
/// Grid points run on scoped worker threads; the table is sorted
/// canonically afterwards so output does not depend on scheduling.
/// Points at or past the collapse point are dropped for methods that need
/// the squeezed frame, with one warning per method.
pub fn lambda_sweep(cfg: &SweepConfig) -> Result<SpectrumTable> {
    if cfg.methods.is_empty() {
        return Ok(SpectrumTable::default());
    }
    cfg.validate()?;
    let points = cfg.grid.points();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len()).max(1);

    let results: Vec<Result<(Vec<SpectrumRecord>, Vec<Method>)>> = if workers == 1 {
        points.iter().map(|&lam| sweep_point(cfg, lam)).collect()
    } else {
        let chunk = points.len().div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .chunks(chunk)
                .map(|chunk| scope.spawn(move || chunk.iter().map(|&lam| sweep_point(cfg, lam)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
        })
    };

    let mut table = SpectrumTable::default();
    let mut clipped: BTreeMap<Method, usize> = BTreeMap::new();
    for r in results {
        let (rows, skipped) = r?;
        table.records.extend(rows);
        for m in skipped {
            *clipped.entry(m).or_default() += 1;
        }
    }
    for (method, count) in clipped {
        table.warnings.push(format!(
            "{method}: clipped {count} grid point(s) at or beyond lambda_c={}",
            format_float(cfg.params.omega_plus())
        ));
    }
    table.sort_canonical();
    Ok(table)
}

/// Error statistics of one curve against the reference method.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSummary {
    pub method: Method,
    pub block_size: usize,
    pub sector: Option<SectorKey>,
    pub level: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub points: usize,
}

/// Ground-level comparison of RWA and S-GRWA in one sector. This level is
/// reported separately because the RWA can stay ahead there.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundLevelNote {
    pub sector: SectorKey,
    pub block_size: usize,
    pub rwa_mean_abs: f64,
    pub sgrwa_mean_abs: f64,
    pub rwa_more_accurate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub reference: Method,
    pub summaries: Vec<ErrorSummary>,
    pub ground_level: Vec<GroundLevelNote>,
}

impl AccuracyReport {
    pub fn summary(&self, method: Method, sector: Option<SectorKey>, level: usize) -> Option<&ErrorSummary> {
        self.summaries.iter().find(|s| s.method == method && s.sector == sector && s.level == level)
    }

    /// Mean of the per-level mean errors over `levels` for one curve family.
    pub fn mean_over_levels(&self, method: Method, sector: Option<SectorKey>, levels: std::ops::Range<usize>) -> Option<f64> {
        let vals: Vec<f64> = levels
            .map(|l| self.summary(method, sector, l).map(|s| s.mean_abs))
            .collect::<Option<Vec<_>>>()?;
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    }
}

/// Per `(method, block size, sector, level)` max and mean `|E − E_ref|`
/// over the λ grid. Rows without a matching reference point are skipped;
/// sector rows fall back to full-space reference rows when the reference
/// carries no sector.
pub fn accuracy_report(table: &SpectrumTable, reference: Method) -> Result<AccuracyReport> {
    let mut refs: BTreeMap<(Option<SectorKey>, u64, usize), f64> = BTreeMap::new();
    for r in table.records.iter().filter(|r| r.method == reference) {
        refs.insert((r.sector, ordered_bits(r.lambda), r.level), r.energy);
    }
    if refs.is_empty() {
        return Err(Error::MissingReference(reference.tag().to_string()));
    }

    type Key = (Method, usize, Option<SectorKey>, usize);
    let mut acc: BTreeMap<Key, (f64, f64, usize)> = BTreeMap::new();
    for r in &table.records {
        let lam = ordered_bits(r.lambda);
        let Some(&e_ref) = refs.get(&(r.sector, lam, r.level)).or_else(|| refs.get(&(None, lam, r.level))) else {
            continue;
        };
        let err = (r.energy - e_ref).abs();
        let slot = acc.entry((r.method, r.block_size, r.sector, r.level)).or_insert((0.0, 0.0, 0));
        slot.0 = slot.0.max(err);
        slot.1 += err;
        slot.2 += 1;
    }

    let summaries: Vec<ErrorSummary> = acc
        .into_iter()
        .map(|((method, block_size, sector, level), (max_abs, sum, points))| ErrorSummary {
            method,
            block_size,
            sector,
            level,
            max_abs,
            mean_abs: sum / points as f64,
            points,
        })
        .collect();

    let mut ground_level = Vec::new();
    for s in summaries.iter().filter(|s| s.method == Method::Sgrwa && s.level == 0) {
        let Some(sector) = s.sector else { continue };
        if let Some(rwa) = summaries
            .iter()
            .find(|r| r.method == Method::Rwa && r.sector == Some(sector) && r.level == 0)
        {
            ground_level.push(GroundLevelNote {
                sector,
                block_size: s.block_size,
                rwa_mean_abs: rwa.mean_abs,
                sgrwa_mean_abs: s.mean_abs,
                rwa_more_accurate: rwa.mean_abs < s.mean_abs,
            });
        }
    }

    Ok(AccuracyReport { reference, summaries, ground_level })
}
