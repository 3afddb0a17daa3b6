//! `tmrabi` command-line front end.

pub mod config;
pub mod svg;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use tmrabi::approx::{rwa_energies, sgrwa_energies};
use tmrabi::spectra::{
    exact_full_spectrum, exact_sector_spectrum, lambda_sweep, Method, SpectrumRecord, SpectrumTable,
};
use tmrabi::verify::{self, Fault, Level};
use tmrabi::{Branch, ModelParams, SectorKey};

use config::{parse_branch, RunConfig};
use svg::{Curve, LegendEntry, Panel};

#[derive(Debug, Parser)]
#[command(name = "tmrabi", version, about = "Spectra of the two-mode two-photon Rabi Hamiltonian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energies at a single coupling, written as CSV
    Spectrum(SpectrumArgs),
    /// Sweep a figure configuration and write SVG panels with backing CSV
    Figure(FigureArgs),
    /// Run the self-check suite
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
struct SpectrumArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega2: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Photon-number difference n_a - n_b
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    delta: i64,
    /// Parity branch, `+` or `-`
    #[arg(long, default_value = "-", allow_hyphen_values = true)]
    branch: String,
    /// exact-full, exact-sector, rwa or sgrwa
    #[arg(long, default_value = "exact-sector")]
    method: String,
    /// Sector truncation
    #[arg(long, default_value_t = 100)]
    cutoff: usize,
    /// Per-mode cutoff for exact-full
    #[arg(long, default_value_t = 40)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    block_size: usize,
    #[arg(long, default_value_t = 10)]
    levels: usize,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureKind {
    Fig1,
    Fig2,
}

#[derive(Debug, clap::Args)]
struct FigureArgs {
    figure: FigureKind,
    /// TOML configuration; the built-in default for the figure when omitted
    config: Option<PathBuf>,
    /// Overrides `output.dir` from the configuration
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    ParitySign,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    #[arg(value_parser = ["fast", "full"])]
    level: String,
    #[arg(long, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Collapse(String),
    Numeric(String),
    Io(String),
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Collapse(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Collapse(m) | CliError::Numeric(m) | CliError::Io(m) => f.write_str(m),
            CliError::ChecksFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<tmrabi::Error> for CliError {
    fn from(e: tmrabi::Error) -> Self {
        match e {
            tmrabi::Error::InvalidParameter { name, reason } => {
                CliError::Validation(format!("--{}: {reason}", name.replace('_', "-")))
            }
            tmrabi::Error::CollapseRegime { .. } => CliError::Collapse(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a, out),
        Command::Figure(a) => cmd_figure(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let method: Method = a.method.parse()?;
    let branch = parse_branch(&a.branch)
        .ok_or_else(|| CliError::Validation(format!("--branch: expected + or -, got `{}`", a.branch)))?;
    if a.levels == 0 {
        return Err(CliError::Validation("--levels: must be at least 1".into()));
    }
    let params = ModelParams::new(a.omega1, a.omega2, a.j, a.lambda)?;
    let sector = SectorKey::new(branch, a.delta);
    let (energies, sector, block_size) = match method {
        Method::ExactFull => (exact_full_spectrum(&params, a.n_max, a.levels)?, None, 0),
        Method::ExactSector => (exact_sector_spectrum(&params, sector, a.cutoff, a.levels)?, Some(sector), 0),
        Method::Rwa => (rwa_energies(&params, sector, a.cutoff)?, Some(sector), 0),
        Method::Sgrwa => (sgrwa_energies(&params, sector, a.cutoff, a.block_size)?, Some(sector), a.block_size),
    };
    let table = SpectrumTable {
        records: energies
            .into_iter()
            .take(a.levels)
            .enumerate()
            .map(|(level, energy)| SpectrumRecord { method, block_size, sector, lambda: a.lambda, level, energy })
            .collect(),
        warnings: Vec::new(),
    };
    let csv = table.to_csv();
    match &a.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| io_err(path, e)),
        None => out.write_all(csv.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// One SVG panel: the records it plots and how to title it.
struct PanelData {
    name: String,
    title: String,
    table: SpectrumTable,
}

fn panel_names(stem: &str, count: usize) -> Vec<String> {
    if count == 1 {
        return vec![stem.to_string()];
    }
    (0..count)
        .map(|i| {
            let letter = char::from(b'a' + (i % 26) as u8);
            if i < 26 { format!("{stem}_{letter}") } else { format!("{stem}_{letter}{}", i / 26) }
        })
        .collect()
}

fn legend_label(method: Method, branch: Option<Branch>, split_branches: bool) -> String {
    let name = match method {
        Method::ExactFull | Method::ExactSector => "exact",
        Method::Rwa => "RWA",
        Method::Sgrwa => "S-GRWA",
    };
    match branch {
        Some(b) if split_branches => format!("{name} ({})", b.symbol()),
        _ => name.to_string(),
    }
}

fn build_panel(cfg: &RunConfig, data: &PanelData) -> Panel {
    let split = cfg.style.iter().any(|r| r.branch.is_some());
    let mut groups: BTreeSet<(Method, usize, Option<SectorKey>)> = BTreeSet::new();
    for r in &data.table.records {
        groups.insert((r.method, r.block_size, r.sector));
    }
    let mut curves = Vec::new();
    let mut legend: Vec<LegendEntry> = Vec::new();
    for (method, _, sector) in groups {
        let style = cfg.style_for(method, sector.map(|s| s.branch));
        for points in data.table.curves(method, sector).into_values() {
            curves.push(Curve { points, color: style.color.clone(), dash: style.dash });
        }
        let label = legend_label(method, sector.map(|s| s.branch), split);
        if !legend.iter().any(|e| e.label == label) {
            legend.push(LegendEntry { label, color: style.color, dash: style.dash });
        }
    }
    Panel { title: data.title.clone(), x_label: "λ".into(), y_label: "E".into(), curves, legend }
}

fn cmd_figure(a: &FigureArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = match &a.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| io_err(path, e))?,
        None => match a.figure {
            FigureKind::Fig1 => config::FIG1_DEFAULT.to_string(),
            FigureKind::Fig2 => config::FIG2_DEFAULT.to_string(),
        },
    };
    let cfg = RunConfig::from_toml(&text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
    let dir = a.out_dir.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let stem = cfg.output.stem.clone().unwrap_or_else(|| match a.figure {
        FigureKind::Fig1 => "fig1".into(),
        FigureKind::Fig2 => "fig2".into(),
    });

    let mut panels: Vec<(String, SpectrumTable)> = Vec::new();
    for (label, sweep) in cfg.sweeps().map_err(|e| CliError::Validation(format!("config: {e}")))? {
        let table = lambda_sweep(&sweep)?;
        for w in &table.warnings {
            let _ = writeln!(err, "warning: {label}: {w}");
        }
        match a.figure {
            FigureKind::Fig1 => panels.push((label, table)),
            FigureKind::Fig2 => {
                for &delta in &cfg.sweep.deltas {
                    let records = table
                        .records
                        .iter()
                        .filter(|r| r.sector.is_none_or(|s| s.delta == delta))
                        .copied()
                        .collect();
                    panels.push((format!("{label}, Δ = {delta}"), SpectrumTable { records, warnings: Vec::new() }));
                }
            }
        }
    }

    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let names = panel_names(&stem, panels.len());
    for (name, (title, table)) in names.into_iter().zip(panels) {
        let data = PanelData { name, title, table };
        let svg_path = dir.join(format!("{}.svg", data.name));
        let csv_path = dir.join(format!("{}.csv", data.name));
        std::fs::write(&csv_path, data.table.to_csv()).map_err(|e| io_err(&csv_path, e))?;
        std::fs::write(&svg_path, svg::render(&build_panel(&cfg, &data))).map_err(|e| io_err(&svg_path, e))?;
        let _ = writeln!(out, "{}", svg_path.display());
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let level: Level = a.level.parse()?;
    let fault = match a.inject_fault {
        Some(FaultArg::ParitySign) => Fault::CorruptParitySign,
        None => Fault::None,
    };
    let report = verify::run(level, fault);
    let _ = writeln!(out, "{report}");
    let failed = report.failures().count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}
