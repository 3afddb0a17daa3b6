//! TOML run configuration for `tmrabi figure`.

use std::path::PathBuf;

use serde::Deserialize;
use tmrabi::spectra::{LambdaGrid, Method, SweepConfig};
use tmrabi::{Branch, ModelParams, SectorKey};

pub const FIG1_DEFAULT: &str = include_str!("../configs/fig1.toml");
pub const FIG2_DEFAULT: &str = include_str!("../configs/fig2.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Vec<ModelSection>,
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub style: Vec<StyleRule>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub label: Option<String>,
    pub omega1: f64,
    pub omega2: f64,
    pub j: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub lambda_start: f64,
    pub lambda_stop: f64,
    pub lambda_count: usize,
    pub deltas: Vec<i64>,
    #[serde(default = "both_branches")]
    pub branches: Vec<String>,
    pub methods: Vec<String>,
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    #[serde(default = "default_block_size")]
    pub block_size: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_full_n_max")]
    pub full_n_max: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    pub stem: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: default_dir(), stem: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dash {
    Solid,
    Dashed,
    Dotted,
}

impl Dash {
    pub fn dasharray(self) -> Option<&'static str> {
        match self {
            Dash::Solid => None,
            Dash::Dashed => Some("6,4"),
            Dash::Dotted => Some("1.5,3"),
        }
    }
}

/// Line style for one method, optionally restricted to one branch.
/// The first matching rule wins.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StyleRule {
    pub method: String,
    pub branch: Option<String>,
    pub color: String,
    pub dash: Dash,
}

fn both_branches() -> Vec<String> {
    vec!["+".into(), "-".into()]
}
fn default_cutoff() -> usize {
    100
}
fn default_block_size() -> usize {
    2
}
fn default_levels() -> usize {
    6
}
fn default_full_n_max() -> usize {
    40
}
fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

/// A configuration that failed to parse or validate, with the key at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn parse_branch(s: &str) -> Option<Branch> {
    match s {
        "+" | "plus" => Some(Branch::Plus),
        "-" | "minus" => Some(Branch::Minus),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedStyle {
    pub color: String,
    pub dash: Dash,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError(e.message().trim().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.model.is_empty() {
            return Err(ConfigError("model: at least one [[model]] entry is required".into()));
        }
        self.methods()?;
        self.branches()?;
        for rule in &self.style {
            rule.method.parse::<Method>().map_err(|e| ConfigError(format!("style.method: {e}")))?;
            if let Some(b) = &rule.branch {
                parse_branch(b).ok_or_else(|| ConfigError(format!("style.branch: expected + or -, got `{b}`")))?;
            }
        }
        for (_, sweep) in self.sweeps()? {
            sweep.validate().map_err(|e| ConfigError(format!("sweep: {e}")))?;
        }
        Ok(())
    }

    pub fn methods(&self) -> Result<Vec<Method>, ConfigError> {
        self.sweep
            .methods
            .iter()
            .map(|m| m.parse::<Method>().map_err(|e| ConfigError(format!("sweep.methods: {e}"))))
            .collect()
    }

    pub fn branches(&self) -> Result<Vec<Branch>, ConfigError> {
        self.sweep
            .branches
            .iter()
            .map(|b| parse_branch(b).ok_or_else(|| ConfigError(format!("sweep.branches: expected + or -, got `{b}`"))))
            .collect()
    }

    /// One sweep per `[[model]]` entry, labelled.
    pub fn sweeps(&self) -> Result<Vec<(String, SweepConfig)>, ConfigError> {
        let methods = self.methods()?;
        let branches = self.branches()?;
        let sectors: Vec<SectorKey> = self
            .sweep
            .deltas
            .iter()
            .flat_map(|&d| branches.iter().map(move |&b| SectorKey::new(b, d)))
            .collect();
        self.model
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let params = ModelParams::new(m.omega1, m.omega2, m.j, 0.0)
                    .map_err(|e| ConfigError(format!("model[{i}]: {e}")))?;
                let label = m.label.clone().unwrap_or_else(|| format!("J={} w1={} w2={}", m.j, m.omega1, m.omega2));
                let cfg = SweepConfig {
                    params,
                    grid: LambdaGrid {
                        start: self.sweep.lambda_start,
                        stop: self.sweep.lambda_stop,
                        count: self.sweep.lambda_count,
                    },
                    sectors: sectors.clone(),
                    methods: methods.clone(),
                    cutoff: self.sweep.cutoff,
                    block_size: self.sweep.block_size,
                    report_levels: self.sweep.levels,
                    full_n_max: self.sweep.full_n_max,
                };
                Ok((label, cfg))
            })
            .collect()
    }

    pub fn style_for(&self, method: Method, branch: Option<Branch>) -> ResolvedStyle {
        self.style
            .iter()
            .find(|r| {
                r.method.parse::<Method>().ok() == Some(method)
                    && match (&r.branch, branch) {
                        (None, _) => true,
                        (Some(b), Some(actual)) => parse_branch(b) == Some(actual),
                        (Some(_), None) => false,
                    }
            })
            .map(|r| ResolvedStyle { color: r.color.clone(), dash: r.dash })
            .unwrap_or(ResolvedStyle { color: "black".into(), dash: Dash::Solid })
    }
}
