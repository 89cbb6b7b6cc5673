//! Experiment configuration files.
//!
//! ```json
//! {
//!   "alpha": 0.10,
//!   "replications": 500,
//!   "master_seed": 20240101,
//!   "methods": [
//!     { "name": "fieller" },
//!     { "name": "hwang", "side": "symmetric", "rule": "hall", "b": 999, "seed": 7 }
//!   ],
//!   "cells": [
//!     { "x": { "family": "pareto", "a": 1.2 },
//!       "y": { "family": "pareto-inverted", "a": 1.2 },
//!       "n": 100 }
//!   ],
//!   "output": "coverage.csv",
//!   "format": "csv"
//! }
//! ```
//!
//! `preset` (`"desk"` or `"full"`) supplies defaults for `replications` and
//! for `b`. Validation reports every problem at once.

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use ratioci::bootstrap::{BootstrapConfig, Resampling, Side, MIN_RESAMPLES};
use ratioci::distributions::{CellSpec, MarginalSpec};
use ratioci::simulator::{default_subsample_m, MethodName, MethodSpec, SimOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Desk,
    Full,
}

impl Preset {
    pub fn replications(self) -> usize {
        match self {
            Preset::Desk => 500,
            Preset::Full => 1000,
        }
    }

    pub fn resamples(self) -> usize {
        match self {
            Preset::Desk => 999,
            Preset::Full => 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub options: SimOptions,
    pub methods: Vec<MethodSpec>,
    pub cells: Vec<CellSpec>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Either a syntax error (with its line) or the full list of violations.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax { line: usize, column: usize, message: String },
    Invalid(Vec<String>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, column, message } => {
                write!(f, "config syntax error at line {line}, column {column}: {message}")
            }
            ConfigError::Invalid(problems) => {
                writeln!(f, "invalid config ({} problem{}):", problems.len(), if problems.len() == 1 { "" } else { "s" })?;
                for p in problems {
                    writeln!(f, "  - {p}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    alpha: Option<f64>,
    replications: Option<usize>,
    master_seed: Option<u64>,
    preset: Option<String>,
    #[serde(default)]
    methods: Vec<RawMethod>,
    #[serde(default)]
    cells: Vec<RawCell>,
    output: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMethod {
    name: String,
    side: Option<String>,
    rule: Option<String>,
    b: Option<usize>,
    seed: Option<u64>,
    subsample_m: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    x: Value,
    y: Value,
    n: usize,
}

pub fn parse_side(s: &str) -> Option<Side> {
    match s {
        "symmetric" => Some(Side::Symmetric),
        "equal-tailed" | "equal_tailed" => Some(Side::EqualTailed),
        _ => None,
    }
}

pub fn parse_rule(s: &str) -> Option<Resampling> {
    match s {
        "bootstrap-t" | "bootstrap_t" => Some(Resampling::BootstrapT),
        "hall" => Some(Resampling::Hall),
        "percentile" => Some(Resampling::Percentile),
        _ => None,
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut problems = Vec::new();

        let preset = match raw.preset.as_deref() {
            None | Some("desk") => Preset::Desk,
            Some("full") => Preset::Full,
            Some(other) => {
                problems.push(format!("preset: unknown preset '{other}' (expected desk or full)"));
                Preset::Desk
            }
        };

        let alpha = raw.alpha.unwrap_or(0.10);
        if !(alpha > 0.0 && alpha < 1.0) {
            problems.push(format!("alpha: must lie in (0, 1), got {alpha}"));
        }
        let replications = raw.replications.unwrap_or(preset.replications());
        if replications == 0 {
            problems.push("replications: must be positive".into());
        }
        let format = match raw.format.as_deref() {
            None => Format::Csv,
            Some(s) => Format::parse(s).unwrap_or_else(|| {
                problems.push(format!("format: unknown format '{s}' (expected csv or json)"));
                Format::Csv
            }),
        };

        let mut cells = Vec::new();
        if raw.cells.is_empty() {
            problems.push("cells: at least one cell is required".into());
        }
        for (i, cell) in raw.cells.iter().enumerate() {
            let x = marginal(&cell.x, &format!("cells[{i}].x"), &mut problems);
            let y = marginal(&cell.y, &format!("cells[{i}].y"), &mut problems);
            if cell.n < 2 {
                problems.push(format!("cells[{i}].n: need at least 2 observations, got {}", cell.n));
            }
            if let (Some(x), Some(y)) = (x, y) {
                let spec = CellSpec { x, y, n: cell.n };
                match spec.validate() {
                    Ok(()) => cells.push(spec),
                    Err(e) if cell.n >= 2 => problems.push(format!("cells[{i}]: {e}")),
                    Err(_) => {}
                }
            }
        }

        let mut methods = Vec::new();
        if raw.methods.is_empty() {
            problems.push("methods: at least one method is required".into());
        }
        for (i, m) in raw.methods.iter().enumerate() {
            let at = format!("methods[{i}]");
            let Some(name) = MethodName::parse(&m.name) else {
                problems.push(format!("{at}.name: unknown method '{}'", m.name));
                continue;
            };
            if !name.needs_bootstrap() {
                for (field, present) in [
                    ("side", m.side.is_some()),
                    ("rule", m.rule.is_some()),
                    ("b", m.b.is_some()),
                    ("seed", m.seed.is_some()),
                    ("subsample_m", m.subsample_m.is_some()),
                ] {
                    if present {
                        problems.push(format!("{at}.{field}: method {} takes no bootstrap options", name.as_str()));
                    }
                }
                methods.push(MethodSpec::plain(name));
                continue;
            }
            let side = match m.side.as_deref() {
                None => Side::Symmetric,
                Some(s) => parse_side(s).unwrap_or_else(|| {
                    problems.push(format!("{at}.side: unknown side '{s}' (expected symmetric or equal-tailed)"));
                    Side::Symmetric
                }),
            };
            let rule = match m.rule.as_deref() {
                None => Resampling::BootstrapT,
                Some(s) => parse_rule(s).unwrap_or_else(|| {
                    problems.push(format!("{at}.rule: unknown rule '{s}' (expected bootstrap-t, hall or percentile)"));
                    Resampling::BootstrapT
                }),
            };
            let b = m.b.unwrap_or(preset.resamples());
            if b < MIN_RESAMPLES {
                problems.push(format!("{at}.b: need at least {MIN_RESAMPLES} resamples, got {b}"));
            }
            if rule == Resampling::Hall {
                for (j, cell) in raw.cells.iter().enumerate() {
                    let sub = m.subsample_m.unwrap_or_else(|| default_subsample_m(cell.n));
                    if sub < 2 || sub > cell.n {
                        problems.push(format!("{at}.subsample_m: {sub} is outside [2, n = {}] for cells[{j}]", cell.n));
                    }
                }
            }
            let cfg = BootstrapConfig { b, side, subsample_m: m.subsample_m.unwrap_or(2), seed: m.seed.unwrap_or(0) };
            let mut spec = MethodSpec::bootstrap(name, rule, cfg);
            spec.subsample_m = m.subsample_m;
            methods.push(spec);
        }

        if !problems.is_empty() {
            return Err(ConfigError::Invalid(problems));
        }
        Ok(ExperimentConfig {
            options: SimOptions { alpha, replications, master_seed: raw.master_seed.unwrap_or(0) },
            methods,
            cells,
            output: raw.output,
            format,
        })
    }
}

fn marginal(value: &Value, at: &str, problems: &mut Vec<String>) -> Option<MarginalSpec> {
    match MarginalSpec::deserialize(value) {
        Ok(spec) => match spec.validate() {
            Ok(()) => Some(spec),
            Err(e) => {
                problems.push(format!("{at}: {e}"));
                None
            }
        },
        Err(e) => {
            problems.push(format!("{at}: {e}"));
            None
        }
    }
}
