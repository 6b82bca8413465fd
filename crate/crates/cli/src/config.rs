//! Experiment configuration: TOML files, presets and parameter sweeps.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use tripod_core::beams::{BeamSpec, ProfileFamily};
use tripod_core::medium::AtomicParams;
use tripod_core::propagation::default_gradient_step;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Mode {
    FixedLine,
    SelfConsistent,
}

/// Transverse/longitudinal grid of the `chimap` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChiMapGrid {
    /// Half-width of the x range, cm. Defaults to three beam widths.
    pub x_half_width: Option<f64>,
    pub nx: usize,
    pub nz: usize,
}

impl Default for ChiMapGrid {
    fn default() -> Self {
        Self { x_half_width: None, nx: 101, nz: 101 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub path: String,
    pub values: Vec<Value>,
    /// Names used in output labels instead of the raw values.
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

/// One experiment; `sweep` lists the axes of a Cartesian parameter scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub atomic: AtomicParams,
    pub beam: BeamSpec,
    /// Probe offset, cm. Defaults to σ/2 (Gaussian) or −w₀√(m/2)/2 (LG).
    pub x0: Option<f64>,
    pub cell_length: f64,
    pub steps: usize,
    pub h_gradient: Option<f64>,
    pub mode: Mode,
    /// Rays beyond |x| > x_bound fail. Defaults to 20 beam widths.
    pub x_bound: Option<f64>,
    pub chimap: ChiMapGrid,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepAxis>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            atomic: AtomicParams::default(),
            beam: BeamSpec::default(),
            x0: None,
            cell_length: 1.5,
            steps: 2000,
            h_gradient: None,
            mode: Mode::SelfConsistent,
            x_bound: None,
            chimap: ChiMapGrid::default(),
            sweep: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn x0(&self) -> f64 {
        self.x0.unwrap_or_else(|| default_x0(&self.beam))
    }

    pub fn h_gradient(&self) -> f64 {
        self.h_gradient.unwrap_or_else(|| default_gradient_step(&self.beam))
    }

    pub fn x_bound(&self) -> f64 {
        self.x_bound.unwrap_or(20.0 * self.beam.width())
    }

    /// Fills every defaulted quantity so the result is self-describing.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        c.x0 = Some(self.x0());
        c.h_gradient = Some(self.h_gradient());
        c.x_bound = Some(self.x_bound());
        c.beam.z_r = Some(self.beam.rayleigh_length());
        c.chimap.x_half_width = Some(self.chimap.x_half_width.unwrap_or(3.0 * self.beam.width()));
        c
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let v = |e: tripod_core::Error| CliError::Validation(e.to_string());
        self.atomic.validate().map_err(v)?;
        self.beam.validate().map_err(v)?;
        if !(self.cell_length > 0.0 && self.cell_length.is_finite()) {
            return Err(CliError::Validation(format!("cell_length must be > 0, got {}", self.cell_length)));
        }
        if self.steps < 2 {
            return Err(CliError::Validation(format!("steps must be >= 2, got {}", self.steps)));
        }
        if let Some(h) = self.h_gradient {
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Validation(format!("h_gradient must be > 0, got {h}")));
            }
        }
        if let Some(x) = self.x0 {
            if !x.is_finite() {
                return Err(CliError::Validation("x0 must be finite".into()));
            }
        }
        if let Some(b) = self.x_bound {
            if !(b > 0.0 && b.is_finite()) {
                return Err(CliError::Validation("x_bound must be > 0".into()));
            }
        }
        if self.chimap.nx < 1 || self.chimap.nz < 2 {
            return Err(CliError::Validation("chimap needs nx >= 1 and nz >= 2".into()));
        }
        Ok(())
    }

    /// Notes on configuration choices worth flagging in output metadata.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.beam.family == ProfileFamily::LaguerreGauss {
            if let Some(z_r) = self.beam.z_r {
                let derived = self.beam.derived_rayleigh_length();
                let rel = (z_r - derived).abs() / derived;
                if rel > 1e-3 {
                    w.push(format!(
                        "z_r = {z_r} cm differs from pi*w0^2/lambda = {derived:.4} cm by {:.1}%; using the configured value",
                        100.0 * rel
                    ));
                }
            }
        }
        w
    }
}

pub fn default_x0(beam: &BeamSpec) -> f64 {
    match beam.family {
        ProfileFamily::Gaussian => beam.sigma / 2.0,
        ProfileFamily::LaguerreGauss => -beam.w0 * (beam.m as f64 / 2.0).sqrt() / 2.0,
    }
}

/// One concrete run of a (possibly swept) experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// Empty for unswept configs, otherwise `path=value` pairs.
    pub label: String,
    pub config: ExperimentConfig,
}

/// Parses an angle written as a number or as `pi`, `pi/6`, `2pi/3`, `2*pi/3`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (t.as_str(), 1.0),
    };
    let coeff = num.strip_suffix("pi")?.trim_end_matches('*');
    let k = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().ok()? };
    Some(k * PI / den)
}

/// Replaces angle strings such as "pi/6" by their values.
fn normalize_angles(table: &mut Table) -> Result<(), CliError> {
    if let Some(Value::Table(beam)) = table.get_mut("beam") {
        if let Some(Value::String(s)) = beam.get("theta_c") {
            let v =
                parse_angle(s).ok_or_else(|| CliError::Validation(format!("beam.theta_c: cannot read angle `{s}`")))?;
            beam.insert("theta_c".into(), Value::Float(v));
        }
    }
    Ok(())
}

fn set_path(table: &mut Table, path: &str, value: Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = path.split('.').collect();
    let last = parts
        .pop()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| CliError::Validation(format!("empty sweep path `{path}`")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Validation(format!("sweep path `{path}`: `{p}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn value_label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn deserialize<T: serde::de::DeserializeOwned>(value: Value, context: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Validation(format!("{context}field `{path}`: {}", inner.message()))
    })
}

/// Parses TOML text and expands sweeps into concrete, validated points.
pub fn parse_config(text: &str) -> Result<Vec<SweepPoint>, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::Parse("config is empty".into()));
    }
    let mut table: Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    normalize_angles(&mut table)?;
    let sweep_raw = table.remove("sweep");
    let base: ExperimentConfig = deserialize(Value::Table(table.clone()), "")?;
    let axes: Vec<SweepAxis> = match sweep_raw {
        None => Vec::new(),
        Some(v) => deserialize(v, "sweep: ")?,
    };

    let mut points = vec![(String::new(), table)];
    for axis in &axes {
        if axis.values.is_empty() {
            return Err(CliError::Validation(format!("sweep `{}` has no values", axis.path)));
        }
        let mut next = Vec::with_capacity(points.len() * axis.values.len());
        if let Some(l) = &axis.labels {
            if l.len() != axis.values.len() {
                return Err(CliError::Validation(format!("sweep `{}`: labels and values differ in length", axis.path)));
            }
        }
        for (label, t) in &points {
            for (k, v) in axis.values.iter().enumerate() {
                let mut t = t.clone();
                set_path(&mut t, &axis.path, v.clone())?;
                normalize_angles(&mut t)?;
                let shown = axis.labels.as_ref().map_or_else(|| value_label(v), |l| l[k].clone());
                let item = format!("{}={}", axis.path, shown);
                let label = if label.is_empty() { item } else { format!("{label},{item}") };
                next.push((label, t));
            }
        }
        points = next;
    }

    let mut out = Vec::with_capacity(points.len());
    for (label, t) in points {
        let ctx = if label.is_empty() { String::new() } else { format!("sweep point {label}: ") };
        let config = if label.is_empty() { base.clone() } else { deserialize(Value::Table(t), &ctx)? };
        config.validate().map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("{ctx}{m}")),
            other => other,
        })?;
        for w in config.warnings() {
            log::warn!("{ctx}{w}");
        }
        out.push(SweepPoint { label, config });
    }
    Ok(out)
}

/// Reads a TOML config or a JSON metadata sidecar written by a previous run.
pub fn load_config(path: &Path) -> Result<Vec<SweepPoint>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    if path.extension().is_some_and(|e| e == "json") {
        return crate::output::config_from_sidecar(&text)
            .map(|config| vec![SweepPoint { label: String::new(), config }]);
    }
    parse_config(&text)
}

pub const PRESETS: [(&str, &str); 3] = [
    ("fig2", include_str!("../presets/fig2.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load_preset(name: &str) -> Result<Vec<SweepPoint>, CliError> {
    let text = preset_text(name)
        .ok_or_else(|| CliError::Validation(format!("unknown preset `{name}` (expected fig2, fig3 or fig4)")))?;
    parse_config(text)
}
