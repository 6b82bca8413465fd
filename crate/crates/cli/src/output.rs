//! CSV bodies and JSON metadata sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const GAUSSIAN_NOTE: &str =
    "gaussian family: exp(-(X^2+y^2)/sigma^2) in tilted coordinates, no longitudinal diffraction";

/// 12 significant digits, '.' radix, no signed zero.
pub fn fmt_num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_num).collect();
        let _ = writeln!(s, "{}", line.join(","));
    }
    s
}

pub fn sidecar(command: &str, label: &str, config: &ExperimentConfig, grid: Value) -> Value {
    let resolved = config.resolved();
    let mut notes = Vec::new();
    if resolved.beam.family == tripod_core::ProfileFamily::Gaussian {
        notes.push(GAUSSIAN_NOTE.to_string());
    }
    json!({
        "software": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "sweep_point": label,
        "config": resolved,
        "grid": grid,
        "notes": notes,
        "warnings": config.warnings(),
    })
}

pub fn config_from_sidecar(text: &str) -> Result<ExperimentConfig, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let cfg = v.get("config").cloned().ok_or_else(|| CliError::Parse("metadata has no `config` entry".into()))?;
    let config: ExperimentConfig = serde_path_to_error::deserialize(cfg).map_err(|e| {
        let path = e.path().to_string();
        CliError::Validation(format!("field `{path}`: {}", e.into_inner()))
    })?;
    config.validate()?;
    Ok(config)
}

/// Writes files in order; on any failure removes everything written so far.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for (path, body) in files {
        if let Err(source) = fs::write(path, body) {
            remove_all(&written);
            let _ = fs::remove_file(path);
            return Err(CliError::Write { path: path.clone(), source });
        }
        written.push(path.clone());
    }
    Ok(written)
}

pub fn remove_all(paths: &[PathBuf]) {
    for p in paths {
        let _ = fs::remove_file(p);
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0.00000000000e0");
        assert_eq!(fmt_num(-0.0), "0.00000000000e0");
        assert_eq!(fmt_num(-1.5e-7), "-1.50000000000e-7");
        assert_eq!(fmt_num(1.0 / 3.0), "3.33333333333e-1");
    }

    #[test]
    fn csv_layout() {
        let s = csv(&["a", "b"], vec![vec![1.0, 2.0]]);
        assert_eq!(s, "a,b\n1.00000000000e0,2.00000000000e0\n");
    }
}
