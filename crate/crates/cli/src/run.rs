//! Executes commands over sweep points and writes their outputs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use tripod_core::propagation::{
    deflection_angles, find_foci, fixed_line_path, trace_ray, z_grid, DeflectionProfile, IndexField, RayPath,
    RaySettings,
};
use tripod_core::{Component, VaporCell};

use crate::config::{ExperimentConfig, Mode, SweepPoint};
use crate::error::CliError;
use crate::output::{self, csv, sidecar, sidecar_path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Divergence,
    Rays,
    Chimap,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Divergence => "divergence",
            Command::Rays => "rays",
            Command::Chimap => "chimap",
        }
    }
}

/// Command-line values that replace config entries at every sweep point.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub mode: Option<Mode>,
    pub x0: Option<f64>,
}

pub fn apply_overrides(points: &mut [SweepPoint], o: &Overrides) -> Result<(), CliError> {
    for p in points.iter_mut() {
        if let Some(s) = o.steps {
            p.config.steps = s;
        }
        if let Some(m) = o.mode {
            p.config.mode = m;
        }
        if let Some(x) = o.x0 {
            p.config.x0 = Some(x);
        }
        p.config.validate()?;
    }
    Ok(())
}

pub fn cell(config: &ExperimentConfig) -> VaporCell {
    VaporCell::new(config.beam.clone(), config.atomic.clone())
}

pub fn divergence(config: &ExperimentConfig, field: &dyn IndexField) -> Result<DeflectionProfile, tripod_core::Error> {
    deflection_angles(field, config.x0(), config.cell_length, config.steps, config.h_gradient())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayPair {
    pub plus: RayPath,
    pub minus: RayPath,
    pub foci: Vec<f64>,
}

pub fn rays(config: &ExperimentConfig, field: &dyn IndexField) -> Result<RayPair, tripod_core::Error> {
    let x0 = config.x0();
    let (plus, minus) = match config.mode {
        Mode::FixedLine => {
            let prof = divergence(config, field)?;
            (fixed_line_path(&prof, x0, Component::Plus), fixed_line_path(&prof, x0, Component::Minus))
        }
        Mode::SelfConsistent => {
            let s = RaySettings {
                length: config.cell_length,
                steps: config.steps,
                h: config.h_gradient(),
                x_bound: config.x_bound(),
            };
            let (a, b) = rayon::join(
                || trace_ray(field, x0, 0.0, Component::Plus, &s),
                || trace_ray(field, x0, 0.0, Component::Minus, &s),
            );
            (a?, b?)
        }
    };
    let foci = find_foci(&plus, &minus);
    Ok(RayPair { plus, minus, foci })
}

/// Rows of (x, z, Re χ₊, Im χ₊, Re χ₋, Im χ₋), z-major.
pub fn chimap(config: &ExperimentConfig, field: &dyn IndexField) -> Result<Vec<Vec<f64>>, tripod_core::Error> {
    let hw = config.resolved().chimap.x_half_width.expect("resolved");
    let nx = config.chimap.nx;
    let xs: Vec<f64> =
        if nx == 1 { vec![0.0] } else { (0..nx).map(|i| -hw + 2.0 * hw * i as f64 / (nx - 1) as f64).collect() };
    let zs = z_grid(config.cell_length, config.chimap.nz - 1);
    let cells: Vec<(f64, f64)> = zs.iter().flat_map(|&z| xs.iter().map(move |&x| (x, z))).collect();
    cells
        .par_iter()
        .map(|&(x, z)| {
            field.sample(x, 0.0, z).map(|s| vec![x, z, s.chi_plus.re, s.chi_plus.im, s.chi_minus.re, s.chi_minus.im])
        })
        .collect()
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() || c == '-' {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

fn stem(config: &ExperimentConfig, command: Command, index: usize, point: &SweepPoint, many: bool) -> String {
    let base = format!("{}_{}", slug(&config.name), command.name());
    if many {
        format!("{base}_{index:02}_{}", slug(&point.label))
    } else {
        base
    }
}

/// Output files of one sweep point, in memory.
fn render(command: Command, point: &SweepPoint, stem: &str, dir: &Path) -> Result<Vec<(PathBuf, String)>, CliError> {
    let config = &point.config;
    let field = cell(config);
    let numerical = |source| CliError::Numerical {
        point: if point.label.is_empty() { config.name.clone() } else { point.label.clone() },
        source,
    };
    let z_grid_meta = json!({
        "z_points": config.steps + 1,
        "z_start_cm": 0.0,
        "z_end_cm": config.cell_length,
        "h_gradient_cm": config.h_gradient(),
    });
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut files = Vec::new();
    match command {
        Command::Divergence => {
            let p = divergence(config, &field).map_err(numerical)?;
            let rows = (0..p.z_grid.len())
                .map(|i| vec![p.z_grid[i], p.theta_plus[i], p.theta_minus[i], p.phi[i], p.t_plus[i], p.t_minus[i]]);
            let body = csv(&["z_cm", "theta_plus_rad", "theta_minus_rad", "phi_rad", "T_plus", "T_minus"], rows);
            files.push((csv_path.clone(), body));
            files.push((sidecar_path(&csv_path), meta(command, point, z_grid_meta)));
        }
        Command::Rays => {
            let r = rays(config, &field).map_err(numerical)?;
            let rows = (0..r.plus.z.len()).map(|i| vec![r.plus.z[i], r.plus.x[i], r.minus.x[i]]);
            files.push((csv_path.clone(), csv(&["z_cm", "x_plus_cm", "x_minus_cm"], rows)));
            let foci_path = dir.join(format!("{stem}.foci.json"));
            let foci = json!({ "foci_cm": r.foci, "mode": config.mode });
            files.push((foci_path, format!("{}\n", serde_json::to_string_pretty(&foci).expect("serializable"))));
            files.push((sidecar_path(&csv_path), meta(command, point, z_grid_meta)));
        }
        Command::Chimap => {
            let rows = chimap(config, &field).map_err(numerical)?;
            let header = ["x_cm", "z_cm", "re_chi_plus", "im_chi_plus", "re_chi_minus", "im_chi_minus"];
            files.push((csv_path.clone(), csv(&header, rows)));
            let grid = json!({
                "nx": config.chimap.nx,
                "nz": config.chimap.nz,
                "x_half_width_cm": config.resolved().chimap.x_half_width,
                "z_end_cm": config.cell_length,
            });
            files.push((sidecar_path(&csv_path), meta(command, point, grid)));
        }
    }
    Ok(files)
}

fn meta(command: Command, point: &SweepPoint, grid: serde_json::Value) -> String {
    let v = sidecar(command.name(), &point.label, &point.config, grid);
    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
}

/// Runs `command` at every sweep point in parallel and writes the outputs.
/// Nothing is left on disk if any point fails.
pub fn run(points: &[SweepPoint], command: Command, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Write { path: out_dir.to_path_buf(), source })?;
    let many = points.len() > 1;
    let rendered: Vec<Result<Vec<(PathBuf, String)>, CliError>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| render(command, p, &stem(&p.config, command, i, p, many), out_dir))
        .collect();
    let mut files = Vec::new();
    for r in rendered {
        files.extend(r?);
    }
    output::write_all(&files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("beam.theta_c=pi/10"), "beam_theta_c_pi_10");
        assert_eq!(slug("a=1,b=-0.5"), "a_1_b_-0_5");
    }
}
