//! Deflection, transmission and paraxial rays of the two circular probe
//! components. Propagation is along z in the y = 0 plane.

use rayon::prelude::*;

use crate::beams::BeamSpec;
use crate::error::{Error, Result};
use crate::response::SusceptibilitySample;
use crate::Component;

/// Spatially varying susceptibility seen by the probe.
pub trait IndexField: Sync {
    fn sample(&self, x: f64, y: f64, z: f64) -> Result<SusceptibilitySample>;

    /// Probe wavenumber k_p, 1/cm.
    fn probe_wavenumber(&self) -> f64;
}

/// An index field given by a closure, for analytic media.
pub struct FnField<F> {
    f: F,
    wavenumber: f64,
}

impl<F> FnField<F>
where
    F: Fn(f64, f64, f64) -> SusceptibilitySample + Sync,
{
    pub fn new(wavenumber: f64, f: F) -> Self {
        Self { f, wavenumber }
    }
}

impl<F> IndexField for FnField<F>
where
    F: Fn(f64, f64, f64) -> SusceptibilitySample + Sync,
{
    fn sample(&self, x: f64, y: f64, z: f64) -> Result<SusceptibilitySample> {
        Ok((self.f)(x, y, z))
    }

    fn probe_wavenumber(&self) -> f64 {
        self.wavenumber
    }
}

/// θ±, φ and T± sampled along the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflectionProfile {
    pub z_grid: Vec<f64>,
    pub theta_plus: Vec<f64>,
    pub theta_minus: Vec<f64>,
    pub phi: Vec<f64>,
    pub t_plus: Vec<f64>,
    pub t_minus: Vec<f64>,
}

impl DeflectionProfile {
    pub fn theta(&self, c: Component) -> &[f64] {
        match c {
            Component::Plus => &self.theta_plus,
            Component::Minus => &self.theta_minus,
        }
    }

    pub fn transmission(&self, c: Component) -> &[f64] {
        match c {
            Component::Plus => &self.t_plus,
            Component::Minus => &self.t_minus,
        }
    }
}

/// Transverse trajectory X(z) of one component.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPath {
    pub z: Vec<f64>,
    pub x: Vec<f64>,
    pub slope: Vec<f64>,
}

/// Default finite-difference step: 1/200 of the active beam width.
pub fn default_gradient_step(beam: &BeamSpec) -> f64 {
    beam.width() / 200.0
}

/// Uniform grid of `steps + 1` points on [0, L].
pub fn z_grid(length: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|j| length * j as f64 / steps as f64).collect()
}

fn check_grid(length: f64, steps: usize) -> Result<()> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidParameter(format!("cell length must be > 0, got {length}")));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("steps must be >= 2, got {steps}")));
    }
    Ok(())
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gradient step must be > 0, got {h}")))
    }
}

/// ∂n/∂x at (x, 0, z) by central difference.
pub fn index_gradient(field: &dyn IndexField, x: f64, z: f64, component: Component, h: f64) -> Result<f64> {
    check_step(h)?;
    let a = field.sample(x + h, 0.0, z)?.n(component);
    let b = field.sample(x - h, 0.0, z)?.n(component);
    Ok((a - b) / (2.0 * h))
}

/// ∂n/∂y at (x, 0, z) by central difference.
pub fn index_gradient_y(field: &dyn IndexField, x: f64, z: f64, component: Component, h: f64) -> Result<f64> {
    check_step(h)?;
    let a = field.sample(x, h, z)?.n(component);
    let b = field.sample(x, -h, z)?.n(component);
    Ok((a - b) / (2.0 * h))
}

fn cumulative_trapezoid(z: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for j in 1..f.len() {
        acc += 0.5 * (f[j] + f[j - 1]) * (z[j] - z[j - 1]);
        out.push(acc);
    }
    out
}

struct LineSample {
    grad: [f64; 2],
    kappa: [f64; 2],
}

fn sample_line(field: &dyn IndexField, x0: f64, z: f64, h: f64) -> Result<LineSample> {
    let up = field.sample(x0 + h, 0.0, z)?;
    let down = field.sample(x0 - h, 0.0, z)?;
    let mid = field.sample(x0, 0.0, z)?;
    Ok(LineSample {
        grad: [(up.n_plus - down.n_plus) / (2.0 * h), (up.n_minus - down.n_minus) / (2.0 * h)],
        kappa: [mid.kappa_plus, mid.kappa_minus],
    })
}

fn attenuation(kp: f64, z: &[f64], kappa: &[f64]) -> Vec<f64> {
    cumulative_trapezoid(z, kappa).into_iter().map(|a| (-kp * a).exp()).collect()
}

fn warn_gain(t: &[f64], label: &str) {
    if let Some(max) = t.iter().copied().reduce(f64::max) {
        if max > 1.0 + 1e-6 {
            log::warn!("transmission {label} exceeds unity (max {max:.6}): probe gain on this line");
        }
    }
}

/// Accumulated deflection angles along the undeflected line x = x0, y = 0,
/// with transmissions on the same grid.
pub fn deflection_angles(
    field: &dyn IndexField,
    x0: f64,
    length: f64,
    steps: usize,
    h: f64,
) -> Result<DeflectionProfile> {
    check_grid(length, steps)?;
    check_step(h)?;
    let z = z_grid(length, steps);
    let samples = z.par_iter().map(|&zj| sample_line(field, x0, zj, h)).collect::<Result<Vec<_>>>()?;

    let col = |f: &dyn Fn(&LineSample) -> f64| samples.iter().map(f).collect::<Vec<_>>();
    let theta_plus = cumulative_trapezoid(&z, &col(&|s| s.grad[0]));
    let theta_minus = cumulative_trapezoid(&z, &col(&|s| s.grad[1]));
    let phi = theta_plus.iter().zip(&theta_minus).map(|(a, b)| a - b).collect();
    let kp = field.probe_wavenumber();
    let t_plus = attenuation(kp, &z, &col(&|s| s.kappa[0]));
    let t_minus = attenuation(kp, &z, &col(&|s| s.kappa[1]));
    warn_gain(&t_plus, "T+");
    warn_gain(&t_minus, "T-");

    Ok(DeflectionProfile { z_grid: z, theta_plus, theta_minus, phi, t_plus, t_minus })
}

/// exp(−k_p ∫₀ᴸ Im χ dz) along x = x0, y = 0.
pub fn transmission(field: &dyn IndexField, x0: f64, length: f64, component: Component, steps: usize) -> Result<f64> {
    check_grid(length, steps)?;
    let z = z_grid(length, steps);
    let kappa =
        z.par_iter().map(|&zj| field.sample(x0, 0.0, zj).map(|s| s.kappa(component))).collect::<Result<Vec<_>>>()?;
    let t = *attenuation(field.probe_wavenumber(), &z, &kappa).last().expect("grid is non-empty");
    warn_gain(&[t], if component == Component::Plus { "T+" } else { "T-" });
    Ok(t)
}

/// Settings for [`trace_ray`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySettings {
    pub length: f64,
    pub steps: usize,
    /// Finite-difference step for ∂n/∂x.
    pub h: f64,
    /// The ray fails once |X| exceeds this.
    pub x_bound: f64,
}

/// Integrates X″ = ∂n/∂x(X, z) with classical RK4, evaluating the gradient on
/// the moving ray.
pub fn trace_ray(
    field: &dyn IndexField,
    x0: f64,
    slope0: f64,
    component: Component,
    settings: &RaySettings,
) -> Result<RayPath> {
    check_grid(settings.length, settings.steps)?;
    check_step(settings.h)?;
    let z = z_grid(settings.length, settings.steps);
    let dz = settings.length / settings.steps as f64;
    let accel = |x: f64, zz: f64| -> Result<f64> {
        if x.is_nan() || x.abs() > settings.x_bound {
            return Err(Error::RayEscaped { z: zz, x });
        }
        index_gradient(field, x, zz, component, settings.h)
    };

    let mut xs = Vec::with_capacity(z.len());
    let mut ss = Vec::with_capacity(z.len());
    let (mut x, mut s) = (x0, slope0);
    xs.push(x);
    ss.push(s);
    for j in 0..settings.steps {
        let zj = z[j];
        let zm = zj + 0.5 * dz;
        let k1x = s;
        let k1s = accel(x, zj)?;
        let k2x = s + 0.5 * dz * k1s;
        let k2s = accel(x + 0.5 * dz * k1x, zm)?;
        let k3x = s + 0.5 * dz * k2s;
        let k3s = accel(x + 0.5 * dz * k2x, zm)?;
        let k4x = s + dz * k3s;
        let k4s = accel(x + dz * k3x, z[j + 1])?;
        x += dz / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        s += dz / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        if x.is_nan() || x.abs() > settings.x_bound {
            return Err(Error::RayEscaped { z: z[j + 1], x });
        }
        xs.push(x);
        ss.push(s);
    }
    Ok(RayPath { z, x: xs, slope: ss })
}

/// Trajectory implied by the fixed-line angles: X(z) = x0 + ∫θ dz.
pub fn fixed_line_path(profile: &DeflectionProfile, x0: f64, component: Component) -> RayPath {
    let theta = profile.theta(component).to_vec();
    let x = cumulative_trapezoid(&profile.z_grid, &theta).into_iter().map(|d| x0 + d).collect();
    RayPath { z: profile.z_grid.clone(), x, slope: theta }
}

/// Positions z > 0 where x₊ − x₋ changes sign, linearly interpolated.
/// Exact zeros are skipped rather than counted.
pub fn find_foci(path_plus: &RayPath, path_minus: &RayPath) -> Vec<f64> {
    let n = path_plus.z.len().min(path_minus.z.len());
    let mut foci = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for j in 0..n {
        let z = path_plus.z[j];
        let d = path_plus.x[j] - path_minus.x[j];
        if z <= 0.0 || d == 0.0 {
            continue;
        }
        if let Some((zp, dp)) = last {
            if dp.signum() != d.signum() {
                foci.push(zp + (z - zp) * dp / (dp - d));
            }
        }
        last = Some((z, d));
    }
    foci
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn linear(alpha: f64) -> impl Fn(f64, f64, f64) -> SusceptibilitySample + Sync {
        move |x, _, _| {
            let chi = Complex64::new(alpha * x / (2.0 * std::f64::consts::PI), 0.0);
            SusceptibilitySample::from_chi(chi, -chi)
        }
    }

    #[test]
    fn linear_index_gradient_is_exact() {
        let f = FnField::new(1.0, linear(0.37));
        let g = index_gradient(&f, 0.2, 0.0, Component::Plus, 1e-3).unwrap();
        assert!((g - 0.37).abs() < 1e-12);
        assert_eq!(index_gradient_y(&f, 0.2, 0.0, Component::Plus, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn linear_index_deflection_and_antisymmetric_phi() {
        let f = FnField::new(1.0, linear(0.01));
        let p = deflection_angles(&f, 0.0, 2.0, 100, 1e-3).unwrap();
        assert!((p.theta_plus.last().unwrap() - 0.02).abs() < 1e-12);
        assert!((p.phi.last().unwrap() - 0.04).abs() < 1e-12);
        assert!(p.t_plus.iter().all(|&t| t == 1.0));
    }

    #[test]
    fn constant_absorption() {
        let kappa = 1e-5;
        let f = FnField::new(1e4, move |_, _, _| {
            let chi = Complex64::new(0.0, kappa);
            SusceptibilitySample::from_chi(chi, chi)
        });
        let t = transmission(&f, 0.0, 3.0, Component::Minus, 10).unwrap();
        assert!((t - (-1e4 * kappa * 3.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn free_ray_is_straight() {
        let f = FnField::new(1.0, |_, _, _| SusceptibilitySample::from_chi(Complex64::default(), Complex64::default()));
        let s = RaySettings { length: 1.0, steps: 10, h: 1e-3, x_bound: 1.0 };
        let r = trace_ray(&f, 0.1, 0.02, Component::Plus, &s).unwrap();
        assert!((r.x[10] - 0.12).abs() < 1e-15);
    }

    #[test]
    fn escaping_ray_is_reported() {
        let f = FnField::new(1.0, linear(1.0));
        let s = RaySettings { length: 10.0, steps: 100, h: 1e-3, x_bound: 1.0 };
        assert!(matches!(trace_ray(&f, 0.0, 0.0, Component::Plus, &s), Err(Error::RayEscaped { .. })));
    }

    fn path(z: &[f64], x: impl Fn(f64) -> f64) -> RayPath {
        RayPath { z: z.to_vec(), x: z.iter().map(|&v| x(v)).collect(), slope: vec![0.0; z.len()] }
    }

    #[test]
    fn foci_of_toy_paths() {
        let z = z_grid(1.0, 100);
        let a = path(&z, |v| (6.0 * v).sin());
        let b = path(&z, |v| -(6.0 * v).sin());
        assert!(find_foci(&a, &a).is_empty());
        let f = find_foci(&a, &b);
        assert_eq!(f.len(), 1);
        assert!((f[0] - std::f64::consts::PI / 6.0).abs() < 1e-3);
    }
}
