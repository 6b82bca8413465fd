//! Control-beam envelopes under oblique incidence.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::K39_D1_WAVELENGTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    Gaussian,
    LaguerreGauss,
}

/// Control-beam geometry. Lengths in cm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamSpec {
    pub family: ProfileFamily,
    /// Azimuthal index, LG only.
    pub m: u32,
    pub theta_c: f64,
    pub w0: f64,
    pub sigma: f64,
    /// Rayleigh length; `None` means πw₀²/λ.
    pub z_r: Option<f64>,
    /// Peak |envelope|.
    pub amplitude: f64,
    pub wavelength: f64,
}

impl Default for BeamSpec {
    fn default() -> Self {
        Self {
            family: ProfileFamily::Gaussian,
            m: 0,
            theta_c: PI / 4.0,
            w0: 120e-4,
            sigma: 2f64.sqrt() * 0.1,
            z_r: None,
            amplitude: 1.0,
            wavelength: K39_D1_WAVELENGTH,
        }
    }
}

impl BeamSpec {
    pub fn gaussian(sigma: f64, theta_c: f64) -> Self {
        Self { family: ProfileFamily::Gaussian, sigma, theta_c, ..Default::default() }
    }

    pub fn laguerre_gauss(m: u32, w0: f64, theta_c: f64) -> Self {
        Self { family: ProfileFamily::LaguerreGauss, m, w0, theta_c, ..Default::default() }
    }

    pub fn rayleigh_length(&self) -> f64 {
        self.z_r.unwrap_or_else(|| self.derived_rayleigh_length())
    }

    pub fn derived_rayleigh_length(&self) -> f64 {
        PI * self.w0 * self.w0 / self.wavelength
    }

    /// Characteristic transverse scale of the active profile.
    pub fn width(&self) -> f64 {
        match self.family {
            ProfileFamily::Gaussian => self.sigma,
            ProfileFamily::LaguerreGauss => self.w0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if !(self.w0 > 0.0 && self.w0.is_finite()) {
            return bad("w0 must be > 0");
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be > 0");
        }
        if !(0.0..PI / 2.0).contains(&self.theta_c) {
            return bad("theta_c must lie in [0, pi/2)");
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return bad("wavelength must be > 0");
        }
        if !self.amplitude.is_finite() {
            return bad("amplitude must be finite");
        }
        if let Some(z) = self.z_r {
            if !(z > 0.0 && z.is_finite()) {
                return bad("z_r must be > 0");
            }
        }
        Ok(())
    }
}

/// Rotates lab coordinates (x, z) into the beam frame (X, Z).
pub fn tilted_coordinates(x: f64, z: f64, theta_c: f64) -> (f64, f64) {
    let (s, c) = theta_c.sin_cos();
    (x * c - z * s, x * s + z * c)
}

/// Complex control envelope at a lab-frame point.
pub fn envelope(x: f64, y: f64, z: f64, beam: &BeamSpec) -> Complex64 {
    let (xb, zb) = tilted_coordinates(x, z, beam.theta_c);
    match beam.family {
        ProfileFamily::Gaussian => {
            let s2 = beam.sigma * beam.sigma;
            Complex64::new(beam.amplitude * (-(xb * xb + y * y) / s2).exp(), 0.0)
        }
        ProfileFamily::LaguerreGauss => laguerre_gauss(xb, y, zb, beam),
    }
}

fn laguerre_gauss(xb: f64, y: f64, zb: f64, beam: &BeamSpec) -> Complex64 {
    let m = beam.m as f64;
    let z_r = beam.rayleigh_length();
    let zeta = zb / z_r;
    let wz = beam.w0 * (1.0 + zeta * zeta).sqrt();
    let r2 = xb * xb + y * y;
    let r = r2.sqrt();
    let radial = (2f64.sqrt() * r / wz).powi(beam.m as i32);
    let amp = beam.amplitude * (beam.w0 / wz) * radial * (-r2 / (wz * wz)).exp() / lg_peak(m);

    let k = 2.0 * PI / beam.wavelength;
    let inv_rz = zb / (zb * zb + z_r * z_r);
    let phase = -k * r2 * inv_rz / 2.0 + m * y.atan2(xb) - (m + 1.0) * zeta.atan();
    Complex64::from_polar(amp, phase)
}

/// Maximum of (√2 r/w)^m exp(−r²/w²), attained at r = w√(m/2).
fn lg_peak(m: f64) -> f64 {
    if m == 0.0 {
        1.0
    } else {
        m.powf(m / 2.0) * (-m / 2.0).exp()
    }
}

/// Full width at half maximum of the Gaussian profile, 2√(2 ln 2)σ.
pub fn fwhm(beam: &BeamSpec) -> Result<f64> {
    match beam.family {
        ProfileFamily::Gaussian => Ok(2.0 * (2.0 * 2f64.ln()).sqrt() * beam.sigma),
        ProfileFamily::LaguerreGauss => Err(Error::WrongFamily),
    }
}
