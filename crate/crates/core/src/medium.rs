//! Physical parameters of the tripod vapor, control-field Rabi projections and
//! Zeeman shifts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{BOHR_MAGNETON_OVER_HBAR, K39_D1_WAVELENGTH, K39_GAMMA};

/// One physical configuration of the four-level system.
///
/// `gamma` is in rad/s and fixes the frequency unit; every other rate or
/// detuning is in units of `gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtomicParams {
    pub gamma: f64,
    pub gamma13: f64,
    pub gamma23: f64,
    pub gamma03: f64,
    pub gamma_coll: f64,
    pub delta_probe: f64,
    pub delta_control: f64,
    pub delta_zeeman: f64,
    /// Atoms per cm³.
    pub number_density: f64,
    /// cm.
    pub wavelength: f64,
    /// Peak control Rabi scale |d|ε₀/ħ.
    pub rabi_peak: f64,
    /// |d₃₀|/|d|.
    pub dipole_ratio: f64,
    /// Replaces the computed susceptibility prefactor when set.
    pub chi_prefactor: Option<f64>,
}

impl Default for AtomicParams {
    fn default() -> Self {
        Self {
            gamma: K39_GAMMA,
            gamma13: 1.0,
            gamma23: 1.0,
            gamma03: 1.0,
            gamma_coll: 0.0,
            delta_probe: 0.0,
            delta_control: 0.0,
            delta_zeeman: 0.01,
            number_density: 5e12,
            wavelength: K39_D1_WAVELENGTH,
            rabi_peak: 2.0,
            dipole_ratio: 1.0,
            chi_prefactor: None,
        }
    }
}

impl AtomicParams {
    /// Probe-control frequency difference δ − Δ.
    pub fn omega_pc(&self) -> f64 {
        self.delta_probe - self.delta_control
    }

    /// Dephasing of the optical coherences ρ₃ₖ. The excited level is the only one
    /// that decays, so all three share the same rate.
    pub fn optical_dephasing(&self) -> f64 {
        0.5 * (self.gamma13 + self.gamma23 + self.gamma03) + self.gamma_coll
    }

    /// Dephasing of the ground-state coherences ρⱼₖ, j,k ∈ {0,1,2}.
    pub fn ground_dephasing(&self) -> f64 {
        self.gamma_coll
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.gamma,
            self.gamma13,
            self.gamma23,
            self.gamma03,
            self.gamma_coll,
            self.delta_probe,
            self.delta_control,
            self.delta_zeeman,
            self.number_density,
            self.wavelength,
            self.rabi_peak,
            self.dipole_ratio,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("atomic parameters must be finite".into()));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParameter("gamma must be > 0".into()));
        }
        for (name, v) in [
            ("gamma13", self.gamma13),
            ("gamma23", self.gamma23),
            ("gamma03", self.gamma03),
            ("gamma_coll", self.gamma_coll),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        if self.number_density <= 0.0 {
            return Err(Error::InvalidParameter("number_density must be > 0".into()));
        }
        if self.wavelength <= 0.0 {
            return Err(Error::InvalidParameter("wavelength must be > 0".into()));
        }
        if let Some(p) = self.chi_prefactor {
            if !p.is_finite() {
                return Err(Error::InvalidParameter("chi_prefactor must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Control Rabi frequencies at one point, units of γ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RabiTriple {
    pub g0: Complex64,
    pub g1: Complex64,
    pub g2: Complex64,
}

impl RabiTriple {
    pub fn max_abs(&self) -> f64 {
        self.g0.norm().max(self.g1.norm()).max(self.g2.norm())
    }
}

/// Projects the control envelope onto the three transitions for incidence angle
/// `theta_c`. The in-plane component splits equally between σ₊ and σ₋.
pub fn rabi_from_envelope(envelope: Complex64, theta_c: f64, params: &AtomicParams) -> RabiTriple {
    let e = envelope * params.rabi_peak;
    let g = e * (theta_c.cos() / std::f64::consts::SQRT_2);
    RabiTriple { g0: e * (theta_c.sin() * params.dipole_ratio), g1: g, g2: g }
}

/// Zeeman shift μ_B·B·m·g_F/ħ in rad/s.
pub fn zeeman_splitting(b_gauss: f64, g_f: f64, m: i32) -> f64 {
    BOHR_MAGNETON_OVER_HBAR * b_gauss * f64::from(m) * g_f
}
