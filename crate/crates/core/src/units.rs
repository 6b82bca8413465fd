//! Physical constants and the ³⁹K D1 defaults.

use std::f64::consts::PI;

/// Natural linewidth A of the ³⁹K D1 line, rad/s.
pub const K39_D1_LINEWIDTH: f64 = 2.0 * PI * 6.079e6;

/// Common spontaneous rate γ = A/12, rad/s. All internal frequencies are in units of this.
pub const K39_GAMMA: f64 = K39_D1_LINEWIDTH / 12.0;

/// Probe/control wavelength, cm (769.9 nm).
pub const K39_D1_WAVELENGTH: f64 = 769.9e-7;

/// Bohr magneton over ħ, rad/s per gauss.
pub const BOHR_MAGNETON_OVER_HBAR: f64 = 2.0 * PI * 1.399_624_493e6;

/// Micrometres to centimetres.
pub const UM: f64 = 1e-4;

/// Millimetres to centimetres.
pub const MM: f64 = 1e-1;
