//! Steady-state optical response of a four-level tripod vapor and the
//! deflection of the circular components of a weak probe beam.
//!
//! The crate is organised bottom-up:
//!
//! - [`medium`]: physical parameters, control-field Rabi projections, Zeeman shifts.
//! - [`beams`]: obliquely incident Gaussian and Laguerre-Gauss control envelopes.
//! - [`steadystate`]: zeroth- and first-order density-matrix linear systems, and
//!   a master-equation time integrator used as an independent oracle.
//! - [`response`]: probe susceptibilities and refractive indices at a point.
//! - [`propagation`]: deflection angles, transmission, paraxial ray tracing, foci.
//!
//! Frequencies are angular and expressed in units of the common decay rate
//! `gamma`; lengths are in centimetres.

pub mod beams;
pub mod error;
pub mod medium;
pub mod propagation;
pub mod response;
pub mod steadystate;
pub mod units;

pub use beams::{BeamSpec, ProfileFamily};
pub use error::{Error, Result};
pub use medium::{AtomicParams, RabiTriple};
pub use propagation::{DeflectionProfile, IndexField, RayPath};
pub use response::{SusceptibilitySample, VaporCell};
pub use steadystate::{LinearSystem, SteadyStateSolution};

/// Circular component of the probe field.
///
/// `Plus` (σ₊) drives |1⟩↔|3⟩ and `Minus` (σ₋) drives |2⟩↔|3⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Plus,
    Minus,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Plus, Component::Minus];
}
