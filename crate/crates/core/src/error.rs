use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular linear system: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularSystem { pivot: f64, threshold: f64 },

    #[error("time evolution not converged: max |drho/dt| = {residual:.3e} at t = {time:.3e}/gamma")]
    NonConvergence { residual: f64, time: f64 },

    #[error("ray left the transverse bounds at z = {z:.6e} cm (x = {x:.6e} cm)")]
    RayEscaped { z: f64, x: f64 },

    #[error("FWHM is only defined for the Gaussian profile family")]
    WrongFamily,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("steady-state invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
