//! Direct integration of the four-level master equation at ω_pc = 0.
//!
//! Used as an oracle for the algebraic steady states. Levels are indexed
//! 0, 1, 2, 3 and ρ is vectorized row-major (ρᵢⱼ ↦ 4i + j).

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use super::{idx, CVec15};
use crate::error::{Error, Result};
use crate::medium::{AtomicParams, RabiTriple};
use crate::Component;

type Mat4 = SMatrix<Complex64, 4, 4>;
type Mat16 = SMatrix<Complex64, 16, 16>;
type Vec16 = SVector<Complex64, 16>;

/// Weak probe amplitudes on the σ₊ (1↔3) and σ₋ (2↔3) transitions, units of γ.
///
/// Each circular component couples with weight 1/√2 of the linearly polarized
/// probe amplitude, matching the i/√2 sources of the first-order systems.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProbeField {
    pub g1: Complex64,
    pub g2: Complex64,
}

/// Full 4×4 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub Mat4);

impl DensityMatrix {
    /// Unpolarized ground state, 1/3 in each of |0⟩, |1⟩, |2⟩.
    pub fn unpolarized() -> Self {
        let mut m = Mat4::zeros();
        for k in 0..3 {
            m[(k, k)] = Complex64::new(1.0 / 3.0, 0.0);
        }
        Self(m)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The fifteen independent elements in steady-state vector order.
    pub fn to_vector(&self) -> CVec15 {
        CVec15::from_fn(|k, _| {
            let (i, j) = idx::LEVELS[k];
            self.0[(i, j)]
        })
    }

    fn to_vec16(self) -> Vec16 {
        Vec16::from_fn(|k, _| self.0[(k / 4, k % 4)])
    }

    fn from_vec16(v: &Vec16) -> Self {
        Self(Mat4::from_fn(|i, j| v[4 * i + j]))
    }
}

/// State at the end of an integration and the size of dρ/dt there.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub rho: DensityMatrix,
    pub time: f64,
    /// max |dρ/dt|, units of γ.
    pub residual: f64,
}

impl Evolution {
    pub fn into_converged(self, tol: f64) -> Result<DensityMatrix> {
        if self.residual < tol {
            Ok(self.rho)
        } else {
            Err(Error::NonConvergence { residual: self.residual, time: self.time })
        }
    }
}

fn kron(a: &Mat4, b: &Mat4) -> Mat16 {
    Mat16::from_fn(|r, c| a[(r / 4, c / 4)] * b[(r % 4, c % 4)])
}

fn hamiltonian(params: &AtomicParams, rabi: &RabiTriple, probe: &ProbeField) -> Mat4 {
    let mut h = Mat4::zeros();
    h[(1, 1)] = Complex64::new(params.delta_zeeman, 0.0);
    h[(2, 2)] = Complex64::new(-params.delta_zeeman, 0.0);
    h[(3, 3)] = Complex64::new(-params.delta_control, 0.0);
    let couplings = [(0, rabi.g0), (1, rabi.g1 + probe.g1 * FRAC_1_SQRT_2), (2, rabi.g2 + probe.g2 * FRAC_1_SQRT_2)];
    for (k, g) in couplings {
        h[(3, k)] = -g;
        h[(k, 3)] = -g.conj();
    }
    h
}

/// Liouvillian superoperator acting on the row-major vectorized ρ.
pub fn liouvillian(params: &AtomicParams, rabi: &RabiTriple, probe: &ProbeField) -> Mat16 {
    let id = Mat4::identity();
    let h = hamiltonian(params, rabi, probe);
    let i = Complex64::new(0.0, 1.0);
    let mut l = (kron(&h, &id) - kron(&id, &h.transpose())) * (-i);
    for (k, rate) in [(0, params.gamma03), (1, params.gamma13), (2, params.gamma23)] {
        let mut jump = Mat4::zeros();
        jump[(k, 3)] = Complex64::new(rate.sqrt(), 0.0);
        let jdj = jump.adjoint() * jump;
        let half = Complex64::new(0.5, 0.0);
        l += kron(&jump, &jump.conjugate()) - kron(&jdj, &id) * half - kron(&id, &jdj.transpose()) * half;
    }
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                l[(4 * a + b, 4 * a + b)] -= params.gamma_coll;
            }
        }
    }
    l
}

/// Step size 10⁻³ / max(1, |G|, |Δ|, |Δz|) in units of 1/γ.
pub fn default_time_step(params: &AtomicParams, rabi: &RabiTriple) -> f64 {
    let scale = 1f64.max(rabi.max_abs()).max(params.delta_control.abs()).max(params.delta_zeeman.abs());
    1e-3 / scale
}

/// One classical RK4 step of dv/dt = Lv, returned as M − I so that repeated
/// squaring keeps the small increment at full precision.
fn rk4_increment(l: &Mat16, dt: f64) -> Mat16 {
    let a = l * Complex64::new(dt, 0.0);
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    let c = |v: f64| Complex64::new(v, 0.0);
    a + a2 * c(0.5) + a3 * c(1.0 / 6.0) + a4 * c(1.0 / 24.0)
}

/// Applies `steps` RK4 steps by repeated squaring: (I + K)² = I + (2K + K²).
fn apply_steps(mut k: Mat16, mut steps: u64, mut v: Vec16) -> Vec16 {
    let two = Complex64::new(2.0, 0.0);
    while steps > 0 {
        if steps & 1 == 1 {
            v += k * v;
        }
        steps >>= 1;
        if steps > 0 {
            k = k * two + k * k;
        }
    }
    v
}

/// Integrates from the unpolarized ground state to `t_end` (units of 1/γ) with
/// fixed RK4 steps of at most `dt`.
pub fn time_evolve(
    params: &AtomicParams,
    rabi: &RabiTriple,
    probe: &ProbeField,
    t_end: f64,
    dt: f64,
) -> Result<Evolution> {
    if params.omega_pc() != 0.0 {
        return Err(Error::InvalidParameter("time evolution requires omega_pc = 0".into()));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("bad integration window t_end={t_end}, dt={dt}")));
    }
    let l = liouvillian(params, rabi, probe);
    let steps = (t_end / dt).ceil() as u64;
    let v0 = DensityMatrix::unpolarized().to_vec16();
    let v = if steps == 0 { v0 } else { apply_steps(rk4_increment(&l, t_end / steps as f64), steps, v0) };
    let residual = (l * v).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Evolution { rho: DensityMatrix::from_vec16(&v), time: t_end, residual })
}

/// Evolves with the default step, doubling the horizon from 100/γ until
/// max|dρ/dt| < `tol` or `t_max` is exceeded.
pub fn relax_to_steady_state(
    params: &AtomicParams,
    rabi: &RabiTriple,
    probe: &ProbeField,
    tol: f64,
    t_max: f64,
) -> Result<DensityMatrix> {
    relax(params, rabi, probe, tol, t_max).and_then(|ev| ev.into_converged(tol))
}

fn relax(params: &AtomicParams, rabi: &RabiTriple, probe: &ProbeField, tol: f64, t_max: f64) -> Result<Evolution> {
    let dt = default_time_step(params, rabi);
    let mut t = 100.0f64.min(t_max);
    loop {
        let ev = time_evolve(params, rabi, probe, t, dt)?;
        if ev.residual < tol || t >= t_max {
            return Ok(ev);
        }
        t = (2.0 * t).min(t_max);
    }
}

/// First-order probe coefficient ρ′₃₁ (σ₊) or ρ′₃₂ (σ₋) extracted from
/// probe-on relaxations at amplitude `eps`.
///
/// At ω_pc = 0 the coherence responds to both g and g*; evaluating at the four
/// phases ±eps, ±i·eps isolates the coefficient of g to O(eps²).
pub fn probe_response(
    params: &AtomicParams,
    rabi: &RabiTriple,
    component: Component,
    eps: f64,
    tol: f64,
    t_max: f64,
) -> Result<Complex64> {
    let (row, col) = match component {
        Component::Plus => (3, 1),
        Component::Minus => (3, 2),
    };
    // all four runs share one horizon, well past the unprobed relaxation time
    let settle = relax(params, rabi, &ProbeField::default(), tol, t_max)?;
    if settle.residual >= tol {
        return Err(Error::NonConvergence { residual: settle.residual, time: settle.time });
    }
    let horizon = 8.0 * settle.time;
    let dt = default_time_step(params, rabi);
    let at = |g: Complex64| -> Result<Complex64> {
        let probe = match component {
            Component::Plus => ProbeField { g1: g, ..Default::default() },
            Component::Minus => ProbeField { g2: g, ..Default::default() },
        };
        Ok(time_evolve(params, rabi, &probe, horizon, dt)?.into_converged(tol)?.get(row, col))
    };
    let e = Complex64::new(eps, 0.0);
    let ie = Complex64::new(0.0, eps);
    let real = at(e)? - at(-e)?;
    let imag = at(ie)? - at(-ie)?;
    Ok((real - Complex64::new(0.0, 1.0) * imag) / (4.0 * eps))
}
