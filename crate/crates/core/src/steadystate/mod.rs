//! Zeroth- and first-order steady states of the tripod density matrix.
//!
//! The fifteen unknowns are ordered
//! `[ρ11, ρ22, ρ00, ρ31, ρ13, ρ32, ρ23, ρ30, ρ03, ρ01, ρ10, ρ20, ρ02, ρ21, ρ12]`;
//! ρ33 is eliminated through the trace.

mod linalg;
pub mod master;

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::medium::{AtomicParams, RabiTriple};
use crate::Component;

pub use linalg::{solve_linear, Factorized};
pub use master::{time_evolve, DensityMatrix, Evolution, ProbeField};

pub type CVec15 = SVector<Complex64, 15>;
pub type CMat15 = SMatrix<Complex64, 15, 15>;

/// Positions of the density-matrix elements in the 15-vector.
pub mod idx {
    pub const R11: usize = 0;
    pub const R22: usize = 1;
    pub const R00: usize = 2;
    pub const R31: usize = 3;
    pub const R13: usize = 4;
    pub const R32: usize = 5;
    pub const R23: usize = 6;
    pub const R30: usize = 7;
    pub const R03: usize = 8;
    pub const R01: usize = 9;
    pub const R10: usize = 10;
    pub const R20: usize = 11;
    pub const R02: usize = 12;
    pub const R21: usize = 13;
    pub const R12: usize = 14;

    /// (ρij, ρji) pairs.
    pub const CONJUGATE_PAIRS: [(usize, usize); 6] =
        [(R31, R13), (R32, R23), (R30, R03), (R01, R10), (R20, R02), (R21, R12)];

    /// Level labels (i, j) for each entry, levels numbered 0..=3.
    pub const LEVELS: [(usize, usize); 15] = [
        (1, 1),
        (2, 2),
        (0, 0),
        (3, 1),
        (1, 3),
        (3, 2),
        (2, 3),
        (3, 0),
        (0, 3),
        (0, 1),
        (1, 0),
        (2, 0),
        (0, 2),
        (2, 1),
        (1, 2),
    ];
}

/// Dense system `matrix · x = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: CMat15,
    pub rhs: CVec15,
}

impl LinearSystem {
    pub fn is_finite(&self) -> bool {
        self.matrix.iter().chain(self.rhs.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Coefficient matrix shared by all orders; `omega` shifts every diagonal by iω
/// (zero for the zeroth order, ω_pc for the first-order systems).
fn coefficient_matrix(p: &AtomicParams, rabi: &RabiTriple, omega: f64) -> CMat15 {
    use idx::*;
    let t1 = -I * rabi.g1;
    let t2 = -I * rabi.g2;
    let f0 = -I * rabi.g0;
    let (t1c, t2c, f0c) = (t1.conj(), t2.conj(), f0.conj());

    let d = p.delta_control;
    let dz = p.delta_zeeman;
    let ge = p.optical_dephasing();
    let gg = p.ground_dephasing();
    let p31 = Complex64::new(-ge, d + dz);
    let p32 = Complex64::new(-ge, d - dz);
    let p30 = Complex64::new(-ge, d);
    let p01 = Complex64::new(-gg, dz);
    let p20 = Complex64::new(-gg, dz);
    let p21 = Complex64::new(-gg, 2.0 * dz);

    let mut a = CMat15::zeros();
    for (row, rate) in [(R11, p.gamma13), (R22, p.gamma23), (R00, p.gamma03)] {
        for col in [R11, R22, R00] {
            a[(row, col)] = c(-rate);
        }
    }
    a[(R11, R31)] = t1c;
    a[(R11, R13)] = t1;
    a[(R22, R32)] = t2c;
    a[(R22, R23)] = t2;
    a[(R00, R30)] = f0c;
    a[(R00, R03)] = f0;

    let mut fill_pop = |row: usize, w: [f64; 3], v: Complex64| {
        a[(row, R11)] = -w[0] * v;
        a[(row, R22)] = -w[1] * v;
        a[(row, R00)] = -w[2] * v;
    };
    fill_pop(R31, [2.0, 1.0, 1.0], t1);
    fill_pop(R13, [2.0, 1.0, 1.0], t1c);
    fill_pop(R32, [1.0, 2.0, 1.0], t2);
    fill_pop(R23, [1.0, 2.0, 1.0], t2c);
    fill_pop(R30, [1.0, 1.0, 2.0], f0);
    fill_pop(R03, [1.0, 1.0, 2.0], f0c);

    a[(R31, R31)] = p31;
    a[(R31, R01)] = -f0;
    a[(R31, R21)] = -t2;
    a[(R13, R13)] = p31.conj();
    a[(R13, R10)] = -f0c;
    a[(R13, R12)] = -t2c;

    a[(R32, R32)] = p32;
    a[(R32, R02)] = -f0;
    a[(R32, R12)] = -t1;
    a[(R23, R23)] = p32.conj();
    a[(R23, R20)] = -f0c;
    a[(R23, R21)] = -t1c;

    a[(R30, R30)] = p30;
    a[(R30, R10)] = -t1;
    a[(R30, R20)] = -t2;
    a[(R03, R03)] = p30.conj();
    a[(R03, R01)] = -t1c;
    a[(R03, R02)] = -t2c;

    a[(R01, R31)] = f0c;
    a[(R01, R03)] = t1;
    a[(R01, R01)] = p01;
    a[(R10, R13)] = f0;
    a[(R10, R30)] = t1c;
    a[(R10, R10)] = p01.conj();

    a[(R20, R23)] = f0;
    a[(R20, R30)] = t2c;
    a[(R20, R20)] = p20;
    a[(R02, R32)] = f0c;
    a[(R02, R03)] = t2;
    a[(R02, R02)] = p20.conj();

    a[(R21, R31)] = t2c;
    a[(R21, R23)] = t1;
    a[(R21, R21)] = p21;
    a[(R12, R13)] = t2;
    a[(R12, R32)] = t1c;
    a[(R12, R12)] = p21.conj();

    if omega != 0.0 {
        for k in 0..15 {
            a[(k, k)] += I * omega;
        }
    }
    a
}

/// Zeroth-order system (A₀, B₀).
pub fn assemble_zeroth(params: &AtomicParams, rabi: &RabiTriple) -> LinearSystem {
    use idx::*;
    let matrix = coefficient_matrix(params, rabi, 0.0);
    let t1 = -I * rabi.g1;
    let t2 = -I * rabi.g2;
    let f0 = -I * rabi.g0;
    let mut rhs = CVec15::zeros();
    rhs[R11] = c(-params.gamma13);
    rhs[R22] = c(-params.gamma23);
    rhs[R00] = c(-params.gamma03);
    rhs[R31] = -t1;
    rhs[R13] = -t1.conj();
    rhs[R32] = -t2;
    rhs[R23] = -t2.conj();
    rhs[R30] = -f0;
    rhs[R03] = -f0.conj();
    LinearSystem { matrix, rhs }
}

/// Matrix A± of the first-order systems. Both branches share it.
pub fn first_order_matrix(params: &AtomicParams, rabi: &RabiTriple) -> CMat15 {
    coefficient_matrix(params, rabi, params.omega_pc())
}

/// Source term B± built from a solved zeroth-order vector.
pub fn first_order_rhs(x0: &CVec15, branch: Component) -> CVec15 {
    use idx::*;
    let k = I * FRAC_1_SQRT_2;
    let one = c(1.0);
    let mut b = CVec15::zeros();
    match branch {
        Component::Plus => {
            b[R11] = k * x0[R13];
            b[R31] = -k * (2.0 * x0[R11] + x0[R22] + x0[R00] - one);
            b[R32] = -k * x0[R12];
            b[R30] = -k * x0[R10];
            b[R01] = k * x0[R03];
            b[R21] = k * x0[R23];
        }
        Component::Minus => {
            b[R22] = k * x0[R23];
            b[R31] = -k * x0[R21];
            b[R32] = -k * (x0[R11] + 2.0 * x0[R22] + x0[R00] - one);
            b[R30] = -k * x0[R20];
            b[R02] = k * x0[R03];
            b[R12] = k * x0[R13];
        }
    }
    b
}

/// First-order system (A±, B±) for one probe component.
pub fn assemble_first(params: &AtomicParams, rabi: &RabiTriple, x0: &CVec15, branch: Component) -> LinearSystem {
    LinearSystem { matrix: first_order_matrix(params, rabi), rhs: first_order_rhs(x0, branch) }
}

/// Zeroth-order vector and the two first-order probe responses at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateSolution {
    pub x0: CVec15,
    pub x_plus: CVec15,
    pub x_minus: CVec15,
}

impl SteadyStateSolution {
    pub fn rho33(&self) -> f64 {
        1.0 - (self.x0[idx::R11] + self.x0[idx::R22] + self.x0[idx::R00]).re
    }

    /// ρ′₃₁ of the σ₊ branch.
    pub fn coherence_plus(&self) -> Complex64 {
        self.x_plus[idx::R31]
    }

    /// ρ′₃₂ of the σ₋ branch.
    pub fn coherence_minus(&self) -> Complex64 {
        self.x_minus[idx::R32]
    }

    pub fn coherence(&self, component: Component) -> Complex64 {
        match component {
            Component::Plus => self.coherence_plus(),
            Component::Minus => self.coherence_minus(),
        }
    }

    /// Reality of populations, ρ33 ∈ [0, 1] and conjugate symmetry of the
    /// zeroth-order coherences, all to `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        for (name, k) in [("rho11", idx::R11), ("rho22", idx::R22), ("rho00", idx::R00)] {
            let v = self.x0[k];
            if v.im.abs() >= tol {
                return Err(Error::InvariantViolation(format!("Im {name} = {:.3e}", v.im)));
            }
            if v.re < -tol || v.re > 1.0 + tol {
                return Err(Error::InvariantViolation(format!("{name} = {:.6e} outside [0, 1]", v.re)));
            }
        }
        let r33 = self.rho33();
        if r33 < -tol || r33 > 1.0 + tol {
            return Err(Error::InvariantViolation(format!("rho33 = {r33:.6e} outside [0, 1]")));
        }
        for (a, b) in idx::CONJUGATE_PAIRS {
            let err = (self.x0[a] - self.x0[b].conj()).norm();
            if err >= tol {
                let (i, j) = idx::LEVELS[a];
                return Err(Error::InvariantViolation(format!("rho{i}{j} not conjugate to rho{j}{i}: {err:.3e}")));
            }
        }
        Ok(())
    }
}

/// Solves the zeroth-order system, then both first-order systems with one
/// factorization of A±.
pub fn steady_state(params: &AtomicParams, rabi: &RabiTriple) -> Result<SteadyStateSolution> {
    let zeroth = assemble_zeroth(params, rabi);
    let x0 = solve_linear(&zeroth)?;
    let a1 = if params.omega_pc() == 0.0 { zeroth.matrix } else { first_order_matrix(params, rabi) };
    let lu = Factorized::new(&a1)?;
    let x_plus = lu.solve(&first_order_rhs(&x0, Component::Plus));
    let x_minus = lu.solve(&first_order_rhs(&x0, Component::Minus));
    Ok(SteadyStateSolution { x0, x_plus, x_minus })
}

#[cfg(test)]
mod tests {
    use super::idx::*;
    use super::*;

    fn rabi(g: f64) -> RabiTriple {
        RabiTriple { g0: c(g), g1: c(g), g2: c(g) }
    }

    #[test]
    fn printed_layout_of_population_row() {
        let r = RabiTriple { g0: c(0.3), g1: Complex64::new(0.5, 0.2), g2: c(0.1) };
        let s = assemble_zeroth(&AtomicParams::default(), &r);
        let t1 = -I * r.g1;
        assert_eq!(s.matrix[(R11, R31)], t1.conj());
        assert_eq!(s.matrix[(R11, R13)], t1);
    }

    #[test]
    fn zero_field_optical_row_is_diagonal() {
        let p = AtomicParams { gamma_coll: 0.1, ..Default::default() };
        let s = assemble_zeroth(&p, &RabiTriple::default());
        for col in 0..15 {
            if col != R31 {
                assert_eq!(s.matrix[(R31, col)], c(0.0));
            }
        }
        assert_eq!(s.matrix[(R31, R31)], Complex64::new(-1.5 - 0.1, 0.01));
    }

    #[test]
    fn first_order_rhs_examples() {
        let mut x0 = CVec15::zeros();
        x0[R11] = c(1.0);
        let bp = first_order_rhs(&x0, Component::Plus);
        assert!((bp[R31] - Complex64::new(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
        let bm = first_order_rhs(&x0, Component::Minus);
        assert_eq!(bm[R32], c(0.0));
    }

    #[test]
    fn first_order_matrix_equals_zeroth_at_zero_offset() {
        let p = AtomicParams { delta_probe: 0.4, delta_control: 0.4, ..Default::default() };
        let r = rabi(0.7);
        assert_eq!(first_order_matrix(&p, &r), assemble_zeroth(&p, &r).matrix);
        let q = AtomicParams { delta_probe: 0.5, ..p };
        let d = first_order_matrix(&q, &r) - assemble_zeroth(&q, &r).matrix;
        assert!((d - CMat15::identity() * (I * 0.1)).norm() < 1e-15);
    }

    #[test]
    fn zero_field_is_singular() {
        let s = assemble_zeroth(&AtomicParams::default(), &RabiTriple::default());
        assert!(matches!(solve_linear(&s), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn unit_rabi_solution_is_physical() {
        let p = AtomicParams { delta_zeeman: 0.0, gamma_coll: 1e-3, ..Default::default() };
        let sol = steady_state(&p, &rabi(1.0)).unwrap();
        sol.check_invariants(1e-10).unwrap();
        let total = sol.x0[R11] + sol.x0[R22] + sol.x0[R00];
        assert!((total.re + sol.rho33() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeeman_reversal_swaps_branches() {
        let p = AtomicParams { delta_zeeman: 0.37, delta_control: 0.2, delta_probe: -0.1, ..Default::default() };
        let q = AtomicParams { delta_zeeman: -0.37, ..p.clone() };
        let r = RabiTriple { g0: c(0.8), g1: c(0.6), g2: c(0.6) };
        let a = steady_state(&p, &r).unwrap();
        let b = steady_state(&q, &r).unwrap();
        assert!((a.coherence_plus() - b.coherence_minus()).norm() < 1e-10);
        assert!((a.coherence_minus() - b.coherence_plus()).norm() < 1e-10);
    }
}
