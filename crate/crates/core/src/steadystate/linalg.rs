use nalgebra::Const;
use nalgebra::LU;

use super::{CMat15, CVec15, LinearSystem};
use crate::error::{Error, Result};

const PIVOT_RTOL: f64 = 1e-12;

/// LU factors of a 15×15 system, reusable across right-hand sides.
pub struct Factorized {
    matrix: CMat15,
    lu: LU<num_complex::Complex64, Const<15>, Const<15>>,
}

impl Factorized {
    pub fn new(matrix: &CMat15) -> Result<Self> {
        let row_norm = matrix.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let threshold = PIVOT_RTOL * row_norm;
        let lu = matrix.lu();
        let u = lu.u();
        let (mut min_pivot, mut max_pivot) = (f64::INFINITY, 0.0f64);
        for k in 0..15 {
            let p = u[(k, k)].norm();
            min_pivot = min_pivot.min(p);
            max_pivot = max_pivot.max(p);
        }
        if min_pivot.is_nan() || min_pivot < threshold || threshold == 0.0 {
            return Err(Error::SingularSystem { pivot: min_pivot, threshold });
        }
        log::trace!("lu pivots: min {min_pivot:.3e}, max {max_pivot:.3e}, ratio {:.3e}", max_pivot / min_pivot);
        Ok(Self { matrix: *matrix, lu })
    }

    /// Solves with one step of iterative refinement.
    pub fn solve(&self, rhs: &CVec15) -> CVec15 {
        let mut x = self.lu.solve(rhs).expect("pivots checked at factorization");
        let r = rhs - self.matrix * x;
        if let Some(dx) = self.lu.solve(&r) {
            x += dx;
        }
        x
    }
}

/// Dense LU solve with partial pivoting. Fails with `SingularSystem` when a
/// pivot falls below 10⁻¹² of the largest absolute row sum.
pub fn solve_linear(system: &LinearSystem) -> Result<CVec15> {
    Ok(Factorized::new(&system.matrix)?.solve(&system.rhs))
}
