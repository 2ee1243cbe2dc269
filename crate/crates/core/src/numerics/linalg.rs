use crate::error::{Result, WhError};
use crate::C64;
use nalgebra::{DMatrix, DVector};

const MAX_DIM: usize = 64;
const MAX_CONDITION: f64 = 1e14;

/// Singular values in descending order.
pub fn dense_svd(a: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// 2-norm condition number, infinite for an exactly singular matrix.
pub fn condition_number(a: &DMatrix<C64>) -> f64 {
    let s = dense_svd(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Solves `A x = b` by partial-pivot LU for square systems up to 64×64.
pub fn dense_solve(a: &DMatrix<C64>, b: &DVector<C64>) -> Result<DVector<C64>> {
    let n = a.nrows();
    if n != a.ncols() || n != b.len() {
        return Err(WhError::InvalidInput(format!(
            "dimension mismatch: {}x{} matrix, vector of {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    if n == 0 || n > MAX_DIM {
        return Err(WhError::InvalidInput(format!("dense_solve supports 1..={MAX_DIM} unknowns, got {n}")));
    }
    let condition = condition_number(a);
    if !(condition <= MAX_CONDITION) {
        return Err(WhError::SingularMatrix { condition });
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or(WhError::SingularMatrix { condition })
}
