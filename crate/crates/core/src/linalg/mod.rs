//! Dense linear algebra: matrices, thin SVD, random orthogonal matrices and
//! numerical rank.

mod matrix;
mod random;
mod svd;

pub use matrix::{compose, Matrix};
pub use random::{gaussian_matrix, random_unitary, random_unitary_with, seeded_rng};
pub use svd::{svd, svd_with, SvdOptions, SvdResult, DEFAULT_MAX_SWEEPS};

pub(crate) use svd::{complete_orthonormal, from_columns};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default relative rank tolerance for an `m × n` operator: `max(m, n)·ε`.
pub fn default_rank_tol<T: Scalar>(rows: usize, cols: usize) -> T {
    T::from_usize_lossy(rows.max(cols)) * T::epsilon()
}

/// Number of singular values strictly above `rel_tol · σ₁`.
///
/// `sigma` must be non-negative and sorted non-increasing.
pub fn numerical_rank<T: Scalar>(sigma: &[T], rel_tol: T) -> Result<usize> {
    if !(rel_tol > T::zero()) {
        return Err(Error::Precondition(format!(
            "rank tolerance must be positive, got {rel_tol}"
        )));
    }
    if sigma.iter().any(|&s| !(s >= T::zero())) {
        return Err(Error::Precondition(
            "singular values must be non-negative".into(),
        ));
    }
    if sigma.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Precondition(
            "singular values must be sorted non-increasing".into(),
        ));
    }
    let Some(&top) = sigma.first() else {
        return Ok(0);
    };
    if top == T::zero() {
        return Ok(0);
    }
    let threshold = rel_tol * top;
    Ok(sigma.iter().filter(|&&s| s > threshold).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&[4.0, 3.0, 0.0], 1e-12).unwrap(), 2);
        assert_eq!(numerical_rank(&[1.0, 1.0, 1.0], 1e-12).unwrap(), 3);
        assert_eq!(numerical_rank(&[1.0, 1e-15, 0.0], 1e-12).unwrap(), 1);
        assert_eq!(numerical_rank(&[0.0, 0.0], 1e-12).unwrap(), 0);
    }

    #[test]
    fn rank_rejects_bad_input() {
        assert!(matches!(
            numerical_rank(&[1.0, 2.0], 1e-12),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            numerical_rank(&[1.0, -1.0], 1e-12),
            Err(Error::Precondition(_))
        ));
        assert!(numerical_rank(&[1.0], 0.0).is_err());
    }

    #[test]
    fn default_tol_matches_shape() {
        assert_eq!(default_rank_tol::<f64>(3, 8), 8.0 * f64::EPSILON);
    }
}
