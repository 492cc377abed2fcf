//! Seeded random matrices. All generators draw `f64` samples from a ChaCha
//! stream and convert, so output is reproducible per seed on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::matrix::Matrix;
use crate::linalg::svd::from_columns;
use crate::scalar::Scalar;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard-normal entries.
pub fn gaussian_matrix<T: Scalar, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix<T> {
    let data = (0..rows * cols)
        .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
        .collect();
    Matrix::new(rows, cols, data).expect("normal samples are finite")
}

/// Haar-distributed orthogonal matrix: the Q factor of a Gaussian matrix
/// with the diagonal of R normalised to be positive.
pub fn random_unitary_with<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<T> {
    assert!(n >= 1, "random_unitary requires n >= 1");
    let g: Matrix<f64> = gaussian_matrix(n, n, rng);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut x = g.column(j);
        // Classical Gram-Schmidt applied twice; the projection coefficients
        // form R and the normalising norm is its (positive) diagonal.
        for _ in 0..2 {
            for c in &q {
                let proj: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (xi, ci) in x.iter_mut().zip(c) {
                    *xi -= proj * ci;
                }
            }
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm > 0.0, "Gaussian matrix is almost surely non-singular");
        q.push(x.into_iter().map(|v| v / norm).collect());
    }
    from_columns(&q, n).cast()
}

/// Deterministic `n × n` orthogonal matrix for the given seed.
pub fn random_unitary<T: Scalar>(n: usize, seed: u64) -> Matrix<T> {
    random_unitary_with(n, &mut seeded_rng(seed))
}
