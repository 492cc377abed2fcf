//! Thin singular value decomposition by one-sided (Hestenes) Jacobi.
//!
//! Columns of a working copy of `A` are orthogonalised pairwise by plane
//! rotations that are accumulated into `V`. On convergence the column norms
//! are the singular values and the normalised columns are the left singular
//! vectors. Columns whose norm is at rounding level are flushed to an exact
//! zero singular value and their left vectors are completed to an orthonormal
//! set.

use crate::error::{Error, Result};
use crate::linalg::matrix::Matrix;
use crate::scalar::Scalar;

/// Maximum number of cyclic sweeps before reporting non-convergence.
pub const DEFAULT_MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdOptions {
    pub max_sweeps: usize,
    /// Relative orthogonality threshold; `None` selects the scalar default.
    pub tol: Option<f64>,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            max_sweeps: DEFAULT_MAX_SWEEPS,
            tol: None,
        }
    }
}

/// Thin SVD `A = U·diag(σ)·Vᵀ` with `k = min(m, n)` singular triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult<T> {
    u: Matrix<T>,
    sigma: Vec<T>,
    v: Matrix<T>,
}

impl<T: Scalar> SvdResult<T> {
    /// `m × k`, orthonormal columns.
    pub fn u(&self) -> &Matrix<T> {
        &self.u
    }

    /// Non-increasing, non-negative.
    pub fn sigma(&self) -> &[T] {
        &self.sigma
    }

    /// `n × k`, orthonormal columns.
    pub fn v(&self) -> &Matrix<T> {
        &self.v
    }

    pub fn into_parts(self) -> (Matrix<T>, Vec<T>, Matrix<T>) {
        (self.u, self.sigma, self.v)
    }

    /// `U·diag(σ)·Vᵀ`.
    pub fn reconstruct(&self) -> Matrix<T> {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (j, &s) in self.sigma.iter().enumerate() {
                us[(i, j)] = us[(i, j)] * s;
            }
        }
        us.matmul(&self.v.transpose())
            .expect("U·Σ and Vᵀ are conformable")
    }
}

pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<SvdResult<T>> {
    svd_with(a, &SvdOptions::default())
}

pub fn svd_with<T: Scalar>(a: &Matrix<T>, opts: &SvdOptions) -> Result<SvdResult<T>> {
    if a.rows() >= a.cols() {
        jacobi_tall(a, opts)
    } else {
        let t = jacobi_tall(&a.transpose(), opts)?;
        Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (head, tail) = cols.split_at_mut(q);
    let (xp, xq) = (&mut head[p], &mut tail[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (ap, aq) = (*a, *b);
        *a = c * ap - s * aq;
        *b = s * ap + c * aq;
    }
}

/// One-sided Jacobi on a matrix with `rows ≥ cols`.
fn jacobi_tall<T: Scalar>(a: &Matrix<T>, opts: &SvdOptions) -> Result<SvdResult<T>> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);

    let eps = T::epsilon();
    let tol = T::lit(opts.tol.unwrap_or(T::JACOBI_TOL)).max(T::from_usize_lossy(m) * eps);
    let null_tol = eps * a.frobenius_norm() * T::from_usize_lossy(m.max(n));

    let mut w: Vec<Vec<T>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();

    let two = T::lit(2.0);
    let mut converged = n < 2;
    for _ in 0..opts.max_sweeps {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                if alpha.sqrt() <= null_tol || beta.sqrt() <= null_tol {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                if gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * gamma);
                let sign = if zeta < T::zero() {
                    -T::one()
                } else {
                    T::one()
                };
                let t = sign / (zeta.abs() + T::one().hypot(zeta));
                let c = T::one() / T::one().hypot(t);
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: opts.max_sweeps,
        });
    }

    let norms: Vec<T> = w
        .iter()
        .map(|col| {
            let s = dot(col, col).sqrt();
            if s <= null_tol {
                T::zero()
            } else {
                s
            }
        })
        .collect();

    // Stable: ties keep the Jacobi column order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let mut u_cols: Vec<Vec<T>> = Vec::with_capacity(n);
    for &j in &order {
        let s = norms[j];
        if s > T::zero() {
            u_cols.push(w[j].iter().map(|&x| x / s).collect());
        }
    }
    let u_cols = complete_orthonormal(u_cols, m, n);

    let sigma: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted: Vec<Vec<T>> = order.iter().map(|&j| v[j].clone()).collect();

    Ok(SvdResult {
        u: from_columns(&u_cols, m),
        sigma,
        v: from_columns(&v_sorted, n),
    })
}

/// Extends an orthonormal set of `dim`-vectors to `target` vectors using
/// re-orthogonalised standard basis candidates.
pub(crate) fn complete_orthonormal<T: Scalar>(
    mut cols: Vec<Vec<T>>,
    dim: usize,
    target: usize,
) -> Vec<Vec<T>> {
    assert!(target <= dim, "cannot exceed the ambient dimension");
    let mut candidate = 0;
    while cols.len() < target {
        assert!(
            candidate < dim,
            "standard basis exhausted during completion"
        );
        let mut x = vec![T::zero(); dim];
        x[candidate] = T::one();
        candidate += 1;
        // Two Gram-Schmidt passes restore orthogonality to working precision.
        for _ in 0..2 {
            for c in &cols {
                let proj = dot(c, &x);
                for (xi, &ci) in x.iter_mut().zip(c) {
                    *xi = *xi - proj * ci;
                }
            }
        }
        let norm = dot(&x, &x).sqrt();
        if norm > T::lit(0.5) / T::from_usize_lossy(dim).sqrt() {
            cols.push(x.into_iter().map(|xi| xi / norm).collect());
        }
    }
    cols
}

pub(crate) fn from_columns<T: Scalar>(cols: &[Vec<T>], rows: usize) -> Matrix<T> {
    let mut m = Matrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}
