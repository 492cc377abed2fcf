//! Spectral states: the normalised squared singular spectrum of an operator,
//! viewed as a point of the probability simplex, together with the face
//! (support) structure that encodes operator rank.

use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};
use crate::scalar::Scalar;

/// A point `λ` of the probability simplex `Δ^{N−1}`.
///
/// Every coordinate is non-negative and the coordinates sum to one within
/// the scalar's simplex tolerance. States produced from operators are
/// additionally sorted non-increasing; states built from raw coordinates
/// keep the order they were given in.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState<T> {
    lambda: Vec<T>,
}

impl<T: Scalar> SpectralState<T> {
    pub fn new(lambda: Vec<T>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidState(
                "state must have at least one coordinate".into(),
            ));
        }
        if let Some(i) = lambda.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidState(format!("coordinate {i} is not finite")));
        }
        if let Some(i) = lambda.iter().position(|&x| x < T::zero()) {
            return Err(Error::InvalidState(format!(
                "coordinate {i} is negative ({})",
                lambda[i]
            )));
        }
        let sum: T = lambda.iter().copied().sum();
        if (sum - T::one()).abs() > T::lit(T::SIMPLEX_TOL) {
            return Err(Error::InvalidState(format!(
                "coordinates sum to {sum}, expected 1"
            )));
        }
        Ok(Self { lambda })
    }

    /// Normalises non-negative weights onto the simplex.
    pub fn from_weights(weights: &[T]) -> Result<Self> {
        if weights.iter().any(|&w| !(w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidState(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::InvalidState("weights sum to zero".into()));
        }
        Self::new(weights.iter().map(|&w| w / total).collect())
    }

    /// The barycentre `(1/N, …, 1/N)`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1);
        let v = T::one() / T::from_usize_lossy(n);
        Self { lambda: vec![v; n] }
    }

    /// The vertex `eᵢ` of `Δ^{N−1}`.
    pub fn vertex(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut lambda = vec![T::zero(); n];
        lambda[i] = T::one();
        Self { lambda }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.lambda
    }

    pub fn into_vec(self) -> Vec<T> {
        self.lambda
    }

    pub fn min_coordinate(&self) -> T {
        self.lambda.iter().copied().fold(T::infinity(), T::min)
    }

    /// Every coordinate exceeds the interior threshold.
    pub fn is_interior(&self) -> bool {
        self.min_coordinate() > T::lit(T::INTERIOR_THRESHOLD)
    }

    pub fn is_sorted_non_increasing(&self) -> bool {
        self.lambda.windows(2).all(|w| w[0] >= w[1])
    }

    /// `‖self − other‖_∞`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        check_same_dim(self, other)?;
        Ok(self
            .lambda
            .iter()
            .zip(&other.lambda)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    pub(crate) fn require_interior(&self, context: &'static str) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(Error::BoundaryState {
                min_coordinate: self.min_coordinate().to_f64().unwrap_or(f64::NAN),
                context,
            })
        }
    }
}

pub(crate) fn check_same_dim<T>(a: &SpectralState<T>, b: &SpectralState<T>) -> Result<()> {
    if a.lambda.len() != b.lambda.len() {
        return Err(Error::DimensionMismatch(format!(
            "states have lengths {} and {}",
            a.lambda.len(),
            b.lambda.len()
        )));
    }
    Ok(())
}

/// Converts a sorted singular spectrum to a state of length `n`.
pub(crate) fn state_from_sigma<T: Scalar>(sigma: &[T], n: usize) -> Result<SpectralState<T>> {
    if sigma.len() > n {
        return Err(Error::DimensionMismatch(format!(
            "operator has {} singular values but spectral dimension is {n}",
            sigma.len()
        )));
    }
    let top = sigma.first().copied().unwrap_or_else(T::zero);
    if !(top > T::zero()) {
        return Err(Error::ZeroOperator);
    }
    // Dividing by σ₁ first keeps the squares in range for any operator scale.
    let squares: Vec<T> = sigma
        .iter()
        .map(|&s| {
            let r = s / top;
            r * r
        })
        .collect();
    let total: T = squares.iter().copied().sum();
    let mut lambda: Vec<T> = squares.into_iter().map(|s| s / total).collect();
    lambda.resize(n, T::zero());
    Ok(SpectralState { lambda })
}

/// `λᵢ = σᵢ² / Σⱼ σⱼ²`, zero-padded to length `n`.
pub fn spectral_state<T: Scalar>(o: &Matrix<T>, n: usize) -> Result<SpectralState<T>> {
    if n == 0 {
        return Err(Error::Precondition(
            "spectral dimension must be positive".into(),
        ));
    }
    let k = o.rows().min(o.cols());
    if k > n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator does not fit spectral dimension {n}",
            o.rows(),
            o.cols()
        )));
    }
    if o.max_abs() == T::zero() {
        return Err(Error::ZeroOperator);
    }
    let dec = svd(o)?;
    state_from_sigma(dec.sigma(), n)
}

fn require_unitary<T: Scalar>(m: &Matrix<T>, name: &str, size: usize) -> Result<()> {
    if m.shape() != (size, size) {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be {size}x{size}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let residual = m.orthonormality_residual();
    if residual > T::lit(T::UNITARY_TOL) {
        return Err(Error::Precondition(format!(
            "{name} is not unitary (‖{name}ᵀ{name} − I‖_F = {residual})"
        )));
    }
    Ok(())
}

/// Checks `‖λ(U·O·V) − λ(O)‖_∞ ≤ tol`.
pub fn check_unitary_invariance<T: Scalar>(
    o: &Matrix<T>,
    u: &Matrix<T>,
    v: &Matrix<T>,
    tol: T,
) -> Result<bool> {
    require_unitary(u, "U", o.rows())?;
    require_unitary(v, "V", o.cols())?;
    let n = o.rows().min(o.cols());
    let base = spectral_state(o, n)?;
    let moved = spectral_state(&u.matmul(o)?.matmul(v)?, n)?;
    Ok(base.max_abs_diff(&moved)? <= tol)
}

/// Checks `‖λ(c·O) − λ(O)‖_∞ ≤ tol` for `c ≠ 0`.
pub fn check_scale_invariance<T: Scalar>(o: &Matrix<T>, c: T, tol: T) -> Result<bool> {
    if c == T::zero() || !c.is_finite() {
        return Err(Error::Precondition(format!(
            "scale factor must be finite and non-zero, got {c}"
        )));
    }
    let n = o.rows().min(o.cols());
    let base = spectral_state(o, n)?;
    let scaled = spectral_state(&o.scale(c), n)?;
    Ok(base.max_abs_diff(&scaled)? <= tol)
}

/// The boundary stratum a state lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceDescriptor {
    pub support_size: usize,
    pub codimension: usize,
    pub interior: bool,
}

/// Support of `state`: coordinates strictly above `zero_tol`.
pub fn face_of<T: Scalar>(state: &SpectralState<T>, zero_tol: T) -> Result<FaceDescriptor> {
    let support_size = state.as_slice().iter().filter(|&&x| x > zero_tol).count();
    if support_size == 0 {
        return Err(Error::InvalidState(format!(
            "no coordinate exceeds the zero tolerance {zero_tol}"
        )));
    }
    let codimension = state.dim() - support_size;
    Ok(FaceDescriptor {
        support_size,
        codimension,
        interior: codimension == 0,
    })
}

/// [`face_of`] with the scalar's default zero tolerance.
pub fn face_of_default<T: Scalar>(state: &SpectralState<T>) -> Result<FaceDescriptor> {
    face_of(state, T::lit(T::FACE_ZERO_TOL))
}

pub fn spectrally_equivalent<T: Scalar>(
    a: &SpectralState<T>,
    b: &SpectralState<T>,
    tol: T,
) -> Result<bool> {
    Ok(a.max_abs_diff(b)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;
    use std::f64::consts::PI;

    #[test]
    fn rank_one_maps_to_vertex() {
        let o = Matrix::from_diag(4, 4, &[2.5]).unwrap();
        let s = spectral_state(&o, 4).unwrap();
        assert_eq!(s.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        let f = face_of(&s, 1e-12).unwrap();
        assert_eq!((f.codimension, f.interior), (3, false));
    }

    #[test]
    fn uniform_spectrum_maps_to_barycentre() {
        let o = Matrix::diag(&[0.7; 5]).unwrap();
        let s = spectral_state(&o, 5).unwrap();
        assert_eq!(s, SpectralState::uniform(5));
        assert!(face_of(&s, 1e-12).unwrap().interior);
    }

    #[test]
    fn two_mode_state_is_padded() {
        let t = PI / 4.0;
        let o = Matrix::diag(&[t.cos(), t.sin()]).unwrap();
        let s = spectral_state(&o, 4).unwrap();
        for (x, e) in s.as_slice().iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((x - e).abs() < 1e-12);
        }
        assert_eq!(face_of(&s, 1e-12).unwrap().codimension, 2);
    }

    #[test]
    fn zero_operator_rejected() {
        let o = Matrix::<f64>::zeros(3, 2);
        assert_eq!(spectral_state(&o, 2), Err(Error::ZeroOperator));
        assert!(Error::ZeroOperator.to_string().contains("non-zero"));
    }

    #[test]
    fn dimension_too_small_rejected() {
        let o = Matrix::<f64>::identity(3);
        assert!(matches!(
            spectral_state(&o, 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn unitary_invariance_identity_and_precondition() {
        let o = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let eye = Matrix::identity(2);
        assert!(check_unitary_invariance(&o, &eye, &eye, 1e-12).unwrap());
        let bad = Matrix::diag(&[2.0, 1.0]).unwrap();
        assert!(matches!(
            check_unitary_invariance(&o, &bad, &eye, 1e-9),
            Err(Error::Precondition(_))
        ));
        let q = random_unitary::<f64>(2, 3);
        assert!(check_unitary_invariance(&o, &q, &eye, 1e-9).unwrap());
    }

    #[test]
    fn scale_invariance_rejects_zero() {
        let o = Matrix::<f64>::identity(2);
        assert!(check_scale_invariance(&o, 1.0, 0.0).unwrap());
        assert!(matches!(
            check_scale_invariance(&o, 0.0, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn face_rejects_empty_support() {
        let s = SpectralState::new(vec![0.5, 0.5]).unwrap();
        assert!(face_of(&s, 0.6).is_err());
    }

    #[test]
    fn equivalence() {
        let a = SpectralState::<f64>::vertex(2, 0);
        let b = SpectralState::uniform(2);
        assert!(spectrally_equivalent(&a, &a, 0.0).unwrap());
        assert!(!spectrally_equivalent(&a, &b, 1e-9).unwrap());
        let c = SpectralState::<f64>::uniform(3);
        assert!(matches!(
            spectrally_equivalent(&a, &c, 1e-9),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn state_validation() {
        assert!(SpectralState::new(vec![0.6, 0.5]).is_err());
        assert!(SpectralState::new(vec![1.1, -0.1]).is_err());
        assert!(SpectralState::<f64>::new(vec![]).is_err());
        assert!(SpectralState::new(vec![0.25f32; 4]).is_ok());
    }
}
