//! Scalar abstraction shared by every numerical module.
//!
//! The library is written once against [`Scalar`] and instantiated for `f32`
//! and `f64`. Each implementation carries its own default tolerances, since a
//! threshold such as `1e-12` is meaningful in double precision only.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Real floating-point scalar with precision-dependent default tolerances.
pub trait Scalar:
    Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Allowed deviation of `Σλᵢ` from one for a valid simplex point.
    const SIMPLEX_TOL: f64;
    /// Relative off-diagonal threshold below which a Jacobi rotation is skipped.
    const JACOBI_TOL: f64;
    /// Default absolute threshold under which a state coordinate counts as zero.
    const FACE_ZERO_TOL: f64;
    /// Smallest coordinate admitted by the interior manifold.
    const INTERIOR_THRESHOLD: f64;
    /// Orthonormality residual accepted for a caller-supplied unitary.
    const UNITARY_TOL: f64;
    /// `‖BA‖_F ≤ tol·‖B‖_F‖A‖_F` is treated as annihilation.
    const ANNIHILATION_REL_TOL: f64;
    /// Default Frobenius tolerance for SVD alignment.
    const ALIGNMENT_TOL: f64;
    /// Relative gap under which adjacent singular values share a group.
    const GROUP_REL_TOL: f64;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable in scalar type")
    }
}

impl Scalar for f64 {
    const SIMPLEX_TOL: f64 = 1e-12;
    const JACOBI_TOL: f64 = 1e-14;
    const FACE_ZERO_TOL: f64 = 1e-12;
    const INTERIOR_THRESHOLD: f64 = 1e-15;
    const UNITARY_TOL: f64 = 1e-8;
    const ANNIHILATION_REL_TOL: f64 = 1e-14;
    const ALIGNMENT_TOL: f64 = 1e-8;
    const GROUP_REL_TOL: f64 = 1e-10;
}

impl Scalar for f32 {
    const SIMPLEX_TOL: f64 = 1e-5;
    const JACOBI_TOL: f64 = 1e-6;
    const FACE_ZERO_TOL: f64 = 1e-10;
    const INTERIOR_THRESHOLD: f64 = 1e-15;
    const UNITARY_TOL: f64 = 1e-4;
    const ANNIHILATION_REL_TOL: f64 = 1e-6;
    const ALIGNMENT_TOL: f64 = 1e-4;
    const GROUP_REL_TOL: f64 = 1e-5;
}
