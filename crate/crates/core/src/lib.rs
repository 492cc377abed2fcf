//! Fisher–Rao information geometry of operator singular spectra.
//!
//! A real matrix `O` is mapped to its spectral state
//! `λᵢ(O) = σᵢ(O)² / Σⱼ σⱼ(O)²`, a point of the probability simplex that is
//! blind to singular vectors and overall scale. The simplex interior carries
//! the Fisher–Rao metric, under which distances, geodesics and curvature are
//! available in closed form through the square-root chart. Composition of
//! operators is analysed through rank laws and, for SVD-aligned pairs, an
//! explicit re-weighting map on states.
//!
//! Every numerical item is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the double-precision instantiation used by
//! the command-line tool.

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod composition;
mod error;
pub mod geometry;
pub mod linalg;
mod scalar;
pub mod spectral;
pub mod validate;

pub use composition::{
    aligned_transport, aligned_transport_with, analyze_composition, distortion_profile,
    is_svd_aligned, stage_is_isometry, Alignment, CompositionReport, StageSpectrum, TransportMode,
};
pub use error::{Error, Result};
pub use geometry::{
    bhattacharyya, entropy, entropy_bits, fr_distance, geodesic, geodesic_point, metric_tensor,
    polyline_length, sphere_embed, triangle_excess, GeodesicPath, SphereChart, TriangleExcess,
};
pub use linalg::{
    compose, default_rank_tol, numerical_rank, random_unitary, svd, Matrix, SvdResult,
};
pub use scalar::Scalar;
pub use spectral::{
    check_scale_invariance, check_unitary_invariance, face_of, face_of_default, spectral_state,
    spectrally_equivalent, FaceDescriptor, SpectralState,
};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type SvdResult64 = SvdResult<f64>;
pub type SpectralState64 = SpectralState<f64>;
pub type SpectralState32 = SpectralState<f32>;
pub type StageSpectrum64 = StageSpectrum<f64>;
pub type GeodesicPath64 = GeodesicPath<f64>;
pub type CompositionReport64 = CompositionReport<f64>;
