//! Composition of operators `BA` seen through spectral states: rank laws,
//! SVD alignment, the aligned re-weighting map and its isometry dichotomy.

use crate::error::{Error, Result};
use crate::geometry::fr_distance;
use crate::linalg::{
    complete_orthonormal, compose, default_rank_tol, from_columns, numerical_rank, svd, Matrix,
};
use crate::scalar::Scalar;
use crate::spectral::{face_of_default, state_from_sigma, FaceDescriptor, SpectralState};

/// Gains `βᵢ` of a stage along the singular directions it is paired with.
///
/// Built from an operator the gains are its singular values, sorted and
/// zero-padded. Built from raw values the order is kept as given: entry `i`
/// multiplies coordinate `i` of the transported state.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSpectrum<T> {
    beta: Vec<T>,
}

impl<T: Scalar> StageSpectrum<T> {
    pub fn new(beta: Vec<T>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Precondition("stage spectrum is empty".into()));
        }
        if beta.iter().any(|&b| !b.is_finite() || b < T::zero()) {
            return Err(Error::Precondition(
                "stage gains must be finite and non-negative".into(),
            ));
        }
        if !beta.iter().any(|&b| b > T::zero()) {
            return Err(Error::Precondition(
                "stage spectrum is identically zero".into(),
            ));
        }
        Ok(Self { beta })
    }

    /// Singular values of `b`, zero-padded to length `n`.
    pub fn from_operator(b: &Matrix<T>, n: usize) -> Result<Self> {
        let k = b.rows().min(b.cols());
        if k > n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} stage does not fit spectral dimension {n}",
                b.rows(),
                b.cols()
            )));
        }
        let mut beta = svd(b)?.into_parts().1;
        beta.resize(n, T::zero());
        Self::new(beta)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    /// Elementwise product: the gains of two aligned stages applied in turn.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "stage spectra have lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::new(
            self.beta
                .iter()
                .zip(&other.beta)
                .map(|(&x, &y)| x * y)
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransportMode {
    /// Accept any state whose re-weighted mass is positive.
    #[default]
    Lenient,
    /// Require a full-support state and strictly positive gains.
    Strict,
}

/// `λᵢ ↦ βᵢ² λᵢ / Σⱼ βⱼ² λⱼ`.
pub fn aligned_transport<T: Scalar>(
    lambda_a: &SpectralState<T>,
    beta: &StageSpectrum<T>,
) -> Result<SpectralState<T>> {
    aligned_transport_with(lambda_a, beta, TransportMode::Lenient)
}

pub fn aligned_transport_with<T: Scalar>(
    lambda_a: &SpectralState<T>,
    beta: &StageSpectrum<T>,
    mode: TransportMode,
) -> Result<SpectralState<T>> {
    if lambda_a.dim() != beta.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state has length {} but stage spectrum has length {}",
            lambda_a.dim(),
            beta.dim()
        )));
    }
    if mode == TransportMode::Strict {
        if !lambda_a.is_interior() {
            return Err(Error::SupportViolation(format!(
                "state has minimum coordinate {}",
                lambda_a.min_coordinate()
            )));
        }
        if beta.as_slice().iter().any(|&b| b <= T::zero()) {
            return Err(Error::SupportViolation("stage has a zero gain".into()));
        }
    }
    // Gains are normalised by their maximum so the weights cannot overflow.
    let top = beta.as_slice().iter().copied().fold(T::zero(), T::max);
    let weighted: Vec<T> = lambda_a
        .as_slice()
        .iter()
        .zip(beta.as_slice())
        .map(|(&l, &b)| {
            let r = b / top;
            r * r * l
        })
        .collect();
    let total: T = weighted.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::Annihilation);
    }
    SpectralState::new(weighted.into_iter().map(|w| w / total).collect())
}

/// Spectral uniformity: `max β − min β ≤ tol · max β`.
pub fn stage_is_isometry<T: Scalar>(beta: &StageSpectrum<T>, tol: T) -> bool {
    let b = beta.as_slice();
    let hi = b.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = b.iter().copied().fold(T::infinity(), T::min);
    hi - lo <= tol * hi
}

/// Fisher–Rao distance of each pair before and after aligned transport.
pub fn distortion_profile<T: Scalar>(
    beta: &StageSpectrum<T>,
    pairs: &[(SpectralState<T>, SpectralState<T>)],
) -> Result<Vec<(T, T)>> {
    if beta.as_slice().iter().any(|&b| b <= T::zero()) {
        return Err(Error::Precondition(
            "distortion is defined for strictly positive gains only".into(),
        ));
    }
    pairs
        .iter()
        .map(|(x, y)| {
            x.require_interior("distortion requires interior states")?;
            y.require_interior("distortion requires interior states")?;
            let before = fr_distance(x, y)?;
            let after = fr_distance(&aligned_transport(x, beta)?, &aligned_transport(y, beta)?)?;
            Ok((before, after))
        })
        .collect()
}

/// Result of [`is_svd_aligned`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment<T> {
    pub aligned: bool,
    pub residual: T,
}

/// Full orthonormal basis of singular directions on one side of an
/// operator, with the matching singular values padded by zeros.
struct SingularFrame<T> {
    basis: Matrix<T>,
    sigma: Vec<T>,
}

fn frame<T: Scalar>(basis_thin: &Matrix<T>, sigma: &[T], rank_tol: T) -> SingularFrame<T> {
    let dim = basis_thin.rows();
    let cols: Vec<Vec<T>> = (0..basis_thin.cols())
        .map(|j| basis_thin.column(j))
        .collect();
    let cols = complete_orthonormal(cols, dim, dim);
    let top = sigma.first().copied().unwrap_or_else(T::zero);
    let mut padded: Vec<T> = sigma
        .iter()
        .map(|&s| if s > rank_tol * top { s } else { T::zero() })
        .collect();
    padded.resize(dim, T::zero());
    SingularFrame {
        basis: from_columns(&cols, dim),
        sigma: padded,
    }
}

/// Partitions sorted values into runs of near-equal entries.
fn groups<T: Scalar>(sigma: &[T], rel_tol: T) -> Vec<Vec<usize>> {
    let scale = sigma.first().copied().unwrap_or_else(T::zero);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        match out.last_mut() {
            Some(g) if sigma[i - 1] - s <= rel_tol * scale => g.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

fn projector<T: Scalar>(basis: &Matrix<T>, group: &[usize]) -> Matrix<T> {
    let sub = basis.select_columns(group);
    sub.matmul(&sub.transpose()).expect("conformable")
}

/// Tests whether `B`'s right singular vectors coincide with `A`'s left
/// singular vectors, index by index in sorted order.
///
/// Singular vectors are only determined up to rotation inside a group of
/// equal singular values, so the test works with orthogonal projectors onto
/// the group subspaces of both operators. The pair is aligned exactly when
/// every projector of `A` commutes with every projector of `B` and each
/// pairwise intersection has the dimension the index groups prescribe.
/// The residual is the largest violation of either condition.
pub fn is_svd_aligned<T: Scalar>(b: &Matrix<T>, a: &Matrix<T>, tol: T) -> Result<Alignment<T>> {
    if b.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "B is {}x{} but A is {}x{}",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let (ua, sa, _) = svd(a)?.into_parts();
    let (_, sb, vb) = svd(b)?.into_parts();
    let fa = frame(&ua, &sa, default_rank_tol(a.rows(), a.cols()));
    let fb = frame(&vb, &sb, default_rank_tol(b.rows(), b.cols()));

    let rel = T::lit(T::GROUP_REL_TOL);
    let ga = groups(&fa.sigma, rel);
    let gb = groups(&fb.sigma, rel);
    let pa: Vec<Matrix<T>> = ga.iter().map(|g| projector(&fa.basis, g)).collect();
    let pb: Vec<Matrix<T>> = gb.iter().map(|g| projector(&fb.basis, g)).collect();

    let mut residual = T::zero();
    for (gi, p) in ga.iter().zip(&pa) {
        for (gj, q) in gb.iter().zip(&pb) {
            let pq = p.matmul(q).expect("square");
            let qp = q.matmul(p).expect("square");
            let commutator = pq.sub(&qp).expect("same shape").frobenius_norm();
            let trace: T = (0..pq.rows()).map(|i| pq[(i, i)]).sum();
            let shared = gi.iter().filter(|i| gj.contains(i)).count();
            let overlap = (trace - T::from_usize_lossy(shared)).abs();
            residual = residual.max(commutator).max(overlap);
        }
    }
    Ok(Alignment {
        aligned: residual <= tol,
        residual,
    })
}

/// Everything the spectral picture says about a composed pair `(B, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport<T> {
    pub state_a: SpectralState<T>,
    pub state_b: SpectralState<T>,
    pub state_ba: SpectralState<T>,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_ba: usize,
    pub face_ba: FaceDescriptor,
    pub aligned: bool,
    pub alignment_residual: T,
    pub isometric_stage: bool,
    /// Aligned-transport prediction of `λ(BA)` from `λ(A)` and `σ(B)`; only
    /// present when the pair is aligned.
    pub transport_prediction: Option<SpectralState<T>>,
    /// `‖prediction − λ(BA)‖_∞` when a prediction exists.
    pub transport_discrepancy: Option<T>,
}

pub fn analyze_composition<T: Scalar>(
    b: &Matrix<T>,
    a: &Matrix<T>,
    n: usize,
    tol: T,
) -> Result<CompositionReport<T>> {
    let ba = compose(b, a)?;
    for (name, m) in [("A", a), ("B", b), ("BA", &ba)] {
        if m.rows().min(m.cols()) > n {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, which exceeds spectral dimension {n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let (norm_a, norm_b) = (a.frobenius_norm(), b.frobenius_norm());
    if norm_a == T::zero() || norm_b == T::zero() {
        return Err(Error::ZeroOperator);
    }
    if ba.frobenius_norm() <= T::lit(T::ANNIHILATION_REL_TOL) * norm_a * norm_b {
        return Err(Error::Annihilation);
    }

    let sa = svd(a)?.into_parts().1;
    let sb = svd(b)?.into_parts().1;
    let sba = svd(&ba)?.into_parts().1;
    let rank_a = numerical_rank(&sa, default_rank_tol(a.rows(), a.cols()))?;
    let rank_b = numerical_rank(&sb, default_rank_tol(b.rows(), b.cols()))?;
    // Rounding in the product is of order ε·‖B‖·‖A‖, which can dwarf σ₁(BA)
    // when the factors nearly cancel; the threshold follows the larger scale.
    let product_tol = default_rank_tol::<T>(b.rows(), a.cols())
        * T::from_usize_lossy(b.cols())
        * (sa[0] * sb[0] / sba[0]);
    let rank_ba = numerical_rank(
        &sba,
        default_rank_tol::<T>(ba.rows(), ba.cols()).max(product_tol),
    )?;

    let state_a = state_from_sigma(&sa, n)?;
    let state_b = state_from_sigma(&sb, n)?;
    let state_ba = state_from_sigma(&sba, n)?;
    let face_ba = face_of_default(&state_ba)?;

    let alignment = is_svd_aligned(b, a, tol)?;
    let support: Vec<T> = sb[..rank_b].to_vec();
    let isometric_stage = stage_is_isometry(&StageSpectrum::new(support)?, tol);

    let (transport_prediction, transport_discrepancy) = if alignment.aligned {
        let mut beta = sb.clone();
        beta.resize(n, T::zero());
        let predicted = aligned_transport(&state_a, &StageSpectrum::new(beta)?)?;
        let gap = predicted.max_abs_diff(&state_ba)?;
        (Some(predicted), Some(gap))
    } else {
        (None, None)
    };

    Ok(CompositionReport {
        state_a,
        state_b,
        state_ba,
        rank_a,
        rank_b,
        rank_ba,
        face_ba,
        aligned: alignment.aligned,
        alignment_residual: alignment.residual,
        isometric_stage,
        transport_prediction,
        transport_discrepancy,
    })
}
