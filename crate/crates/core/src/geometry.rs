//! Fisher–Rao geometry on the open simplex.
//!
//! The metric is `gᵢⱼ = δᵢⱼ / λᵢ`, the normalisation whose geodesic distance
//! is `2·arccos(Σᵢ √(λᵢ μᵢ))`. Under it the square-root map `λ ↦ √λ` is an
//! isometry onto the positive orthant of the sphere of radius 2 (lengths are
//! twice the unit-sphere angle), so the sectional curvature is 1/4.
//! Distances, geodesics and curvature are all computed through that chart.
//! The metric, geodesics and the chart itself are defined on the
//! interior only; the distance formula extends continuously to the boundary
//! and is accepted there.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectral::{check_same_dim, SpectralState};

fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

fn norm<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// Angle between two non-zero vectors, accurate for nearly parallel inputs.
fn angle_between<T: Scalar>(x: &[T], y: &[T]) -> T {
    let (nx, ny) = (norm(x), norm(y));
    let mut diff = T::zero();
    let mut sum = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        let (ua, ub) = (a / nx, b / ny);
        diff = diff + (ua - ub) * (ua - ub);
        sum = sum + (ua + ub) * (ua + ub);
    }
    T::lit(2.0) * diff.sqrt().atan2(sum.sqrt())
}

/// Diagonal Fisher–Rao metric `diag(1 / λᵢ)` at an interior state.
pub fn metric_tensor<T: Scalar>(state: &SpectralState<T>) -> Result<Matrix<T>> {
    state.require_interior("the metric tensor is undefined on the boundary")?;
    let diag: Vec<T> = state.as_slice().iter().map(|&l| T::one() / l).collect();
    Matrix::diag(&diag)
}

/// Bhattacharyya coefficient `Σᵢ √(λᵢ μᵢ)`.
pub fn bhattacharyya<T: Scalar>(a: &SpectralState<T>, b: &SpectralState<T>) -> Result<T> {
    check_same_dim(a, b)?;
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| (x * y).sqrt())
        .sum())
}

/// Fisher–Rao distance `2·arccos(Σᵢ √(λᵢ μᵢ))`.
///
/// Evaluated as twice the angle between the square-root vectors using the
/// half-angle form `2·atan2(‖φ−ψ‖, ‖φ+ψ‖)`, which equals the arccos form for
/// unit vectors but stays accurate when the states are close.
pub fn fr_distance<T: Scalar>(a: &SpectralState<T>, b: &SpectralState<T>) -> Result<T> {
    check_same_dim(a, b)?;
    let (mut diff, mut sum) = (T::zero(), T::zero());
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        let (p, q) = (x.sqrt(), y.sqrt());
        diff = diff + (p - q) * (p - q);
        sum = sum + (p + q) * (p + q);
    }
    Ok(T::lit(4.0) * diff.sqrt().atan2(sum.sqrt()))
}

/// Point of the square-root chart `φ(λ) = (√λ₁, …, √λ_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereChart<T> {
    phi: Vec<T>,
}

impl<T: Scalar> SphereChart<T> {
    pub fn as_slice(&self) -> &[T] {
        &self.phi
    }

    /// Inverse chart: squares the coordinates.
    pub fn to_state(&self) -> Result<SpectralState<T>> {
        SpectralState::new(self.phi.iter().map(|&p| p * p).collect())
    }
}

pub fn sphere_embed<T: Scalar>(state: &SpectralState<T>) -> Result<SphereChart<T>> {
    state.require_interior("the square-root chart covers interior states only")?;
    Ok(SphereChart {
        phi: state.as_slice().iter().map(|&l| l.sqrt()).collect(),
    })
}

/// Shannon entropy in nats, with `0·log 0 = 0`.
pub fn entropy<T: Scalar>(state: &SpectralState<T>) -> T {
    state
        .as_slice()
        .iter()
        .filter(|&&l| l > T::zero())
        .fold(T::zero(), |h, &l| h - l * l.ln())
}

pub fn entropy_bits<T: Scalar>(state: &SpectralState<T>) -> T {
    entropy(state) / T::lit(2.0).ln()
}

/// Evaluates the closed-form geodesic from `a` to `b` at parameter `t`.
pub fn geodesic_point<T: Scalar>(
    a: &SpectralState<T>,
    b: &SpectralState<T>,
    t: T,
) -> Result<SpectralState<T>> {
    check_same_dim(a, b)?;
    let s = T::one() - t;
    let raw: Vec<T> = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| {
            let r = s * x.sqrt() + t * y.sqrt();
            r * r
        })
        .collect();
    let total: T = raw.iter().copied().sum();
    SpectralState::new(raw.into_iter().map(|r| r / total).collect())
}

/// Fisher–Rao geodesic sampled uniformly in its parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath<T> {
    start: SpectralState<T>,
    end: SpectralState<T>,
    samples: Vec<(T, SpectralState<T>)>,
}

impl<T: Scalar> GeodesicPath<T> {
    pub fn endpoints(&self) -> (&SpectralState<T>, &SpectralState<T>) {
        (&self.start, &self.end)
    }

    /// `(t, γ(t))` pairs with `t` strictly increasing from 0 to 1.
    pub fn samples(&self) -> &[(T, SpectralState<T>)] {
        &self.samples
    }

    /// Discrete Riemannian length of the sampled polyline.
    pub fn length(&self) -> T {
        let states: Vec<&SpectralState<T>> = self.samples.iter().map(|(_, s)| s).collect();
        polyline_length(&states)
    }
}

/// `Σₖ √(Δλᵀ g(λ̄) Δλ)` with the metric evaluated at each segment midpoint.
pub fn polyline_length<T: Scalar>(states: &[&SpectralState<T>]) -> T {
    let half = T::lit(0.5);
    states
        .windows(2)
        .map(|w| {
            w[0].as_slice()
                .iter()
                .zip(w[1].as_slice())
                .map(|(&p, &q)| {
                    let d = q - p;
                    d * d / (half * (p + q))
                })
                .sum::<T>()
                .sqrt()
        })
        .sum()
}

pub fn geodesic<T: Scalar>(
    a: &SpectralState<T>,
    b: &SpectralState<T>,
    steps: usize,
) -> Result<GeodesicPath<T>> {
    if steps < 2 {
        return Err(Error::Precondition(format!(
            "a geodesic needs at least 2 samples, got {steps}"
        )));
    }
    check_same_dim(a, b)?;
    a.require_interior("geodesic endpoints must be interior")?;
    b.require_interior("geodesic endpoints must be interior")?;
    if a.max_abs_diff(b)? <= T::epsilon() {
        return Err(Error::DegeneratePath);
    }
    let last = T::from_usize_lossy(steps - 1);
    let mut samples = Vec::with_capacity(steps);
    samples.push((T::zero(), a.clone()));
    for k in 1..steps - 1 {
        let t = T::from_usize_lossy(k) / last;
        samples.push((t, geodesic_point(a, b, t)?));
    }
    samples.push((T::one(), b.clone()));
    Ok(GeodesicPath {
        start: a.clone(),
        end: b.clone(),
        samples,
    })
}

/// Angle excess of a small geodesic triangle and a flat estimate of its area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleExcess<T> {
    /// `α + β + γ − π`, angles measured intrinsically.
    pub excess: T,
    /// Heron's formula on the Fisher–Rao side lengths.
    pub area_estimate: T,
    /// Fisher–Rao side lengths `(d_ab, d_bc, d_ca)`.
    pub sides: (T, T, T),
}

impl<T: Scalar> TriangleExcess<T> {
    /// Gauss–Bonnet estimate `K ≈ excess / area`; tends to the sectional
    /// curvature as the triangle shrinks.
    pub fn curvature(&self) -> T {
        self.excess / self.area_estimate
    }
}

fn heron<T: Scalar>(x: T, y: T, z: T) -> T {
    // Kahan's ordering-stable variant, a ≥ b ≥ c.
    let mut s = [x, y, z];
    s.sort_by(|p, q| q.partial_cmp(p).expect("finite side"));
    let [a, b, c] = s;
    let prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    T::lit(0.25) * prod.max(T::zero()).sqrt()
}

/// Interior angle at `p` of the spherical triangle `(p, q, r)`.
fn vertex_angle<T: Scalar>(p: &[T], q: &[T], r: &[T]) -> T {
    let tangent = |x: &[T]| -> Vec<T> {
        let c = dot(p, x);
        x.iter().zip(p).map(|(&xi, &pi)| xi - c * pi).collect()
    };
    angle_between(&tangent(q), &tangent(r))
}

pub fn triangle_excess<T: Scalar>(
    a: &SpectralState<T>,
    b: &SpectralState<T>,
    c: &SpectralState<T>,
) -> Result<TriangleExcess<T>> {
    let (pa, pb, pc) = (sphere_embed(a)?, sphere_embed(b)?, sphere_embed(c)?);
    let sides = (fr_distance(a, b)?, fr_distance(b, c)?, fr_distance(c, a)?);
    let min_side = T::lit(1e-3);
    if sides.0 <= min_side || sides.1 <= min_side || sides.2 <= min_side {
        return Err(Error::DegenerateTriangle(format!(
            "pairwise distances must exceed {min_side}, got ({}, {}, {})",
            sides.0, sides.1, sides.2
        )));
    }
    let (p, q, r) = (pa.as_slice(), pb.as_slice(), pc.as_slice());
    let angles = [
        vertex_angle(p, q, r),
        vertex_angle(q, r, p),
        vertex_angle(r, p, q),
    ];
    let flat = T::lit(1e-9);
    let pi = T::lit(PI);
    if angles.iter().any(|&x| x <= flat || x >= pi - flat) {
        return Err(Error::DegenerateTriangle(
            "vertices lie on one geodesic".into(),
        ));
    }
    let area_estimate = heron(sides.0, sides.1, sides.2);
    if !(area_estimate > T::zero()) {
        return Err(Error::DegenerateTriangle("zero area".into()));
    }
    Ok(TriangleExcess {
        excess: angles[0] + angles[1] + angles[2] - pi,
        area_estimate,
        sides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(v: &[f64]) -> SpectralState<f64> {
        SpectralState::new(v.to_vec()).unwrap()
    }

    #[test]
    fn metric_tensor_examples() {
        let g = metric_tensor(&st(&[0.5, 0.5])).unwrap();
        assert_eq!(g, Matrix::diag(&[2.0, 2.0]).unwrap());
        let g = metric_tensor(&st(&[0.8, 0.2])).unwrap();
        assert!((g[(0, 0)] - 1.25).abs() < 1e-15);
        assert!((g[(1, 1)] - 5.0).abs() < 1e-15);
        assert!(matches!(
            metric_tensor(&st(&[1.0, 0.0])),
            Err(Error::BoundaryState { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let a = st(&[0.3, 0.2, 0.5]);
        assert_eq!(fr_distance(&a, &a).unwrap(), 0.0);
        let d = fr_distance(&st(&[1.0, 0.0]), &st(&[0.0, 1.0])).unwrap();
        assert!((d - PI).abs() < 1e-15);
        assert!(fr_distance(&a, &st(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn geodesic_midpoint_and_errors() {
        let a = st(&[0.64, 0.36]);
        let b = st(&[0.36, 0.64]);
        let path = geodesic(&a, &b, 3).unwrap();
        let mid = &path.samples()[1];
        assert_eq!(mid.0, 0.5);
        for &x in mid.1.as_slice() {
            assert!((x - 0.5).abs() < 1e-15);
        }
        assert_eq!(path.samples()[0].1, a);
        assert_eq!(path.samples()[2].1, b);
        assert_eq!(geodesic(&a, &a, 5), Err(Error::DegeneratePath));
        assert!(matches!(geodesic(&a, &b, 1), Err(Error::Precondition(_))));
        assert!(matches!(
            geodesic(&st(&[1.0, 0.0]), &b, 4),
            Err(Error::BoundaryState { .. })
        ));
    }

    #[test]
    fn sphere_chart_examples() {
        let phi = sphere_embed(&SpectralState::<f64>::uniform(4)).unwrap();
        assert_eq!(phi.as_slice(), &[0.5; 4]);
        let phi = sphere_embed(&st(&[0.64, 0.36])).unwrap();
        assert!((phi.as_slice()[0] - 0.8).abs() < 1e-15);
        assert!((phi.as_slice()[1] - 0.6).abs() < 1e-15);
        let s = st(&[0.1, 0.2, 0.7]);
        let back = sphere_embed(&s).unwrap().to_state().unwrap();
        assert!(back.max_abs_diff(&s).unwrap() < 1e-14);
        assert!(sphere_embed(&st(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&SpectralState::<f64>::vertex(5, 0)), 0.0);
        let h = entropy(&SpectralState::<f64>::uniform(4));
        assert!((h - 4f64.ln()).abs() < 1e-15);
        assert!((entropy_bits(&SpectralState::<f64>::uniform(4)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_rejects_degenerate_input() {
        let a = st(&[0.4, 0.3, 0.3]);
        let b = st(&[0.3, 0.4, 0.3]);
        assert!(matches!(
            triangle_excess(&a, &a, &b),
            Err(Error::DegenerateTriangle(_))
        ));
        // Three points on one geodesic.
        let c = st(&[0.2, 0.5, 0.3]);
        let m = geodesic_point(&a, &c, 0.5).unwrap();
        assert!(matches!(
            triangle_excess(&a, &m, &c),
            Err(Error::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn triangle_excess_is_positive() {
        let t = triangle_excess(
            &st(&[0.36, 0.32, 0.32]),
            &st(&[0.32, 0.36, 0.32]),
            &st(&[0.32, 0.32, 0.36]),
        )
        .unwrap();
        assert!(t.excess > 0.0);
    }
}
