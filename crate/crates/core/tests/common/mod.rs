//! Independent oracles for the integration tests. Nothing here calls the
//! library routine it is used to check.

#![allow(dead_code)]

pub mod golden;

use spectral_geom::{Matrix, SpectralState};

/// Naive triple-loop product.
pub fn naive_product(b: &Matrix<f64>, a: &Matrix<f64>) -> Vec<f64> {
    let (m, k, n) = (b.rows(), b.cols(), a.cols());
    let (bs, as_) = (b.as_slice(), a.as_slice());
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut acc = 0.0;
            for l in 0..k {
                acc += bs[i * k + l] * as_[l * n + j];
            }
            out[i * n + j] = acc;
        }
    }
    out
}

pub fn frobenius(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖U·diag(σ)·Vᵀ − A‖_F` evaluated entrywise.
pub fn reconstruction_residual(
    a: &Matrix<f64>,
    u: &Matrix<f64>,
    sigma: &[f64],
    v: &Matrix<f64>,
) -> f64 {
    let mut sq = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let mut acc = 0.0;
            for (k, s) in sigma.iter().enumerate() {
                acc += u[(i, k)] * s * v[(j, k)];
            }
            sq += (acc - a[(i, j)]).powi(2);
        }
    }
    sq.sqrt()
}

/// `‖QᵀQ − I‖_F` by explicit column dot products.
pub fn gram_residual(q: &Matrix<f64>) -> f64 {
    let mut sq = 0.0;
    for p in 0..q.cols() {
        for r in 0..q.cols() {
            let dot: f64 = (0..q.rows()).map(|i| q[(i, p)] * q[(i, r)]).sum();
            let target = if p == r { 1.0 } else { 0.0 };
            sq += (dot - target).powi(2);
        }
    }
    sq.sqrt()
}

/// Neumaier-compensated sum.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

pub fn entropy_oracle(lambda: &[f64]) -> f64 {
    compensated_sum(lambda.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()))
}

/// Speed `√(Σ γ̇ᵢ²/γᵢ)` of the closed-form geodesic, from its analytic
/// derivative.
fn geodesic_speed(a: &[f64], b: &[f64], t: f64) -> f64 {
    let ra: Vec<f64> = a.iter().map(|x| x.sqrt()).collect();
    let rb: Vec<f64> = b.iter().map(|x| x.sqrt()).collect();
    let r: Vec<f64> = ra
        .iter()
        .zip(&rb)
        .map(|(p, q)| (1.0 - t) * p + t * q)
        .collect();
    let dr: Vec<f64> = ra.iter().zip(&rb).map(|(p, q)| q - p).collect();
    let s: f64 = r.iter().map(|x| x * x).sum();
    let ds: f64 = 2.0 * r.iter().zip(&dr).map(|(x, y)| x * y).sum::<f64>();
    let mut speed_sq = 0.0;
    for (ri, dri) in r.iter().zip(&dr) {
        let g = ri * ri / s;
        let dg = 2.0 * ri * dri / s - ri * ri * ds / (s * s);
        speed_sq += dg * dg / g;
    }
    speed_sq.sqrt()
}

/// Composite Simpson quadrature of the geodesic speed on `[0, 1]`.
pub fn geodesic_length_quadrature(a: &[f64], b: &[f64], intervals: usize) -> f64 {
    assert!(intervals.is_multiple_of(2));
    let h = 1.0 / intervals as f64;
    let mut acc = geodesic_speed(a, b, 0.0) + geodesic_speed(a, b, 1.0);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * geodesic_speed(a, b, k as f64 * h);
    }
    acc * h / 3.0
}

/// Metric length of a sampled curve, metric taken at the left endpoint of
/// each segment and averaged with the right endpoint.
pub fn trapezoid_length(states: &[Vec<f64>]) -> f64 {
    states
        .windows(2)
        .map(|w| {
            let seg = |base: &[f64]| -> f64 {
                w[0].iter()
                    .zip(&w[1])
                    .zip(base)
                    .map(|((p, q), l)| (q - p) * (q - p) / l)
                    .sum::<f64>()
                    .sqrt()
            };
            0.5 * (seg(&w[0]) + seg(&w[1]))
        })
        .sum()
}

/// Closed-form `2·arccos(Σ√(λμ))` with the argument clamped.
pub fn arccos_distance(a: &[f64], b: &[f64]) -> f64 {
    let bc: f64 = a.iter().zip(b).map(|(x, y)| (x * y).sqrt()).sum();
    2.0 * bc.clamp(-1.0, 1.0).acos()
}

pub fn state(v: &[f64]) -> SpectralState<f64> {
    SpectralState::new(v.to_vec()).expect("valid test state")
}

/// Interior angles of the spherical triangle with unit-sphere side angles
/// `(a, b, c)` from the spherical law of cosines; returns the excess.
pub fn spherical_excess_from_sides(a: f64, b: f64, c: f64) -> f64 {
    let angle = |opp: f64, s1: f64, s2: f64| {
        ((opp.cos() - s1.cos() * s2.cos()) / (s1.sin() * s2.sin())).acos()
    };
    angle(a, b, c) + angle(b, c, a) + angle(c, a, b) - std::f64::consts::PI
}
