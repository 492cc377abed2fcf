//! Seeded property suite behind `spectral-geom validate`.
//!
//! Each family draws random operators or states, checks one structural law
//! and records the worst residual seen. A family passes when that residual
//! stays within its pinned threshold.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::composition::{aligned_transport, analyze_composition, StageSpectrum};
use crate::error::Result;
use crate::geometry::{entropy, fr_distance, geodesic, triangle_excess};
use crate::linalg::{gaussian_matrix, random_unitary_with, seeded_rng, Matrix};
use crate::spectral::{spectral_state, SpectralState};

pub mod sampling {
    //! Random generators shared by the property suite and the tests.

    use rand::Rng;
    use rand_distr::{Distribution, Exp1, StandardNormal};

    use crate::linalg::{gaussian_matrix, random_unitary_with, Matrix};
    use crate::spectral::SpectralState;

    /// Interior state with coordinates proportional to `U(floor, 1)` draws.
    pub fn interior_state<R: Rng + ?Sized>(
        n: usize,
        floor: f64,
        rng: &mut R,
    ) -> SpectralState<f64> {
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(floor..1.0)).collect();
        SpectralState::from_weights(&w).expect("positive weights")
    }

    /// Uniform draw from the simplex (flat Dirichlet).
    pub fn dirichlet_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SpectralState<f64> {
        let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        SpectralState::from_weights(&w).expect("positive weights")
    }

    /// Sorted non-increasing positive values in `[lo, hi)`.
    pub fn sorted_gains<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }

    /// `Q·diag(d)·Pᵀ` for fresh random orthogonal `Q` (`rows × rows`) and
    /// `P` (`cols × cols`).
    pub fn with_spectrum<R: Rng + ?Sized>(
        rows: usize,
        cols: usize,
        d: &[f64],
        rng: &mut R,
    ) -> Matrix<f64> {
        let q: Matrix<f64> = random_unitary_with(rows, rng);
        let p: Matrix<f64> = random_unitary_with(cols, rng);
        synthesize(&q, d, &p)
    }

    /// `Q·diag(d)·Pᵀ` for given orthogonal factors.
    pub fn synthesize(q: &Matrix<f64>, d: &[f64], p: &Matrix<f64>) -> Matrix<f64> {
        let core = Matrix::from_diag(q.cols(), p.cols(), d).expect("diagonal fits");
        q.matmul(&core)
            .and_then(|m| m.matmul(&p.transpose()))
            .expect("conformable")
    }

    /// SVD-aligned pair `B = Q·diag(β)·Wᵀ`, `A = W·diag(α)·Vᵀ` (all `n × n`),
    /// with `β` and `α` sorted non-increasing. Returns `(B, A, β)`.
    pub fn aligned_pair<R: Rng + ?Sized>(
        n: usize,
        rng: &mut R,
    ) -> (Matrix<f64>, Matrix<f64>, Vec<f64>) {
        let beta = sorted_gains(n, 0.1, 3.0, rng);
        let alpha = sorted_gains(n, 0.1, 3.0, rng);
        let q: Matrix<f64> = random_unitary_with(n, rng);
        let w: Matrix<f64> = random_unitary_with(n, rng);
        let v: Matrix<f64> = random_unitary_with(n, rng);
        (synthesize(&q, &beta, &w), synthesize(&w, &alpha, &v), beta)
    }

    /// Product of Gaussian `rows × r` and `r × cols` factors: rank `r`.
    pub fn low_rank<R: Rng + ?Sized>(
        rows: usize,
        cols: usize,
        r: usize,
        rng: &mut R,
    ) -> Matrix<f64> {
        let x: Matrix<f64> = gaussian_matrix(rows, r, rng);
        let y: Matrix<f64> = gaussian_matrix(r, cols, rng);
        x.matmul(&y).expect("conformable")
    }

    /// Standard-normal scalar.
    pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        rng.sample(StandardNormal)
    }
}

/// Worst-case outcome of one property family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub name: &'static str,
    pub trials: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub families: Vec<FamilyResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.families.iter().all(|f| f.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationConfig {
    pub seed: u64,
    pub trials: usize,
    /// Perturbs transport predictions so the keystone family must fail.
    /// Used to check that the harness reports failures.
    pub inject_fault: bool,
}

struct Tracker {
    name: &'static str,
    trials: usize,
    max_residual: f64,
    threshold: f64,
}

impl Tracker {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self {
            name,
            trials: 0,
            max_residual: 0.0,
            threshold,
        }
    }

    fn record(&mut self, residual: f64) {
        self.trials += 1;
        // NaN must register as failure.
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
        }
    }

    fn finish(self) -> FamilyResult {
        FamilyResult {
            name: self.name,
            trials: self.trials,
            max_residual: self.max_residual,
            threshold: self.threshold,
            passed: self.max_residual <= self.threshold,
        }
    }
}

fn invariance(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    let mut t = Tracker::new("invariance", 1e-9);
    for _ in 0..trials {
        let rows = rng.random_range(1..=8);
        let cols = rng.random_range(1..=8);
        let o: Matrix<f64> = gaussian_matrix(rows, cols, rng);
        let u: Matrix<f64> = random_unitary_with(rows, rng);
        let v: Matrix<f64> = random_unitary_with(cols, rng);
        let n = rows.min(cols);
        let base = spectral_state(&o, n)?;
        let moved = spectral_state(&u.matmul(&o)?.matmul(&v)?, n)?;
        let exponent = rng.random_range(-6.0..=6.0);
        let sign = if rng.random_bool(0.5) { -1.0 } else { 1.0 };
        let scaled = spectral_state(&o.scale(sign * 10f64.powf(exponent)), n)?;
        t.record(base.max_abs_diff(&moved)?.max(base.max_abs_diff(&scaled)?));
    }
    Ok(t.finish())
}

fn metric_axioms(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    let mut t = Tracker::new("metric axioms", 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(2..=8);
        let a = sampling::interior_state(n, 0.01, rng);
        let b = sampling::interior_state(n, 0.01, rng);
        let c = sampling::interior_state(n, 0.01, rng);
        let (ab, ba) = (fr_distance(&a, &b)?, fr_distance(&b, &a)?);
        let (bc, ac) = (fr_distance(&b, &c)?, fr_distance(&a, &c)?);
        let aa = fr_distance(&a, &a)?;
        let triangle_gap = (ac - ab - bc).max(0.0);
        let negativity = (-ab).max(0.0);
        t.record((ab - ba).abs().max(aa).max(triangle_gap).max(negativity));
    }
    Ok(t.finish())
}

fn geodesic_length(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    let mut t = Tracker::new("geodesic length", 1e-4);
    const DIMS: [usize; 3] = [2, 3, 5];
    for k in 0..trials {
        let n = DIMS[k % DIMS.len()];
        let a = sampling::interior_state(n, 0.05, rng);
        let b = sampling::interior_state(n, 0.05, rng);
        let path = geodesic(&a, &b, 1001)?;
        t.record((path.length() - fr_distance(&a, &b)?).abs());
    }
    Ok(t.finish())
}

/// Three points at sphere-angle `radius` around `centre` in a random
/// tangent 2-plane, mapped back to states.
pub fn small_triangle<R: Rng + ?Sized>(
    centre: &SpectralState<f64>,
    radius: f64,
    rng: &mut R,
) -> [SpectralState<f64>; 3] {
    let n = centre.dim();
    let phi: Vec<f64> = centre.as_slice().iter().map(|l| l.sqrt()).collect();
    let mut frame: Vec<Vec<f64>> = vec![phi.clone()];
    while frame.len() < 3 {
        let mut x: Vec<f64> = (0..n).map(|_| sampling::normal(rng)).collect();
        for _ in 0..2 {
            for f in &frame {
                let p: f64 = f.iter().zip(&x).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(f).for_each(|(xi, fi)| *xi -= p * fi);
            }
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            frame.push(x.into_iter().map(|v| v / norm).collect());
        }
    }
    let offset = rng.random_range(0.0..2.0 * PI);
    std::array::from_fn(|k| {
        let theta = offset + 2.0 * PI * k as f64 / 3.0 + rng.random_range(-0.3..0.3);
        let coords: Vec<f64> = (0..n)
            .map(|i| {
                let dir = theta.cos() * frame[1][i] + theta.sin() * frame[2][i];
                let p = radius.cos() * phi[i] + radius.sin() * dir;
                p * p
            })
            .collect();
        SpectralState::from_weights(&coords).expect("interior point")
    })
}

fn curvature(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    let mut t = Tracker::new("curvature 1/4", 0.05);
    for k in 0..trials {
        let n = 3 + k % 3;
        let centre = sampling::interior_state(n, 0.2, rng);
        let [a, b, c] = small_triangle(&centre, 0.05, rng);
        let tri = triangle_excess(&a, &b, &c)?;
        t.record((tri.curvature() - 0.25).abs() / 0.25);
    }
    Ok(t.finish())
}

fn entropy_bounds(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    let mut t = Tracker::new("entropy bounds", 1e-12);
    for _ in 0..trials {
        let n = rng.random_range(1..=8);
        let s = sampling::dirichlet_state(n, rng);
        let h = entropy(&s);
        t.record((-h).max(h - (n as f64).ln()).max(0.0));
    }
    Ok(t.finish())
}

fn transport_consistency(
    rng: &mut ChaCha8Rng,
    trials: usize,
    inject_fault: bool,
) -> Result<FamilyResult> {
    let mut t = Tracker::new("aligned transport", 1e-9);
    for _ in 0..trials {
        let n = rng.random_range(2..=6);
        let (b, a, beta) = sampling::aligned_pair(n, rng);
        let predicted = aligned_transport(&spectral_state(&a, n)?, &StageSpectrum::new(beta)?)?;
        let actual = spectral_state(&b.matmul(&a)?, n)?;
        let mut gap = predicted.max_abs_diff(&actual)?;
        if inject_fault {
            gap += 1e-6;
        }
        t.record(gap);
    }
    Ok(t.finish())
}

fn rank_laws(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    let mut t = Tracker::new("rank laws", 0.0);
    let mut drawn = 0;
    while drawn < trials {
        let n = rng.random_range(2..=6);
        let rb = rng.random_range(1..=n);
        let b = sampling::low_rank(n, n, rb, rng);
        let a: Matrix<f64> = gaussian_matrix(n, n, rng);
        let report = match analyze_composition(&b, &a, n, 1e-8) {
            Ok(r) => r,
            Err(crate::Error::Annihilation) => continue,
            Err(e) => return Err(e),
        };
        drawn += 1;
        let mut violations = 0.0;
        if report.rank_ba > report.rank_a.min(report.rank_b) {
            violations += 1.0;
        }
        if report.face_ba.codimension < n - report.rank_b {
            violations += 1.0;
        }
        t.record(violations);
    }
    Ok(t.finish())
}

fn isometry_dichotomy(rng: &mut ChaCha8Rng, trials: usize) -> Result<FamilyResult> {
    // Residual 0 for a correct verdict on a stage, 1 for a wrong one.
    let mut t = Tracker::new("isometry dichotomy", 0.0);
    for k in 0..trials {
        let n = rng.random_range(2..=6);
        let pairs: Vec<_> = (0..20)
            .map(|_| {
                (
                    sampling::interior_state(n, 0.01, rng),
                    sampling::interior_state(n, 0.01, rng),
                )
            })
            .collect();
        let uniform = k % 2 == 0;
        let beta = if uniform {
            vec![rng.random_range(0.1..5.0); n]
        } else {
            let mut g = sampling::sorted_gains(n, 0.1, 5.0, rng);
            // Guarantee relative spread ≥ 1e-3.
            g[0] = g[0].max(g[n - 1] * 1.01);
            g
        };
        let profile = crate::composition::distortion_profile(&StageSpectrum::new(beta)?, &pairs)?;
        let max_change = profile
            .iter()
            .map(|(d0, d1)| (d1 - d0).abs())
            .fold(0.0, f64::max);
        let correct = if uniform {
            max_change <= 1e-9
        } else {
            max_change > 1e-8
        };
        t.record(if correct { 0.0 } else { 1.0 });
    }
    Ok(t.finish())
}

/// Runs every property family with independent streams derived from `seed`.
pub fn run_validation(cfg: &ValidationConfig) -> Result<ValidationReport> {
    let stream = |k: u64| seeded_rng(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    let n = cfg.trials;
    let families = vec![
        invariance(&mut stream(1), n)?,
        metric_axioms(&mut stream(2), n)?,
        geodesic_length(&mut stream(3), n)?,
        curvature(&mut stream(4), n)?,
        entropy_bounds(&mut stream(5), n)?,
        transport_consistency(&mut stream(6), n, cfg.inject_fault)?,
        rank_laws(&mut stream(7), n)?,
        isometry_dichotomy(&mut stream(8), n)?,
    ];
    Ok(ValidationReport { families })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run_validation(&ValidationConfig {
            seed: 1,
            trials: 10,
            inject_fault: false,
        })
        .unwrap();
        for f in &report.families {
            assert!(f.passed, "{f:?}");
        }
    }

    #[test]
    fn injected_fault_fails() {
        let report = run_validation(&ValidationConfig {
            seed: 1,
            trials: 3,
            inject_fault: true,
        })
        .unwrap();
        assert!(!report.all_passed());
    }
}
