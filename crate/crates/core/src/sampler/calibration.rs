//! Monte Carlo calibration of the endpoint-spread constants `(a, b)`.
//!
//! Benchmark: a free non-relativistic particle on `x` from `(0, 0)` to
//! `(T, vT)`. The classical path `ρ` is given residual `ω` by choice of the
//! target phase, and `ρ̂ = ρ + A·sin(πt/T)` is the physical path with the
//! same endpoints (the bump lifts the action by exactly `ω`). Neighbors
//! `ρ̂ + ξ` with `ξ(0) = 0`, jittered joints of scale `ξ̄` and a free endpoint
//! are solved for physicality in `ξ(T)`. The mean `|ξ(T)|` is the spread whose
//! inverse is the density of physical paths near `ρ(T)`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{SamplerError, SeedSpec};
use crate::spacetime::ParticleParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationPoint {
    pub xi_bar: f64,
    pub omega: f64,
    /// Mean `|ξ(T)|` over solved neighbors.
    pub spread: f64,
    /// Neighbors without a real physical endpoint.
    pub unsolved: usize,
}

impl CalibrationPoint {
    /// Relative count density of physical paths ending near `ρ(T)`.
    pub fn count_density(&self) -> f64 {
        1.0 / self.spread
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationResult {
    pub a: f64,
    pub b: f64,
    pub points: Vec<CalibrationPoint>,
}

impl CalibrationResult {
    pub fn model_spread(&self, xi_bar: f64, omega: f64) -> f64 {
        self.a * xi_bar * xi_bar + self.b * xi_bar * omega.sqrt()
    }

    pub fn point(&self, xi_bar: f64, omega: f64) -> Option<&CalibrationPoint> {
        self.points
            .iter()
            .find(|p| p.xi_bar == xi_bar && p.omega == omega)
    }
}

/// Relative least-squares fit of `spread ≈ a·ξ̄² + b·ξ̄·√ω` over the grid
/// `xi_bars × omegas`, `samples` neighbors per grid point.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_density(
    particle: &ParticleParams<f64>,
    duration: f64,
    n_joints: usize,
    xi_bars: &[f64],
    omegas: &[f64],
    samples: usize,
    seeds: &SeedSpec,
) -> Result<CalibrationResult, SamplerError> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(SamplerError::InvalidConfig("duration must be > 0"));
    }
    if n_joints == 0 || samples == 0 {
        return Err(SamplerError::InvalidConfig("need >= 1 joint and >= 1 sample"));
    }
    let grid: Vec<(usize, f64, f64)> = xi_bars
        .iter()
        .flat_map(|&x| omegas.iter().map(move |&w| (x, w)))
        .enumerate()
        .map(|(i, (x, w))| (i, x, w))
        .collect();
    let points: Vec<CalibrationPoint> = grid
        .par_iter()
        .map(|&(i, xi_bar, omega)| {
            let mut rng = seeds.rng(i, 7);
            spread_at(particle, duration, n_joints, xi_bar, omega, samples, &mut rng)
        })
        .collect();

    // normal equations for spread = a·u + b·v in relative error, weights 1/spread²
    let (mut suu, mut suv, mut svv, mut su_y, mut sv_y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points.iter().filter(|p| p.spread > 0.0) {
        let w = 1.0 / (p.spread * p.spread);
        let u = p.xi_bar * p.xi_bar;
        let v = p.xi_bar * p.omega.sqrt();
        suu += w * u * u;
        suv += w * u * v;
        svv += w * v * v;
        su_y += w * u * p.spread;
        sv_y += w * v * p.spread;
    }
    let det = suu * svv - suv * suv;
    if det.abs() < 1e-300 {
        return Err(SamplerError::InvalidConfig("calibration grid is degenerate"));
    }
    let a = (su_y * svv - sv_y * suv) / det;
    let b = (suu * sv_y - suv * su_y) / det;
    Ok(CalibrationResult { a, b, points })
}

fn spread_at<R: Rng>(
    particle: &ParticleParams<f64>,
    duration: f64,
    n_joints: usize,
    xi_bar: f64,
    omega: f64,
    samples: usize,
    rng: &mut R,
) -> CalibrationPoint {
    let m = particle.mass();
    let v = particle.momentum() / m;
    let n_seg = n_joints + 1;
    let dt = duration / n_seg as f64;
    let bump: Vec<f64> = (0..=n_seg)
        .map(|k| (std::f64::consts::PI * k as f64 / n_seg as f64).sin())
        .collect();
    let bump_sq: f64 = bump.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    // (m/2)·Σ(Δη)²/Δt = ω
    let amp = (2.0 * omega * dt / (m * bump_sq)).sqrt();
    let d_eta: Vec<f64> = bump.windows(2).map(|w| amp * (w[1] - w[0])).collect();

    let mut xi = vec![0.0; n_seg + 1];
    let mut total = 0.0;
    let mut solved = 0usize;
    for _ in 0..samples {
        for x in xi.iter_mut().take(n_joints + 1).skip(1) {
            let g: f64 = rng.sample(StandardNormal);
            *x = xi_bar * g;
        }
        // action change over the fixed segments
        let mut c = 0.0;
        for k in 0..n_joints {
            let dx_hat = v * dt + d_eta[k];
            let dxi = xi[k + 1] - xi[k];
            c += m * dx_hat * dxi / dt + 0.5 * m * dxi * dxi / dt;
        }
        // last segment: α·u² + β·u + c = 0 with u = ξ(T) − ξ_J
        let alpha = 0.5 * m / dt;
        let beta = m * (v * dt + d_eta[n_joints]) / dt;
        let disc = beta * beta - 4.0 * alpha * c;
        if disc < 0.0 {
            continue;
        }
        let u = -2.0 * c / (beta + beta.signum() * disc.sqrt());
        total += (xi[n_joints] + u).abs();
        solved += 1;
    }
    CalibrationPoint {
        xi_bar,
        omega,
        spread: total / solved.max(1) as f64,
        unsolved: samples - solved,
    }
}
