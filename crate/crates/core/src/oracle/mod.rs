//! Reference results from standard quantum mechanics.

mod lattice;
mod madelung;
mod wave;

pub use lattice::{filtered_path_sum, path_sum_comparison, LatticeSpec, PathFilter, PathSumReport, MAX_LATTICE_PATHS};
pub use madelung::{madelung_decompose, madelung_residuals, MadelungFields, MadelungResiduals, SIGMA_THRESHOLD};
pub use wave::{evolve_wave, WaveField, STEP_LIMIT};

use thiserror::Error;

use crate::experiments::{Amplitude, ExperimentConfig, SlitGeometry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("unstable step: dt = {dt} exceeds {limit} (= STEP_LIMIT·mass·dx²)")]
    Unstable { dt: f64, limit: f64 },
    #[error("invalid wave field: {0}")]
    InvalidField(&'static str),
    #[error("no grid point above the density threshold")]
    ThresholdRegionEmpty,
    #[error("lattice has {paths} paths, more than the {limit} that can be enumerated")]
    LatticeTooLarge { paths: f64, limit: f64 },
    #[error("invalid lattice: {0}")]
    InvalidLattice(&'static str),
}

/// Two-slit wave intensity at screen coordinate `x`, with the second
/// slit's wave advanced by `phase`.
///
/// Ideal mode uses unit amplitudes, so dark fringes are exact zeros;
/// inverse-r mode weights each wave by `1/r`.
pub fn two_slit_intensity(geometry: &SlitGeometry, p: f64, x: f64, phase: f64, amplitude: Amplitude) -> f64 {
    let (r1, r2) = geometry.arms(x);
    let (a1, a2) = match amplitude {
        Amplitude::Ideal => (1.0, 1.0),
        Amplitude::InverseR => (1.0 / r1, 1.0 / r2),
    };
    // interference term from Δr directly: p·r itself is large and loses digits
    let phi = p * geometry.delta_r(x) - phase;
    a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * phi.cos()
}

/// Unobserved two-slit intensity for the geometry and amplitude mode in `cfg`.
pub fn two_slit_wave_intensity(x: f64, cfg: &ExperimentConfig) -> f64 {
    two_slit_intensity(&cfg.geometry(), cfg.particle.momentum(), x, 0.0, cfg.amplitude)
}
