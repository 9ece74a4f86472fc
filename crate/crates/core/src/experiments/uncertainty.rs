use super::{find_maxima, ExperimentConfig, FringeError};
use crate::profile::DensityProfile;

const MIN_MAXIMA: usize = 3;

/// `δp·δx` from the fringe spacing of a profile: `δr` is the mean step in
/// `Δr` between consecutive maxima, `δp = p·δr/d`, `δx = d/2`.
pub fn uncertainty_product(profile: &DensityProfile, cfg: &ExperimentConfig) -> Result<f64, FringeError> {
    if profile.is_empty() {
        return Err(FringeError::EmptyProfile);
    }
    let maxima = find_maxima(profile);
    if maxima.len() < MIN_MAXIMA {
        return Err(FringeError::InsufficientFringes {
            found: maxima.len(),
            needed: MIN_MAXIMA,
        });
    }
    let g = cfg.geometry();
    let dr: Vec<f64> = maxima
        .iter()
        .map(|&i| g.delta_r(profile.bin_centers[i]))
        .collect();
    let delta_r = (dr[dr.len() - 1] - dr[0]) / (dr.len() - 1) as f64;
    let d = cfg.slit_separation;
    let delta_p = cfg.particle.momentum() * delta_r / d;
    Ok(delta_p * 0.5 * d)
}

/// Product in the small-angle limit, where `δr = 2π/p` exactly.
pub fn small_angle_uncertainty_product(p: f64, d: f64) -> f64 {
    let delta_r = std::f64::consts::TAU / p;
    (p * delta_r / d) * (0.5 * d)
}
