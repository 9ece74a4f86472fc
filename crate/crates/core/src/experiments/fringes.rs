//! Fringe detection and contrast on a binned profile.

use thiserror::Error;

use super::SlitGeometry;
use crate::profile::DensityProfile;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FringeError {
    #[error("insufficient fringes: found {found} maxima, need at least {needed}")]
    InsufficientFringes { found: usize, needed: usize },
    #[error("profile is empty")]
    EmptyProfile,
}

/// Maxima must stand above their surroundings by this share of their own height.
pub const RELATIVE_PROMINENCE: f64 = 0.25;

/// Three-bin moving average; edge bins average over their two neighbors.
pub fn smooth3(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Indices of fringe maxima: interior local maxima of the smoothed
/// profile whose prominence is at least [`RELATIVE_PROMINENCE`] of their height.
pub fn find_maxima(profile: &DensityProfile) -> Vec<usize> {
    let s = smooth3(&profile.gauge_density);
    let n = s.len();
    if n < 3 {
        return Vec::new();
    }
    let candidates: Vec<usize> = (1..n - 1)
        .filter(|&i| s[i] > s[i - 1] && s[i] >= s[i + 1] && s[i] > 0.0)
        .collect();
    candidates
        .into_iter()
        .filter(|&i| prominence(&s, i) >= RELATIVE_PROMINENCE * s[i])
        .collect()
}

/// Height above the higher of the two saddles separating `i` from taller
/// ground (or the profile edge).
fn prominence(s: &[f64], i: usize) -> f64 {
    let h = s[i];
    let mut left = h;
    for &v in s[..i].iter().rev() {
        if v > h {
            break;
        }
        left = left.min(v);
    }
    let mut right = h;
    for &v in &s[i + 1..] {
        if v > h {
            break;
        }
        right = right.min(v);
    }
    h - left.max(right)
}

/// First-harmonic contrast of the profile against the path-difference
/// phase `p·Δr(x) − phase`: `2|Σ D·e^{iφ}| / Σ D`. A pure `1 + cos φ`
/// pattern gives 1, a fringe-free one gives ≈ 0.
pub fn fringe_visibility(
    profile: &DensityProfile,
    geometry: &SlitGeometry,
    p: f64,
    phase: f64,
) -> Result<f64, FringeError> {
    let total: f64 = profile.gauge_density.iter().sum();
    if profile.is_empty() || total <= 0.0 {
        return Err(FringeError::EmptyProfile);
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (&x, &dens) in profile.bin_centers.iter().zip(&profile.gauge_density) {
        let phi = p * geometry.delta_r(x) - phase;
        re += dens * phi.cos();
        im += dens * phi.sin();
    }
    Ok(2.0 * re.hypot(im) / total)
}

/// Whether the bin containing `x = 0` is a maximum (`want_max`) or a
/// minimum of the profile inside the window `|x| ≤ half_window`.
pub fn central_extremum(profile: &DensityProfile, half_window: f64, want_max: bool) -> bool {
    let Some(center) = profile
        .bin_centers
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
    else {
        return false;
    };
    let c = profile.gauge_density[center];
    profile
        .bin_centers
        .iter()
        .zip(&profile.gauge_density)
        .filter(|(x, _)| x.abs() <= half_window)
        .all(|(_, &v)| if want_max { v <= c } else { v >= c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use std::f64::consts::TAU;

    fn profile(xs: Vec<f64>, ys: Vec<f64>) -> DensityProfile {
        DensityProfile {
            bin_width: xs[1] - xs[0],
            bin_centers: xs,
            gauge_density: ys,
            oracle_density: None,
            std_error: None,
            overflow: 0,
            empty: false,
            metadata: BTreeMap::new(),
        }
    }

    #[test]
    fn cosine_pattern() {
        let g = SlitGeometry::new(5.0, 20.0);
        let xs: Vec<f64> = (0..401).map(|i| -20.0 + 0.1 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 1.0 + (TAU * g.delta_r(x)).cos()).collect();
        let prof = profile(xs, ys);
        let v = fringe_visibility(&prof, &g, TAU, 0.0).unwrap();
        assert!(v > 0.95, "{v}");
        let maxima = find_maxima(&prof);
        let sols = g.phase_solutions(TAU, 0.0, -19.5, 19.5);
        assert_eq!(maxima.len(), sols.len());
        for (i, (_, x)) in maxima.iter().zip(sols) {
            assert!((prof.bin_centers[*i] - x).abs() <= 0.1);
        }
        assert!(central_extremum(&prof, 2.0, true));
        assert!(!central_extremum(&prof, 2.0, false));
    }

    #[test]
    fn flat_profile_has_no_fringes() {
        let xs: Vec<f64> = (0..400).map(|i| -100.0 + 0.5 * (i as f64 + 0.5)).collect();
        let prof = profile(xs, vec![1.0; 400]);
        assert!(find_maxima(&prof).is_empty());
        let g = SlitGeometry::new(5.0, 1000.0);
        assert!(fringe_visibility(&prof, &g, 10.0 * TAU, 0.0).unwrap() < 0.1);
    }

    #[test]
    fn small_ripples_are_not_fringes() {
        let xs: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| (-(x - 100.0f64).powi(2) / 800.0).exp() * (1.0 + 0.05 * (x * 1.3).sin()))
            .collect();
        let maxima = find_maxima(&profile(xs, ys));
        assert_eq!(maxima.len(), 1);
    }
}
