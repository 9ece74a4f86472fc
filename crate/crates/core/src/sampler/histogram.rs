use std::collections::BTreeMap;

use super::SamplerError;
use crate::profile::{normalize, DensityProfile};
use crate::spacetime::{Event, Path};

/// Which spatial coordinate the screen measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScreenAxis {
    /// Screen along `x`, placed on the plane `y = distance`.
    #[default]
    X,
    /// Screen along `y`, placed on the plane `x = distance`.
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScreenSpec {
    pub axis: ScreenAxis,
    pub x_min: f64,
    pub x_max: f64,
    pub n_bins: usize,
    pub distance: f64,
}

impl ScreenSpec {
    pub fn new(x_min: f64, x_max: f64, n_bins: usize, distance: f64) -> Result<Self, SamplerError> {
        let spec = Self {
            axis: ScreenAxis::X,
            x_min,
            x_max,
            n_bins,
            distance,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(SamplerError::InvalidScreen("x_min must be < x_max"));
        }
        if self.n_bins < 2 {
            return Err(SamplerError::InvalidScreen("n_bins must be >= 2"));
        }
        if !self.distance.is_finite() {
            return Err(SamplerError::InvalidScreen("distance must be finite"));
        }
        Ok(())
    }

    pub fn bin_width(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_bins as f64
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..self.n_bins)
            .map(|i| self.x_min + (i as f64 + 0.5) * w)
            .collect()
    }

    pub fn bin_of(&self, coord: f64) -> Option<usize> {
        if !(coord >= self.x_min && coord < self.x_max) {
            return None;
        }
        let i = ((coord - self.x_min) / self.bin_width()) as usize;
        Some(i.min(self.n_bins - 1))
    }

    /// (screen coordinate, offset from the screen plane) of an event.
    pub fn project(&self, e: &Event<f64>) -> (f64, f64) {
        match self.axis {
            ScreenAxis::X => (e.x, e.y - self.distance),
            ScreenAxis::Y => (e.y, e.x - self.distance),
        }
    }
}

/// Unnormalized weighted tallies; merging is element-wise addition.
#[derive(Clone, Debug, PartialEq)]
pub struct ScreenHistogram {
    pub spec: ScreenSpec,
    pub weights: Vec<f64>,
    pub weights_sq: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples landing outside `[x_min, x_max)` or off the screen plane.
    pub overflow: u64,
    pub n_samples: u64,
}

impl ScreenHistogram {
    pub fn new(spec: ScreenSpec) -> Self {
        Self {
            spec,
            weights: vec![0.0; spec.n_bins],
            weights_sq: vec![0.0; spec.n_bins],
            counts: vec![0; spec.n_bins],
            overflow: 0,
            n_samples: 0,
        }
    }

    /// Adds a sample at screen coordinate `coord`.
    pub fn add(&mut self, coord: f64, weight: f64) {
        self.n_samples += 1;
        match self.spec.bin_of(coord) {
            Some(i) => {
                self.weights[i] += weight;
                self.weights_sq[i] += weight * weight;
                self.counts[i] += 1;
            }
            None => self.overflow += 1,
        }
    }

    /// Adds the terminal event of a path; events further than one bin width
    /// from the screen plane count as overflow.
    pub fn add_terminal(&mut self, e: &Event<f64>, weight: f64) {
        let (coord, off) = self.spec.project(e);
        if off.abs() > self.spec.bin_width() {
            self.n_samples += 1;
            self.overflow += 1;
        } else {
            self.add(coord, weight);
        }
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.spec, other.spec, "merging histograms of different screens");
        for i in 0..self.weights.len() {
            self.weights[i] += other.weights[i];
            self.weights_sq[i] += other.weights_sq[i];
            self.counts[i] += other.counts[i];
        }
        self.overflow += other.overflow;
        self.n_samples += other.n_samples;
    }

    pub fn is_empty(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }

    /// Unit-area profile with per-bin standard errors.
    ///
    /// Each sample `k` contributes `w_k` to one bin; treating the per-sample
    /// bin contribution as i.i.d., the variance of the bin mean is
    /// `(Σw² / N − (Σw / N)²) / N`, scaled by the same normalization.
    pub fn to_profile(&self) -> DensityProfile {
        let width = self.spec.bin_width();
        let mut density = self.weights.clone();
        let nonempty = normalize(&mut density, width);
        let n = self.n_samples.max(1) as f64;
        let total: f64 = self.weights.iter().sum::<f64>() * width;
        let se = self
            .weights
            .iter()
            .zip(&self.weights_sq)
            .map(|(&s, &s2)| {
                if !nonempty {
                    return 0.0;
                }
                let mean = s / n;
                let var = (s2 / n - mean * mean).max(0.0) / n;
                var.sqrt() * n / total
            })
            .collect();
        let mut metadata = BTreeMap::new();
        metadata.insert("samples".into(), self.n_samples.to_string());
        DensityProfile {
            bin_centers: self.spec.bin_centers(),
            bin_width: width,
            gauge_density: density,
            oracle_density: None,
            std_error: Some(se),
            overflow: self.overflow,
            empty: !nonempty,
            metadata,
        }
    }
}

/// Weighted histogram of path terminals, normalized to unit area.
pub fn accumulate_screen(paths: &[(Path<f64>, f64)], screen: &ScreenSpec) -> DensityProfile {
    let mut h = ScreenHistogram::new(*screen);
    for (path, w) in paths {
        h.add_terminal(&path.end(), *w);
    }
    h.to_profile()
}
