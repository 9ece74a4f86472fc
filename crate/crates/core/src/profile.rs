//! Binned screen densities, the primary output artifact.

use std::collections::BTreeMap;

/// Normalized screen density with an optional reference column.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub bin_centers: Vec<f64>,
    pub bin_width: f64,
    /// Unit-area density; all zeros when `empty`.
    pub gauge_density: Vec<f64>,
    pub oracle_density: Option<Vec<f64>>,
    /// Per-bin standard error of `gauge_density` (Monte Carlo only).
    pub std_error: Option<Vec<f64>>,
    pub overflow: u64,
    pub empty: bool,
    /// Ordered key/value provenance written into output headers.
    pub metadata: BTreeMap<String, String>,
}

impl DensityProfile {
    pub fn len(&self) -> usize {
        self.bin_centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// `Σ density · width`.
    pub fn area(&self) -> f64 {
        self.gauge_density.iter().sum::<f64>() * self.bin_width
    }

    /// L1 distance `Σ |a − b| · width` between the gauge columns.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        l1(&self.gauge_density, &other.gauge_density, self.bin_width)
    }

    /// Expected L1 distance scale between two independent estimates of the
    /// same density: `Σ √(se_a² + se_b²) · width`. `None` without errors.
    pub fn l1_standard_error(&self, other: &Self) -> Option<f64> {
        let (a, b) = (self.std_error.as_ref()?, other.std_error.as_ref()?);
        Some(a.iter().zip(b).map(|(x, y)| x.hypot(*y)).sum::<f64>() * self.bin_width)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

pub(crate) fn l1(a: &[f64], b: &[f64], width: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * width
}

/// Rescales `values` to unit area over bins of `width`; all-zero input stays zero.
pub(crate) fn normalize(values: &mut [f64], width: f64) -> bool {
    let total: f64 = values.iter().sum::<f64>() * width;
    if total > 0.0 && total.is_finite() {
        values.iter_mut().for_each(|v| *v /= total);
        true
    } else {
        values.iter_mut().for_each(|v| *v = 0.0);
        false
    }
}
