use std::f64::consts::TAU;

/// Two slits at `x = ∓d/2` on `y = 0`, screen on `y = L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlitGeometry {
    pub d: f64,
    pub distance: f64,
}

impl SlitGeometry {
    pub fn new(d: f64, distance: f64) -> Self {
        Self { d, distance }
    }

    pub fn slit_a(&self) -> f64 {
        -0.5 * self.d
    }

    pub fn slit_a_prime(&self) -> f64 {
        0.5 * self.d
    }

    /// Arm lengths `(r_A, r_A')` to screen coordinate `x`.
    pub fn arms(&self, x: f64) -> (f64, f64) {
        (
            (x - self.slit_a()).hypot(self.distance),
            (x - self.slit_a_prime()).hypot(self.distance),
        )
    }

    /// `Δr = r_A − r_A'`, increasing in `x` and bounded by `±d`.
    pub fn delta_r(&self, x: f64) -> f64 {
        let (r1, r2) = self.arms(x);
        // (r1² − r2²)/(r1 + r2) avoids cancellation far from the axis
        2.0 * self.d * x / (r1 + r2)
    }

    /// Screen coordinate where `Δr` equals `target`, if `|target| < d`
    /// and the root lies inside `[x_min, x_max]`.
    pub fn solve_delta_r(&self, target: f64, x_min: f64, x_max: f64) -> Option<f64> {
        if target.abs() >= self.d {
            return None;
        }
        let (mut lo, mut hi) = (x_min, x_max);
        if self.delta_r(lo) > target || self.delta_r(hi) < target {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.delta_r(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + mid.abs()) {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Every `x` in `[x_min, x_max]` with `p·Δr(x) = phase + 2πn`, paired
    /// with `n`, ascending.
    pub fn phase_solutions(&self, p: f64, phase: f64, x_min: f64, x_max: f64) -> Vec<(i64, f64)> {
        let lambda = TAU / p;
        let shift = phase / p;
        let n_lo = ((self.delta_r(x_min) - shift) / lambda).floor() as i64 - 1;
        let n_hi = ((self.delta_r(x_max) - shift) / lambda).ceil() as i64 + 1;
        (n_lo..=n_hi)
            .filter_map(|n| {
                self.solve_delta_r(n as f64 * lambda + shift, x_min, x_max)
                    .map(|x| (n, x))
            })
            .collect()
    }

    /// Small-angle fringe spacing `λL/d`.
    pub fn fringe_spacing(&self, p: f64) -> f64 {
        TAU / p * self.distance / self.d
    }
}
