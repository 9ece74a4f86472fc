use super::{OracleError, WaveField};
use crate::scalar::Real;

/// Phase is tracked only where `σ > SIGMA_THRESHOLD · max σ`.
pub const SIGMA_THRESHOLD: f64 = 1e-10;

/// `ψ = √σ·exp(iS)` on the grid of a [`WaveField`].
#[derive(Clone, Debug, PartialEq)]
pub struct MadelungFields<T> {
    pub sigma: Vec<T>,
    /// Unwrapped along each run of unmasked points; zero where masked.
    pub s_phase: Vec<T>,
    pub mask: Vec<bool>,
    pub dx: T,
    pub t: T,
}

impl<T: Real> MadelungFields<T> {
    /// `√σ·exp(iS)` at point `i`.
    pub fn reconstruct(&self, i: usize) -> num_complex::Complex<T> {
        num_complex::Complex::from_polar(self.sigma[i].sqrt(), self.s_phase[i])
    }
}

pub fn madelung_decompose<T: Real>(field: &WaveField<T>) -> MadelungFields<T> {
    let sigma: Vec<T> = field.values.iter().map(|z| z.norm_sqr()).collect();
    let peak = sigma.iter().copied().fold(T::zero(), T::max);
    let cut = T::lit(SIGMA_THRESHOLD) * peak;
    let mask: Vec<bool> = sigma.iter().map(|&s| s > cut && s > T::zero()).collect();
    let mut s_phase = vec![T::zero(); sigma.len()];
    let mut prev: Option<T> = None;
    for (i, z) in field.values.iter().enumerate() {
        if !mask[i] {
            prev = None;
            continue;
        }
        let raw = z.arg();
        let s = match prev {
            None => raw,
            Some(p) => p + wrap(raw - p),
        };
        s_phase[i] = s;
        prev = Some(s);
    }
    MadelungFields {
        sigma,
        s_phase,
        mask,
        dx: field.dx,
        t: field.t,
    }
}

/// Representative of `a` in `(−π, π]`.
fn wrap<T: Real>(a: T) -> T {
    let r = a - T::TAU() * ((a + T::PI()) / T::TAU()).floor();
    if r <= -T::PI() {
        r + T::TAU()
    } else {
        r
    }
}

/// Max-norm residuals on the interior masked region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MadelungResiduals<T> {
    /// `∂σ/∂t + ∂(σ·∂S/m)/∂x`.
    pub continuity: T,
    /// `∂S/∂t + (∂S)²/2m + V − ∂²√σ/(2m√σ)`, or without the last term.
    pub hamilton_jacobi: T,
    pub points: usize,
}

/// Residuals of the continuity and quantum Hamilton-Jacobi equations
/// between two snapshots, time-centered at their midpoint. Spatial terms
/// use second-order differences; the flux divergence is staggered.
pub fn madelung_residuals<T: Real>(
    before: &MadelungFields<T>,
    after: &MadelungFields<T>,
    mass: T,
    potential: &[T],
    quantum_potential: bool,
) -> Result<MadelungResiduals<T>, OracleError> {
    let n = before.sigma.len();
    if after.sigma.len() != n || potential.len() != n {
        return Err(OracleError::InvalidField("grids differ in length"));
    }
    let dt = after.t - before.t;
    if !(dt > T::zero()) {
        return Err(OracleError::InvalidField("snapshots must be in time order"));
    }
    let dx = before.dx;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let ok = |i: usize| before.mask[i] && after.mask[i];
    let sig = |i: usize| half * (before.sigma[i] + after.sigma[i]);
    let root = |i: usize| half * (before.sigma[i].sqrt() + after.sigma[i].sqrt());
    // mean of wrapped phase differences S_j − S_i at both times
    let ds = |i: usize, j: usize| {
        half * (wrap(before.s_phase[j] - before.s_phase[i]) + wrap(after.s_phase[j] - after.s_phase[i]))
    };
    let (mut cont, mut qhj, mut points) = (T::zero(), T::zero(), 0usize);
    for i in 1..n.saturating_sub(1) {
        if !(ok(i - 1) && ok(i) && ok(i + 1)) {
            continue;
        }
        points += 1;
        let dsig_dt = (after.sigma[i] - before.sigma[i]) / dt;
        let flux_r = half * (sig(i) + sig(i + 1)) * ds(i, i + 1) / (dx * mass);
        let flux_l = half * (sig(i - 1) + sig(i)) * ds(i - 1, i) / (dx * mass);
        let r1 = dsig_dt + (flux_r - flux_l) / dx;

        let ds_dt = wrap(after.s_phase[i] - before.s_phase[i]) / dt;
        let grad = ds(i - 1, i + 1) / (two * dx);
        let mut r2 = ds_dt + grad * grad / (two * mass) + potential[i];
        if quantum_potential {
            let lap = (root(i + 1) - two * root(i) + root(i - 1)) / (dx * dx);
            r2 -= lap / (two * mass * root(i));
        }
        cont = cont.max(r1.abs());
        qhj = qhj.max(r2.abs());
    }
    if points == 0 {
        return Err(OracleError::ThresholdRegionEmpty);
    }
    Ok(MadelungResiduals {
        continuity: cont,
        hamilton_jacobi: qhj,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::evolve_wave;
    use num_complex::Complex;
    use std::f64::consts::PI;

    #[test]
    fn constant_field() {
        let f = WaveField::from_fn(16, 0.0, 0.1, |_| Complex::new(1.0, 0.0)).unwrap();
        let m = madelung_decompose(&f);
        assert!(m.sigma.iter().all(|&s| s == 1.0));
        assert!(m.s_phase.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn plane_wave_unwraps_linearly_and_has_tiny_residuals() {
        let n = 128;
        let dx = 0.1;
        let p = 2.0 * PI * 5.0 / (n as f64 * dx);
        let f = WaveField::from_fn(n, 0.0, dx, |x| Complex::new(0.0, p * x).exp()).unwrap();
        let m = madelung_decompose(&f);
        for i in 0..n {
            assert!((m.s_phase[i] - (p * f.x(i) + m.s_phase[0])).abs() < 1e-9);
            assert!((m.reconstruct(i) - f.values[i]).norm() < 1e-9);
        }
        let v = vec![0.0; n];
        let g = evolve_wave(&f, 0.001, 1, &v, 1.0).unwrap();
        let r = madelung_residuals(&m, &madelung_decompose(&g), 1.0, &v, true).unwrap();
        assert!(r.continuity < 1e-8 && r.hamilton_jacobi < 1e-8, "{r:?}");
    }

    #[test]
    fn gaussian_packet_phase_is_quadratic() {
        // chirped packet exp(−x²/2 + i·c·x²)
        let c: f64 = 0.3;
        let f = WaveField::from_fn(200, -5.0, 0.05, |x| Complex::new(-x * x / 2.0, c * x * x).exp()).unwrap();
        let m = madelung_decompose(&f);
        let s0 = m.s_phase[100];
        for i in 60..140 {
            let x = f.x(i);
            assert!((m.s_phase[i] - s0 - c * x * x).abs() < 1e-9);
            assert!((m.sigma[i] - (-x * x).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn nodes_are_masked() {
        let f = WaveField::from_fn(8, 0.0, 1.0, |x| Complex::new(if x < 4.0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let m = madelung_decompose(&f);
        assert_eq!(m.mask, vec![true, true, true, true, false, false, false, false]);
        let empty = WaveField::from_fn(8, 0.0, 1.0, |x| Complex::new(if x == 3.0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let e = madelung_decompose(&empty);
        let later = MadelungFields { t: 1.0, ..e.clone() };
        assert_eq!(
            madelung_residuals(&e, &later, 1.0, &[0.0; 8], true),
            Err(OracleError::ThresholdRegionEmpty)
        );
    }
}
