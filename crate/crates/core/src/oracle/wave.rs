use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use super::OracleError;
use crate::scalar::Real;

/// Largest accepted `dt / (mass·dx²)`.
pub const STEP_LIMIT: f64 = 10.0;

/// Complex amplitudes on the periodic grid `x_min + i·dx`, `i < N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveField<T> {
    pub values: Vec<Complex<T>>,
    pub x_min: T,
    pub dx: T,
    pub t: T,
}

impl<T: Real> WaveField<T> {
    pub fn new(values: Vec<Complex<T>>, x_min: T, dx: T) -> Result<Self, OracleError> {
        let field = Self {
            values,
            x_min,
            dx,
            t: T::zero(),
        };
        field.validate()?;
        Ok(field)
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(n: usize, x_min: T, dx: T, f: impl Fn(T) -> Complex<T>) -> Result<Self, OracleError> {
        let values = (0..n).map(|i| f(x_min + dx * T::lit(i as f64))).collect();
        Self::new(values, x_min, dx)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.values.len() < 4 {
            return Err(OracleError::InvalidField("need at least 4 grid points"));
        }
        if !(self.dx.is_finite() && self.dx > T::zero()) || !self.x_min.is_finite() {
            return Err(OracleError::InvalidField("dx must be > 0"));
        }
        if self.values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(OracleError::InvalidField("non-finite amplitude"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> T {
        self.x_min + self.dx * T::lit(i as f64)
    }

    /// `Σ|ψ|²·dx`.
    pub fn norm_sq(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()) * self.dx
    }

    /// `⟨x⟩` under `|ψ|²`.
    pub fn mean_position(&self) -> T {
        let (mut num, mut den) = (T::zero(), T::zero());
        for (i, z) in self.values.iter().enumerate() {
            let w = z.norm_sqr();
            num += w * self.x(i);
            den += w;
        }
        num / den
    }

    /// `⟨(x − ⟨x⟩)²⟩` under `|ψ|²`.
    pub fn position_variance(&self) -> T {
        let mu = self.mean_position();
        let (mut num, mut den) = (T::zero(), T::zero());
        for (i, z) in self.values.iter().enumerate() {
            let w = z.norm_sqr();
            let d = self.x(i) - mu;
            num += w * d * d;
            den += w;
        }
        num / den
    }
}

/// Strang split-step Fourier evolution of `i∂ψ/∂t = −∂²ψ/(2m) + Vψ` on
/// the periodic grid. The scheme is unitary; steps with
/// `dt > STEP_LIMIT·mass·dx²` are refused because the kinetic phase per step
/// then aliases badly at the grid cutoff.
pub fn evolve_wave<T: Real + FftNum>(
    field: &WaveField<T>,
    dt: T,
    n_steps: usize,
    potential: &[T],
    mass: T,
) -> Result<WaveField<T>, OracleError> {
    field.validate()?;
    let n = field.len();
    if potential.len() != n {
        return Err(OracleError::InvalidField("potential grid length differs from the field"));
    }
    if potential.iter().any(|v| !v.is_finite()) {
        return Err(OracleError::InvalidField("non-finite potential"));
    }
    if !(mass.is_finite() && mass > T::zero()) {
        return Err(OracleError::InvalidField("mass must be > 0"));
    }
    let limit = T::lit(STEP_LIMIT) * mass * field.dx * field.dx;
    if !(dt.is_finite() && dt > T::zero()) || dt > limit {
        return Err(OracleError::Unstable {
            dt: dt.to_f64_lossy(),
            limit: limit.to_f64_lossy(),
        });
    }

    let half = T::lit(0.5);
    let phase = |angle: T| Complex::new(angle.cos(), angle.sin());
    let half_v: Vec<Complex<T>> = potential.iter().map(|&v| phase(-v * dt * half)).collect();
    let dk = T::TAU() / (T::lit(n as f64) * field.dx);
    let kinetic: Vec<Complex<T>> = (0..n)
        .map(|j| {
            let signed = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
            let k = dk * T::lit(signed);
            phase(-k * k * dt / (T::lit(2.0) * mass))
        })
        .collect();
    let mut planner = FftPlanner::<T>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let scale = T::one() / T::lit(n as f64);

    let mut psi = field.values.clone();
    for _ in 0..n_steps {
        psi.iter_mut().zip(&half_v).for_each(|(z, h)| *z *= h);
        forward.process(&mut psi);
        psi.iter_mut().zip(&kinetic).for_each(|(z, k)| *z *= k * scale);
        inverse.process(&mut psi);
        psi.iter_mut().zip(&half_v).for_each(|(z, h)| *z *= h);
    }
    Ok(WaveField {
        values: psi,
        x_min: field.x_min,
        dx: field.dx,
        t: field.t + dt * T::lit(n_steps as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(n: usize, dx: f64, k0: f64, width: f64) -> WaveField<f64> {
        let x_min = -0.5 * n as f64 * dx;
        WaveField::from_fn(n, x_min, dx, |x| {
            let env = (-x * x / (4.0 * width * width)).exp();
            Complex::new(0.0, k0 * x).exp() * env
        })
        .unwrap()
    }

    #[test]
    fn norm_is_conserved_each_step() {
        let f = packet(256, 0.1, 2.0, 1.0);
        let v: Vec<f64> = (0..256).map(|i| 0.01 * (f.x(i)).powi(2)).collect();
        let mut cur = f.clone();
        let n0 = f.norm_sq();
        for _ in 0..20 {
            cur = evolve_wave(&cur, 0.01, 1, &v, 1.0).unwrap();
            assert!((cur.norm_sq() - n0).abs() < 1e-9 * n0);
        }
    }

    #[test]
    fn symmetric_packet_stays_centered() {
        let f = packet(256, 0.1, 0.0, 1.0);
        let out = evolve_wave(&f, 0.005, 200, &vec![0.0; 256], 1.0).unwrap();
        assert!((out.mean_position() - f.mean_position()).abs() < 1e-9);
    }

    #[test]
    fn free_packet_moves_and_spreads_per_closed_form() {
        let (dx, width, k0, m) = (0.05, 1.0, 1.0, 1.0);
        let f = packet(1024, dx, k0, width);
        let out = evolve_wave(&f, 0.01, 100, &vec![0.0; 1024], m).unwrap();
        assert!((out.t - 1.0).abs() < 1e-12);
        let shift = out.mean_position() - f.mean_position();
        assert!((shift - k0 / m).abs() <= dx, "{shift}");
        // σ(t)² = σ₀²·(1 + (t/(2mσ₀²))²)
        let expect = width * width * (1.0 + (1.0 / (2.0 * m * width * width)).powi(2));
        assert!((out.position_variance() / expect - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oversized_step_is_refused() {
        let f = packet(64, 0.1, 0.0, 1.0);
        let err = evolve_wave(&f, 1.0, 1, &vec![0.0; 64], 1.0).unwrap_err();
        assert!(matches!(err, OracleError::Unstable { .. }));
        assert!(evolve_wave(&f, 0.01, 1, &vec![0.0; 3], 1.0).is_err());
    }

    #[test]
    fn single_precision_runs() {
        let f = WaveField::<f32>::from_fn(64, -3.2, 0.1, |x| Complex::new((-x * x).exp(), 0.0)).unwrap();
        let out = evolve_wave(&f, 0.01, 10, &vec![0.0; 64], 1.0).unwrap();
        assert!((out.norm_sq() - f.norm_sq()).abs() < 1e-4);
    }
}
