//! The physicality predicate and the quantities built on it.
//!
//! A path `ρ` from `A` to `B` is physical when `κ(B)·exp(iS)·κ⁻¹(A) = 1`,
//! with the constant in the exponent fixed to `i`. Everything reduces to
//! the distance of a phase from the nearest multiple of `2π`.

use crate::scalar::Real;
use crate::spacetime::ParticleParams;

/// Tolerance for exact-solve physicality checks.
pub const EXACT_TOL: f64 = 1e-9;

/// Unit-modulus state `κ = exp(i·angle)`, stored by its angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PhaseState<T> {
    angle: T,
}

impl<T: Real> PhaseState<T> {
    pub fn from_angle(angle: T) -> Self {
        let mut a = angle % T::TAU();
        if a < T::zero() {
            a += T::TAU();
        }
        if a >= T::TAU() {
            a = T::zero();
        }
        Self { angle: a }
    }

    pub fn identity() -> Self {
        Self { angle: T::zero() }
    }

    pub fn angle(&self) -> T {
        self.angle
    }

    /// Product of states.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_angle(self.angle + other.angle)
    }

    pub fn inverse(&self) -> Self {
        Self::from_angle(-self.angle)
    }
}

/// Deficit `ω` of a phase from its nearest multiple `2π·n_nearest`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResidual<T> {
    pub omega: T,
    pub n_nearest: i64,
}

/// `ω = min_n |S − δ − 2πn|`. Exact half-way ties resolve to the smaller `n`.
pub fn phase_residual<T: Real>(action: T, delta: T) -> PhaseResidual<T> {
    let r = action - delta;
    let turns = r / T::TAU();
    let mut n = turns.floor();
    if turns - n > T::lit(0.5) {
        n += T::one();
    }
    let omega = (r - T::TAU() * n).abs().min(T::PI());
    PhaseResidual {
        omega,
        n_nearest: n.to_i64().unwrap_or(0),
    }
}

/// Physicality of a single monotonic path between states `κ_A` and `κ_B`:
/// the action must match `angle(κ_B) − angle(κ_A)` modulo `2π`.
pub fn is_physical<T: Real>(
    action: T,
    kappa_a: &PhaseState<T>,
    kappa_b: &PhaseState<T>,
    tol: T,
) -> bool {
    phase_residual(action, kappa_b.angle() - kappa_a.angle()).omega <= tol
}

/// Correlated-pair condition `exp[i(S_ρ − S_ρ')] = κ(A')·κ⁻¹(A)`, where
/// `delta_kappa_angle = angle(κ(A')) − angle(κ(A))`.
pub fn pair_is_physical<T: Real>(
    s_rho: T,
    s_rho_prime: T,
    delta_kappa_angle: T,
    tol: T,
) -> bool {
    phase_residual(s_rho - s_rho_prime, delta_kappa_angle).omega <= tol
}

/// Reachable sphere radii `2πn/p`, `n = 1..=n_max`.
pub fn quantized_radii<T: Real>(particle: &ParticleParams<T>, n_max: usize) -> Vec<T> {
    let p = particle.momentum();
    (1..=n_max)
        .map(|n| T::TAU() * T::lit(n as f64) / p)
        .collect()
}

/// Constants of the endpoint-spread estimate `ξ(T) ≃ a·ξ̄² + b·ξ̄·√ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityParams<T> {
    a: T,
    b: T,
    xi_bar: T,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("density parameter `{0}` must be positive and finite")]
pub struct DensityParamError(pub &'static str);

impl<T: Real> DensityParams<T> {
    pub fn new(a: T, b: T, xi_bar: T) -> Result<Self, DensityParamError> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if !ok(a) {
            return Err(DensityParamError("a"));
        }
        if !ok(b) {
            return Err(DensityParamError("b"));
        }
        if !ok(xi_bar) {
            return Err(DensityParamError("xi_bar"));
        }
        Ok(Self { a, b, xi_bar })
    }

    /// `a = b = 1`, `ξ̄ = λ/10`.
    pub fn default_for(particle: &ParticleParams<T>) -> Self {
        Self {
            a: T::one(),
            b: T::one(),
            xi_bar: particle.wavelength() / T::lit(10.0),
        }
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn xi_bar(&self) -> T {
        self.xi_bar
    }

    /// `ξ(T)` for a given residual.
    pub fn endpoint_spread(&self, omega: T) -> T {
        self.a * self.xi_bar * self.xi_bar + self.b * self.xi_bar * omega.max(T::zero()).sqrt()
    }
}

/// Relative density of physical paths near a path with residual `ω`:
/// `1 / (a·ξ̄² + b·ξ̄·√ω)`.
pub fn neighborhood_density<T: Real>(omega: &PhaseResidual<T>, params: &DensityParams<T>) -> T {
    density_at(omega.omega, params)
}

#[inline]
pub(crate) fn density_at<T: Real>(omega: T, params: &DensityParams<T>) -> T {
    T::one() / params.endpoint_spread(omega)
}

/// Mean of the neighborhood density over `ω` uniform on `[0, π]`, i.e. over
/// one fringe period of a linearly swept phase.
pub fn mean_density<T: Real>(params: &DensityParams<T>) -> T {
    // ∫₀^π dω / (A + B√ω) = (2/B)·[√π − (A/B)·ln(1 + B√π/A)]
    let big_a = params.a * params.xi_bar * params.xi_bar;
    let big_b = params.b * params.xi_bar;
    let root_pi = T::PI().sqrt();
    let integral =
        T::lit(2.0) / big_b * (root_pi - big_a / big_b * (big_b * root_pi / big_a).ln_1p());
    integral / T::PI()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn residual_examples() {
        let r = phase_residual(TAU + 0.3, 0.0);
        assert_abs_diff_eq!(r.omega, 0.3, epsilon = 1e-12);
        assert_eq!(r.n_nearest, 1);
        let r = phase_residual(-0.3, 0.0);
        assert_abs_diff_eq!(r.omega, 0.3, epsilon = 1e-12);
        assert_eq!(r.n_nearest, 0);
        let r = phase_residual(PI, 0.0);
        assert_eq!(r.omega, PI);
        assert_eq!(r.n_nearest, 0);
        let r = phase_residual(-PI, 0.0);
        assert_eq!(r.n_nearest, -1);
    }

    #[test]
    fn physicality_examples() {
        let k = PhaseState::from_angle(1.1);
        assert!(is_physical(2.0 * TAU, &k, &k, EXACT_TOL));
        assert!(!is_physical(TAU + 0.5, &k, &k, 1e-6));
        let ka = PhaseState::from_angle(0.2);
        let kb = PhaseState::from_angle(0.7);
        assert!(is_physical(TAU + 0.5, &ka, &kb, 1e-6));
    }

    #[test]
    fn pair_examples() {
        assert!(pair_is_physical(3.0 + TAU, 3.0, 0.0, EXACT_TOL));
        assert!(pair_is_physical(1.7, 1.7, 0.0, EXACT_TOL));
        assert!(pair_is_physical(0.4 + PI, 0.4, PI, 1e-9));
        assert!(!pair_is_physical(0.4 + PI, 0.4, 0.0, 1e-9));
    }

    #[test]
    fn radii_examples() {
        let p = ParticleParams::new(1.0, PI).unwrap();
        let r = quantized_radii(&p, 2);
        assert_abs_diff_eq!(r[0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], 4.0, epsilon = 1e-15);
        let p = ParticleParams::new(1.0, TAU).unwrap();
        assert_eq!(quantized_radii(&p, 3), vec![1.0, 2.0, 3.0]);
        let p = ParticleParams::new(1.0, 1.0).unwrap();
        assert_eq!(quantized_radii(&p, 1), vec![TAU]);
    }

    #[test]
    fn density_examples() {
        let params = DensityParams::new(1.0, 1.0, 0.1).unwrap();
        let r0 = PhaseResidual { omega: 0.0, n_nearest: 0 };
        assert_abs_diff_eq!(neighborhood_density(&r0, &params), 100.0, epsilon = 1e-9);
        let r1 = phase_residual(0.2, 0.0);
        let r2 = phase_residual(0.9, 0.0);
        assert!(neighborhood_density(&r1, &params) > neighborhood_density(&r2, &params));
        assert!(DensityParams::new(0.0, 1.0, 0.1).is_err());
        assert!(DensityParams::new(1.0, -1.0, 0.1).is_err());
        assert!(DensityParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn mean_density_matches_quadrature() {
        let params = DensityParams::new(0.7, 1.3, 0.15).unwrap();
        let n = 2_000_000;
        let h = PI / n as f64;
        let quad: f64 = (0..n)
            .map(|k| density_at((k as f64 + 0.5) * h, &params))
            .sum::<f64>()
            * h
            / PI;
        assert_abs_diff_eq!(mean_density(&params), quad, epsilon = 1e-3 * quad);
    }

    #[test]
    fn phase_state_wraps() {
        let k = PhaseState::from_angle(-0.5);
        assert_abs_diff_eq!(k.angle(), TAU - 0.5, epsilon = 1e-15);
        let c = k.compose(&PhaseState::from_angle(0.5));
        assert!(c.angle().abs() < 1e-12 || (c.angle() - TAU).abs() < 1e-12);
        assert_eq!(PhaseState::<f64>::from_angle(TAU).angle(), 0.0);
    }

    proptest! {
        #[test]
        fn residual_is_periodic(s in -100.0f64..100.0, d in -10.0f64..10.0, k in -100i64..100) {
            let a = phase_residual(s, d).omega;
            let b = phase_residual(s + TAU * k as f64, d).omega;
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn residual_reconstructs(s in -1e3f64..1e3, d in -10.0f64..10.0) {
            let r = phase_residual(s, d);
            prop_assert!((0.0..=PI).contains(&r.omega));
            let back = (s - d - TAU * r.n_nearest as f64).abs();
            prop_assert!((back - r.omega).abs() <= 1e-12);
        }

        #[test]
        fn global_phase_is_immaterial(s in -50.0f64..50.0, a in 0.0f64..TAU, b in 0.0f64..TAU,
                                      shift in -20.0f64..20.0, tol in 0.0f64..PI) {
            let ka = PhaseState::from_angle(a);
            let kb = PhaseState::from_angle(b);
            let g = PhaseState::from_angle(shift);
            let base = phase_residual(s, kb.angle() - ka.angle()).omega;
            // skip draws whose residual sits on the tolerance edge
            prop_assume!((base - tol).abs() > 1e-9);
            prop_assert_eq!(
                is_physical(s, &ka, &kb, tol),
                is_physical(s, &ka.compose(&g), &kb.compose(&g), tol)
            );
        }

        #[test]
        fn pair_swap_antisymmetry(s1 in -50.0f64..50.0, s2 in -50.0f64..50.0, d in -PI..PI, tol in 0.0f64..PI) {
            let base = phase_residual(s1 - s2, d).omega;
            prop_assume!((base - tol).abs() > 1e-9);
            prop_assert_eq!(pair_is_physical(s1, s2, d, tol), pair_is_physical(s2, s1, -d, tol));
        }

        #[test]
        fn density_decreasing_and_continuous(w in 0.0f64..3.1, dw in 1e-6f64..0.04) {
            let params = DensityParams::new(1.0, 1.0, 0.1).unwrap();
            let lo = density_at(w, &params);
            let hi = density_at((w + dw).min(PI), &params);
            prop_assert!(lo > hi);
            prop_assert!(lo <= density_at(0.0, &params));
            // Hölder-1/2 continuity bound
            prop_assert!(lo - hi <= 100.0 * 100.0 * 0.1 * dw.sqrt());
        }
    }
}
