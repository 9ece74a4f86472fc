use std::f64::consts::TAU;

use crate::gauge::{pair_is_physical, EXACT_TOL};

/// Phase bookkeeping of a correlated pair whose partner state is disturbed by `δS`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EprOutcome {
    /// `exp[i(S − S')] = 1` for the undisturbed pair.
    pub undisturbed_physical: bool,
    /// Angle of the factor `exp(iδS)` the partner path must supply, in `[0, 2π)`.
    pub compensating_factor_angle: f64,
    /// Pair condition with the disturbed state and the original partner.
    pub disturbed_physical: bool,
    /// Pair condition once the partner action absorbs `δS`.
    pub compensated_physical: bool,
}

pub fn epr_compensation(s_rho: f64, s_rho_prime: f64, delta_s: f64) -> EprOutcome {
    let tol = EXACT_TOL;
    EprOutcome {
        undisturbed_physical: pair_is_physical(s_rho, s_rho_prime, 0.0, tol),
        compensating_factor_angle: delta_s.rem_euclid(TAU),
        disturbed_physical: pair_is_physical(s_rho, s_rho_prime, -delta_s, tol),
        compensated_physical: pair_is_physical(s_rho, s_rho_prime + delta_s, -delta_s, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn factor_angles() {
        assert_eq!(epr_compensation(1.0, 1.0, 0.0).compensating_factor_angle, 0.0);
        assert_eq!(epr_compensation(1.0, 1.0, PI).compensating_factor_angle, PI);
        assert!((epr_compensation(0.0, 0.0, -0.5).compensating_factor_angle - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn disturbance_breaks_and_partner_shift_restores() {
        let out = epr_compensation(2.0 * PI + 0.3, 0.3, 0.4);
        assert!(out.undisturbed_physical);
        assert!(!out.disturbed_physical);
        assert!(out.compensated_physical);
    }
}
