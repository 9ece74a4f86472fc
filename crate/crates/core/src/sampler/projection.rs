use super::SamplerConfig;
use crate::gauge::{phase_residual, PhaseState, EXACT_TOL};
use crate::scalar::Real;
use crate::spacetime::{path_action, ActionMode, ParticleParams, Path, PotentialSpec};

const WINDOW: f64 = 0.25;

/// Moves `path` onto the physical manifold by rescaling its elapsed time
/// uniformly, bisecting for the nearest `2πn` branch of the phase condition.
///
/// The scale factor is confined to `[0.75, 1.25]`, and in relativistic mode
/// further to the range where every segment stays timelike. Returns `None`
/// when that window brackets no root or bisection runs out of iterations.
pub fn project_to_physical<T: Real>(
    path: &Path<T>,
    particle: &ParticleParams<T>,
    pot: &PotentialSpec<T>,
    kappas: (PhaseState<T>, PhaseState<T>),
    cfg: &SamplerConfig,
) -> Option<Path<T>> {
    let delta = kappas.1.angle() - kappas.0.angle();
    let action_at = |scale: T| -> Option<T> {
        let scaled = path.with_time_scale(scale).ok()?;
        path_action(&scaled, particle, pot, cfg.action).ok()
    };
    let s_here = action_at(T::one())?;
    let here = phase_residual(s_here, delta);
    let tol = tolerance(s_here);
    if here.omega <= tol {
        return Some(path.clone());
    }
    let target = delta + T::TAU() * T::lit(here.n_nearest as f64);
    let f = |scale: T| action_at(scale).map(|s| s - target);

    let mut lo = T::one() - T::lit(WINDOW);
    let hi = T::one() + T::lit(WINDOW);
    if cfg.action == ActionMode::Relativistic {
        let limit = path
            .segments()
            .map(|s| s.length() / s.elapsed().abs())
            .fold(T::zero(), T::max);
        lo = lo.max(limit * (T::one() + T::lit(1e-9)));
        if lo >= T::one() {
            return None;
        }
    }
    let f_here = s_here - target;
    let (mut a, mut b, mut fa) = {
        let f_lo = f(lo)?;
        if f_lo.signum() != f_here.signum() {
            (lo, T::one(), f_lo)
        } else {
            let f_hi = f(hi)?;
            if f_hi.signum() == f_here.signum() {
                return None;
            }
            (T::one(), hi, f_here)
        }
    };
    for _ in 0..cfg.max_bisection_iters {
        let mid = (a + b) * T::lit(0.5);
        let fm = f(mid)?;
        if fm.abs() <= tol * T::lit(0.5) {
            return path.with_time_scale(mid).ok();
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if b - a <= T::epsilon() {
            break;
        }
    }
    None
}

/// `EXACT_TOL`, widened to the rounding floor of the scalar type.
fn tolerance<T: Real>(action: T) -> T {
    let floor = T::epsilon() * T::lit(64.0) * (action.abs() + T::one());
    T::lit(EXACT_TOL).max(floor)
}
