use rand::Rng;
use rayon::prelude::*;

use super::{ExperimentConfig, ExperimentError};
use crate::gauge::{phase_residual, PhaseState};
use crate::sampler::{project_to_physical, Projection, SamplerConfig};
use crate::spacetime::{path_action, ActionMode, Event, Path, PotentialKind};

/// Slowest sampled leg speed.
const MIN_SPEED: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct TunnelingReport {
    pub n_attempts: usize,
    pub n_transmitted: usize,
    /// Candidates failing the band filter.
    pub n_reflected: usize,
    /// Candidates with a leg outside the light cone.
    pub n_spacelike: usize,
    /// Band-accepted candidates the projection could not make physical.
    pub n_unprojectable: usize,
    /// Speed of the final leg of every transmitted path.
    pub emergent_speeds: Vec<f64>,
    pub transmitted_fraction: f64,
    /// Kinetic energy below the barrier height.
    pub forbidden: bool,
}

#[derive(Default)]
struct Tally {
    transmitted: usize,
    reflected: usize,
    spacelike: usize,
    unprojectable: usize,
    speeds: Vec<f64>,
}

/// Relativistic candidates that approach at the classical speed, cross
/// the barrier and leave it at randomly drawn speeds. In the forbidden
/// regime a candidate transmits only if it passes the band filter and
/// projects onto an exactly physical path.
pub fn barrier_scan(cfg: &ExperimentConfig) -> Result<TunnelingReport, ExperimentError> {
    let spec = &cfg.barrier;
    let pot = spec.pot;
    if pot.kind() != PotentialKind::Barrier {
        return Err(ExperimentError::Config("barrier experiment needs a barrier potential".into()));
    }
    if !(spec.approach > 0.0 && spec.exit > 0.0) {
        return Err(ExperimentError::Config("barrier region lies outside the sampled domain".into()));
    }
    cfg.sampler.validate()?;
    let particle = cfg.particle;
    let forbidden = particle.kinetic_energy() < pot.height();
    let (x_lo, x_hi) = pot.region();
    let v_in = particle.speed(ActionMode::Relativistic);
    let project_cfg = SamplerConfig {
        action: ActionMode::Relativistic,
        projection: Projection::RootFind,
        ..cfg.sampler
    };
    let ids = (PhaseState::identity(), PhaseState::identity());

    let tallies: Vec<Tally> = (0..cfg.seeds.stream_count)
        .into_par_iter()
        .map(|stream| {
            let mut rng = cfg.seeds.rng(stream, 0);
            let mut t = Tally::default();
            for _ in cfg.seeds.chunk(stream, cfg.sampler.n_paths) {
                let u_cross = rng.random_range(MIN_SPEED..spec.max_speed);
                let u_out = rng.random_range(MIN_SPEED..spec.max_speed);
                let t1 = spec.approach / v_in;
                let t2 = t1 + (x_hi - x_lo) / u_cross;
                let t3 = t2 + spec.exit / u_out;
                let path = Path::new(vec![
                    Event::line(0.0, x_lo - spec.approach),
                    Event::line(t1, x_lo),
                    Event::line(t2, x_hi),
                    Event::line(t3, x_hi + spec.exit),
                ])
                .expect("increasing times");
                let Ok(action) = path_action(&path, &particle, &pot, ActionMode::Relativistic) else {
                    t.spacelike += 1;
                    continue;
                };
                if forbidden && phase_residual(action, 0.0).omega > spec.accept_tol {
                    t.reflected += 1;
                    continue;
                }
                match project_to_physical(&path, &particle, &pot, ids, &project_cfg) {
                    Some(physical) => {
                        let last = physical.segments().last().expect("three legs");
                        t.transmitted += 1;
                        t.speeds.push(last.speed());
                    }
                    None => t.unprojectable += 1,
                }
            }
            t
        })
        .collect();

    let mut total = Tally::default();
    for t in tallies {
        total.transmitted += t.transmitted;
        total.reflected += t.reflected;
        total.spacelike += t.spacelike;
        total.unprojectable += t.unprojectable;
        total.speeds.extend(t.speeds);
    }
    let n = cfg.sampler.n_paths;
    Ok(TunnelingReport {
        n_attempts: n,
        n_transmitted: total.transmitted,
        n_reflected: total.reflected,
        n_spacelike: total.spacelike,
        n_unprojectable: total.unprojectable,
        emergent_speeds: total.speeds,
        transmitted_fraction: total.transmitted as f64 / n as f64,
        forbidden,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::BarrierSpec;
    use crate::spacetime::{ParticleParams, PotentialSpec};

    fn cfg(height: f64, n: usize) -> ExperimentConfig {
        let p = ParticleParams::new(1.0, 1.0).unwrap();
        let spec = BarrierSpec {
            pot: PotentialSpec::barrier(height, 0.0, 1.0).unwrap(),
            ..Default::default()
        };
        let mut c = ExperimentConfig::barrier(p, spec).unwrap();
        c.sampler.n_paths = n;
        c
    }

    #[test]
    fn forbidden_barrier_mostly_reflects_but_some_paths_tunnel() {
        let r = barrier_scan(&cfg(1.0, 20_000)).unwrap();
        assert!(r.forbidden);
        assert!(r.n_transmitted >= 1);
        assert!(r.n_reflected > r.n_transmitted);
        assert!(r.emergent_speeds.iter().all(|&v| v <= 1.0));
        assert_eq!(
            r.n_transmitted + r.n_reflected + r.n_spacelike + r.n_unprojectable,
            r.n_attempts
        );
    }

    #[test]
    fn free_limit_has_no_reflection() {
        let r = barrier_scan(&cfg(0.0, 5_000)).unwrap();
        assert!(!r.forbidden);
        assert_eq!(r.n_reflected, 0);
        let causal = r.n_attempts - r.n_spacelike;
        assert!(r.n_transmitted as f64 > 0.9 * causal as f64, "{} of {causal}", r.n_transmitted);
    }

    #[test]
    fn free_potential_is_rejected() {
        let mut c = cfg(1.0, 10);
        c.barrier.pot = PotentialSpec::free();
        assert!(matches!(barrier_scan(&c), Err(ExperimentError::Config(_))));
    }
}
