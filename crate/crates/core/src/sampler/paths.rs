use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{SamplerConfig, SamplerError, SeedSpec};
use crate::scalar::Real;
use crate::spacetime::{ActionMode, Event, Path};

fn check_endpoints<T: Real>(
    start: &Event<T>,
    end: &Event<T>,
    mode: ActionMode,
) -> Result<(), SamplerError> {
    if !(start.is_finite() && end.is_finite()) {
        return Err(SamplerError::InvalidEndpoints("non-finite coordinate"));
    }
    if end.t <= start.t {
        return Err(SamplerError::InvalidEndpoints("end must be later than start"));
    }
    if mode == ActionMode::Relativistic && start.spatial_distance(end) >= end.t - start.t {
        return Err(SamplerError::InvalidEndpoints("endpoints are not timelike separated"));
    }
    Ok(())
}

/// One jittered candidate from `start` to `end` drawn from `rng`.
///
/// Joints sit at uniform time fractions. With both endpoints on `y = 0` the
/// jitter is along `x`; otherwise it is perpendicular to the spatial chord.
pub fn jittered_path<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    start: Event<T>,
    end: Event<T>,
    n_joints: usize,
    scale: f64,
) -> Path<T> {
    let scale = T::lit(scale);
    let planar = start.y != T::zero() || end.y != T::zero();
    let (dx, dy) = (end.x - start.x, end.y - start.y);
    let chord = dx.hypot(dy);
    let mut events = Vec::with_capacity(n_joints + 2);
    events.push(start);
    for j in 1..=n_joints {
        let frac = T::lit(j as f64 / (n_joints + 1) as f64);
        let mut e = start.lerp(&end, frac);
        let g: f64 = rng.sample(StandardNormal);
        let g = T::lit(g) * scale;
        if !planar {
            e.x += g;
        } else if chord > T::zero() {
            e.x -= g * dy / chord;
            e.y += g * dx / chord;
        } else {
            let h: f64 = rng.sample(StandardNormal);
            e.x += g;
            e.y += T::lit(h) * scale;
        }
        events.push(e);
    }
    events.push(end);
    Path::new(events).expect("strictly increasing joint times give a valid path")
}

/// `cfg.n_paths` jittered candidates between the endpoints. The batch is a
/// pure function of the endpoints, `cfg` and `seeds`.
pub fn sample_paths<T: Real>(
    endpoints: (Event<T>, Event<T>),
    cfg: &SamplerConfig,
    seeds: &SeedSpec,
) -> Result<Vec<Path<T>>, SamplerError> {
    cfg.validate()?;
    let (start, end) = endpoints;
    check_endpoints(&start, &end, cfg.action)?;
    let batches: Vec<Vec<Path<T>>> = (0..seeds.stream_count)
        .into_par_iter()
        .map(|stream| {
            let mut rng = seeds.rng(stream, 0);
            seeds
                .chunk(stream, cfg.n_paths)
                .map(|_| jittered_path(&mut rng, start, end, cfg.n_joints, cfg.perturb_scale))
                .collect()
        })
        .collect();
    Ok(batches.into_iter().flatten().collect())
}
