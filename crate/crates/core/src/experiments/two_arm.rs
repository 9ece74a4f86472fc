//! Screen densities from correlated two-arm pairs.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::{
    check_distances, Estimator, ExperimentConfig, ExperimentError, IntrusionStage, SlitGeometry,
};
use crate::gauge::{density_at, mean_density, phase_residual, DensityParams};
use crate::oracle::two_slit_intensity;
use crate::profile::{l1, normalize, DensityProfile};
use crate::sampler::{jittered_path, ScreenHistogram, PROPOSAL_LABEL};
use crate::spacetime::{path_action, Event, Path, PotentialSpec};

pub const CROSSOVER_FORM: &str = "1-exp(-(q*d)^2/2)";

const KICK_NODES: usize = 2049;

/// Midpoint sub-samples per bin; the density has cusps at the fringe peaks.
const BIN_SUBSAMPLES: usize = 16;

/// Which phase offsets the pair condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseSource {
    /// Slit states only: `δκ` from the intrusion settings.
    Slits,
    /// Ring arms enclosing the configured flux, reduced to `[0, 2π)`.
    Flux,
}

impl PhaseSource {
    fn phase(&self, cfg: &ExperimentConfig) -> f64 {
        let fixed = cfg.intrusion.fixed_phase();
        match self {
            PhaseSource::Slits => fixed,
            PhaseSource::Flux => cfg.flux.rem_euclid(TAU) + fixed,
        }
    }
}

/// Closed-form estimator of the pair density on the screen.
///
/// `D(x) = (1 − β)·√(g_A g_A')·W(x)/W̄ + (β + μ)·(g_A + g_A')/2`, where `g`
/// are Gaussians on the slit images with width `w/2 + divergence·L`, `W(x)`
/// is the neighborhood density of the pair residual averaged over the kick
/// distribution, `W̄` its fringe-period mean, `β` the intrusion crossover
/// and `μ` the intrinsic monotonic share.
#[derive(Clone, Debug)]
pub struct AnalyticModel {
    geometry: SlitGeometry,
    p: f64,
    phase: f64,
    crossover: f64,
    mono_fraction: f64,
    sigma: f64,
    density: DensityParams<f64>,
    mean_w: f64,
    accept_tol: f64,
    kicks: Vec<(f64, f64)>,
}

impl AnalyticModel {
    pub fn new(cfg: &ExperimentConfig, source: PhaseSource) -> Self {
        let d = cfg.slit_separation;
        Self {
            geometry: cfg.geometry(),
            p: cfg.particle.momentum(),
            phase: source.phase(cfg),
            crossover: cfg.intrusion.crossover(d),
            mono_fraction: cfg.mono_fraction,
            sigma: 0.5 * cfg.slit_width + cfg.divergence * cfg.screen.distance,
            density: cfg.density,
            mean_w: mean_density(&cfg.density),
            accept_tol: cfg.sampler.accept_tol,
            kicks: kick_nodes(cfg.intrusion.kick_width(d)),
        }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn crossover(&self) -> f64 {
        self.crossover
    }

    /// `(√(g_A g_A'), (g_A + g_A')/2)` at `x`.
    pub fn envelopes(&self, x: f64) -> (f64, f64) {
        let g = |c: f64| {
            let z = (x - c) / self.sigma;
            (-0.5 * z * z).exp() / (self.sigma * (TAU).sqrt())
        };
        let (ga, gb) = (g(self.geometry.slit_a()), g(self.geometry.slit_a_prime()));
        ((ga * gb).sqrt(), 0.5 * (ga + gb))
    }

    /// Pair weight for residual `ω` relative to its fringe mean, zero outside the band.
    fn pair_factor(&self, omega: f64) -> f64 {
        if omega <= self.accept_tol {
            density_at(omega, &self.density) / self.mean_w
        } else {
            0.0
        }
    }

    /// Kick-averaged `W(x)/W̄`.
    pub fn fringe_factor(&self, x: f64) -> f64 {
        let action = self.p * self.geometry.delta_r(x);
        self.kicks
            .iter()
            .map(|&(dk, wt)| wt * self.pair_factor(phase_residual(action, self.phase + dk).omega))
            .sum()
    }

    /// Unnormalized density at `x`.
    pub fn density(&self, x: f64) -> f64 {
        let (pair, mono) = self.envelopes(x);
        (1.0 - self.crossover) * pair * self.fringe_factor(x)
            + (self.crossover + self.mono_fraction) * mono
    }

    /// Central fringe minimum over the central peak, both at exact positions.
    pub fn min_peak_ratio(&self, x_min: f64, x_max: f64) -> Option<f64> {
        let at = |phase: f64| {
            self.geometry
                .solve_delta_r(phase / self.p, x_min, x_max)
                .map(|x| self.density(x))
        };
        let peak = at(self.phase)?;
        let lo = at(self.phase - PI)?;
        let hi = at(self.phase + PI)?;
        Some(lo.min(hi) / peak)
    }
}

/// Quadrature `(offset, weight)` for the wrapped normal of width `s`.
fn kick_nodes(s: f64) -> Vec<(f64, f64)> {
    if s <= 0.0 {
        return vec![(0.0, 1.0)];
    }
    let half = (6.0 * s).min(PI);
    let wrapped = 6.0 * s > PI;
    let step = 2.0 * half / (KICK_NODES - 1) as f64;
    let mut nodes: Vec<(f64, f64)> = (0..KICK_NODES)
        .map(|i| {
            let x = -half + step * i as f64;
            let dens: f64 = if wrapped {
                let k_max = (6.0 * s / TAU).ceil() as i64 + 1;
                (-k_max..=k_max)
                    .map(|k| {
                        let z = (x + TAU * k as f64) / s;
                        (-0.5 * z * z).exp()
                    })
                    .sum()
            } else {
                (-0.5 * (x / s).powi(2)).exp()
            };
            // trapezoid end weights; on the circle the ends coincide
            let end = i == 0 || i == KICK_NODES - 1;
            (x, if end { 0.5 * dens } else { dens })
        })
        .collect();
    let total: f64 = nodes.iter().map(|n| n.1).sum();
    nodes.iter_mut().for_each(|n| n.1 /= total);
    nodes
}

fn oracle_column(cfg: &ExperimentConfig, phase: f64, centers: &[f64], width: f64) -> Vec<f64> {
    let g = cfg.geometry();
    let p = cfg.particle.momentum();
    let mut col: Vec<f64> = centers
        .iter()
        .map(|&x| two_slit_intensity(&g, p, x, phase, cfg.amplitude))
        .collect();
    normalize(&mut col, width);
    col
}

fn base_metadata(cfg: &ExperimentConfig, model: &AnalyticModel, profile: DensityProfile, estimator: Estimator) -> DensityProfile {
    let ratio = model.min_peak_ratio(cfg.screen.x_min, cfg.screen.x_max);
    let mut out = profile
        .with_meta("estimator", estimator.name())
        .with_meta("seed", cfg.seeds.master_seed)
        .with_meta("proposal", PROPOSAL_LABEL)
        .with_meta("crossover_form", CROSSOVER_FORM)
        .with_meta("crossover", model.crossover())
        .with_meta("mono_fraction", cfg.mono_fraction)
        .with_meta("screen_distance", cfg.screen.distance);
    if let Some(r) = ratio {
        out = out.with_meta("gauge_min_peak_ratio", r);
    }
    out
}

fn analytic(cfg: &ExperimentConfig, source: PhaseSource) -> Result<DensityProfile, ExperimentError> {
    cfg.validate()?;
    let model = AnalyticModel::new(cfg, source);
    let centers = cfg.screen.bin_centers();
    let width = cfg.screen.bin_width();
    let mut dens: Vec<f64> = centers
        .iter()
        .map(|&c| {
            (0..BIN_SUBSAMPLES)
                .map(|k| {
                    let off = (k as f64 + 0.5) / BIN_SUBSAMPLES as f64 - 0.5;
                    model.density(c + off * width)
                })
                .sum::<f64>()
                / BIN_SUBSAMPLES as f64
        })
        .collect();
    let nonempty = normalize(&mut dens, width);
    let profile = DensityProfile {
        oracle_density: Some(oracle_column(cfg, model.phase(), &centers, width)),
        bin_centers: centers,
        bin_width: width,
        gauge_density: dens,
        std_error: None,
        overflow: 0,
        empty: !nonempty,
        metadata: Default::default(),
    };
    Ok(base_metadata(cfg, &model, profile, Estimator::Analytic))
}

/// Both arms of one screen sample.
fn arms<R: Rng>(
    rng: &mut R,
    cfg: &ExperimentConfig,
    source: PhaseSource,
    x: f64,
) -> Result<(Path<f64>, Path<f64>), ExperimentError> {
    let g = cfg.geometry();
    let l = cfg.screen.distance;
    let v = cfg.particle.speed(cfg.sampler.action);
    let (n, scale) = (cfg.sampler.n_joints, cfg.sampler.perturb_scale);
    let slits = [g.slit_a(), g.slit_a_prime()];
    match source {
        PhaseSource::Slits => {
            let (r1, r2) = g.arms(x);
            let end = Event::new(0.5 * (r1 + r2) / v, x, l);
            let [a, b] = slits.map(|s| jittered_path(rng, Event::new(0.0, s, 0.0), end, n, scale));
            Ok((a, b))
        }
        PhaseSource::Flux => {
            let src = Event::new(0.0, 0.0, -cfg.source_distance);
            let legs = slits.map(|s| {
                let first = s.hypot(cfg.source_distance);
                let second = (x - s).hypot(l);
                (first, first + second)
            });
            let t_b = 0.5 * (legs[0].1 + legs[1].1) / v;
            let end = Event::new(t_b, x, l);
            let mut arm = |k: usize| -> Result<Path<f64>, ExperimentError> {
                let (first, total) = legs[k];
                let via = Event::new(t_b * first / total, slits[k], 0.0);
                let head = jittered_path(rng, src, via, n, scale);
                let tail = jittered_path(rng, via, end, n, scale);
                Ok(head.concat(&tail)?)
            };
            let a = arm(0)?;
            let b = arm(1)?;
            Ok((a, b))
        }
    }
}

fn monte_carlo(cfg: &ExperimentConfig, source: PhaseSource) -> Result<DensityProfile, ExperimentError> {
    cfg.validate()?;
    let model = AnalyticModel::new(cfg, source);
    let d = cfg.slit_separation;
    let kick = cfg.intrusion.kick_width(d);
    let kick_dist = (kick > 0.0).then(|| Normal::new(0.0, kick).expect("finite width"));
    let free = PotentialSpec::free();
    let (x_min, x_max) = (cfg.screen.x_min, cfg.screen.x_max);
    let beta = model.crossover();

    let parts: Result<Vec<ScreenHistogram>, ExperimentError> = (0..cfg.seeds.stream_count)
        .into_par_iter()
        .map(|stream| {
            let mut rng = cfg.seeds.rng(stream, 0);
            let tag = match cfg.intrusion.stage {
                IntrusionStage::PreSlit => 1,
                IntrusionStage::PostSlit => 2,
            };
            let mut kick_rng = cfg.seeds.rng(stream, tag);
            let mut hist = ScreenHistogram::new(cfg.screen);
            for _ in cfg.seeds.chunk(stream, cfg.sampler.n_paths) {
                let x = rng.random_range(x_min..x_max);
                let (arm_a, arm_b) = arms(&mut rng, cfg, source, x)?;
                let shift = kick_dist.map_or(0.0, |k| k.sample(&mut kick_rng));
                let (dk, ds) = match cfg.intrusion.stage {
                    IntrusionStage::PreSlit => (shift, 0.0),
                    IntrusionStage::PostSlit => (0.0, shift),
                };
                let (pair, mono) = model.envelopes(x);
                let actions = (
                    path_action(&arm_a, &cfg.particle, &free, cfg.sampler.action),
                    path_action(&arm_b, &cfg.particle, &free, cfg.sampler.action),
                );
                let pair_w = match actions {
                    (Ok(sa), Ok(sb)) => {
                        let omega = phase_residual(sa + ds - sb, model.phase() + dk).omega;
                        (1.0 - beta) * pair * model.pair_factor(omega)
                    }
                    // a jittered arm left the light cone
                    _ => 0.0,
                };
                let weight = pair_w + (beta + cfg.mono_fraction) * mono;
                hist.add_terminal(&arm_a.end(), weight);
            }
            Ok(hist)
        })
        .collect();
    let mut parts = parts?.into_iter();
    let mut hist = parts.next().expect("at least one stream");
    parts.for_each(|h| hist.merge(&h));
    let mut profile = hist.to_profile();
    profile.oracle_density = Some(oracle_column(
        cfg,
        model.phase(),
        &profile.bin_centers,
        profile.bin_width,
    ));
    Ok(base_metadata(cfg, &model, profile, Estimator::MonteCarlo))
}

fn run(cfg: &ExperimentConfig, source: PhaseSource) -> Result<DensityProfile, ExperimentError> {
    match cfg.estimator {
        Estimator::Analytic => analytic(cfg, source),
        Estimator::MonteCarlo => monte_carlo(cfg, source),
        Estimator::Both => {
            let a = analytic(cfg, source)?;
            let m = monte_carlo(cfg, source)?;
            let dist = l1(&a.gauge_density, &m.gauge_density, a.bin_width);
            Ok(a.with_meta("estimator", "both")
                .with_meta("monte_carlo_l1", dist))
        }
    }
}

/// Two-slit screen density under the configured intrusion. With
/// `Estimator::Both` the analytic profile is returned, annotated with its
/// L1 distance to the Monte Carlo one.
pub fn double_slit(cfg: &ExperimentConfig) -> Result<DensityProfile, ExperimentError> {
    run(cfg, PhaseSource::Slits)
}

/// Aharonov-Bohm ring: arms from the source through `C`, `D` to the
/// screen, pair residual `ΔS_free − F`.
pub fn aharonov_bohm(cfg: &ExperimentConfig) -> Result<DensityProfile, ExperimentError> {
    run(cfg, PhaseSource::Flux).map(|p| p.with_meta("flux", cfg.flux))
}

/// Double slit at each distance, screen range held fixed.
pub fn screen_distance_sweep(
    cfg: &ExperimentConfig,
    distances: &[f64],
) -> Result<Vec<DensityProfile>, ExperimentError> {
    check_distances(distances)?;
    distances
        .iter()
        .map(|&l| {
            let mut c = cfg.clone();
            c.screen.distance = l;
            double_slit(&c)
        })
        .collect()
}

/// Fluxes assign the same gauge element iff they differ by `2πn`.
pub fn gauge_equivalent(f1: f64, f2: f64) -> bool {
    phase_residual(f1 - f2, 0.0).omega <= crate::gauge::EXACT_TOL
}

/// `(gauge, oracle)` central-fringe minimum/peak ratios at the exact
/// fringe positions of the configured double slit.
pub fn oracle_minimum_ratio(cfg: &ExperimentConfig) -> Result<(f64, f64), ExperimentError> {
    cfg.validate()?;
    let model = AnalyticModel::new(cfg, PhaseSource::Slits);
    let (lo, hi) = (cfg.screen.x_min, cfg.screen.x_max);
    let gauge = model
        .min_peak_ratio(lo, hi)
        .ok_or_else(|| ExperimentError::Geometry("central fringe does not fit on the screen".into()))?;
    let g = cfg.geometry();
    let p = cfg.particle.momentum();
    let phase = model.phase();
    let at = |ph: f64| {
        g.solve_delta_r(ph / p, lo, hi)
            .map(|x| two_slit_intensity(&g, p, x, phase, cfg.amplitude))
    };
    let peak = at(phase).unwrap_or(f64::NAN);
    let min = at(phase - PI).unwrap_or(f64::NAN).min(at(phase + PI).unwrap_or(f64::NAN));
    Ok((gauge, min / peak))
}
