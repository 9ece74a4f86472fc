//! Drivers for the experiment catalog.
//!
//! All slit-type experiments share one geometry: slits `A` and `A'` at
//! `x = ∓d/2` on the plane `y = 0`, the screen on `y = L` measuring `x`.
//! For the Aharonov-Bohm ring the slits become the arm waypoints `C`, `D`
//! and a point source sits at `y = −source_distance`.

mod barrier;
mod epr;
pub mod fringes;
mod geometry;
mod two_arm;
mod uncertainty;

pub use barrier::{barrier_scan, TunnelingReport};
pub use epr::{epr_compensation, EprOutcome};
pub use fringes::{central_extremum, find_maxima, fringe_visibility, smooth3, FringeError};
pub use geometry::SlitGeometry;
pub use two_arm::{
    aharonov_bohm, double_slit, gauge_equivalent, oracle_minimum_ratio, screen_distance_sweep,
    AnalyticModel, PhaseSource,
};
pub use uncertainty::{small_angle_uncertainty_product, uncertainty_product};

use thiserror::Error;

use crate::gauge::{DensityParamError, DensityParams};
use crate::sampler::{SamplerConfig, SamplerError, ScreenSpec, SeedSpec};
use crate::spacetime::{ParticleParams, PotentialSpec, SpacetimeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Fringe(#[from] FringeError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error(transparent)]
    Density(#[from] DensityParamError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    DoubleSlit,
    Sweep,
    AharonovBohm,
    Epr,
    Barrier,
    OracleCompare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::DoubleSlit,
        ExperimentKind::Sweep,
        ExperimentKind::AharonovBohm,
        ExperimentKind::Epr,
        ExperimentKind::Barrier,
        ExperimentKind::OracleCompare,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::DoubleSlit => "double_slit",
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::AharonovBohm => "aharonov_bohm",
            ExperimentKind::Epr => "epr",
            ExperimentKind::Barrier => "barrier",
            ExperimentKind::OracleCompare => "oracle_compare",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn description(&self) -> &'static str {
        match self {
            ExperimentKind::DoubleSlit => "two-slit screen density with optional intrusion",
            ExperimentKind::Sweep => "double slit repeated over a list of screen distances",
            ExperimentKind::AharonovBohm => "two-arm ring enclosing a flux F",
            ExperimentKind::Epr => "phase algebra of a correlated pair under intrusion",
            ExperimentKind::Barrier => "physical paths through a classically forbidden barrier",
            ExperimentKind::OracleCompare => "gauge profile against the ideal wave intensity",
        }
    }

    /// Experiments that need the slit geometry and a screen.
    pub fn uses_screen(&self) -> bool {
        matches!(
            self,
            ExperimentKind::DoubleSlit
                | ExperimentKind::Sweep
                | ExperimentKind::AharonovBohm
                | ExperimentKind::OracleCompare
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IntrusionMode {
    #[default]
    None,
    FixedPhase,
    RandomKick,
}

/// Where the watching photon meets the particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IntrusionStage {
    #[default]
    PreSlit,
    /// Between slits and screen (delayed choice); the kick shifts one arm's
    /// action instead of the slit states.
    PostSlit,
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct IntrusionSpec {
    pub photon_momentum: f64,
    pub mode: IntrusionMode,
    pub fixed_delta_kappa: f64,
    pub stage: IntrusionStage,
}

impl IntrusionSpec {
    /// Width of the wrapped-normal δκ distribution, `q·d`; zero unless kicks are random.
    pub fn kick_width(&self, slit_separation: f64) -> f64 {
        match self.mode {
            IntrusionMode::RandomKick => self.photon_momentum * slit_separation,
            _ => 0.0,
        }
    }

    /// Deterministic part of δκ.
    pub fn fixed_phase(&self) -> f64 {
        match self.mode {
            IntrusionMode::FixedPhase => self.fixed_delta_kappa,
            _ => 0.0,
        }
    }

    /// Share handed to the monotonic baseline, `1 − exp(−(q·d)²/2)`.
    pub fn crossover(&self, slit_separation: f64) -> f64 {
        let s = self.kick_width(slit_separation);
        -(-0.5 * s * s).exp_m1()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Estimator {
    #[default]
    Analytic,
    MonteCarlo,
    Both,
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Analytic => "analytic",
            Estimator::MonteCarlo => "monte_carlo",
            Estimator::Both => "both",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "analytic" => Some(Estimator::Analytic),
            "monte_carlo" => Some(Estimator::MonteCarlo),
            "both" => Some(Estimator::Both),
            _ => None,
        }
    }
}

/// Amplitude model of the reference two-slit intensity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Amplitude {
    /// Equal unit amplitudes: exact zeros at the dark fringes.
    #[default]
    Ideal,
    /// Amplitudes falling as `1/r` from each slit.
    InverseR,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarrierSpec {
    pub pot: PotentialSpec<f64>,
    /// Free flight before the barrier.
    pub approach: f64,
    /// Free flight after the barrier.
    pub exit: f64,
    /// Band-filter width applied to candidates when the barrier is classically forbidden.
    pub accept_tol: f64,
    /// Candidate crossing and emergent speeds are drawn uniformly from `(0, max_speed)`.
    pub max_speed: f64,
}

impl Default for BarrierSpec {
    fn default() -> Self {
        Self {
            pot: PotentialSpec::barrier(1.0, 0.0, 1.0).expect("valid default barrier"),
            approach: 5.0,
            exit: 5.0,
            accept_tol: 0.1,
            max_speed: 1.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct EprSpec {
    pub s_rho: f64,
    pub s_rho_prime: f64,
    pub delta_s: f64,
}

/// Full parameterization of one experiment run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub particle: ParticleParams<f64>,
    pub slit_separation: f64,
    pub slit_width: f64,
    /// Angular spread of each slit's classical end region.
    pub divergence: f64,
    pub source_distance: f64,
    pub screen: ScreenSpec,
    pub intrusion: IntrusionSpec,
    pub flux: f64,
    pub barrier: BarrierSpec,
    pub sampler: SamplerConfig,
    pub seeds: SeedSpec,
    pub estimator: Estimator,
    pub density: DensityParams<f64>,
    /// Monotonic baseline share present without intrusion.
    pub mono_fraction: f64,
    pub sweep_distances: Vec<f64>,
    pub epr: EprSpec,
    pub amplitude: Amplitude,
}

impl ExperimentConfig {
    /// Slit experiment with every optional field at its default: screen
    /// spanning `[−L/2, L/2]`, slit width `d/5`, divergence `0.1`,
    /// `ξ̄ = λ/10`, `a = b = 1`.
    pub fn slits(
        kind: ExperimentKind,
        particle: ParticleParams<f64>,
        d: f64,
        distance: f64,
        bins: usize,
    ) -> Result<Self, ExperimentError> {
        let screen = ScreenSpec::new(-distance / 2.0, distance / 2.0, bins, distance)?;
        let cfg = Self {
            kind,
            particle,
            slit_separation: d,
            slit_width: d / 5.0,
            divergence: 0.1,
            source_distance: distance,
            screen,
            intrusion: IntrusionSpec::default(),
            flux: 0.0,
            barrier: BarrierSpec::default(),
            sampler: SamplerConfig::default(),
            seeds: SeedSpec::default(),
            estimator: Estimator::default(),
            density: DensityParams::default_for(&particle),
            mono_fraction: 0.02,
            sweep_distances: Vec::new(),
            epr: EprSpec::default(),
            amplitude: Amplitude::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Barrier experiment with default barrier geometry.
    pub fn barrier(particle: ParticleParams<f64>, barrier: BarrierSpec) -> Result<Self, ExperimentError> {
        let mut cfg = Self::slits(ExperimentKind::Barrier, particle, 1.0, 10.0, 2)?;
        cfg.barrier = barrier;
        cfg.sampler.action = crate::spacetime::ActionMode::Relativistic;
        cfg.sampler.projection = crate::sampler::Projection::RootFind;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn geometry(&self) -> SlitGeometry {
        SlitGeometry::new(self.slit_separation, self.screen.distance)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        self.sampler.validate()?;
        self.screen.validate()?;
        if self.kind.uses_screen() {
            if !positive(self.slit_separation) {
                return Err(ExperimentError::Geometry("slit separation must be > 0".into()));
            }
            if !positive(self.screen.distance) {
                return Err(ExperimentError::Geometry(
                    "screen must lie in front of the slits (L > 0)".into(),
                ));
            }
            if self.slit_separation >= self.screen.x_max - self.screen.x_min {
                return Err(ExperimentError::Geometry(
                    "slit separation must be smaller than the screen range".into(),
                ));
            }
            if !positive(self.slit_width) || !(self.divergence.is_finite() && self.divergence >= 0.0) {
                return Err(ExperimentError::Geometry(
                    "slit width must be > 0 and divergence >= 0".into(),
                ));
            }
            if !positive(self.source_distance) {
                return Err(ExperimentError::Geometry("source distance must be > 0".into()));
            }
        }
        if !(self.intrusion.photon_momentum.is_finite() && self.intrusion.photon_momentum >= 0.0) {
            return Err(ExperimentError::Config("intrusion.q must be >= 0".into()));
        }
        if !self.intrusion.fixed_delta_kappa.is_finite() || !self.flux.is_finite() {
            return Err(ExperimentError::Config("phases must be finite".into()));
        }
        if !(self.mono_fraction.is_finite() && self.mono_fraction >= 0.0) {
            return Err(ExperimentError::Config("baseline.mono_fraction must be >= 0".into()));
        }
        if self.kind == ExperimentKind::Sweep {
            if self.sweep_distances.is_empty() {
                return Err(ExperimentError::Config("sweep needs at least one distance".into()));
            }
            check_distances(&self.sweep_distances)?;
        }
        if self.kind == ExperimentKind::Barrier {
            let b = &self.barrier;
            if !(positive(b.approach) && positive(b.exit) && positive(b.max_speed)) {
                return Err(ExperimentError::Config(
                    "barrier approach, exit and max_speed must be > 0".into(),
                ));
            }
            if !(b.accept_tol > 0.0 && b.accept_tol <= std::f64::consts::PI) {
                return Err(ExperimentError::Config("barrier.accept_tol must be in (0, pi]".into()));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_distances(distances: &[f64]) -> Result<(), ExperimentError> {
    if distances.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(ExperimentError::Geometry("screen distances must be > 0".into()));
    }
    if distances.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ExperimentError::Config("screen distances must be ascending".into()));
    }
    Ok(())
}
