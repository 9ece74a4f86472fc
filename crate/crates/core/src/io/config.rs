//! Line-oriented `section.key = value` configuration documents.
//!
//! | key | default |
//! |-----|---------|
//! | `experiment.name` | `double_slit` (must match the run command if given) |
//! | `particle.mass` | `1` |
//! | `particle.p` | required, except for `epr` (default `2pi`) |
//! | `geometry.d`, `geometry.L` | required for slit experiments |
//! | `geometry.slit_width` | `d/5` |
//! | `geometry.divergence` | `0.1` |
//! | `geometry.source_distance` | `L` |
//! | `screen.bins` | required for slit experiments |
//! | `screen.x_min`, `screen.x_max` | `-L/2`, `L/2` |
//! | `intrusion.q` | `0` |
//! | `intrusion.mode` | `none` (`fixed_phase`, `random_kick`) |
//! | `intrusion.delta_kappa` | `0` |
//! | `intrusion.stage` | `pre_slit` (`post_slit`) |
//! | `flux.F` | `0` |
//! | `barrier.V`, `barrier.x_lo`, `barrier.x_hi` | `1`, `0`, `1` |
//! | `barrier.approach`, `barrier.exit` | `5`, `5` |
//! | `barrier.accept_tol`, `barrier.max_speed` | `0.1`, `1.5` |
//! | `sampler.n_paths` | `100000` |
//! | `sampler.n_joints` | `4` |
//! | `sampler.perturb_scale` | `0.1` |
//! | `sampler.accept_tol` | `pi` |
//! | `sampler.projection` | `band_filter` (`root_find`) |
//! | `sampler.max_bisection_iters` | `200` |
//! | `sampler.action` | `nonrelativistic`; `relativistic` for `barrier` |
//! | `seeds.master`, `seeds.streams` | `0`, `8` |
//! | `density.a`, `density.b` | `1`, `1` |
//! | `density.xi_bar` | `λ/10` |
//! | `estimator.kind` | `analytic` (`monte_carlo`, `both`) |
//! | `baseline.mono_fraction` | `0.02` |
//! | `sweep.distances` | comma list, required for `sweep` |
//! | `epr.S_rho`, `epr.S_rho_prime` | required for `epr` |
//! | `epr.delta_S` | `0` |
//! | `oracle.amplitude` | `ideal` (`inverse_r`) |
//!
//! Real values accept an optional `pi` suffix: `pi`, `2pi`, `-0.5pi`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::experiments::{
    Amplitude, BarrierSpec, EprSpec, Estimator, ExperimentConfig, ExperimentKind, IntrusionMode,
    IntrusionSpec, IntrusionStage,
};
use crate::gauge::DensityParams;
use crate::sampler::{Projection, SamplerConfig, ScreenSpec, SeedSpec, MAX_JOINTS};
use crate::spacetime::{ActionMode, ParticleParams, PotentialSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: `{key}` out of range: {message}")]
    Range { line: usize, key: String, message: String },
    #[error("line {line}: missing required key `{key}`")]
    Missing { line: usize, key: String },
    #[error("line {line}: config is for `{found}`, not `{expected}`")]
    Mismatch { line: usize, expected: String, found: String },
}

impl ConfigError {
    pub fn line(&self) -> usize {
        match self {
            ConfigError::Syntax { line, .. }
            | ConfigError::UnknownKey { line, .. }
            | ConfigError::Duplicate { line, .. }
            | ConfigError::Range { line, .. }
            | ConfigError::Missing { line, .. }
            | ConfigError::Mismatch { line, .. } => *line,
        }
    }
}

const KEYS: &[&str] = &[
    "experiment.name",
    "particle.mass",
    "particle.p",
    "geometry.d",
    "geometry.L",
    "geometry.slit_width",
    "geometry.divergence",
    "geometry.source_distance",
    "screen.bins",
    "screen.x_min",
    "screen.x_max",
    "intrusion.q",
    "intrusion.mode",
    "intrusion.delta_kappa",
    "intrusion.stage",
    "flux.F",
    "barrier.V",
    "barrier.x_lo",
    "barrier.x_hi",
    "barrier.approach",
    "barrier.exit",
    "barrier.accept_tol",
    "barrier.max_speed",
    "sampler.n_paths",
    "sampler.n_joints",
    "sampler.perturb_scale",
    "sampler.accept_tol",
    "sampler.projection",
    "sampler.max_bisection_iters",
    "sampler.action",
    "seeds.master",
    "seeds.streams",
    "density.a",
    "density.b",
    "density.xi_bar",
    "estimator.kind",
    "baseline.mono_fraction",
    "sweep.distances",
    "epr.S_rho",
    "epr.S_rho_prime",
    "epr.delta_S",
    "oracle.amplitude",
];

/// Raw key/value pairs with their line numbers.
struct Document {
    entries: BTreeMap<String, (usize, String)>,
    last_line: usize,
}

impl Document {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    message: "expected `section.key = value`".into(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let well_formed = key
                .split_once('.')
                .is_some_and(|(s, k)| !s.is_empty() && !k.is_empty() && !k.contains('.'));
            if !well_formed || key.contains(char::is_whitespace) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("malformed key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("empty value for `{key}`"),
                });
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.into(),
                });
            }
            if entries.insert(key.to_string(), (line, value.to_string())).is_some() {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.into(),
                });
            }
        }
        Ok(Self { entries, last_line })
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(self.last_line, |e| e.0)
    }

    fn range(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::Range {
            line: self.line_of(key),
            key: key.into(),
            message: message.into(),
        }
    }

    fn missing(&self, key: &str) -> ConfigError {
        ConfigError::Missing {
            line: self.last_line,
            key: key.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        parse_real(v).map(Some).ok_or_else(|| ConfigError::Syntax {
            line: *line,
            message: format!("`{key}` expects a number, got `{v}`"),
        })
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn required_real(&self, key: &str) -> Result<f64, ConfigError> {
        self.real(key)?.ok_or_else(|| self.missing(key))
    }

    fn positive(&self, key: &str, v: f64) -> Result<f64, ConfigError> {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(self.range(key, format!("must be > 0, got {v}")))
        }
    }

    fn non_negative(&self, key: &str, v: f64) -> Result<f64, ConfigError> {
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(self.range(key, format!("must be >= 0, got {v}")))
        }
    }

    fn finite(&self, key: &str, v: f64) -> Result<f64, ConfigError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.range(key, "must be finite"))
        }
    }

    fn count(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(default);
        };
        if let Ok(n) = v.parse::<u64>() {
            return Ok(n);
        }
        match v.parse::<f64>() {
            Ok(f) if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 => Ok(f as u64),
            Ok(f) => Err(self.range(key, format!("must be a non-negative integer, got {f}"))),
            Err(_) => Err(ConfigError::Syntax {
                line: *line,
                message: format!("`{key}` expects an integer, got `{v}`"),
            }),
        }
    }

    fn choice<T: Copy>(&self, key: &str, default: T, options: &[(&str, T)]) -> Result<T, ConfigError> {
        let Some((_, v)) = self.raw(key) else {
            return Ok(default);
        };
        options
            .iter()
            .find(|(name, _)| name == v)
            .map(|&(_, t)| t)
            .ok_or_else(|| {
                let names: Vec<&str> = options.iter().map(|o| o.0).collect();
                self.range(key, format!("expected one of {}, got `{v}`", names.join(", ")))
            })
    }
}

/// Number with an optional `pi` factor.
fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(head) = s.strip_suffix("pi") {
        let factor = match head.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        return Some(factor * PI);
    }
    s.parse::<f64>().ok()
}

const INTRUSION_MODES: &[(&str, IntrusionMode)] = &[
    ("none", IntrusionMode::None),
    ("fixed_phase", IntrusionMode::FixedPhase),
    ("random_kick", IntrusionMode::RandomKick),
];
const STAGES: &[(&str, IntrusionStage)] = &[
    ("pre_slit", IntrusionStage::PreSlit),
    ("post_slit", IntrusionStage::PostSlit),
];
const PROJECTIONS: &[(&str, Projection)] = &[
    ("band_filter", Projection::BandFilter),
    ("root_find", Projection::RootFind),
];
const ACTIONS: &[(&str, ActionMode)] = &[
    ("relativistic", ActionMode::Relativistic),
    ("nonrelativistic", ActionMode::NonRelativistic),
];
const ESTIMATORS: &[(&str, Estimator)] = &[
    ("analytic", Estimator::Analytic),
    ("monte_carlo", Estimator::MonteCarlo),
    ("both", Estimator::Both),
];
const AMPLITUDES: &[(&str, Amplitude)] = &[("ideal", Amplitude::Ideal), ("inverse_r", Amplitude::InverseR)];

fn name_of<T: PartialEq>(options: &[(&'static str, T)], value: T) -> &'static str {
    options.iter().find(|o| o.1 == value).map(|o| o.0).expect("every variant is listed")
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let doc = Document::parse(text)?;
    build(&doc)
}

/// As [`parse_config`], additionally requiring the document to describe `kind`.
/// A document without `experiment.name` is taken to describe `kind`.
pub fn parse_config_for(text: &str, kind: ExperimentKind) -> Result<ExperimentConfig, ConfigError> {
    let doc = Document::parse(text)?;
    if let Some((line, name)) = doc.raw("experiment.name") {
        if name != kind.name() {
            return Err(ConfigError::Mismatch {
                line: *line,
                expected: kind.name().into(),
                found: name.clone(),
            });
        }
    }
    let mut doc = doc;
    doc.entries
        .entry("experiment.name".into())
        .or_insert((0, kind.name().into()));
    build(&doc)
}

fn build(doc: &Document) -> Result<ExperimentConfig, ConfigError> {
    let kind = match doc.raw("experiment.name") {
        None => ExperimentKind::DoubleSlit,
        Some((_, name)) => ExperimentKind::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
            doc.range("experiment.name", format!("expected one of {}, got `{name}`", names.join(", ")))
        })?,
    };

    let mass = doc.positive("particle.mass", doc.real_or("particle.mass", 1.0)?)?;
    let p = match (doc.real("particle.p")?, kind) {
        (Some(p), _) => p,
        (None, ExperimentKind::Epr) => 2.0 * PI,
        (None, _) => return Err(doc.missing("particle.p")),
    };
    let p = doc.positive("particle.p", p)?;
    let particle = ParticleParams::new(mass, p).expect("checked above");

    let slit = kind.uses_screen();
    let geo = |key: &str, default: f64| -> Result<f64, ConfigError> {
        if slit {
            doc.required_real(key)
        } else {
            doc.real_or(key, default)
        }
    };
    let d = doc.positive("geometry.d", geo("geometry.d", 1.0)?)?;
    let l = geo("geometry.L", 10.0)?;
    if !(l.is_finite() && l > 0.0) {
        return Err(doc.range("geometry.L", format!("screen must lie in front of the slits (L > 0), got {l}")));
    }
    let slit_width = doc.positive("geometry.slit_width", doc.real_or("geometry.slit_width", d / 5.0)?)?;
    let divergence = doc.non_negative("geometry.divergence", doc.real_or("geometry.divergence", 0.1)?)?;
    let source_distance =
        doc.positive("geometry.source_distance", doc.real_or("geometry.source_distance", l)?)?;

    let bins = match doc.raw("screen.bins") {
        Some(_) => doc.count("screen.bins", 0)?,
        None if slit => return Err(doc.missing("screen.bins")),
        None => 2,
    };
    if bins < 2 {
        return Err(doc.range("screen.bins", "must be >= 2"));
    }
    let x_min = doc.finite("screen.x_min", doc.real_or("screen.x_min", -0.5 * l)?)?;
    let x_max = doc.finite("screen.x_max", doc.real_or("screen.x_max", 0.5 * l)?)?;
    if x_min >= x_max {
        let key = if doc.raw("screen.x_max").is_some() { "screen.x_max" } else { "screen.x_min" };
        return Err(doc.range(key, format!("need x_min < x_max, got [{x_min}, {x_max}]")));
    }
    if slit && d >= x_max - x_min {
        return Err(doc.range("geometry.d", "slit separation must be smaller than the screen range"));
    }
    let screen = ScreenSpec::new(x_min, x_max, bins as usize, l).expect("checked above");

    let intrusion = IntrusionSpec {
        photon_momentum: doc.non_negative("intrusion.q", doc.real_or("intrusion.q", 0.0)?)?,
        mode: doc.choice("intrusion.mode", IntrusionMode::None, INTRUSION_MODES)?,
        fixed_delta_kappa: doc.finite("intrusion.delta_kappa", doc.real_or("intrusion.delta_kappa", 0.0)?)?,
        stage: doc.choice("intrusion.stage", IntrusionStage::PreSlit, STAGES)?,
    };
    let flux = doc.finite("flux.F", doc.real_or("flux.F", 0.0)?)?;

    let height = doc.non_negative("barrier.V", doc.real_or("barrier.V", 1.0)?)?;
    let b_lo = doc.finite("barrier.x_lo", doc.real_or("barrier.x_lo", 0.0)?)?;
    let b_hi = doc.finite("barrier.x_hi", doc.real_or("barrier.x_hi", 1.0)?)?;
    let pot = PotentialSpec::barrier(height, b_lo, b_hi)
        .map_err(|_| doc.range("barrier.x_hi", "need x_lo < x_hi"))?;
    let barrier_tol = doc.real_or("barrier.accept_tol", 0.1)?;
    if !(barrier_tol > 0.0 && barrier_tol <= PI) {
        return Err(doc.range("barrier.accept_tol", "must be in (0, pi]"));
    }
    let barrier = BarrierSpec {
        pot,
        approach: doc.positive("barrier.approach", doc.real_or("barrier.approach", 5.0)?)?,
        exit: doc.positive("barrier.exit", doc.real_or("barrier.exit", 5.0)?)?,
        accept_tol: barrier_tol,
        max_speed: doc.positive("barrier.max_speed", doc.real_or("barrier.max_speed", 1.5)?)?,
    };

    let defaults = SamplerConfig::default();
    let default_action = if kind == ExperimentKind::Barrier {
        ActionMode::Relativistic
    } else {
        ActionMode::NonRelativistic
    };
    let sampler = SamplerConfig {
        n_paths: doc.count("sampler.n_paths", defaults.n_paths as u64)? as usize,
        n_joints: doc.count("sampler.n_joints", defaults.n_joints as u64)? as usize,
        perturb_scale: doc.real_or("sampler.perturb_scale", defaults.perturb_scale)?,
        accept_tol: doc.real_or("sampler.accept_tol", defaults.accept_tol)?,
        projection: doc.choice("sampler.projection", defaults.projection, PROJECTIONS)?,
        max_bisection_iters: doc.count("sampler.max_bisection_iters", defaults.max_bisection_iters as u64)?
            as usize,
        action: doc.choice("sampler.action", default_action, ACTIONS)?,
    };
    if sampler.n_paths == 0 {
        return Err(doc.range("sampler.n_paths", "must be >= 1"));
    }
    if sampler.n_joints > MAX_JOINTS {
        return Err(doc.range("sampler.n_joints", format!("must be <= {MAX_JOINTS}")));
    }
    doc.positive("sampler.perturb_scale", sampler.perturb_scale)?;
    if !(sampler.accept_tol > 0.0 && sampler.accept_tol <= PI) {
        return Err(doc.range("sampler.accept_tol", "must be in (0, pi]"));
    }
    if sampler.max_bisection_iters == 0 {
        return Err(doc.range("sampler.max_bisection_iters", "must be >= 1"));
    }
    if kind == ExperimentKind::Barrier && sampler.action != ActionMode::Relativistic {
        return Err(doc.range("sampler.action", "the barrier experiment is relativistic"));
    }

    let streams = doc.count("seeds.streams", 8)?;
    if streams == 0 || streams > u32::MAX as u64 {
        return Err(doc.range("seeds.streams", "must be in 1..=2^32-1"));
    }
    let seeds = SeedSpec::new(doc.count("seeds.master", 0)?, streams as usize).expect("checked above");

    let a = doc.positive("density.a", doc.real_or("density.a", 1.0)?)?;
    let b = doc.positive("density.b", doc.real_or("density.b", 1.0)?)?;
    let xi_bar = doc.positive(
        "density.xi_bar",
        doc.real_or("density.xi_bar", particle.wavelength() / 10.0)?,
    )?;
    let density = DensityParams::new(a, b, xi_bar).expect("checked above");

    let sweep_distances = match doc.raw("sweep.distances") {
        None if kind == ExperimentKind::Sweep => return Err(doc.missing("sweep.distances")),
        None => Vec::new(),
        Some((line, v)) => {
            let parsed: Option<Vec<f64>> = v.split(',').map(parse_real).collect();
            let list = parsed.ok_or_else(|| ConfigError::Syntax {
                line: *line,
                message: format!("`sweep.distances` expects a comma-separated list, got `{v}`"),
            })?;
            if list.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                return Err(doc.range("sweep.distances", "distances must be > 0"));
            }
            if list.windows(2).any(|w| w[1] <= w[0]) {
                return Err(doc.range("sweep.distances", "distances must be ascending"));
            }
            list
        }
    };

    let epr_action = |key: &str| -> Result<f64, ConfigError> {
        let v = if kind == ExperimentKind::Epr {
            doc.required_real(key)?
        } else {
            doc.real_or(key, 0.0)?
        };
        doc.finite(key, v)
    };
    let epr = EprSpec {
        s_rho: epr_action("epr.S_rho")?,
        s_rho_prime: epr_action("epr.S_rho_prime")?,
        delta_s: doc.finite("epr.delta_S", doc.real_or("epr.delta_S", 0.0)?)?,
    };

    let cfg = ExperimentConfig {
        kind,
        particle,
        slit_separation: d,
        slit_width,
        divergence,
        source_distance,
        screen,
        intrusion,
        flux,
        barrier,
        sampler,
        seeds,
        estimator: doc.choice("estimator.kind", Estimator::Analytic, ESTIMATORS)?,
        density,
        mono_fraction: doc.non_negative(
            "baseline.mono_fraction",
            doc.real_or("baseline.mono_fraction", 0.02)?,
        )?,
        sweep_distances,
        epr,
        amplitude: doc.choice("oracle.amplitude", Amplitude::Ideal, AMPLITUDES)?,
    };
    cfg.validate().map_err(|e| ConfigError::Range {
        line: doc.last_line,
        key: "experiment.name".into(),
        message: e.to_string(),
    })?;
    Ok(cfg)
}

/// Canonical document listing every key; parses back to an equal config.
pub fn serialize_config(cfg: &ExperimentConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: String| {
        let _ = writeln!(out, "{key} = {value}");
    };
    let r = |v: f64| format!("{v:?}");
    put("experiment.name", cfg.kind.name().into());
    put("particle.mass", r(cfg.particle.mass()));
    put("particle.p", r(cfg.particle.momentum()));
    put("geometry.d", r(cfg.slit_separation));
    put("geometry.L", r(cfg.screen.distance));
    put("geometry.slit_width", r(cfg.slit_width));
    put("geometry.divergence", r(cfg.divergence));
    put("geometry.source_distance", r(cfg.source_distance));
    put("screen.bins", cfg.screen.n_bins.to_string());
    put("screen.x_min", r(cfg.screen.x_min));
    put("screen.x_max", r(cfg.screen.x_max));
    put("intrusion.q", r(cfg.intrusion.photon_momentum));
    put("intrusion.mode", name_of(INTRUSION_MODES, cfg.intrusion.mode).into());
    put("intrusion.delta_kappa", r(cfg.intrusion.fixed_delta_kappa));
    put("intrusion.stage", name_of(STAGES, cfg.intrusion.stage).into());
    put("flux.F", r(cfg.flux));
    let (lo, hi) = cfg.barrier.pot.region();
    put("barrier.V", r(cfg.barrier.pot.height()));
    put("barrier.x_lo", r(lo));
    put("barrier.x_hi", r(hi));
    put("barrier.approach", r(cfg.barrier.approach));
    put("barrier.exit", r(cfg.barrier.exit));
    put("barrier.accept_tol", r(cfg.barrier.accept_tol));
    put("barrier.max_speed", r(cfg.barrier.max_speed));
    put("sampler.n_paths", cfg.sampler.n_paths.to_string());
    put("sampler.n_joints", cfg.sampler.n_joints.to_string());
    put("sampler.perturb_scale", r(cfg.sampler.perturb_scale));
    put("sampler.accept_tol", r(cfg.sampler.accept_tol));
    put("sampler.projection", name_of(PROJECTIONS, cfg.sampler.projection).into());
    put("sampler.max_bisection_iters", cfg.sampler.max_bisection_iters.to_string());
    put("sampler.action", name_of(ACTIONS, cfg.sampler.action).into());
    put("seeds.master", cfg.seeds.master_seed.to_string());
    put("seeds.streams", cfg.seeds.stream_count.to_string());
    put("density.a", r(cfg.density.a()));
    put("density.b", r(cfg.density.b()));
    put("density.xi_bar", r(cfg.density.xi_bar()));
    put("estimator.kind", cfg.estimator.name().into());
    put("baseline.mono_fraction", r(cfg.mono_fraction));
    if !cfg.sweep_distances.is_empty() {
        let list: Vec<String> = cfg.sweep_distances.iter().map(|&v| r(v)).collect();
        put("sweep.distances", list.join(", "));
    }
    put("epr.S_rho", r(cfg.epr.s_rho));
    put("epr.S_rho_prime", r(cfg.epr.s_rho_prime));
    put("epr.delta_S", r(cfg.epr.delta_s));
    put("oracle.amplitude", name_of(AMPLITUDES, cfg.amplitude).into());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "particle.p = 2pi\ngeometry.d = 5\ngeometry.L = 100\nscreen.bins = 400\n";

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::DoubleSlit);
        assert_eq!(cfg.screen.x_min, -50.0);
        assert_eq!(cfg.slit_width, 1.0);
        assert_eq!(cfg.sampler, SamplerConfig::default());
        assert_eq!(cfg.density.xi_bar(), 0.1);
        assert_eq!(cfg.estimator, Estimator::Analytic);
    }

    #[test]
    fn round_trip() {
        let text = format!("{MINIMAL}intrusion.mode = random_kick\nintrusion.q = 0.3\nflux.F = 0.1\n");
        let cfg = parse_config(&text).unwrap();
        let again = parse_config(&serialize_config(&cfg)).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn errors_carry_lines_and_keys() {
        let err = parse_config(&format!("{MINIMAL}intrusion.q = -1\n")).unwrap_err();
        assert!(matches!(&err, ConfigError::Range { key, line: 5, .. } if key == "intrusion.q"), "{err}");
        assert!(err.to_string().contains("intrusion.q"));
        let err = parse_config("particle.p = 1\nparticle.spin = 2\n").unwrap_err();
        assert_eq!(err, ConfigError::UnknownKey { line: 2, key: "particle.spin".into() });
        assert!(matches!(parse_config("particle.p 1"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_config("particle.p = 1\ngeometry.d = 5\n"),
            Err(ConfigError::Missing { key, .. }) if key == "geometry.L"
        ));
        assert!(matches!(
            parse_config(&format!("{MINIMAL}geometry.L = 3\n")),
            Err(ConfigError::Duplicate { line: 5, .. })
        ));
        assert!(matches!(
            parse_config("particle.p = 1\ngeometry.d = 5\ngeometry.L = -2\nscreen.bins = 10\n"),
            Err(ConfigError::Range { line: 3, .. })
        ));
    }

    #[test]
    fn experiment_specific_requirements() {
        let epr = parse_config("experiment.name = epr\nepr.S_rho = 1\nepr.S_rho_prime = 1\n").unwrap();
        assert_eq!(epr.kind, ExperimentKind::Epr);
        assert!(parse_config("experiment.name = sweep\n".to_string().as_str()).is_err());
        let barrier = parse_config("experiment.name = barrier\nparticle.p = 1\n").unwrap();
        assert_eq!(barrier.sampler.action, ActionMode::Relativistic);
        assert!(matches!(
            parse_config_for(MINIMAL, ExperimentKind::Sweep),
            Err(ConfigError::Missing { key, .. }) if key == "sweep.distances"
        ));
        assert!(matches!(
            parse_config_for("experiment.name = epr\n", ExperimentKind::Barrier),
            Err(ConfigError::Mismatch { .. })
        ));
    }

    #[test]
    fn reals_accept_pi_multiples() {
        assert_eq!(parse_real("pi"), Some(PI));
        assert_eq!(parse_real("-pi"), Some(-PI));
        assert_eq!(parse_real("2pi"), Some(2.0 * PI));
        assert_eq!(parse_real("1e3"), Some(1000.0));
        assert_eq!(parse_real("two"), None);
    }
}
