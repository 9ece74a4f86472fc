use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::csv::{barrier_csv, epr_csv, profile_csv, Header};
use super::{serialize_config, RunError};
use crate::experiments::{
    aharonov_bohm, barrier_scan, double_slit, epr_compensation, oracle_minimum_ratio,
    screen_distance_sweep, Estimator, ExperimentConfig, ExperimentKind,
};
use crate::profile::DensityProfile;
use crate::sampler::PROPOSAL_LABEL;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    /// Canonical config document; parses back to the config that ran.
    pub config: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    /// Every file written into the output directory, this manifest included.
    pub files: Vec<String>,
}

/// SHA-256 of the canonical serialization.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let digest = Sha256::digest(serialize_config(cfg).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

struct Output {
    name: String,
    contents: String,
}

fn header(cfg: &ExperimentConfig, estimator: &str) -> Header {
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    vec![
        ("tool".into(), format!("gaugemech {TOOL_VERSION}")),
        ("experiment".into(), cfg.kind.name().into()),
        ("seed".into(), cfg.seeds.master_seed.to_string()),
        ("config_hash".into(), config_hash(cfg)),
        ("estimator".into(), estimator.into()),
        ("proposal".into(), PROPOSAL_LABEL.into()),
        ("timestamp".into(), stamp.to_string()),
    ]
}

fn profile_plot(csvs: &[String], title: &str) -> String {
    let mut s = format!(
        "# gnuplot script\nset datafile separator ','\nset key autotitle columnhead\nset title '{title}'\nset xlabel 'screen coordinate'\nset ylabel 'density'\n"
    );
    let parts: Vec<String> = csvs
        .iter()
        .map(|f| format!("'{f}' using 1:2 with lines title '{f} gauge', '{f}' using 1:3 with lines dashtype 2 title '{f} oracle'"))
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}

fn profile_outputs(cfg: &ExperimentConfig, stem: &str, run: impl Fn(&ExperimentConfig) -> Result<DensityProfile, RunError>) -> Result<Vec<Output>, RunError> {
    let estimators: Vec<(Estimator, String)> = match cfg.estimator {
        Estimator::Both => vec![
            (Estimator::Analytic, format!("{stem}_analytic.csv")),
            (Estimator::MonteCarlo, format!("{stem}_monte_carlo.csv")),
        ],
        e => vec![(e, format!("{stem}.csv"))],
    };
    let mut out = Vec::new();
    for (est, name) in estimators {
        let mut c = cfg.clone();
        c.estimator = est;
        let profile = run(&c)?;
        out.push(Output {
            contents: profile_csv(&profile, &header(cfg, est.name())),
            name,
        });
    }
    Ok(out)
}

fn outputs(cfg: &ExperimentConfig) -> Result<Vec<Output>, RunError> {
    let name = cfg.kind.name();
    let mut files = match cfg.kind {
        ExperimentKind::DoubleSlit => profile_outputs(cfg, name, |c| Ok(double_slit(c)?))?,
        ExperimentKind::AharonovBohm => profile_outputs(cfg, name, |c| Ok(aharonov_bohm(c)?))?,
        ExperimentKind::OracleCompare => {
            let (gauge, oracle) = oracle_minimum_ratio(cfg)?;
            profile_outputs(cfg, name, |c| {
                Ok(double_slit(c)?
                    .with_meta("gauge_exact_min_peak_ratio", gauge)
                    .with_meta("oracle_exact_min_peak_ratio", oracle))
            })?
        }
        ExperimentKind::Sweep => {
            let mut files = Vec::new();
            for est in match cfg.estimator {
                Estimator::Both => vec![Estimator::Analytic, Estimator::MonteCarlo],
                e => vec![e],
            } {
                let mut c = cfg.clone();
                c.estimator = est;
                let suffix = if cfg.estimator == Estimator::Both {
                    format!("_{}", est.name())
                } else {
                    String::new()
                };
                let profiles = screen_distance_sweep(&c, &cfg.sweep_distances)?;
                for (i, p) in profiles.iter().enumerate() {
                    files.push(Output {
                        name: format!("sweep_{i:02}{suffix}.csv"),
                        contents: profile_csv(p, &header(cfg, est.name())),
                    });
                }
            }
            files
        }
        ExperimentKind::Epr => {
            let e = cfg.epr;
            let outcome = epr_compensation(e.s_rho, e.s_rho_prime, e.delta_s);
            vec![Output {
                name: "epr.csv".into(),
                contents: epr_csv((e.s_rho, e.s_rho_prime, e.delta_s), &outcome, &header(cfg, "phase_algebra")),
            }]
        }
        ExperimentKind::Barrier => {
            let report = barrier_scan(cfg)?;
            vec![Output {
                name: "barrier.csv".into(),
                contents: barrier_csv(&report, &header(cfg, "root_find")),
            }]
        }
    };
    let csvs: Vec<String> = files.iter().map(|f| f.name.clone()).collect();
    let plot = match cfg.kind {
        ExperimentKind::Epr => format!(
            "# gnuplot script\nset datafile separator ','\nset style data histograms\nset title 'epr'\nplot '{}' using 5:xtic(1) title 'compensating factor angle'\n",
            csvs[0]
        ),
        ExperimentKind::Barrier => format!(
            "# gnuplot script\nset datafile separator ','\nset title 'emergent speeds'\nset xlabel 'speed'\nbin(x) = 0.02 * floor(x / 0.02)\nplot '{}' using (bin($1)):(1.0) smooth frequency with boxes title 'transmitted'\n",
            csvs[0]
        ),
        _ => profile_plot(&csvs, name),
    };
    files.push(Output {
        name: format!("{name}.gp"),
        contents: plot,
    });
    Ok(files)
}

fn staging_dir(out_dir: &Path) -> PathBuf {
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.subsec_nanos())
        .unwrap_or(0);
    out_dir.join(format!(".staging-{}-{nanos}", std::process::id()))
}

/// Runs `kind` with `cfg` and writes its CSVs, plot script and manifest
/// into `out_dir`. Outputs are staged and moved into place only once the
/// whole run has succeeded.
pub fn run_experiment(kind: ExperimentKind, cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunManifest, RunError> {
    if cfg.kind != kind {
        return Err(RunError::Mismatch {
            expected: kind.name().into(),
            found: cfg.kind.name().into(),
        });
    }
    cfg.validate()?;
    let start = Instant::now();
    let files = outputs(cfg)?;

    let mut names: Vec<String> = files.iter().map(|f| f.name.clone()).collect();
    names.push(MANIFEST_NAME.into());
    let manifest = RunManifest {
        experiment: kind.name().into(),
        config: serialize_config(cfg),
        config_hash: config_hash(cfg),
        master_seed: cfg.seeds.master_seed,
        tool_version: TOOL_VERSION.into(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files: names,
    };
    let manifest_text = serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Runtime(e.to_string()))? + "\n";

    fs::create_dir_all(out_dir)?;
    let stage = staging_dir(out_dir);
    let result = (|| -> std::io::Result<()> {
        fs::create_dir(&stage)?;
        for f in &files {
            fs::write(stage.join(&f.name), &f.contents)?;
        }
        fs::write(stage.join(MANIFEST_NAME), &manifest_text)?;
        for (i, name) in manifest.files.iter().enumerate() {
            if let Err(e) = fs::rename(stage.join(name), out_dir.join(name)) {
                // undo the moves already made so no partial run is left behind
                for done in &manifest.files[..i] {
                    let _ = fs::remove_file(out_dir.join(done));
                }
                return Err(e);
            }
        }
        Ok(())
    })();
    let _ = fs::remove_dir_all(&stage);
    result?;
    Ok(manifest)
}
