use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SLIT: &str = "particle.p = 2pi\ngeometry.d = 5\ngeometry.L = 100\nscreen.bins = 80\nsampler.n_paths = 4000\n";
const SWEEP: &str = "\
experiment.name = sweep
particle.p = 4pi
geometry.d = 5
geometry.L = 36
screen.bins = 60
screen.x_min = -30
screen.x_max = 30
sweep.distances = 1.5, 3, 6, 12, 36
";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gaugemech"));
    c.env_remove("GAUGEMECH_OUT");
    c
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn csvs(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn run_writes_profile_plot_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SLIT);
    let out = tmp.path().join("out");
    let res = bin()
        .args(["run", "double_slit", "--config", &cfg, "--out"])
        .arg(&out)
        .args(["--seed", "5", "--estimator", "monte_carlo"])
        .output()
        .unwrap();
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    for f in ["double_slit.csv", "double_slit.gp", "manifest.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let csv = fs::read_to_string(out.join("double_slit.csv")).unwrap();
    assert!(csv.contains("# seed = 5") && csv.contains("# estimator = monte_carlo"));
}

#[test]
fn environment_sets_the_default_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "experiment.name = epr\nepr.S_rho = 1\nepr.S_rho_prime = 1\nepr.delta_S = 0.5\n");
    let target = tmp.path().join("from_env");
    let res = bin()
        .current_dir(tmp.path())
        .env("GAUGEMECH_OUT", &target)
        .args(["run", "epr", "--config", &cfg])
        .output()
        .unwrap();
    assert_eq!(code(&res), 0);
    assert!(target.join("epr.csv").is_file());

    let flag = tmp.path().join("from_flag");
    let res = bin()
        .env("GAUGEMECH_OUT", &target)
        .args(["run", "epr", "--config", &cfg, "--out"])
        .arg(&flag)
        .output()
        .unwrap();
    assert_eq!(code(&res), 0);
    assert!(flag.join("epr.csv").is_file());
}

#[test]
fn sweep_writes_one_profile_per_distance() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SWEEP);
    let out = tmp.path().join("sweep");
    let res = bin().args(["run", "sweep", "--config", &cfg, "--out"]).arg(&out).output().unwrap();
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(csvs(&out), (0..5).map(|i| format!("sweep_{i:02}.csv")).collect::<Vec<_>>());
}

#[test]
fn config_errors_exit_one_and_name_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &format!("{SLIT}intrusion.q = -1\n"));
    let res = bin().args(["validate", "--config", &cfg]).output().unwrap();
    assert_eq!(code(&res), 1);
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("intrusion.q") && err.contains("line 6"), "{err}");

    let cfg = write_config(tmp.path(), &format!("{SLIT}geometry.depth = 3\n"));
    assert_eq!(code(&bin().args(["validate", "--config", &cfg]).output().unwrap()), 1);

    let out = tmp.path().join("never");
    let res = bin().args(["run", "sweep", "--config", &cfg, "--out"]).arg(&out).output().unwrap();
    assert_eq!(code(&res), 1);
    assert!(!out.exists());

    assert_eq!(code(&bin().args(["run", "nope", "--config", &cfg]).output().unwrap()), 1);
    assert_eq!(code(&bin().args(["run"]).output().unwrap()), 1);
}

#[test]
fn runtime_failures_exit_two_without_partial_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SLIT);
    let out = tmp.path().join("out");
    fs::create_dir_all(out.join("double_slit.gp")).unwrap();
    let res = bin().args(["run", "double_slit", "--config", &cfg, "--out"]).arg(&out).output().unwrap();
    assert_eq!(code(&res), 2);
    assert!(csvs(&out).is_empty());
    assert!(!out.join("manifest.json").exists());
}

#[test]
fn validate_and_list() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SLIT);
    let res = bin().args(["validate", "--config", &cfg]).output().unwrap();
    assert_eq!(code(&res), 0);
    assert!(String::from_utf8_lossy(&res.stdout).contains("double_slit"));

    let res = bin().arg("list-experiments").output().unwrap();
    assert_eq!(code(&res), 0);
    let text = String::from_utf8_lossy(&res.stdout);
    for name in ["double_slit", "sweep", "aharonov_bohm", "epr", "barrier", "oracle_compare"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn repeated_runs_match_apart_from_timestamps() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &format!("{SLIT}estimator.kind = both\n"));
    let strip = |dir: &Path, name: &str| -> String {
        fs::read_to_string(dir.join(name))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# timestamp"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let res = bin().args(["run", "double_slit", "--config", &cfg, "--out"]).arg(dir).output().unwrap();
        assert_eq!(code(&res), 0);
    }
    let names = csvs(&a);
    assert_eq!(names.len(), 2);
    for n in &names {
        assert_eq!(strip(&a, n), strip(&b, n));
    }
}
