use std::fmt::Write as _;

use crate::experiments::{EprOutcome, TunnelingReport};
use crate::profile::DensityProfile;

pub const PROFILE_HEADER: &str = "bin_center,gauge_density,oracle_density";

/// Lines starting with this prefix carry the wall clock and are excluded from
/// determinism comparisons.
pub const TIMESTAMP_PREFIX: &str = "# timestamp";

/// `v` in positional decimal notation with 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = 1 + exp; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

/// Key/value lines written as `# key = value` above the data.
pub type Header = Vec<(String, String)>;

fn write_header(out: &mut String, header: &Header) {
    for (k, v) in header {
        let _ = writeln!(out, "# {k} = {v}");
    }
}

/// Profile CSV: header lines, profile metadata as `meta.*`, column header, rows.
pub fn profile_csv(profile: &DensityProfile, header: &Header) -> String {
    let mut out = String::new();
    write_header(&mut out, header);
    let _ = writeln!(out, "# overflow = {}", profile.overflow);
    for (k, v) in &profile.metadata {
        let _ = writeln!(out, "# meta.{k} = {v}");
    }
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for i in 0..profile.len() {
        let oracle = profile
            .oracle_density
            .as_ref()
            .map(|o| format_sig12(o[i]))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{}",
            format_sig12(profile.bin_centers[i]),
            format_sig12(profile.gauge_density[i]),
            oracle
        );
    }
    out
}

pub fn epr_csv(
    inputs: (f64, f64, f64),
    outcome: &EprOutcome,
    header: &Header,
) -> String {
    let mut out = String::new();
    write_header(&mut out, header);
    out.push_str(
        "S_rho,S_rho_prime,delta_S,undisturbed_physical,compensating_factor_angle,disturbed_physical,compensated_physical\n",
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{}",
        format_sig12(inputs.0),
        format_sig12(inputs.1),
        format_sig12(inputs.2),
        outcome.undisturbed_physical,
        format_sig12(outcome.compensating_factor_angle),
        outcome.disturbed_physical,
        outcome.compensated_physical
    );
    out
}

pub fn barrier_csv(report: &TunnelingReport, header: &Header) -> String {
    let mut out = String::new();
    write_header(&mut out, header);
    let _ = writeln!(out, "# n_attempts = {}", report.n_attempts);
    let _ = writeln!(out, "# n_transmitted = {}", report.n_transmitted);
    let _ = writeln!(out, "# n_reflected = {}", report.n_reflected);
    let _ = writeln!(out, "# n_spacelike = {}", report.n_spacelike);
    let _ = writeln!(out, "# n_unprojectable = {}", report.n_unprojectable);
    let _ = writeln!(out, "# transmitted_fraction = {}", format_sig12(report.transmitted_fraction));
    let _ = writeln!(out, "# forbidden = {}", report.forbidden);
    out.push_str("emergent_speed\n");
    for &v in &report.emergent_speeds {
        out.push_str(&format_sig12(v));
        out.push('\n');
    }
    out
}
