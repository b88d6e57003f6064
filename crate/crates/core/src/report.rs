//! CSV and plain-text reporting of exposure runs.
//!
//! Numbers are written with Rust's shortest round-trip decimal formatting,
//! which is locale-independent and reparses to the identical bits, so a
//! deterministic run produces byte-identical files.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::exposure::{ExposureProfile, ProfileErrors};

/// CSV rendering of a profile. Columns: date, EE, one PFE column per
/// confidence level, the per-date evaluation count and the extrapolated
/// path fraction.
pub fn profile_csv(profile: &ExposureProfile) -> String {
    let mut s = String::new();
    s.push_str("date,ee");
    for level in &profile.quantile_levels {
        let _ = write!(s, ",pfe_{level}");
    }
    s.push_str(",eval_count,extrapolated_fraction\n");
    for (k, &t) in profile.dates.iter().enumerate() {
        let _ = write!(s, "{t},{}", profile.ee[k]);
        for q in &profile.pfe[k] {
            let _ = write!(s, ",{q}");
        }
        let _ = writeln!(
            s,
            ",{},{}",
            profile.evals_per_date[k], profile.extrapolated_fraction[k]
        );
    }
    s
}

pub fn write_profile_csv(path: &Path, profile: &ExposureProfile) -> io::Result<()> {
    std::fs::write(path, profile_csv(profile))
}

/// One sweep entry of a convergence study.
#[derive(Clone, Debug)]
pub struct SweepRow {
    /// Sweep label, e.g. `mu=2` or `n1=4`.
    pub label: String,
    pub profile: ExposureProfile,
    /// Errors against the brute-force reference; absent for the reference
    /// row itself.
    pub errors: Option<ProfileErrors>,
}

/// Plain-text convergence table: evaluation counts, speed-up versus the
/// path count and mean-relative errors per metric.
pub fn convergence_table(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let levels: Vec<f64> = rows
        .first()
        .map(|r| r.profile.quantile_levels.clone())
        .unwrap_or_default();
    let _ = write!(s, "{:<10} {:>16} {:>10} {:>12}", "sweep", "eval count", "speed-up", "EE");
    for l in &levels {
        let _ = write!(s, " {:>12}", format!("PFE_{l}"));
    }
    s.push('\n');
    for row in rows {
        let p = &row.profile;
        let evals = format!("{}x{}", p.dates.len(), p.evals_per_date_constant());
        let _ = write!(s, "{:<10} {:>16} {:>10}", row.label, evals, p.speedup_truncated());
        match &row.errors {
            Some(e) => {
                let _ = write!(s, " {:>12.4e}", e.ee.mean_relative);
                for (_, m) in &e.pfe {
                    let _ = write!(s, " {:>12.4e}", m.mean_relative);
                }
            }
            None => {
                let _ = write!(s, " {:>12}", "-");
                for _ in &levels {
                    let _ = write!(s, " {:>12}", "-");
                }
            }
        }
        s.push('\n');
    }
    s
}

/// Run summary: configuration echo plus the evaluation ledger.
pub fn run_summary(label: &str, profile: &ExposureProfile, errors: Option<&ProfileErrors>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "run: {label}");
    let _ = writeln!(s, "mode: {}", profile.mode_label);
    let _ = writeln!(s, "seed: {}", profile.seed);
    let _ = writeln!(s, "paths: {}", profile.n_paths);
    let _ = writeln!(s, "exposure dates: {}", profile.dates.len());
    let _ = writeln!(s, "box alpha: {}", profile.box_alpha);
    let _ = writeln!(
        s,
        "evaluations per date per (sub-)portfolio: {}",
        profile.evals_per_date_constant()
    );
    for (name, count) in &profile.per_sub_evals {
        let _ = writeln!(s, "total evaluations [{name}]: {count}");
    }
    let _ = writeln!(s, "brute-force reference evaluations: {}", profile.reference_evals);
    let _ = writeln!(
        s,
        "speed-up vs full revaluation: {} ({:.2})",
        profile.speedup_truncated(),
        profile.speedup()
    );
    let mean_extrap = if profile.extrapolated_fraction.is_empty() {
        0.0
    } else {
        profile.extrapolated_fraction.iter().sum::<f64>()
            / profile.extrapolated_fraction.len() as f64
    };
    let _ = writeln!(s, "mean extrapolated path fraction: {mean_extrap:.4}");
    let _ = writeln!(s, "degenerate (widened) box dimensions: {}", profile.degenerate_box_count);
    let _ = writeln!(s, "pfe discounted: {}", profile.discounted_pfe);
    if let Some(e) = errors {
        let _ = writeln!(s, "EE error (mean-rel / max-rel / max-abs): {:.6e} / {:.6e} / {:.6e}",
            e.ee.mean_relative, e.ee.max_relative, e.ee.max_absolute);
        for (level, m) in &e.pfe {
            let _ = writeln!(
                s,
                "PFE_{level} error (mean-rel / max-rel / max-abs): {:.6e} / {:.6e} / {:.6e}",
                m.mean_relative, m.max_relative, m.max_absolute
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exposure::ExposureProfile;

    fn profile() -> ExposureProfile {
        ExposureProfile {
            dates: vec![0.5, 1.0],
            quantile_levels: vec![0.95, 0.99],
            ee: vec![1.25, 2.5],
            pfe: vec![vec![3.0, 4.0], vec![5.0, 6.25]],
            evals_per_date: vec![5, 5],
            extrapolated_fraction: vec![0.0, 0.125],
            per_sub_evals: vec![("portfolio".into(), 10)],
            reference_evals: 2000,
            n_paths: 1000,
            seed: 42,
            discounted_pfe: false,
            degenerate_box_count: 0,
            mode_label: "full-grid level=1".into(),
            box_alpha: 0.95,
        }
    }

    #[test]
    fn csv_layout_and_round_trip_precision() {
        let csv = profile_csv(&profile());
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "date,ee,pfe_0.95,pfe_0.99,eval_count,extrapolated_fraction"
        );
        assert_eq!(lines.next().unwrap(), "0.5,1.25,3,4,5,0");
        assert_eq!(lines.next().unwrap(), "1,2.5,5,6.25,5,0.125");
        // Shortest round-trip formatting reparses exactly.
        let v: f64 = "0.1".parse().unwrap();
        assert_eq!(format!("{v}"), "0.1");
    }

    #[test]
    fn summary_mentions_ledger() {
        let s = run_summary("demo", &profile(), None);
        assert!(s.contains("total evaluations [portfolio]: 10"));
        assert!(s.contains("speed-up vs full revaluation: 200"));
    }
}
