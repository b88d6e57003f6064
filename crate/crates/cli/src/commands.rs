//! Command implementations: single runs, the grid-size report and
//! convergence studies.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};

use sparse_exposure::exposure::{error_metrics, evaluate_exposures, ProxyConfig, ProxyMode};
use sparse_exposure::instruments::PortfolioEvaluator;
use sparse_exposure::report::{convergence_table, profile_csv, run_summary, SweepRow};
use sparse_exposure::sparse_grid::SparseGrid;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    /// The proxy mode from the configuration file.
    Proxy,
    /// Brute-force revaluation only.
    Brute,
    /// Both, with error metrics of the proxy against brute force.
    Both,
}

/// Executes one configured run and writes CSV profiles plus a text summary
/// into `out_dir`. Returns the summary text.
pub fn run(
    config: &RunConfig,
    out_dir: &Path,
    mode: RunMode,
    seed_override: Option<u64>,
) -> Result<String> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let system = config.build_system()?;
    let portfolio = config.build_portfolio(&system);
    let evaluator = PortfolioEvaluator::new(&system, &portfolio)?;
    let dates = config.simulation.dates.expand();
    let seed = seed_override.unwrap_or(config.simulation.seed);
    let state = system.simulate(&dates, config.simulation.paths, seed)?;
    let prefix = &config.output.prefix;
    let levels = &config.proxy.pfe_levels;

    let mut summary = String::new();
    let proxy_cfg = config.build_proxy();
    let want_proxy = mode != RunMode::Brute && !matches!(proxy_cfg.mode, ProxyMode::BruteForce);
    let want_brute =
        mode != RunMode::Proxy || matches!(proxy_cfg.mode, ProxyMode::BruteForce);

    let brute = if want_brute {
        let run = evaluate_exposures(&evaluator, &state, &ProxyConfig::brute_force(), levels)?;
        let path = out_dir.join(format!("{prefix}_brute.csv"));
        std::fs::write(&path, profile_csv(&run.profile))
            .with_context(|| format!("writing {}", path.display()))?;
        summary.push_str(&run_summary("brute-force reference", &run.profile, None));
        summary.push('\n');
        Some(run)
    } else {
        None
    };
    if want_proxy {
        let run = evaluate_exposures(&evaluator, &state, &proxy_cfg, levels)?;
        let path = out_dir.join(format!("{prefix}_proxy.csv"));
        std::fs::write(&path, profile_csv(&run.profile))
            .with_context(|| format!("writing {}", path.display()))?;
        let errors = match &brute {
            Some(reference) => Some(error_metrics(&reference.profile, &run.profile)?),
            None => None,
        };
        summary.push_str(&run_summary("proxy", &run.profile, errors.as_ref()));
    }
    let summary_path = out_dir.join(format!("{prefix}_summary.txt"));
    std::fs::write(&summary_path, &summary)
        .with_context(|| format!("writing {}", summary_path.display()))?;
    Ok(summary)
}

/// Prints the tensor-vs-sparse-grid size table. Every Smolyak entry calls
/// the grid builder itself, so the report cannot drift from construction.
pub fn grid_report(max_dim: usize, max_level: usize) -> Result<String> {
    if max_dim == 0 || max_dim > 16 {
        bail!("grid report limited to dimensions 1..=16, got {max_dim}");
    }
    if max_level == 0 || max_level > 6 {
        bail!("grid report limited to levels 1..=6, got {max_level}");
    }
    let mut s = String::new();
    let _ = write!(s, "{:>3} {:>16} {:>16} {:>16}", "d", "tensor n_i=3", "tensor n_i=4", "tensor n_i=5");
    for mu in 1..=max_level {
        let _ = write!(s, " {:>12}", format!("mu={mu}"));
    }
    s.push('\n');
    for d in 1..=max_dim {
        let _ = write!(
            s,
            "{:>3} {:>16} {:>16} {:>16}",
            d,
            3u128.pow(d as u32),
            4u128.pow(d as u32),
            5u128.pow(d as u32)
        );
        for mu in 1..=max_level {
            let grid = SparseGrid::new(d, mu)?;
            let _ = write!(s, " {:>12}", grid.len());
        }
        s.push('\n');
    }
    Ok(s)
}

/// Sweep parameter of a convergence study.
#[derive(Clone, Debug)]
pub enum Sweep {
    Levels(Vec<usize>),
    Points(Vec<usize>),
}

/// One brute-force reference run, then a proxy run per sweep value on the
/// identical paths; writes the text table and an error CSV.
pub fn convergence(
    config: &RunConfig,
    out_dir: &Path,
    sweep: Sweep,
    seed_override: Option<u64>,
) -> Result<String> {
    std::fs::create_dir_all(out_dir)?;
    let system = config.build_system()?;
    let portfolio = config.build_portfolio(&system);
    let evaluator = PortfolioEvaluator::new(&system, &portfolio)?;
    let dates = config.simulation.dates.expand();
    let seed = seed_override.unwrap_or(config.simulation.seed);
    let state = system.simulate(&dates, config.simulation.paths, seed)?;
    let levels = &config.proxy.pfe_levels;
    let base_cfg = config.build_proxy();
    if matches!(base_cfg.mode, ProxyMode::BruteForce) {
        bail!("convergence study needs a proxy mode in [proxy], not brute-force");
    }
    let brute = evaluate_exposures(&evaluator, &state, &ProxyConfig::brute_force(), levels)?;

    let sweep_cfgs: Vec<(String, ProxyConfig)> = match (&sweep, &base_cfg.mode) {
        (Sweep::Levels(ls), ProxyMode::FullGrid { .. }) => ls
            .iter()
            .map(|&mu| {
                (format!("mu={mu}"), ProxyConfig { mode: ProxyMode::FullGrid { level: mu }, ..base_cfg.clone() })
            })
            .collect(),
        (Sweep::Levels(ls), ProxyMode::PerCurrency { n1, .. }) => ls
            .iter()
            .map(|&mu| {
                (
                    format!("mu={mu}"),
                    ProxyConfig {
                        mode: ProxyMode::PerCurrency { n1: *n1, level: mu },
                        ..base_cfg.clone()
                    },
                )
            })
            .collect(),
        (Sweep::Points(ps), ProxyMode::PerCurrency { level, .. }) => ps
            .iter()
            .map(|&n1| {
                (
                    format!("n1={n1}"),
                    ProxyConfig {
                        mode: ProxyMode::PerCurrency { n1, level: *level },
                        ..base_cfg.clone()
                    },
                )
            })
            .collect(),
        (Sweep::Points(_), ProxyMode::FullGrid { .. }) => {
            bail!("a point sweep applies to per-currency mode; use --levels with full-grid")
        }
        (_, ProxyMode::BruteForce) => unreachable!("rejected above"),
    };

    let mut rows = vec![SweepRow {
        label: "reference".into(),
        profile: brute.profile.clone(),
        errors: None,
    }];
    let mut csv = String::from("sweep,evals_per_date,speedup,ee_mean_rel,ee_max_abs");
    for l in levels {
        let _ = write!(csv, ",pfe_{l}_mean_rel,pfe_{l}_max_abs");
    }
    csv.push('\n');
    for (label, cfg) in sweep_cfgs {
        let run = evaluate_exposures(&evaluator, &state, &cfg, levels)?;
        let errors = error_metrics(&brute.profile, &run.profile)?;
        let _ = write!(
            csv,
            "{label},{},{},{},{}",
            run.profile.evals_per_date_constant(),
            run.profile.speedup(),
            errors.ee.mean_relative,
            errors.ee.max_absolute
        );
        for (_, m) in &errors.pfe {
            let _ = write!(csv, ",{},{}", m.mean_relative, m.max_absolute);
        }
        csv.push('\n');
        rows.push(SweepRow { label, profile: run.profile, errors: Some(errors) });
    }
    let table = convergence_table(&rows);
    let prefix = &config.output.prefix;
    std::fs::write(out_dir.join(format!("{prefix}_convergence.csv")), &csv)?;
    std::fs::write(out_dir.join(format!("{prefix}_convergence.txt")), &table)?;
    Ok(table)
}
