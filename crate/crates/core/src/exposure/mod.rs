//! The exposure pipeline: per exposure date, fit a cheap proxy of the
//! portfolio on a handful of collocation states, evaluate it across all
//! simulated paths and reduce to EE/PFE profiles with an exact ledger of
//! portfolio evaluations.

pub mod engine;
pub mod metrics;
pub mod xva;

use thiserror::Error;

use crate::collocation::CollocationError;
use crate::instruments::InstrumentError;
use crate::sparse_grid::GridError;

pub use engine::{domain_box_from_paths, evaluate_exposures, ExposureRun};
pub use metrics::{error_metrics, series_errors, ErrorMetrics, ProfileErrors};
pub use xva::{cva, left_point_weights, xva_aggregate, xva_from_ee_profile};

#[derive(Debug, Error)]
pub enum ExposureError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Collocation(#[from] CollocationError),
    #[error(transparent)]
    Instrument(#[from] InstrumentError),
    #[error("invalid proxy configuration: {0}")]
    InvalidConfig(String),
    #[error("profiles have different exposure-date grids")]
    MismatchedDates,
}

/// How collocation points for one-dimensional sub-portfolios are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollocationSource {
    /// Factor sample mean/variance mapped through normal quadrature points.
    NormalQuadrature,
    /// Equally spaced empirical quantiles of the simulated factor.
    Quantile,
    /// Normal kernel inverted through the factor's empirical CDF.
    EmpiricalInverted,
}

/// Proxy construction mode.
#[derive(Clone, Debug, PartialEq)]
pub enum ProxyMode {
    /// One Smolyak grid over all risk factors at the given level.
    FullGrid { level: usize },
    /// Per-currency sub-portfolio proxies: `n1` collocation points for
    /// one-factor currencies, a 2-D sparse grid at `level` for two-factor
    /// currencies.
    PerCurrency { n1: usize, level: usize },
    /// Full revaluation on every path; the verification reference.
    BruteForce,
}

#[derive(Clone, Debug)]
pub struct ProxyConfig {
    pub mode: ProxyMode,
    /// Quantile level for the domain box; 1 means path min/max.
    pub box_alpha: f64,
    pub source: CollocationSource,
    /// Optional override of the quantile levels used by the `Quantile`
    /// source (tail-weighted sweeps); defaults to equal interior spacing.
    pub quantile_levels: Option<Vec<f64>>,
    /// Discount positive exposure before taking PFE quantiles. The
    /// displayed definition leaves PFE undiscounted; off by default.
    pub discount_pfe: bool,
}

impl ProxyConfig {
    pub fn full_grid(level: usize) -> Self {
        Self {
            mode: ProxyMode::FullGrid { level },
            box_alpha: 0.95,
            source: CollocationSource::NormalQuadrature,
            quantile_levels: None,
            discount_pfe: false,
        }
    }

    pub fn per_currency(n1: usize, level: usize) -> Self {
        Self { mode: ProxyMode::PerCurrency { n1, level }, ..Self::full_grid(0) }
    }

    pub fn brute_force() -> Self {
        Self { mode: ProxyMode::BruteForce, ..Self::full_grid(0) }
    }

    /// Short label of the proxy mode for summaries and the profile echo.
    pub fn mode_label(&self) -> String {
        match &self.mode {
            ProxyMode::FullGrid { level } => format!("full-grid level={level}"),
            ProxyMode::PerCurrency { n1, level } => format!("per-currency n1={n1} level={level}"),
            ProxyMode::BruteForce => "brute-force".into(),
        }
    }

    pub fn validate(&self) -> Result<(), ExposureError> {
        if !(self.box_alpha > 0.5 && self.box_alpha <= 1.0) {
            return Err(ExposureError::InvalidConfig(format!(
                "box_alpha must lie in (0.5, 1], got {}",
                self.box_alpha
            )));
        }
        if let ProxyMode::PerCurrency { n1, .. } = self.mode {
            if n1 < 2 {
                return Err(ExposureError::InvalidConfig(
                    "per-currency mode needs at least 2 collocation points".into(),
                ));
            }
        }
        if let Some(levels) = &self.quantile_levels {
            if levels.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
                return Err(ExposureError::InvalidConfig(
                    "quantile levels must lie strictly inside (0, 1)".into(),
                ));
            }
        }
        Ok(())
    }
}

/// EE/PFE profiles plus the evaluation-count ledger.
#[derive(Clone, Debug)]
pub struct ExposureProfile {
    pub dates: Vec<f64>,
    /// PFE confidence levels, ascending.
    pub quantile_levels: Vec<f64>,
    pub ee: Vec<f64>,
    /// `pfe[date][level]`.
    pub pfe: Vec<Vec<f64>>,
    /// Portfolio evaluations per (sub-)portfolio per date.
    pub evals_per_date: Vec<u64>,
    /// Fraction of paths outside the proxy's fitted domain per date.
    pub extrapolated_fraction: Vec<f64>,
    /// Total proxy evaluations per sub-portfolio label.
    pub per_sub_evals: Vec<(String, u64)>,
    /// Brute-force reference cost `N_T x N_p`.
    pub reference_evals: u64,
    pub n_paths: usize,
    pub seed: u64,
    pub discounted_pfe: bool,
    /// Factor dimensions whose path range collapsed and was widened.
    pub degenerate_box_count: u64,
    /// Configuration echo: proxy mode and domain-box quantile level.
    pub mode_label: String,
    pub box_alpha: f64,
}

impl ExposureProfile {
    /// Portfolio evaluations per date per sub-portfolio (constant across
    /// dates for all proxy modes).
    pub fn evals_per_date_constant(&self) -> u64 {
        self.evals_per_date.first().copied().unwrap_or(0)
    }

    /// Reduction factor of portfolio evaluations against brute force.
    pub fn speedup(&self) -> f64 {
        self.n_paths as f64 / self.evals_per_date_constant() as f64
    }

    /// The speed-up truncated to an integer, as reported in summaries.
    pub fn speedup_truncated(&self) -> u64 {
        self.speedup() as u64
    }
}
