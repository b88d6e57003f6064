//! Error metrics between a reference profile and a proxy profile.

use super::{ExposureError, ExposureProfile};

/// Aggregate distance between two per-date series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMetrics {
    /// `(1/N_T) sum_k |f_k - g_k| / f_k` over dates with `f_k != 0`.
    pub mean_relative: f64,
    /// `max_k |f_k - g_k| / f_k` over dates with `f_k != 0`.
    pub max_relative: f64,
    /// `max_k |f_k - g_k|`.
    pub max_absolute: f64,
}

/// Computes all three metrics of `approx` against `reference`.
pub fn series_errors(reference: &[f64], approx: &[f64]) -> ErrorMetrics {
    assert_eq!(reference.len(), approx.len());
    let n = reference.len() as f64;
    let mut sum_rel = 0.0;
    let mut max_rel = 0.0f64;
    let mut max_abs = 0.0f64;
    for (&f, &g) in reference.iter().zip(approx) {
        let abs = (f - g).abs();
        max_abs = max_abs.max(abs);
        if f != 0.0 {
            let rel = abs / f.abs();
            sum_rel += rel;
            max_rel = max_rel.max(rel);
        }
    }
    ErrorMetrics { mean_relative: sum_rel / n, max_relative: max_rel, max_absolute: max_abs }
}

/// Per-metric errors for EE and each PFE level.
#[derive(Clone, Debug)]
pub struct ProfileErrors {
    pub ee: ErrorMetrics,
    pub pfe: Vec<(f64, ErrorMetrics)>,
}

/// Compares two profiles on identical date and quantile grids.
pub fn error_metrics(
    reference: &ExposureProfile,
    approx: &ExposureProfile,
) -> Result<ProfileErrors, ExposureError> {
    if reference.dates != approx.dates || reference.quantile_levels != approx.quantile_levels {
        return Err(ExposureError::MismatchedDates);
    }
    let ee = series_errors(&reference.ee, &approx.ee);
    let mut pfe = Vec::new();
    for (qi, &level) in reference.quantile_levels.iter().enumerate() {
        let ref_series: Vec<f64> = reference.pfe.iter().map(|row| row[qi]).collect();
        let approx_series: Vec<f64> = approx.pfe.iter().map(|row| row[qi]).collect();
        pfe.push((level, series_errors(&ref_series, &approx_series)));
    }
    Ok(ProfileErrors { ee, pfe })
}
