//! xVA aggregation over discounted exposures:
//!
//! ```text
//! xVA(t_0) ~ sum_k E[ M(t_0)/M(T_k) chi(T_k, V(T_k, X(T_k))) ] dt_k
//! ```
//!
//! with a caller-supplied exposure weight `chi(t, x)`. The CVA helper uses
//! `chi(t, x) = (1 - R) f_D(t) max(x, 0)` with a constant-hazard default
//! density.

use super::engine::ExposureRun;
use super::ExposureProfile;
use crate::math::stats::pairwise_sum;

/// Left-point interval weights on a (possibly non-uniform) date grid:
/// `dt_k = T_k - T_{k-1}` with `T_0 = t_0 = 0`.
pub fn left_point_weights(dates: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    dates
        .iter()
        .map(|&t| {
            let dt = t - prev;
            prev = t;
            dt
        })
        .collect()
}

/// Pathwise aggregation with a generic exposure weight.
pub fn xva_aggregate<F: Fn(f64, f64) -> f64>(run: &ExposureRun, chi: F, dt: &[f64]) -> f64 {
    assert_eq!(dt.len(), run.profile.dates.len());
    let n_paths = run.profile.n_paths as f64;
    let mut total = 0.0;
    for (k, &t) in run.profile.dates.iter().enumerate() {
        let weighted: Vec<f64> = run.values[k]
            .iter()
            .zip(&run.discounts[k])
            .map(|(&v, &d)| d * chi(t, v))
            .collect();
        total += dt[k] * pairwise_sum(&weighted) / n_paths;
    }
    total
}

/// Profile-based aggregation for weights linear in positive exposure:
/// `sum_k w(T_k) EE_k dt_k`.
pub fn xva_from_ee_profile<W: Fn(f64) -> f64>(
    profile: &ExposureProfile,
    weight: W,
    dt: &[f64],
) -> f64 {
    assert_eq!(dt.len(), profile.dates.len());
    profile
        .dates
        .iter()
        .zip(&profile.ee)
        .zip(dt)
        .map(|((&t, &ee), &w)| weight(t) * ee * w)
        .sum()
}

/// CVA with recovery `recovery` and a constant hazard rate `hazard`: the
/// default density is `f_D(t) = hazard * exp(-hazard t)`.
pub fn cva(run: &ExposureRun, recovery: f64, hazard: f64, dt: &[f64]) -> f64 {
    xva_aggregate(
        run,
        |t, x| (1.0 - recovery) * hazard * (-hazard * t).exp() * x.max(0.0),
        dt,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exposure::{evaluate_exposures, ProxyConfig};
    use crate::instruments::{PortfolioEvaluator, PortfolioSpec, SwapSpec, Trade};
    use crate::models::{DiscountCurve, HullWhiteParams, SystemModel};

    fn run_fixture() -> ExposureRun {
        let sys = SystemModel::HullWhiteSingle {
            currency: "EUR".into(),
            params: HullWhiteParams::fitted(0.01, 0.008, DiscountCurve::flat(0.012)),
        };
        let book = PortfolioSpec {
            base_currency: "EUR".into(),
            trades: vec![Trade::Swap(SwapSpec::standard("EUR", 1e5, 0.012, true, 0.0, 12, 0.5))],
        };
        let eval = PortfolioEvaluator::new(&sys, &book).unwrap();
        let state = sys.simulate(&[0.5, 1.0, 1.5, 2.0], 2000, 13).unwrap();
        evaluate_exposures(&eval, &state, &ProxyConfig::brute_force(), &[0.95]).unwrap()
    }

    #[test]
    fn zero_weight_gives_zero() {
        let run = run_fixture();
        let dt = left_point_weights(&run.profile.dates);
        assert_eq!(xva_aggregate(&run, |_, _| 0.0, &dt), 0.0);
    }

    #[test]
    fn positive_part_weight_with_unit_dt_sums_ee() {
        let run = run_fixture();
        let dt = vec![1.0; run.profile.dates.len()];
        let got = xva_aggregate(&run, |_, x| x.max(0.0), &dt);
        let want: f64 = run.profile.ee.iter().sum();
        assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn pathwise_and_profile_aggregation_agree_for_linear_chi() {
        let run = run_fixture();
        let dt = left_point_weights(&run.profile.dates);
        let hazard = 0.02;
        let recovery = 0.4;
        let pathwise = cva(&run, recovery, hazard, &dt);
        let weight = |t: f64| (1.0 - recovery) * hazard * (-hazard * t).exp();
        let profile_based = xva_from_ee_profile(&run.profile, weight, &dt);
        assert!(
            (pathwise - profile_based).abs() <= 1e-10 * (1.0 + profile_based.abs()),
            "{pathwise} vs {profile_based}"
        );
    }

    #[test]
    fn left_point_weights_span_the_grid() {
        let dt = left_point_weights(&[0.5, 1.0, 2.0]);
        assert_eq!(dt, vec![0.5, 0.5, 1.0]);
    }
}
