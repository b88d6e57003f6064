//! Interest rate swap valuation under the affine short-rate models.
//!
//! The payer value with payments at `T_s..T_M` outstanding is
//!
//! ```text
//! V = N ( P(t, T_{s-1}) - P(t, T_M) - K sum_k tau_k P(t, T_k) ),
//! ```
//!
//! the telescoped form of `N sum_k tau_k P(t,T_k) (l_k(t) - K)` with the
//! forward rate `l_k(t) = (P(t,T_{k-1})/P(t,T_k) - 1)/tau_k`. Payments with
//! `T_k >= t` are included (closed interval at the payment date itself).
//! When the valuation date falls inside a period, `P(t, T_{s-1})` follows
//! the model's analytic continuation, which both forms share, so they agree
//! identically at every state.

use super::SwapSpec;
use crate::models::{DiscountCurve, G2Params, HullWhiteParams};

/// Index of the first payment not yet settled at `t` (payments are
/// `times[1..]`). `None` once the swap has fully expired.
fn first_outstanding(times: &[f64], t: f64) -> Option<usize> {
    (1..times.len()).find(|&k| times[k] >= t)
}

fn telescoped<P: Fn(f64) -> f64>(spec: &SwapSpec, t: f64, zcb: P) -> f64 {
    let Some(s) = first_outstanding(&spec.times, t) else {
        return 0.0;
    };
    let mut annuity = 0.0;
    for k in s..spec.times.len() {
        let tau = spec.times[k] - spec.times[k - 1];
        annuity += tau * zcb(spec.times[k]);
    }
    let float_leg = zcb(spec.times[s - 1]) - zcb(*spec.times.last().unwrap());
    let sign = if spec.payer { 1.0 } else { -1.0 };
    sign * spec.notional * (float_leg - spec.fixed_rate * annuity)
}

fn expanded<P: Fn(f64) -> f64>(spec: &SwapSpec, t: f64, zcb: P) -> f64 {
    let Some(s) = first_outstanding(&spec.times, t) else {
        return 0.0;
    };
    let mut value = 0.0;
    for k in s..spec.times.len() {
        let tau = spec.times[k] - spec.times[k - 1];
        let pk = zcb(spec.times[k]);
        let libor = (zcb(spec.times[k - 1]) / pk - 1.0) / tau;
        value += tau * pk * (libor - spec.fixed_rate);
    }
    let sign = if spec.payer { 1.0 } else { -1.0 };
    sign * spec.notional * value
}

/// Swap value at `(t, r)` under Hull-White, telescoped form.
pub fn swap_value_hw(spec: &SwapSpec, params: &HullWhiteParams, t: f64, r: f64) -> f64 {
    telescoped(spec, t, |maturity| params.zcb(t, maturity, r))
}

/// Term-by-term form of [`swap_value_hw`]; an independent algebraic route
/// kept for cross-checking.
pub fn swap_value_hw_expanded(spec: &SwapSpec, params: &HullWhiteParams, t: f64, r: f64) -> f64 {
    expanded(spec, t, |maturity| params.zcb(t, maturity, r))
}

/// Swap value at `(t, x, y)` under G2, telescoped form.
pub fn swap_value_g2(spec: &SwapSpec, params: &G2Params, t: f64, x: f64, y: f64) -> f64 {
    telescoped(spec, t, |maturity| params.zcb(t, maturity, x, y))
}

/// Term-by-term form of [`swap_value_g2`].
pub fn swap_value_g2_expanded(spec: &SwapSpec, params: &G2Params, t: f64, x: f64, y: f64) -> f64 {
    expanded(spec, t, |maturity| params.zcb(t, maturity, x, y))
}

/// Par fixed rate off the initial curve for a payment schedule:
/// `(P(0,T_0) - P(0,T_M)) / sum tau_k P(0,T_k)`.
pub fn par_rate(curve: &DiscountCurve, times: &[f64]) -> f64 {
    let mut annuity = 0.0;
    for k in 1..times.len() {
        annuity += (times[k] - times[k - 1]) * curve.discount(times[k]);
    }
    (curve.discount(times[0]) - curve.discount(*times.last().unwrap())) / annuity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rng::StreamRng;
    use crate::models::DiscountCurve;

    fn hw() -> HullWhiteParams {
        HullWhiteParams::fitted(0.01, 0.008, DiscountCurve::flat(0.012))
    }

    fn g2() -> G2Params {
        G2Params {
            lambda1: 0.4,
            eta1: 0.01,
            lambda2: 0.08,
            eta2: 0.005,
            rho: -0.6,
            curve: DiscountCurve::flat(0.012),
        }
    }

    /// Par rate computed under the model at a state: the model-consistent
    /// strike making the remaining swap worthless.
    fn par_at_state_hw(spec: &SwapSpec, params: &HullWhiteParams, t: f64, r: f64) -> f64 {
        let mut annuity = 0.0;
        for k in 1..spec.times.len() {
            let tau = spec.times[k] - spec.times[k - 1];
            annuity += tau * params.zcb(t, spec.times[k], r);
        }
        (params.zcb(t, spec.times[0], r) - params.zcb(t, spec.maturity(), r)) / annuity
    }

    #[test]
    fn par_swap_is_worthless() {
        let params = hw();
        let mut spec = SwapSpec::standard("EUR", 5e5, 0.0, true, 0.0, 20, 0.5);
        spec.fixed_rate = par_at_state_hw(&spec, &params, 0.0, params.r0);
        let v = swap_value_hw(&spec, &params, 0.0, params.r0);
        assert!(v.abs() <= 1e-12 * spec.notional, "par swap value {v}");
    }

    #[test]
    fn expired_swap_is_zero() {
        let params = hw();
        let spec = SwapSpec::standard("EUR", 1e6, 0.01, true, 0.0, 10, 0.5);
        assert_eq!(swap_value_hw(&spec, &params, 5.0 + 1e-9, 0.02), 0.0);
        // At exactly the last payment date, that payment is still included.
        assert_ne!(swap_value_hw(&spec, &params, 5.0, 0.02), 0.0);
    }

    #[test]
    fn payer_and_receiver_cancel_exactly() {
        let params = hw();
        let payer = SwapSpec::standard("EUR", 1e6, 0.013, true, 0.0, 16, 0.5);
        let receiver = SwapSpec { payer: false, ..payer.clone() };
        let mut rng = StreamRng::new(4);
        for _ in 0..20 {
            let t = rng.uniform_in(0.0, 9.0);
            let r = rng.uniform_in(-0.02, 0.05);
            let vp = swap_value_hw(&payer, &params, t, r);
            let vr = swap_value_hw(&receiver, &params, t, r);
            assert_eq!(vp, -vr);
        }
    }

    #[test]
    fn telescoped_and_expanded_forms_agree() {
        let params = hw();
        let g2p = g2();
        let spec = SwapSpec::standard("EUR", 2e5, 0.011, true, 0.0, 30, 0.5);
        let mut rng = StreamRng::new(7);
        for _ in 0..50 {
            // Includes dates inside periods, where the continued bond
            // carries the in-flight fixing.
            let t = rng.uniform_in(0.0, 15.5);
            let r = rng.uniform_in(-0.02, 0.06);
            let a = swap_value_hw(&spec, &params, t, r);
            let b = swap_value_hw_expanded(&spec, &params, t, r);
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "hw {a} vs {b}");
            let x = rng.uniform_in(-0.03, 0.03);
            let y = rng.uniform_in(-0.03, 0.03);
            let a = swap_value_g2(&spec, &g2p, t, x, y);
            let b = swap_value_g2_expanded(&spec, &g2p, t, x, y);
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "g2 {a} vs {b}");
        }
    }

    #[test]
    fn g2_deterministic_limit_matches_curve_discounting() {
        let mut params = g2();
        params.eta1 = 0.0;
        params.eta2 = 0.0;
        let spec = SwapSpec::standard("EUR", 1e6, 0.014, true, 0.0, 10, 1.0);
        let v = swap_value_g2(&spec, &params, 0.0, 0.0, 0.0);
        let curve = &params.curve;
        let mut want = curve.discount(0.0) - curve.discount(10.0);
        for k in 1..=10 {
            want -= 0.014 * curve.discount(k as f64);
        }
        want *= 1e6;
        assert!((v - want).abs() < 1e-6, "{v} vs {want}");
    }

    #[test]
    fn g2_par_strike_gives_zero() {
        let params = g2();
        let mut spec = SwapSpec::standard("EUR", 1e6, 0.0, true, 0.0, 12, 0.5);
        spec.fixed_rate = par_rate(&params.curve, &spec.times);
        let v = swap_value_g2(&spec, &params, 0.0, 0.0, 0.0);
        assert!(v.abs() <= 1e-10 * spec.notional);
    }

    #[test]
    fn single_period_value_from_two_zcbs() {
        // K = 0: value = N (P(t,T0) - P(t,T1)), both forms.
        let params = hw();
        let spec = SwapSpec { currency: "EUR".into(), notional: 1e4, fixed_rate: 0.0, payer: true, times: vec![1.0, 1.5] };
        let t = 0.3;
        let r = 0.015;
        let want = 1e4 * (params.zcb(t, 1.0, r) - params.zcb(t, 1.5, r));
        assert!((swap_value_hw(&spec, &params, t, r) - want).abs() < 1e-9);
        assert!((swap_value_hw_expanded(&spec, &params, t, r) - want).abs() < 1e-9);
    }

    #[test]
    fn portfolio_additivity() {
        let params = hw();
        let a = SwapSpec::standard("EUR", 1e5, 0.01, true, 0.0, 8, 0.5);
        let b = SwapSpec::standard("EUR", 3e5, 0.015, false, 0.0, 14, 0.5);
        let t = 1.7;
        let r = 0.02;
        let joint = swap_value_hw(&a, &params, t, r) + swap_value_hw(&b, &params, t, r);
        // Doubling a notional doubles its contribution (degree-1 homogeneity).
        let a2 = SwapSpec { notional: 2e5, ..a.clone() };
        let va = swap_value_hw(&a, &params, t, r);
        assert!((swap_value_hw(&a2, &params, t, r) - 2.0 * va).abs() < 1e-9);
        assert!(joint.is_finite());
    }
}
