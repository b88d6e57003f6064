//! Semi-analytic European swaption pricing under the two-factor Gaussian
//! model.
//!
//! Conditional on the valuation state, the factor pair at expiry `T` is
//! bivariate normal under the T-forward measure. The payer price is
//!
//! ```text
//! N P(t,T) int w(x) [ Phi(-h1(x)) - sum_i kappa_i(x) e^{psi_i(x)} Phi(-h2_i(x)) ] dx
//! ```
//!
//! where `w` is the density of the first factor at expiry,
//! `kappa_i(x) = c_i exp(A(T,T_i) - B1(T,T_i) x)` carries the cashflow
//! coefficients `c_i = K tau_i` (`c_n = 1 + K tau_n`), and the exercise
//! boundary `ybar(x)` solves `sum_i kappa_i(x) e^{-ybar B2(T,T_i)} = 1`.
//! The left side is strictly decreasing in `ybar`, so the root is unique;
//! it is found by a bisection-safeguarded Newton iteration warm-started
//! across quadrature nodes. The outer integral uses 128-node
//! Gauss-Legendre over eight standard deviations each side of the mean.
//! Receiver prices follow from payer/receiver parity against the forward
//! swap.

use super::swap::swap_value_g2;
use super::{InstrumentError, SwaptionSpec};
use crate::math::normal::{norm_cdf, norm_pdf};
use crate::math::quadrature::gauss_legendre;
use crate::models::G2Params;

const INTEGRATION_NODES: usize = 128;
const INTEGRATION_WIDTH: f64 = 8.0;
/// `Phi(-h)` falls below 1e-16 beyond this, negligible against the O(1)
/// integrand, so tail terms short-circuit.
const SATURATION: f64 = 8.5;

enum Mode {
    /// Valuation after expiry: worth nothing (cash-settled convention).
    Expired,
    /// Valuation at expiry: intrinsic value.
    Intrinsic,
    Live(Box<LiveCtx>),
}

struct LiveCtx {
    coeffs: Vec<f64>,
    b1: Vec<f64>,
    b2: Vec<f64>,
    log_a: Vec<f64>,
    decay1: f64,
    decay2: f64,
    fwd_shift_x: f64,
    fwd_shift_y: f64,
    sd2: f64,
    corr: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `exp(-b1_i sd1 s_g)`, flattened `(payment, node)`.
    exp_tilt: Vec<f64>,
}

/// A swaption bound to a valuation date; precomputes everything that does
/// not depend on the factor state so per-path valuation stays cheap.
pub struct SwaptionPricer<'a> {
    spec: &'a SwaptionSpec,
    params: &'a G2Params,
    t: f64,
    mode: Mode,
}

impl<'a> SwaptionPricer<'a> {
    pub fn new(spec: &'a SwaptionSpec, params: &'a G2Params, t: f64) -> Result<Self, InstrumentError> {
        spec.validate()?;
        let expiry = spec.expiry;
        let mode = if t > expiry + 1e-12 {
            Mode::Expired
        } else if expiry - t < 1e-10 {
            Mode::Intrinsic
        } else {
            let times = &spec.underlying.times;
            let k = spec.underlying.fixed_rate;
            let n = times.len() - 1;
            let mut coeffs = Vec::with_capacity(n);
            let mut b1 = Vec::with_capacity(n);
            let mut b2 = Vec::with_capacity(n);
            let mut log_a = Vec::with_capacity(n);
            for i in 1..=n {
                let tau = times[i] - times[i - 1];
                let mut c = k * tau;
                if i == n {
                    c += 1.0;
                }
                coeffs.push(c);
                b1.push(params.b1(expiry, times[i]));
                b2.push(params.b2(expiry, times[i]));
                log_a.push(params.bond_log_a(expiry, times[i]));
            }
            let m = params.step_moments(t, expiry);
            let (fx, fy) = params.forward_mean_shift(t, expiry);
            let (nodes, weights) = gauss_legendre(INTEGRATION_NODES);
            let nodes: Vec<f64> = nodes.iter().map(|s| s * INTEGRATION_WIDTH).collect();
            let weights: Vec<f64> = weights.iter().map(|w| w * INTEGRATION_WIDTH).collect();
            let mut exp_tilt = Vec::with_capacity(n * nodes.len());
            for &b in &b1 {
                for &s in &nodes {
                    exp_tilt.push((-b * m.sd1 * s).exp());
                }
            }
            Mode::Live(Box::new(LiveCtx {
                coeffs,
                b1,
                b2,
                log_a,
                decay1: m.decay1,
                decay2: m.decay2,
                fwd_shift_x: fx,
                fwd_shift_y: fy,
                sd2: m.sd2,
                corr: m.corr,
                nodes,
                weights,
                exp_tilt,
            }))
        };
        Ok(Self { spec, params, t, mode })
    }

    /// Value at the factor state `(x, y)`; non-negative.
    pub fn value(&self, x: f64, y: f64) -> Result<f64, InstrumentError> {
        match &self.mode {
            Mode::Expired => Ok(0.0),
            Mode::Intrinsic => {
                let mut swap = self.spec.underlying.clone();
                swap.payer = self.spec.payer;
                Ok(swap_value_g2(&swap, self.params, self.t, x, y).max(0.0))
            }
            Mode::Live(ctx) => {
                let payer = self.payer_value(ctx, x, y)?;
                if self.spec.payer {
                    Ok(payer)
                } else {
                    // Parity: payer - receiver = forward (payer) swap value.
                    let mut swap = self.spec.underlying.clone();
                    swap.payer = true;
                    let fwd = swap_value_g2(&swap, self.params, self.t, x, y);
                    Ok((payer - fwd).max(0.0))
                }
            }
        }
    }

    fn payer_value(&self, ctx: &LiveCtx, x: f64, y: f64) -> Result<f64, InstrumentError> {
        let n = ctx.coeffs.len();
        let n_nodes = ctx.nodes.len();
        let mu1 = x * ctx.decay1 + ctx.fwd_shift_x;
        let mu2 = y * ctx.decay2 + ctx.fwd_shift_y;
        let s_perp = (ctx.sd2 * ctx.sd2 * (1.0 - ctx.corr * ctx.corr)).sqrt().max(1e-300);
        let scale: Vec<f64> = (0..n)
            .map(|i| ctx.coeffs[i] * (ctx.log_a[i] - ctx.b1[i] * mu1).exp())
            .collect();
        let mut kappa = vec![0.0; n];
        let mut integral = 0.0;
        let mut ybar = 0.0;
        for g in 0..n_nodes {
            let s = ctx.nodes[g];
            for i in 0..n {
                kappa[i] = scale[i] * ctx.exp_tilt[i * n_nodes + g];
            }
            ybar = solve_boundary(&kappa, &ctx.b2, ybar)?;
            let mu_c = mu2 + ctx.corr * ctx.sd2 * s;
            let h1 = (ybar - mu_c) / s_perp;
            // Saturated tails: Phi(-h) is below 1e-16 for h > 8.5, so both
            // the exercise probability and every hedge term vanish there
            // (h2 >= h1); the node contributes nothing.
            if h1 > SATURATION {
                continue;
            }
            let mut hedge = 0.0;
            for (&k_i, &b2) in kappa.iter().zip(&ctx.b2) {
                let h2 = h1 + b2 * s_perp;
                let phi = if h2 > SATURATION {
                    continue;
                } else if h2 < -SATURATION {
                    1.0
                } else {
                    norm_cdf(-h2)
                };
                let psi = -b2 * (mu_c - 0.5 * b2 * s_perp * s_perp);
                hedge += k_i * psi.exp() * phi;
            }
            let exercise = if h1 < -SATURATION { 1.0 } else { norm_cdf(-h1) };
            integral += ctx.weights[g] * norm_pdf(s) * (exercise - hedge);
        }
        let discount = self.params.zcb(self.t, self.spec.expiry, x, y);
        Ok((self.spec.underlying.notional * discount * integral).max(0.0))
    }
}

/// Solves `sum_i kappa_i e^{-b2_i ybar} = 1` for the unique root. Newton
/// with an expanding bisection bracket as safeguard.
fn solve_boundary(kappa: &[f64], b2: &[f64], warm_start: f64) -> Result<f64, InstrumentError> {
    let f = |ybar: f64| -> (f64, f64) {
        let mut v = -1.0;
        let mut dv = 0.0;
        for (&k, &b) in kappa.iter().zip(b2) {
            let e = k * (-b * ybar).exp();
            v += e;
            dv -= b * e;
        }
        (v, dv)
    };
    let mut ybar = warm_start;
    for _ in 0..100 {
        let (v, dv) = f(ybar);
        if !v.is_finite() || dv >= 0.0 {
            break;
        }
        let step = v / dv;
        ybar -= step;
        if step.abs() <= 1e-14 * (1.0 + ybar.abs()) {
            return Ok(ybar);
        }
    }
    // Bisection fallback on an expanded bracket.
    let (mut lo, mut hi) = (-1.0, 1.0);
    let mut guard = 0;
    while f(lo).0 < 0.0 {
        lo *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(InstrumentError::RootFind("no lower bracket".into()));
        }
    }
    while f(hi).0 > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 120 {
            return Err(InstrumentError::RootFind("no upper bracket".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One-shot valuation of a European swaption at `(t, x, y)`; pricing at the
/// initial date uses `t = 0, x = y = 0`.
pub fn swaption_value_g2(
    spec: &SwaptionSpec,
    params: &G2Params,
    t: f64,
    x: f64,
    y: f64,
) -> Result<f64, InstrumentError> {
    SwaptionPricer::new(spec, params, t)?.value(x, y)
}
