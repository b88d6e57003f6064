//! Model systems and their exact big-step Monte Carlo simulation.
//!
//! Four systems cover the experiments: a single-currency Hull-White model,
//! the multi-currency Black-Scholes-Hull-White FX system, a single-currency
//! G2++ model and the multi-currency G2++ FX system. Correlated Gaussian
//! increments come from the Cholesky factor of the configured driver
//! correlation matrix, with drivers ordered exactly like the state vector.
//!
//! Pathwise integrals (money-savings account, FX rate drift) use the
//! trapezoid rule on the exposure-date grid; everything else steps exactly.
//! Every draw is a pure function of `(seed, path, date, driver)`, so panels
//! are identical under any thread count.

use rayon::prelude::*;
use thiserror::Error;

use super::curve::DiscountCurve;
use super::g2::G2Params;
use super::hull_white::HullWhiteParams;
use super::state::{FactorId, ModelState};
use crate::math::linalg::cholesky_lower;
use crate::math::rng::normal_draw;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("exposure dates must be non-empty")]
    EmptyDates,
    #[error("exposure dates must be strictly increasing (violation at index {0})")]
    NonIncreasingDates(usize),
    #[error("first exposure date must be positive, got {0}")]
    FirstDateNotPositive(f64),
    #[error("path count must be positive")]
    ZeroPaths,
    #[error("correlation matrix invalid: {0}")]
    BadCorrelation(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
}

/// A foreign currency leg of the BSHW FX system.
#[derive(Clone, Debug)]
pub struct FxLeg {
    pub currency: String,
    pub rates: HullWhiteParams,
    pub fx_spot: f64,
    pub fx_vol: f64,
}

/// The multi-currency BSHW system: base Hull-White rate, one Hull-White
/// rate and one lognormal FX process per foreign currency, all correlated.
#[derive(Clone, Debug)]
pub struct BshwSystem {
    pub base_currency: String,
    pub base: HullWhiteParams,
    pub legs: Vec<FxLeg>,
    /// Row-major (2 d_c + 1)^2 driver correlation matrix, ordered
    /// `[r_base, fx_1, .., fx_dc, r_1, .., r_dc]`.
    pub correlation: Vec<f64>,
}

/// A foreign currency leg of the G2++ FX system.
#[derive(Clone, Debug)]
pub struct G2FxLeg {
    pub currency: String,
    pub rates: G2Params,
    pub fx_spot: f64,
    pub fx_vol: f64,
}

/// Multi-currency system with a two-factor Gaussian rate model per currency.
#[derive(Clone, Debug)]
pub struct G2FxSystem {
    pub base_currency: String,
    pub base: G2Params,
    pub legs: Vec<G2FxLeg>,
    /// Row-major (3 d_c + 2)^2 driver correlation matrix, ordered
    /// `[x_base, y_base, fx_1, .., fx_dc, x_1, y_1, .., x_dc, y_dc]`.
    /// Within-currency factor entries must equal the leg's `rho`.
    pub correlation: Vec<f64>,
}

/// A simulatable risk-factor system with a named currency set.
#[derive(Clone, Debug)]
pub enum SystemModel {
    HullWhiteSingle { currency: String, params: HullWhiteParams },
    Bshw(BshwSystem),
    G2Single { currency: String, params: G2Params },
    G2Fx(G2FxSystem),
}

/// Which rate model drives a currency's discounting and swap valuation.
#[derive(Clone, Copy, Debug)]
pub enum RateModelRef<'a> {
    Hw(&'a HullWhiteParams),
    G2(&'a G2Params),
}

impl SystemModel {
    pub fn base_currency(&self) -> &str {
        match self {
            SystemModel::HullWhiteSingle { currency, .. } => currency,
            SystemModel::Bshw(s) => &s.base_currency,
            SystemModel::G2Single { currency, .. } => currency,
            SystemModel::G2Fx(s) => &s.base_currency,
        }
    }

    /// Currencies with the base first, matching `FactorId` indices.
    pub fn currencies(&self) -> Vec<&str> {
        let mut out = vec![self.base_currency()];
        match self {
            SystemModel::Bshw(s) => out.extend(s.legs.iter().map(|l| l.currency.as_str())),
            SystemModel::G2Fx(s) => out.extend(s.legs.iter().map(|l| l.currency.as_str())),
            _ => {}
        }
        out
    }

    pub fn currency_index(&self, ccy: &str) -> Option<usize> {
        self.currencies().iter().position(|c| *c == ccy)
    }

    pub fn n_currencies(&self) -> usize {
        self.currencies().len()
    }

    pub fn rate_model(&self, ccy_idx: usize) -> RateModelRef<'_> {
        match self {
            SystemModel::HullWhiteSingle { params, .. } => RateModelRef::Hw(params),
            SystemModel::G2Single { params, .. } => RateModelRef::G2(params),
            SystemModel::Bshw(s) => {
                if ccy_idx == 0 {
                    RateModelRef::Hw(&s.base)
                } else {
                    RateModelRef::Hw(&s.legs[ccy_idx - 1].rates)
                }
            }
            SystemModel::G2Fx(s) => {
                if ccy_idx == 0 {
                    RateModelRef::G2(&s.base)
                } else {
                    RateModelRef::G2(&s.legs[ccy_idx - 1].rates)
                }
            }
        }
    }

    pub fn curve(&self, ccy_idx: usize) -> &DiscountCurve {
        match self.rate_model(ccy_idx) {
            RateModelRef::Hw(p) => &p.curve,
            RateModelRef::G2(p) => &p.curve,
        }
    }

    /// Factor layout; driver ordering for the correlation matrix is the same.
    pub fn factors(&self) -> Vec<FactorId> {
        match self {
            SystemModel::HullWhiteSingle { .. } => vec![FactorId::ShortRate(0)],
            SystemModel::G2Single { .. } => vec![FactorId::G2X(0), FactorId::G2Y(0)],
            SystemModel::Bshw(s) => {
                let dc = s.legs.len();
                let mut f = vec![FactorId::ShortRate(0)];
                f.extend((1..=dc).map(FactorId::FxSpot));
                f.extend((1..=dc).map(FactorId::ShortRate));
                f
            }
            SystemModel::G2Fx(s) => {
                let dc = s.legs.len();
                let mut f = vec![FactorId::G2X(0), FactorId::G2Y(0)];
                f.extend((1..=dc).map(FactorId::FxSpot));
                for c in 1..=dc {
                    f.push(FactorId::G2X(c));
                    f.push(FactorId::G2Y(c));
                }
                f
            }
        }
    }

    /// Positions of the currency's rate factors in the factor layout
    /// (one for Hull-White, two for G2).
    pub fn rate_factor_indices(&self, ccy_idx: usize) -> Vec<usize> {
        match self {
            SystemModel::HullWhiteSingle { .. } => vec![0],
            SystemModel::G2Single { .. } => vec![0, 1],
            SystemModel::Bshw(s) => {
                if ccy_idx == 0 {
                    vec![0]
                } else {
                    vec![s.legs.len() + ccy_idx]
                }
            }
            SystemModel::G2Fx(s) => {
                let dc = s.legs.len();
                if ccy_idx == 0 {
                    vec![0, 1]
                } else {
                    let base = 2 + dc + 2 * (ccy_idx - 1);
                    vec![base, base + 1]
                }
            }
        }
    }

    /// Position of a foreign currency's FX factor.
    pub fn fx_factor_index(&self, ccy_idx: usize) -> Option<usize> {
        if ccy_idx == 0 {
            return None;
        }
        match self {
            SystemModel::Bshw(_) => Some(ccy_idx),
            SystemModel::G2Fx(_) => Some(1 + ccy_idx),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let check_hw = |p: &HullWhiteParams, ccy: &str| -> Result<(), ModelError> {
            if !(p.lambda > 0.0) {
                return Err(ModelError::InvalidParams(format!("{ccy}: lambda must be positive")));
            }
            if p.eta < 0.0 {
                return Err(ModelError::InvalidParams(format!("{ccy}: eta must be non-negative")));
            }
            if !p.curve.is_decreasing_to(50.0) {
                return Err(ModelError::InvalidParams(format!(
                    "{ccy}: discount curve must stay positive and decreasing"
                )));
            }
            Ok(())
        };
        let check_g2 = |p: &G2Params, ccy: &str| {
            p.validate().map_err(|e| ModelError::InvalidParams(format!("{ccy}: {e}")))
        };
        match self {
            SystemModel::HullWhiteSingle { currency, params } => check_hw(params, currency),
            SystemModel::G2Single { currency, params } => check_g2(params, currency),
            SystemModel::Bshw(s) => {
                check_hw(&s.base, &s.base_currency)?;
                for l in &s.legs {
                    check_hw(&l.rates, &l.currency)?;
                    if !(l.fx_spot > 0.0) {
                        return Err(ModelError::InvalidParams(format!(
                            "{}: fx spot must be positive",
                            l.currency
                        )));
                    }
                    if l.fx_vol < 0.0 {
                        return Err(ModelError::InvalidParams(format!(
                            "{}: fx vol must be non-negative",
                            l.currency
                        )));
                    }
                }
                validate_correlation(&s.correlation, 2 * s.legs.len() + 1)?;
                Ok(())
            }
            SystemModel::G2Fx(s) => {
                check_g2(&s.base, &s.base_currency)?;
                for l in &s.legs {
                    check_g2(&l.rates, &l.currency)?;
                    if !(l.fx_spot > 0.0) || l.fx_vol < 0.0 {
                        return Err(ModelError::InvalidParams(format!(
                            "{}: fx spot/vol invalid",
                            l.currency
                        )));
                    }
                }
                let d = 3 * s.legs.len() + 2;
                validate_correlation(&s.correlation, d)?;
                // The bond reconstruction uses each leg's rho; the driver
                // matrix must carry the same within-currency entries.
                let pairs: Vec<(usize, usize, f64, String)> = {
                    let mut v = vec![(0usize, 1usize, s.base.rho, s.base_currency.clone())];
                    let dc = s.legs.len();
                    for (i, l) in s.legs.iter().enumerate() {
                        let base = 2 + dc + 2 * i;
                        v.push((base, base + 1, l.rates.rho, l.currency.clone()));
                    }
                    v
                };
                for (i, j, rho, ccy) in pairs {
                    let entry = s.correlation[i * d + j];
                    if (entry - rho).abs() > 1e-12 {
                        return Err(ModelError::BadCorrelation(format!(
                            "driver matrix entry ({i},{j}) = {entry} must equal {ccy}'s factor rho = {rho}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Simulates the system on the exposure dates. Deterministic in
    /// `(seed, dates, n_paths)` regardless of thread scheduling.
    pub fn simulate(&self, dates: &[f64], n_paths: usize, seed: u64) -> Result<ModelState, ModelError> {
        self.validate()?;
        if dates.is_empty() {
            return Err(ModelError::EmptyDates);
        }
        if !(dates[0] > 0.0) {
            return Err(ModelError::FirstDateNotPositive(dates[0]));
        }
        for (i, w) in dates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(ModelError::NonIncreasingDates(i + 1));
            }
        }
        if n_paths == 0 {
            return Err(ModelError::ZeroPaths);
        }
        match self {
            SystemModel::HullWhiteSingle { params, .. } => {
                Ok(simulate_bshw_layout(dates, n_paths, seed, params, &[], &[], self.factors()))
            }
            SystemModel::Bshw(s) => {
                let chol = cholesky_lower(&s.correlation, 2 * s.legs.len() + 1)
                    .map_err(|e| ModelError::BadCorrelation(e.to_string()))?;
                Ok(simulate_bshw_layout(dates, n_paths, seed, &s.base, &s.legs, &chol, self.factors()))
            }
            SystemModel::G2Single { params, .. } => {
                Ok(simulate_g2_single(dates, n_paths, seed, params, self.factors()))
            }
            SystemModel::G2Fx(s) => {
                let d = 3 * s.legs.len() + 2;
                let chol = cholesky_lower(&s.correlation, d)
                    .map_err(|e| ModelError::BadCorrelation(e.to_string()))?;
                Ok(simulate_g2_fx(dates, n_paths, seed, s, &chol, self.factors()))
            }
        }
    }
}

fn validate_correlation(c: &[f64], d: usize) -> Result<(), ModelError> {
    if c.len() != d * d {
        return Err(ModelError::BadCorrelation(format!(
            "expected a {d}x{d} matrix covering all {d} drivers, got {} entries",
            c.len()
        )));
    }
    for i in 0..d {
        if (c[i * d + i] - 1.0).abs() > 1e-12 {
            return Err(ModelError::BadCorrelation(format!("diagonal entry ({i},{i}) must be 1")));
        }
        for j in 0..i {
            if (c[i * d + j] - c[j * d + i]).abs() > 1e-12 {
                return Err(ModelError::BadCorrelation(format!("entries ({i},{j}) and ({j},{i}) differ")));
            }
            if c[i * d + j].abs() > 1.0 {
                return Err(ModelError::BadCorrelation(format!("entry ({i},{j}) outside [-1,1]")));
            }
        }
    }
    cholesky_lower(c, d).map_err(|e| ModelError::BadCorrelation(e.to_string()))?;
    Ok(())
}

/// Per-step precomputed Hull-White transition pieces.
struct HwStep {
    decay: f64,
    drift: f64,
    sd: f64,
}

fn hw_steps(params: &HullWhiteParams, dates: &[f64], quanto: f64) -> Vec<HwStep> {
    let mut out = Vec::with_capacity(dates.len());
    let mut prev = 0.0;
    for &t in dates {
        let decay = params.decay(prev, t);
        let drift = params.theta_drift_integral(prev, t) - quanto * (1.0 - decay);
        let sd = params.cond_var(prev, t).sqrt();
        out.push(HwStep { decay, drift, sd });
        prev = t;
    }
    out
}

/// Shared simulation loop for the single-currency Hull-White model
/// (no legs) and the full BSHW FX system.
fn simulate_bshw_layout(
    dates: &[f64],
    n_paths: usize,
    seed: u64,
    base: &HullWhiteParams,
    legs: &[FxLeg],
    chol: &[f64],
    factors: Vec<FactorId>,
) -> ModelState {
    let dc = legs.len();
    let nd = dates.len();
    let nf = factors.len();
    let n_drivers = nf;
    // Quanto adjustment theta_hat = theta - eta sigma_y rho(fx, rate).
    let d = n_drivers;
    let base_steps = hw_steps(base, dates, 0.0);
    let leg_steps: Vec<Vec<HwStep>> = legs
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let c = i + 1;
            let rho = if chol.is_empty() { 0.0 } else { corr_entry(chol, d, c, dc + c) };
            hw_steps(&l.rates, dates, l.rates.eta * l.fx_vol * rho)
        })
        .collect();
    let dts: Vec<f64> = dates
        .iter()
        .scan(0.0, |prev, &t| {
            let dt = t - *prev;
            *prev = t;
            Some(dt)
        })
        .collect();

    let mut values = vec![0.0; n_paths * nd * nf];
    let mut numeraire = vec![0.0; n_paths * nd];
    values
        .par_chunks_mut(nd * nf)
        .zip(numeraire.par_chunks_mut(nd))
        .enumerate()
        .for_each(|(p, (vals, nums))| {
            let mut z = vec![0.0; n_drivers];
            let mut eps = vec![0.0; n_drivers];
            let mut rates = vec![base.r0; 1 + dc];
            for (i, l) in legs.iter().enumerate() {
                rates[1 + i] = l.rates.r0;
            }
            let mut fx: Vec<f64> = legs.iter().map(|l| l.fx_spot).collect();
            let mut integral = 0.0;
            for k in 0..nd {
                for (j, zj) in z.iter_mut().enumerate() {
                    *zj = normal_draw(seed, p as u64, k as u64, j as u64);
                }
                correlate(chol, &z, &mut eps);
                let dt = dts[k];
                let s = &base_steps[k];
                let new_rb = rates[0] * s.decay + s.drift + s.sd * eps[0];
                for (c, l) in legs.iter().enumerate() {
                    let st = &leg_steps[c][k];
                    let new_rc = rates[1 + c] * st.decay + st.drift + st.sd * eps[dc + 1 + c];
                    // Exact lognormal FX step; the rate integral uses the
                    // trapezoid of endpoint rates over the step.
                    let drift_int = 0.5 * dt * ((rates[0] - rates[1 + c]) + (new_rb - new_rc));
                    fx[c] *= (drift_int - 0.5 * l.fx_vol * l.fx_vol * dt
                        + l.fx_vol * dt.sqrt() * eps[1 + c])
                        .exp();
                    rates[1 + c] = new_rc;
                }
                integral += 0.5 * dt * (rates[0] + new_rb);
                rates[0] = new_rb;
                nums[k] = integral.exp();
                let row = &mut vals[k * nf..(k + 1) * nf];
                row[0] = rates[0];
                for c in 0..dc {
                    row[1 + c] = fx[c];
                    row[1 + dc + c] = rates[1 + c];
                }
            }
        });
    ModelState::from_path_major(dates.to_vec(), factors, n_paths, seed, &values, &numeraire)
}

/// Reconstructs a correlation entry from the Cholesky factor row product.
fn corr_entry(chol: &[f64], d: usize, i: usize, j: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..d {
        s += chol[i * d + k] * chol[j * d + k];
    }
    s
}

/// Applies the lower-triangular factor: eps = L z. An empty factor means a
/// single independent driver.
#[inline]
fn correlate(chol: &[f64], z: &[f64], eps: &mut [f64]) {
    let d = z.len();
    if chol.is_empty() {
        eps.copy_from_slice(z);
        return;
    }
    for i in 0..d {
        let mut s = 0.0;
        for (j, zj) in z.iter().enumerate().take(i + 1) {
            s += chol[i * d + j] * zj;
        }
        eps[i] = s;
    }
}

/// Single-currency G2: the factor pair steps with its exact conditional
/// covariance; the short rate is x + y + psi.
fn simulate_g2_single(
    dates: &[f64],
    n_paths: usize,
    seed: u64,
    params: &G2Params,
    factors: Vec<FactorId>,
) -> ModelState {
    let nd = dates.len();
    let nf = 2usize;
    let mut prev = 0.0;
    let mut steps = Vec::with_capacity(nd);
    let mut dts = Vec::with_capacity(nd);
    let mut psis = Vec::with_capacity(nd);
    for &t in dates {
        steps.push(params.step_moments(prev, t));
        dts.push(t - prev);
        psis.push(params.psi(t));
        prev = t;
    }
    let psi0 = params.psi(0.0);

    let mut values = vec![0.0; n_paths * nd * nf];
    let mut numeraire = vec![0.0; n_paths * nd];
    values
        .par_chunks_mut(nd * nf)
        .zip(numeraire.par_chunks_mut(nd))
        .enumerate()
        .for_each(|(p, (vals, nums))| {
            let mut x = 0.0;
            let mut y = 0.0;
            let mut r_prev = psi0;
            let mut integral = 0.0;
            for k in 0..nd {
                let z1 = normal_draw(seed, p as u64, k as u64, 0);
                let z2 = normal_draw(seed, p as u64, k as u64, 1);
                let (nx, ny) = steps[k].step(x, y, z1, z2);
                x = nx;
                y = ny;
                let r = x + y + psis[k];
                integral += 0.5 * dts[k] * (r_prev + r);
                r_prev = r;
                nums[k] = integral.exp();
                vals[k * nf] = x;
                vals[k * nf + 1] = y;
            }
        });
    ModelState::from_path_major(dates.to_vec(), factors, n_paths, seed, &values, &numeraire)
}

/// Per-step precomputed G2 transition pieces for one currency.
struct G2FactorStep {
    decay1: f64,
    decay2: f64,
    sd1: f64,
    sd2: f64,
    drift1: f64,
    drift2: f64,
}

fn simulate_g2_fx(
    dates: &[f64],
    n_paths: usize,
    seed: u64,
    sys: &G2FxSystem,
    chol: &[f64],
    factors: Vec<FactorId>,
) -> ModelState {
    let dc = sys.legs.len();
    let nd = dates.len();
    let nf = factors.len();
    let d = nf;
    // Driver indices per the layout [x_b, y_b, fx.., (x_c, y_c)..].
    let fx_driver = |c: usize| 1 + c;
    let x_driver = |c: usize| 2 + dc + 2 * (c - 1);

    let all_params: Vec<&G2Params> = std::iter::once(&sys.base)
        .chain(sys.legs.iter().map(|l| &l.rates))
        .collect();
    let mut steps: Vec<Vec<G2FactorStep>> = Vec::with_capacity(1 + dc);
    for (ci, params) in all_params.iter().enumerate() {
        // Foreign factors pick up the measure-change drift
        // -rho(fx, factor) * eta * sigma_y per unit time.
        let (q1, q2) = if ci == 0 {
            (0.0, 0.0)
        } else {
            let leg = &sys.legs[ci - 1];
            let fxd = fx_driver(ci);
            let xd = x_driver(ci);
            (
                -corr_entry(chol, d, fxd, xd) * params.eta1 * leg.fx_vol,
                -corr_entry(chol, d, fxd, xd + 1) * params.eta2 * leg.fx_vol,
            )
        };
        let mut prev = 0.0;
        let mut v = Vec::with_capacity(nd);
        for &t in dates {
            let m = params.step_moments(prev, t);
            v.push(G2FactorStep {
                decay1: m.decay1,
                decay2: m.decay2,
                sd1: m.sd1,
                sd2: m.sd2,
                drift1: q1 / params.lambda1 * (1.0 - m.decay1),
                drift2: q2 / params.lambda2 * (1.0 - m.decay2),
            });
            prev = t;
        }
        steps.push(v);
    }
    let psis: Vec<Vec<f64>> = all_params
        .iter()
        .map(|p| dates.iter().map(|&t| p.psi(t)).collect())
        .collect();
    let psi0: Vec<f64> = all_params.iter().map(|p| p.psi(0.0)).collect();
    let dts: Vec<f64> = dates
        .iter()
        .scan(0.0, |prev, &t| {
            let dt = t - *prev;
            *prev = t;
            Some(dt)
        })
        .collect();

    let mut values = vec![0.0; n_paths * nd * nf];
    let mut numeraire = vec![0.0; n_paths * nd];
    values
        .par_chunks_mut(nd * nf)
        .zip(numeraire.par_chunks_mut(nd))
        .enumerate()
        .for_each(|(p, (vals, nums))| {
            let mut z = vec![0.0; d];
            let mut eps = vec![0.0; d];
            let mut xs = vec![0.0; 1 + dc];
            let mut ys = vec![0.0; 1 + dc];
            let mut rates_prev: Vec<f64> = psi0.clone();
            let mut fx: Vec<f64> = sys.legs.iter().map(|l| l.fx_spot).collect();
            let mut integral = 0.0;
            for k in 0..nd {
                for (j, zj) in z.iter_mut().enumerate() {
                    *zj = normal_draw(seed, p as u64, k as u64, j as u64);
                }
                correlate(chol, &z, &mut eps);
                let dt = dts[k];
                // Step every currency's factor pair.
                for ci in 0..=dc {
                    let st = &steps[ci][k];
                    let (e1, e2) = if ci == 0 {
                        (eps[0], eps[1])
                    } else {
                        (eps[x_driver(ci)], eps[x_driver(ci) + 1])
                    };
                    xs[ci] = xs[ci] * st.decay1 + st.drift1 + st.sd1 * e1;
                    ys[ci] = ys[ci] * st.decay2 + st.drift2 + st.sd2 * e2;
                }
                let rates_new: Vec<f64> =
                    (0..=dc).map(|ci| xs[ci] + ys[ci] + psis[ci][k]).collect();
                for (c, l) in sys.legs.iter().enumerate() {
                    let drift_int = 0.5
                        * dt
                        * ((rates_prev[0] - rates_prev[1 + c]) + (rates_new[0] - rates_new[1 + c]));
                    fx[c] *= (drift_int - 0.5 * l.fx_vol * l.fx_vol * dt
                        + l.fx_vol * dt.sqrt() * eps[fx_driver(c + 1)])
                        .exp();
                }
                integral += 0.5 * dt * (rates_prev[0] + rates_new[0]);
                rates_prev = rates_new;
                nums[k] = integral.exp();
                let row = &mut vals[k * nf..(k + 1) * nf];
                row[0] = xs[0];
                row[1] = ys[0];
                for c in 0..dc {
                    row[2 + c] = fx[c];
                    row[2 + dc + 2 * c] = xs[1 + c];
                    row[2 + dc + 2 * c + 1] = ys[1 + c];
                }
            }
        });
    ModelState::from_path_major(dates.to_vec(), factors, n_paths, seed, &values, &numeraire)
}
