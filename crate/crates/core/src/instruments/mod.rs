//! Trade specifications, valuation and portfolio aggregation.

pub mod evaluator;
pub mod generator;
pub mod swap;
pub mod swaption;

use thiserror::Error;

use crate::models::SystemModel;

pub use evaluator::{DateCache, PortfolioEvaluator};
pub use generator::{generate_portfolio, GeneratorConfig};
pub use swap::{par_rate, swap_value_g2, swap_value_g2_expanded, swap_value_hw, swap_value_hw_expanded};
pub use swaption::{swaption_value_g2, SwaptionPricer};

#[derive(Debug, Error)]
pub enum InstrumentError {
    #[error("invalid trade specification: {0}")]
    InvalidSpec(String),
    #[error("trade currency {0} is not part of the model system")]
    UnknownCurrency(String),
    #[error("swaptions require a two-factor rate model for currency {0}")]
    SwaptionNeedsG2(String),
    #[error("swaption exercise-boundary root search failed: {0}")]
    RootFind(String),
}

/// A fixed-for-floating interest rate swap. `times[0]` is the accrual
/// start; payments occur at `times[1..]` with accruals
/// `tau_k = times[k] - times[k-1]`. A payer swap pays the fixed leg.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapSpec {
    pub currency: String,
    pub notional: f64,
    pub fixed_rate: f64,
    pub payer: bool,
    pub times: Vec<f64>,
}

impl SwapSpec {
    /// A spot- or forward-starting swap with a regular payment interval.
    pub fn standard(
        currency: &str,
        notional: f64,
        fixed_rate: f64,
        payer: bool,
        start: f64,
        periods: usize,
        interval: f64,
    ) -> Self {
        let times = (0..=periods).map(|k| start + k as f64 * interval).collect();
        Self { currency: currency.into(), notional, fixed_rate, payer, times }
    }

    pub fn maturity(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn validate(&self) -> Result<(), InstrumentError> {
        if self.times.len() < 2 {
            return Err(InstrumentError::InvalidSpec(
                "swap needs an accrual start and at least one payment".into(),
            ));
        }
        for w in self.times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(InstrumentError::InvalidSpec(
                    "swap payment dates must be strictly increasing".into(),
                ));
            }
        }
        if !self.notional.is_finite() || self.notional == 0.0 {
            return Err(InstrumentError::InvalidSpec("swap notional must be non-zero".into()));
        }
        if !self.fixed_rate.is_finite() {
            return Err(InstrumentError::InvalidSpec("swap fixed rate must be finite".into()));
        }
        Ok(())
    }
}

/// A European swaption on a swap starting at the expiry date.
#[derive(Clone, Debug, PartialEq)]
pub struct SwaptionSpec {
    pub expiry: f64,
    pub underlying: SwapSpec,
    /// Right to enter the underlying as the fixed-rate payer.
    pub payer: bool,
}

impl SwaptionSpec {
    pub fn validate(&self) -> Result<(), InstrumentError> {
        self.underlying.validate()?;
        if (self.underlying.times[0] - self.expiry).abs() > 1e-9 {
            return Err(InstrumentError::InvalidSpec(
                "swaption underlying must start at the expiry date".into(),
            ));
        }
        if !(self.underlying.fixed_rate > 0.0) {
            return Err(InstrumentError::InvalidSpec(
                "swaption strike must be positive".into(),
            ));
        }
        if !(self.underlying.notional > 0.0) {
            return Err(InstrumentError::InvalidSpec(
                "swaption notional must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Trade {
    Swap(SwapSpec),
    Swaption(SwaptionSpec),
}

impl Trade {
    pub fn currency(&self) -> &str {
        match self {
            Trade::Swap(s) => &s.currency,
            Trade::Swaption(s) => &s.underlying.currency,
        }
    }

    pub fn validate(&self) -> Result<(), InstrumentError> {
        match self {
            Trade::Swap(s) => s.validate(),
            Trade::Swaption(s) => s.validate(),
        }
    }
}

/// Trades grouped under one netting set, keyed to the model's currencies.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PortfolioSpec {
    pub base_currency: String,
    pub trades: Vec<Trade>,
}

/// One per-currency slice of the portfolio together with the risk-factor
/// dimensions that drive it (1 under Hull-White, 2 under G2).
#[derive(Clone, Debug)]
pub struct SubPortfolio {
    pub currency_index: usize,
    pub currency: String,
    pub trade_indices: Vec<usize>,
    pub factor_dim: usize,
}

/// Splits the portfolio into disjoint per-currency sub-portfolios covering
/// every trade, ordered base currency first. Swaps and single-currency
/// swaptions depend only on their own currency's rate factors, so the
/// decomposition is always available for the supported trade types.
pub fn decompose_by_currency(
    portfolio: &PortfolioSpec,
    system: &SystemModel,
) -> Result<Vec<SubPortfolio>, InstrumentError> {
    let currencies = system.currencies();
    let mut subs: Vec<SubPortfolio> = currencies
        .iter()
        .enumerate()
        .map(|(idx, c)| SubPortfolio {
            currency_index: idx,
            currency: (*c).to_string(),
            trade_indices: Vec::new(),
            factor_dim: system.rate_factor_indices(idx).len(),
        })
        .collect();
    for (i, trade) in portfolio.trades.iter().enumerate() {
        let ccy = trade.currency();
        let idx = system
            .currency_index(ccy)
            .ok_or_else(|| InstrumentError::UnknownCurrency(ccy.to_string()))?;
        subs[idx].trade_indices.push(i);
    }
    Ok(subs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DiscountCurve, HullWhiteParams};

    #[test]
    fn swap_spec_construction_and_validation() {
        let s = SwapSpec::standard("EUR", 1e6, 0.01, true, 0.0, 20, 0.5);
        assert_eq!(s.times.len(), 21);
        assert_eq!(s.maturity(), 10.0);
        assert!(s.validate().is_ok());
        let bad = SwapSpec { times: vec![1.0, 1.0], ..s.clone() };
        assert!(bad.validate().is_err());
        let bad = SwapSpec { notional: 0.0, ..s };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn decompose_groups_by_currency_and_covers_all_trades() {
        let base = HullWhiteParams::fitted(0.01, 0.01, DiscountCurve::flat(0.01));
        let leg = |c: &str| crate::models::FxLeg {
            currency: c.into(),
            rates: HullWhiteParams::fitted(0.01, 0.01, DiscountCurve::flat(0.02)),
            fx_spot: 1.0,
            fx_vol: 0.1,
        };
        let system = SystemModel::Bshw(crate::models::BshwSystem {
            base_currency: "EUR".into(),
            base,
            legs: vec![leg("USD"), leg("GBP")],
            correlation: {
                let d = 5;
                let mut m = vec![0.0; d * d];
                for i in 0..d {
                    m[i * d + i] = 1.0;
                }
                m
            },
        });
        let portfolio = PortfolioSpec {
            base_currency: "EUR".into(),
            trades: vec![
                Trade::Swap(SwapSpec::standard("USD", 1e5, 0.02, true, 0.0, 10, 0.5)),
                Trade::Swap(SwapSpec::standard("EUR", 1e5, 0.01, false, 0.0, 6, 0.5)),
                Trade::Swap(SwapSpec::standard("USD", 2e5, 0.021, false, 0.0, 8, 0.5)),
            ],
        };
        let subs = decompose_by_currency(&portfolio, &system).unwrap();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs[0].currency, "EUR");
        assert_eq!(subs[0].trade_indices, vec![1]);
        assert_eq!(subs[1].trade_indices, vec![0, 2]);
        assert!(subs[2].trade_indices.is_empty());
        assert!(subs.iter().all(|s| s.factor_dim == 1));
        let total: usize = subs.iter().map(|s| s.trade_indices.len()).sum();
        assert_eq!(total, portfolio.trades.len());

        let foreign = PortfolioSpec {
            base_currency: "EUR".into(),
            trades: vec![Trade::Swap(SwapSpec::standard("JPY", 1e5, 0.01, true, 0.0, 4, 0.5))],
        };
        assert!(matches!(
            decompose_by_currency(&foreign, &system),
            Err(InstrumentError::UnknownCurrency(_))
        ));
    }
}
