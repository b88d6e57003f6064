//! Portfolio valuation bound to a model system.
//!
//! Swaps in one currency are linear combinations of zero-coupon bonds, so a
//! date cache merges every outstanding cashflow of a currency's book into a
//! single weighted bond table: a sub-portfolio valuation then costs one
//! exponential per distinct maturity, independent of the trade count.
//! Swaptions keep a per-date pricing context each.
//!
//! `full_value` composes the per-currency sub-values in a fixed order
//! (base first, then each foreign sub-value scaled by its FX factor), so a
//! decomposed valuation summed the same way reproduces the full valuation
//! bit for bit.

use std::collections::BTreeMap;

use super::swaption::SwaptionPricer;
use super::{decompose_by_currency, InstrumentError, PortfolioSpec, SubPortfolio, Trade};
use crate::models::{RateModelRef, SystemModel};

/// Merged bond-table entry: `weight * exp(a + b . factors)`.
#[derive(Clone, Debug)]
enum BondTable {
    /// `value(r) = sum w exp(a + b r)`.
    Hw { terms: Vec<(f64, f64, f64)> },
    /// `value(x, y) = sum w exp(a - b1 x - b2 y)`.
    G2 { terms: Vec<(f64, f64, f64, f64)> },
}

/// Everything needed to value one currency's book at one exposure date.
pub struct CcyDateCache<'a> {
    bonds: BondTable,
    swaptions: Vec<(f64, SwaptionPricer<'a>)>,
}

/// Per-date valuation cache across all currencies.
pub struct DateCache<'a> {
    pub t: f64,
    per_ccy: Vec<CcyDateCache<'a>>,
}

/// A portfolio bound to its model system with precomputed currency books.
pub struct PortfolioEvaluator<'a> {
    system: &'a SystemModel,
    portfolio: &'a PortfolioSpec,
    subs: Vec<SubPortfolio>,
}

impl<'a> PortfolioEvaluator<'a> {
    pub fn new(system: &'a SystemModel, portfolio: &'a PortfolioSpec) -> Result<Self, InstrumentError> {
        for trade in &portfolio.trades {
            trade.validate()?;
            let ccy = trade.currency();
            let idx = system
                .currency_index(ccy)
                .ok_or_else(|| InstrumentError::UnknownCurrency(ccy.to_string()))?;
            if matches!(trade, Trade::Swaption(_)) && !matches!(system.rate_model(idx), RateModelRef::G2(_)) {
                return Err(InstrumentError::SwaptionNeedsG2(ccy.to_string()));
            }
        }
        let subs = decompose_by_currency(portfolio, system)?;
        Ok(Self { system, portfolio, subs })
    }

    pub fn system(&self) -> &SystemModel {
        self.system
    }

    pub fn portfolio(&self) -> &PortfolioSpec {
        self.portfolio
    }

    /// Per-currency sub-portfolios (base first), a disjoint cover.
    pub fn subs(&self) -> &[SubPortfolio] {
        &self.subs
    }

    /// Builds the valuation cache for one exposure date.
    pub fn date_cache(&self, t: f64) -> Result<DateCache<'a>, InstrumentError> {
        let mut per_ccy = Vec::with_capacity(self.subs.len());
        for sub in &self.subs {
            // Maturity -> accumulated weight, keyed by the exact bits so
            // identical maturities merge and iteration stays ordered.
            let mut weights: BTreeMap<u64, f64> = BTreeMap::new();
            let mut add = |maturity: f64, w: f64| {
                *weights.entry(maturity.to_bits()).or_insert(0.0) += w;
            };
            let mut swaptions = Vec::new();
            for &ti in &sub.trade_indices {
                match &self.portfolio.trades[ti] {
                    Trade::Swap(s) => {
                        let Some(first) = (1..s.times.len()).find(|&k| s.times[k] >= t) else {
                            continue;
                        };
                        let sign = if s.payer { 1.0 } else { -1.0 };
                        add(s.times[first - 1], sign * s.notional);
                        add(*s.times.last().unwrap(), -sign * s.notional);
                        for k in first..s.times.len() {
                            let tau = s.times[k] - s.times[k - 1];
                            add(s.times[k], -sign * s.notional * s.fixed_rate * tau);
                        }
                    }
                    Trade::Swaption(s) => {
                        let RateModelRef::G2(params) = self.system.rate_model(sub.currency_index)
                        else {
                            unreachable!("validated at construction");
                        };
                        swaptions.push((1.0, SwaptionPricer::new(s, params, t)?));
                    }
                }
            }
            let bonds = match self.system.rate_model(sub.currency_index) {
                RateModelRef::Hw(p) => BondTable::Hw {
                    terms: weights
                        .iter()
                        .map(|(&bits, &w)| {
                            let m = f64::from_bits(bits);
                            let (a, b) = p.bond_coeffs(t, m);
                            (w, a, b)
                        })
                        .collect(),
                },
                RateModelRef::G2(p) => BondTable::G2 {
                    terms: weights
                        .iter()
                        .map(|(&bits, &w)| {
                            let m = f64::from_bits(bits);
                            let (a, b1, b2) = p.bond_coeffs(t, m);
                            (w, a, b1, b2)
                        })
                        .collect(),
                },
            };
            per_ccy.push(CcyDateCache { bonds, swaptions });
        }
        Ok(DateCache { t, per_ccy })
    }

    /// Value of one currency's sub-portfolio in its own currency units.
    /// `factors` carries the currency's rate state: `[r]` under Hull-White,
    /// `[x, y]` under G2.
    pub fn sub_value(&self, cache: &DateCache, sub_idx: usize, factors: &[f64]) -> Result<f64, InstrumentError> {
        let ccy = &cache.per_ccy[sub_idx];
        let mut value = 0.0;
        match &ccy.bonds {
            BondTable::Hw { terms } => {
                let r = factors[0];
                for &(w, a, b) in terms {
                    value += w * (a + b * r).exp();
                }
            }
            BondTable::G2 { terms } => {
                let (x, y) = (factors[0], factors[1]);
                for &(w, a, b1, b2) in terms {
                    value += w * (a - b1 * x - b2 * y).exp();
                }
            }
        }
        for (w, pricer) in &ccy.swaptions {
            value += w * pricer.value(factors[0], factors[1])?;
        }
        Ok(value)
    }

    /// Full portfolio value in base currency at one state point; `factor_at`
    /// returns the value of the factor at a given position in the system's
    /// factor layout.
    pub fn full_value<F: Fn(usize) -> f64>(
        &self,
        cache: &DateCache,
        factor_at: F,
    ) -> Result<f64, InstrumentError> {
        let mut buf = [0.0_f64; 2];
        let mut total = self.sub_value(cache, 0, self.gather(0, &factor_at, &mut buf))?;
        for sub_idx in 1..self.subs.len() {
            let fx_idx = self
                .system
                .fx_factor_index(self.subs[sub_idx].currency_index)
                .expect("foreign currency has an FX factor");
            let fx = factor_at(fx_idx);
            let local = self.sub_value(cache, sub_idx, self.gather(sub_idx, &factor_at, &mut buf))?;
            total += fx * local;
        }
        Ok(total)
    }

    fn gather<'b, F: Fn(usize) -> f64>(
        &self,
        sub_idx: usize,
        factor_at: &F,
        buf: &'b mut [f64; 2],
    ) -> &'b [f64] {
        let indices = self.system.rate_factor_indices(self.subs[sub_idx].currency_index);
        for (slot, &fi) in buf.iter_mut().zip(indices.iter()) {
            *slot = factor_at(fi);
        }
        &buf[..indices.len()]
    }

    /// Rate-factor positions for a sub-portfolio in the full factor layout.
    pub fn sub_factor_indices(&self, sub_idx: usize) -> Vec<usize> {
        self.system.rate_factor_indices(self.subs[sub_idx].currency_index)
    }
}
