//! Reproducible randomized portfolio generation.
//!
//! Draws a book of swaps (and optionally swaptions, under two-factor
//! systems) per currency from declared distributions: maturities on the
//! payment grid, strikes around the par rate, log-uniform notionals and a
//! payer/receiver flip. Everything derives from the generator seed, so a
//! configuration reproduces its book exactly.

use super::swap::par_rate;
use super::{PortfolioSpec, SwapSpec, SwaptionSpec, Trade};
use crate::math::rng::StreamRng;
use crate::models::SystemModel;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub swaps_per_currency: usize,
    pub swaptions_per_currency: usize,
    /// Swap maturity range in years, snapped to the payment grid.
    pub maturity_years: (f64, f64),
    /// Uniform strike offset around the par rate.
    pub strike_offset: (f64, f64),
    /// Log-uniform notional range.
    pub notional_range: (f64, f64),
    pub payment_interval: f64,
    /// Swaption expiry range in years (snapped to the payment grid).
    pub swaption_expiry_years: (f64, f64),
    /// Underlying tenor range in years for swaptions.
    pub swaption_tenor_years: (f64, f64),
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            swaps_per_currency: 8,
            swaptions_per_currency: 0,
            maturity_years: (1.0, 25.0),
            strike_offset: (-0.01, 0.01),
            notional_range: (1e4, 1e6),
            payment_interval: 0.5,
            swaption_expiry_years: (1.0, 8.0),
            swaption_tenor_years: (1.0, 10.0),
        }
    }
}

fn snap_periods(rng: &mut StreamRng, range: (f64, f64), interval: f64) -> usize {
    let lo = (range.0 / interval).round().max(1.0) as u64;
    let hi = (range.1 / interval).round().max(lo as f64) as u64;
    (lo + rng.below(hi - lo + 1)) as usize
}

/// Generates the per-currency book for the system's currency set.
pub fn generate_portfolio(config: &GeneratorConfig, system: &SystemModel) -> PortfolioSpec {
    let mut rng = StreamRng::new(config.seed);
    let mut trades = Vec::new();
    let interval = config.payment_interval;
    for (idx, ccy) in system.currencies().iter().enumerate() {
        let curve = system.curve(idx);
        for _ in 0..config.swaps_per_currency {
            let periods = snap_periods(&mut rng, config.maturity_years, interval);
            let times: Vec<f64> = (0..=periods).map(|k| k as f64 * interval).collect();
            let strike = par_rate(curve, &times)
                + rng.uniform_in(config.strike_offset.0, config.strike_offset.1);
            let notional = (rng.uniform_in(
                config.notional_range.0.ln(),
                config.notional_range.1.ln(),
            ))
            .exp();
            trades.push(Trade::Swap(SwapSpec {
                currency: (*ccy).to_string(),
                notional,
                fixed_rate: strike,
                payer: rng.flip(),
                times,
            }));
        }
        for _ in 0..config.swaptions_per_currency {
            let expiry_periods = snap_periods(&mut rng, config.swaption_expiry_years, interval);
            let tenor_periods = snap_periods(&mut rng, config.swaption_tenor_years, interval);
            let expiry = expiry_periods as f64 * interval;
            let times: Vec<f64> =
                (0..=tenor_periods).map(|k| expiry + k as f64 * interval).collect();
            // Positive strikes only: shift off par rather than clamping so
            // the draw stays within the declared offset band.
            let par = par_rate(curve, &times);
            let mut strike =
                par + rng.uniform_in(config.strike_offset.0, config.strike_offset.1);
            if strike <= 1e-4 {
                strike = par.max(2e-4);
            }
            let notional = (rng.uniform_in(
                config.notional_range.0.ln(),
                config.notional_range.1.ln(),
            ))
            .exp();
            let payer = rng.flip();
            trades.push(Trade::Swaption(SwaptionSpec {
                expiry,
                underlying: SwapSpec {
                    currency: (*ccy).to_string(),
                    notional,
                    fixed_rate: strike,
                    payer,
                    times,
                },
                payer,
            }));
        }
    }
    PortfolioSpec { base_currency: system.base_currency().to_string(), trades }
}
