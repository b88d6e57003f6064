//! Run configuration: a single TOML file with named sections for the model,
//! correlation matrix, portfolio (explicit trades or a generator), the
//! simulation grid, proxy settings and output naming.
//!
//! Validation reports schema violations with their field paths; the
//! builders translate a validated configuration into engine types.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sparse_exposure::exposure::{CollocationSource, ProxyConfig, ProxyMode};
use sparse_exposure::instruments::{
    generate_portfolio, GeneratorConfig, PortfolioSpec, SwapSpec, SwaptionSpec, Trade,
};
use sparse_exposure::models::{
    BshwSystem, DiscountCurve, FxLeg, G2FxLeg, G2FxSystem, G2Params, HullWhiteParams, SystemModel,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub simulation: SimulationSection,
    pub model: ModelSection,
    pub portfolio: PortfolioSection,
    pub proxy: ProxySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub paths: usize,
    pub seed: u64,
    pub dates: DatesSpec,
}

/// Exposure dates: either an equally spaced grid or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatesSpec {
    Grid { count: usize, spacing: f64 },
    Explicit(Vec<f64>),
}

impl DatesSpec {
    pub fn expand(&self) -> Vec<f64> {
        match self {
            DatesSpec::Grid { count, spacing } => {
                (1..=*count).map(|k| k as f64 * spacing).collect()
            }
            DatesSpec::Explicit(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Hw,
    Bshw,
    G2,
    G2Fx,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub base_currency: String,
    pub base: RateParamsSection,
    #[serde(default)]
    pub foreign: Vec<ForeignSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSection {
    /// `P(0,t) = exp(-rate t)`.
    Flat { rate: f64 },
    /// `P(0,t) = exp(-t (c0 + c1 t + c2 t^2))`.
    Poly {
        c0: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
    },
}

impl CurveSection {
    fn build(&self) -> DiscountCurve {
        match *self {
            CurveSection::Flat { rate } => DiscountCurve::FlatYield { rate },
            CurveSection::Poly { c0, c1, c2 } => DiscountCurve::PolyYield { c0, c1, c2 },
        }
    }
}

/// Rate-model parameters; one-factor fields for `hw`/`bshw`, two-factor
/// fields for `g2`/`g2-fx`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateParamsSection {
    pub curve: CurveSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
}

impl RateParamsSection {
    fn build_hw(&self, field: &str) -> Result<HullWhiteParams, ConfigError> {
        let lambda = self
            .lambda
            .ok_or_else(|| invalid(&format!("{field}.lambda"), "required for one-factor models"))?;
        let eta = self
            .eta
            .ok_or_else(|| invalid(&format!("{field}.eta"), "required for one-factor models"))?;
        let mut params = HullWhiteParams::fitted(lambda, eta, self.curve.build());
        if let Some(r0) = self.r0 {
            params.r0 = r0;
        }
        Ok(params)
    }

    fn build_g2(&self, field: &str) -> Result<G2Params, ConfigError> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| invalid(&format!("{field}.{name}"), "required for two-factor models"))
        };
        Ok(G2Params {
            lambda1: need(self.lambda1, "lambda1")?,
            eta1: need(self.eta1, "eta1")?,
            lambda2: need(self.lambda2, "lambda2")?,
            eta2: need(self.eta2, "eta2")?,
            rho: need(self.rho, "rho")?,
            curve: self.curve.build(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForeignSection {
    pub currency: String,
    pub fx_spot: f64,
    pub fx_vol: f64,
    pub rates: RateParamsSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSection {
    /// Row-major square matrix over the simulation drivers, ordered exactly
    /// like the state vector of the chosen model kind.
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortfolioSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trades: Vec<TradeSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub seed: u64,
    #[serde(default = "default_swaps")]
    pub swaps_per_currency: usize,
    #[serde(default)]
    pub swaptions_per_currency: usize,
    #[serde(default = "default_maturities")]
    pub maturity_years: [f64; 2],
    #[serde(default = "default_strike_offset")]
    pub strike_offset: [f64; 2],
    #[serde(default = "default_notionals")]
    pub notional_range: [f64; 2],
    #[serde(default = "default_interval")]
    pub payment_interval: f64,
    #[serde(default = "default_expiries")]
    pub swaption_expiry_years: [f64; 2],
    #[serde(default = "default_tenors")]
    pub swaption_tenor_years: [f64; 2],
}

fn default_swaps() -> usize {
    8
}
fn default_maturities() -> [f64; 2] {
    [1.0, 25.0]
}
fn default_strike_offset() -> [f64; 2] {
    [-0.01, 0.01]
}
fn default_notionals() -> [f64; 2] {
    [1e4, 1e6]
}
fn default_interval() -> f64 {
    0.5
}
fn default_expiries() -> [f64; 2] {
    [1.0, 8.0]
}
fn default_tenors() -> [f64; 2] {
    [1.0, 10.0]
}

impl GeneratorSection {
    fn build(&self) -> GeneratorConfig {
        GeneratorConfig {
            seed: self.seed,
            swaps_per_currency: self.swaps_per_currency,
            swaptions_per_currency: self.swaptions_per_currency,
            maturity_years: (self.maturity_years[0], self.maturity_years[1]),
            strike_offset: (self.strike_offset[0], self.strike_offset[1]),
            notional_range: (self.notional_range[0], self.notional_range[1]),
            payment_interval: self.payment_interval,
            swaption_expiry_years: (self.swaption_expiry_years[0], self.swaption_expiry_years[1]),
            swaption_tenor_years: (self.swaption_tenor_years[0], self.swaption_tenor_years[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TradeSection {
    Swap {
        currency: String,
        notional: f64,
        fixed_rate: f64,
        payer: bool,
        start: f64,
        periods: usize,
        interval: f64,
    },
    Swaption {
        currency: String,
        notional: f64,
        fixed_rate: f64,
        payer: bool,
        expiry: f64,
        periods: usize,
        interval: f64,
    },
}

impl TradeSection {
    fn build(&self) -> Trade {
        match self {
            TradeSection::Swap { currency, notional, fixed_rate, payer, start, periods, interval } => {
                Trade::Swap(SwapSpec::standard(
                    currency, *notional, *fixed_rate, *payer, *start, *periods, *interval,
                ))
            }
            TradeSection::Swaption {
                currency,
                notional,
                fixed_rate,
                payer,
                expiry,
                periods,
                interval,
            } => Trade::Swaption(SwaptionSpec {
                expiry: *expiry,
                underlying: SwapSpec::standard(
                    currency, *notional, *fixed_rate, *payer, *expiry, *periods, *interval,
                ),
                payer: *payer,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProxyModeKind {
    FullGrid,
    PerCurrency,
    BruteForce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Normal,
    Quantile,
    Empirical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxySection {
    pub mode: ProxyModeKind,
    #[serde(default = "default_level")]
    pub level: usize,
    #[serde(default = "default_n1")]
    pub n1: usize,
    #[serde(default = "default_alpha")]
    pub box_alpha: f64,
    #[serde(default = "default_source")]
    pub source: SourceKind,
    #[serde(default = "default_pfe_levels")]
    pub pfe_levels: Vec<f64>,
    #[serde(default)]
    pub discount_pfe: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantile_levels: Option<Vec<f64>>,
}

fn default_level() -> usize {
    2
}
fn default_n1() -> usize {
    4
}
fn default_alpha() -> f64 {
    0.95
}
fn default_source() -> SourceKind {
    SourceKind::Normal
}
fn default_pfe_levels() -> Vec<f64> {
    vec![0.95, 0.99]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_prefix")]
    pub prefix: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { prefix: default_prefix() }
    }
}

fn default_prefix() -> String {
    "run".into()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let config: RunConfig = toml::from_str(&text)
            .map_err(|e| ConfigError::Parse { path: path.display().to_string(), message: e.to_string() })?;
        config.validate()?;
        Ok(config)
    }

    /// Canonical serialized form; parsing it back is the identity.
    pub fn canonical_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configuration serializes")
    }

    // `!(x > 0)` rejects NaN along with the out-of-range case.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.simulation.paths == 0 {
            return Err(invalid("simulation.paths", "must be positive"));
        }
        let dates = self.simulation.dates.expand();
        if dates.is_empty() {
            return Err(invalid("simulation.dates", "must contain at least one exposure date"));
        }
        if !(dates[0] > 0.0) || dates.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("simulation.dates", "must be strictly increasing from a positive first date"));
        }
        match self.model.kind {
            ModelKind::Hw | ModelKind::G2 => {
                if !self.model.foreign.is_empty() {
                    return Err(invalid(
                        "model.foreign",
                        "single-currency kinds take no foreign legs",
                    ));
                }
            }
            ModelKind::Bshw | ModelKind::G2Fx => {
                if self.model.foreign.is_empty() {
                    return Err(invalid("model.foreign", "multi-currency kinds need at least one leg"));
                }
                let dc = self.model.foreign.len();
                let drivers = match self.model.kind {
                    ModelKind::Bshw => 2 * dc + 1,
                    _ => 3 * dc + 2,
                };
                let corr = self
                    .model
                    .correlation
                    .as_ref()
                    .ok_or_else(|| invalid("model.correlation", "required for multi-currency kinds"))?;
                if corr.matrix.len() != drivers
                    || corr.matrix.iter().any(|row| row.len() != drivers)
                {
                    return Err(invalid(
                        "model.correlation.matrix",
                        format!("must be {drivers}x{drivers} to cover all simulation drivers"),
                    ));
                }
            }
        }
        if self.portfolio.generator.is_none() && self.portfolio.trades.is_empty() {
            return Err(invalid("portfolio", "needs either a generator or explicit trades"));
        }
        if self.portfolio.generator.is_some() && !self.portfolio.trades.is_empty() {
            return Err(invalid("portfolio", "generator and explicit trades are mutually exclusive"));
        }
        if !(self.proxy.box_alpha > 0.5 && self.proxy.box_alpha <= 1.0) {
            return Err(invalid("proxy.box_alpha", "must lie in (0.5, 1]"));
        }
        if self.proxy.pfe_levels.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
            return Err(invalid("proxy.pfe_levels", "levels must lie strictly inside (0, 1)"));
        }
        Ok(())
    }

    fn flat_correlation(&self) -> Vec<f64> {
        self.model
            .correlation
            .as_ref()
            .map(|c| c.matrix.iter().flatten().copied().collect())
            .unwrap_or_default()
    }

    pub fn build_system(&self) -> Result<SystemModel, ConfigError> {
        let m = &self.model;
        let system = match m.kind {
            ModelKind::Hw => SystemModel::HullWhiteSingle {
                currency: m.base_currency.clone(),
                params: m.base.build_hw("model.base")?,
            },
            ModelKind::G2 => SystemModel::G2Single {
                currency: m.base_currency.clone(),
                params: m.base.build_g2("model.base")?,
            },
            ModelKind::Bshw => {
                let mut legs = Vec::new();
                for (i, f) in m.foreign.iter().enumerate() {
                    legs.push(FxLeg {
                        currency: f.currency.clone(),
                        rates: f.rates.build_hw(&format!("model.foreign[{i}].rates"))?,
                        fx_spot: f.fx_spot,
                        fx_vol: f.fx_vol,
                    });
                }
                SystemModel::Bshw(BshwSystem {
                    base_currency: m.base_currency.clone(),
                    base: m.base.build_hw("model.base")?,
                    legs,
                    correlation: self.flat_correlation(),
                })
            }
            ModelKind::G2Fx => {
                let mut legs = Vec::new();
                for (i, f) in m.foreign.iter().enumerate() {
                    legs.push(G2FxLeg {
                        currency: f.currency.clone(),
                        rates: f.rates.build_g2(&format!("model.foreign[{i}].rates"))?,
                        fx_spot: f.fx_spot,
                        fx_vol: f.fx_vol,
                    });
                }
                SystemModel::G2Fx(G2FxSystem {
                    base_currency: m.base_currency.clone(),
                    base: m.base.build_g2("model.base")?,
                    legs,
                    correlation: self.flat_correlation(),
                })
            }
        };
        system
            .validate()
            .map_err(|e| invalid("model", e.to_string()))?;
        Ok(system)
    }

    pub fn build_portfolio(&self, system: &SystemModel) -> PortfolioSpec {
        match &self.portfolio.generator {
            Some(g) => generate_portfolio(&g.build(), system),
            None => PortfolioSpec {
                base_currency: self.model.base_currency.clone(),
                trades: self.portfolio.trades.iter().map(TradeSection::build).collect(),
            },
        }
    }

    pub fn build_proxy(&self) -> ProxyConfig {
        let mode = match self.proxy.mode {
            ProxyModeKind::FullGrid => ProxyMode::FullGrid { level: self.proxy.level },
            ProxyModeKind::PerCurrency => {
                ProxyMode::PerCurrency { n1: self.proxy.n1, level: self.proxy.level }
            }
            ProxyModeKind::BruteForce => ProxyMode::BruteForce,
        };
        ProxyConfig {
            mode,
            box_alpha: self.proxy.box_alpha,
            source: match self.proxy.source {
                SourceKind::Normal => CollocationSource::NormalQuadrature,
                SourceKind::Quantile => CollocationSource::Quantile,
                SourceKind::Empirical => CollocationSource::EmpiricalInverted,
            },
            quantile_levels: self.proxy.quantile_levels.clone(),
            discount_pfe: self.proxy.discount_pfe,
        }
    }
}
