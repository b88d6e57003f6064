//! Per-date proxy construction and exposure evaluation.
//!
//! For every exposure date the pipeline (i) derives a domain box per risk
//! factor from the simulated paths, (ii) values the (sub-)portfolio only at
//! the collocation states of that date's proxy, (iii) evaluates the fitted
//! proxy across all paths and (iv) reduces discounted positive exposure to
//! EE and per-level PFE. Brute-force mode skips (i)-(iii) and revalues the
//! portfolio on every path, serving as the verification reference.
//!
//! All path-level loops fill indexed buffers in parallel and reduce through
//! fixed-shape pairwise sums, so results are identical under any thread
//! count.

use std::sync::Arc;

use rayon::prelude::*;

use super::{CollocationSource, ExposureError, ExposureProfile, ProxyConfig, ProxyMode};
use crate::collocation::{
    empirical_inverse_points, lagrange_proxy_1d, normal_collocation_points,
    quantile_collocation_at, LagrangeProxy1D,
};
use crate::instruments::{DateCache, PortfolioEvaluator};
use crate::math::stats::{mean, pairwise_sum, quantile_sorted, sorted_copy, variance};
use crate::models::ModelState;
use crate::sparse_grid::{DomainBox, GridInterpolator, Interpolant, SparseGrid};

/// Per-factor interpolation domain from simulated paths: empirical
/// quantiles at levels `1 - alpha` and `alpha` (`alpha = 1` means the path
/// min/max). A collapsed range is widened by a machine-scale epsilon; the
/// number of widened dimensions is reported back.
pub fn domain_box_from_paths(
    state: &ModelState,
    date_idx: usize,
    factor_indices: &[usize],
    alpha: f64,
) -> Result<(DomainBox, u64), ExposureError> {
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(ExposureError::InvalidConfig(format!(
            "box alpha must lie in (0.5, 1], got {alpha}"
        )));
    }
    let mut lo = Vec::with_capacity(factor_indices.len());
    let mut hi = Vec::with_capacity(factor_indices.len());
    let mut degenerate = 0u64;
    for &fi in factor_indices {
        let sorted = sorted_copy(state.factor_values(date_idx, fi));
        let (mut l, mut h) = if alpha == 1.0 {
            (sorted[0], *sorted.last().unwrap())
        } else {
            (quantile_sorted(&sorted, 1.0 - alpha), quantile_sorted(&sorted, alpha))
        };
        if !(l < h) {
            let eps = 1e-12 * (1.0 + l.abs());
            l -= eps;
            h += eps;
            degenerate += 1;
        }
        lo.push(l);
        hi.push(h);
    }
    Ok((DomainBox::new(lo, hi)?, degenerate))
}

/// One (sub-)portfolio proxy for one exposure date.
#[derive(Clone, Debug)]
pub enum SubProxy {
    /// Degenerate factor: the sub-portfolio value at the collapsed state.
    Constant(f64),
    /// One rate factor: Lagrange interpolant through collocation points.
    OneDim(LagrangeProxy1D),
    /// Two rate factors: sparse-grid interpolant over the domain box.
    TwoDim(Interpolant),
}

/// A per-currency proxy piece with its factor wiring.
#[derive(Clone, Debug)]
pub struct SubProxyPiece {
    pub currency: String,
    pub proxy: SubProxy,
    /// Positions of the sub-portfolio's rate factors in the state layout.
    pub factor_indices: Vec<usize>,
    /// FX factor position for foreign currencies.
    pub fx_index: Option<usize>,
    /// Portfolio evaluations spent fitting this piece.
    pub evals: u64,
}

/// The proxy of one exposure date.
#[derive(Clone, Debug)]
pub enum DateProxy {
    /// One interpolant over all risk factors.
    FullGrid(Interpolant),
    /// Per-currency pieces combined as base + sum of FX-scaled foreign
    /// values, in currency order.
    PerCurrency(Vec<SubProxyPiece>),
}

/// A fitted date proxy plus its evaluation accounting.
#[derive(Clone, Debug)]
pub struct DateProxyBundle {
    pub proxy: DateProxy,
    /// Evaluations per (sub-)portfolio (the maximum across pieces).
    pub evals_per_sub: u64,
    /// Factor dimensions whose path range collapsed and was widened.
    pub degenerate_dims: u64,
}

impl DateProxyBundle {
    /// Evaluates the proxy across all paths of one date, returning values
    /// and the count of paths outside the fitted domain.
    pub fn eval_paths(&self, state: &ModelState, date_idx: usize) -> (Vec<f64>, usize) {
        let n_paths = state.n_paths();
        match &self.proxy {
            DateProxy::FullGrid(interp) => {
                let n_factors = state.factors().len();
                let slices: Vec<&[f64]> =
                    (0..n_factors).map(|f| state.factor_values(date_idx, f)).collect();
                let stride = interp.grid().max_degree() + 1;
                let mut values = vec![0.0; n_paths];
                let extrapolated = values
                    .par_chunks_mut(1024)
                    .enumerate()
                    .map(|(chunk, out)| {
                        let base = chunk * 1024;
                        let mut point = vec![0.0; n_factors];
                        let mut scratch = vec![0.0; n_factors * stride];
                        let mut outside = 0usize;
                        for (i, slot) in out.iter_mut().enumerate() {
                            let p = base + i;
                            for (f, slice) in slices.iter().enumerate() {
                                point[f] = slice[p];
                            }
                            if interp.is_extrapolating(&point) {
                                outside += 1;
                            }
                            *slot = interp.eval_with_scratch(&point, &mut scratch);
                        }
                        outside
                    })
                    .sum();
                (values, extrapolated)
            }
            DateProxy::PerCurrency(pieces) => {
                let sub_slices: Vec<Vec<&[f64]>> = pieces
                    .iter()
                    .map(|piece| {
                        piece
                            .factor_indices
                            .iter()
                            .map(|&fi| state.factor_values(date_idx, fi))
                            .collect()
                    })
                    .collect();
                let fx_slices: Vec<Option<&[f64]>> = pieces
                    .iter()
                    .map(|piece| piece.fx_index.map(|fi| state.factor_values(date_idx, fi)))
                    .collect();
                let mut values = vec![0.0; n_paths];
                let extrapolated = values
                    .par_chunks_mut(1024)
                    .enumerate()
                    .map(|(chunk, out)| {
                        let base = chunk * 1024;
                        let mut scratch = Vec::new();
                        let mut outside = 0usize;
                        for (i, slot) in out.iter_mut().enumerate() {
                            let p = base + i;
                            let mut total = 0.0;
                            let mut any_outside = false;
                            for (s, piece) in pieces.iter().enumerate() {
                                let local = match &piece.proxy {
                                    SubProxy::Constant(c) => *c,
                                    SubProxy::OneDim(proxy) => {
                                        let x = sub_slices[s][0][p];
                                        let (lo, hi) = proxy.node_range();
                                        if x < lo || x > hi {
                                            any_outside = true;
                                        }
                                        proxy.eval(x)
                                    }
                                    SubProxy::TwoDim(interp) => {
                                        let point = [sub_slices[s][0][p], sub_slices[s][1][p]];
                                        if interp.is_extrapolating(&point) {
                                            any_outside = true;
                                        }
                                        let need = 2 * (interp.grid().max_degree() + 1);
                                        if scratch.len() < need {
                                            scratch.resize(need, 0.0);
                                        }
                                        interp.eval_with_scratch(&point, &mut scratch)
                                    }
                                };
                                total += match fx_slices[s] {
                                    Some(fx) => fx[p] * local,
                                    None => local,
                                };
                            }
                            if any_outside {
                                outside += 1;
                            }
                            *slot = total;
                        }
                        outside
                    })
                    .sum();
                (values, extrapolated)
            }
        }
    }
}

/// Builds the proxy of one exposure date: the (sub-)portfolio is valued
/// only at the collocation states dictated by `config`, and interpolants
/// are fitted over domain boxes derived from the simulated paths. The
/// returned bundle carries the exact evaluation count.
///
/// One-shot form; [`evaluate_exposures`] shares the grid factorization
/// across dates instead.
pub fn build_date_proxy(
    evaluator: &PortfolioEvaluator,
    state: &ModelState,
    date_idx: usize,
    config: &ProxyConfig,
) -> Result<DateProxyBundle, ExposureError> {
    config.validate()?;
    let cache = evaluator.date_cache(state.dates()[date_idx])?;
    match config.mode {
        ProxyMode::BruteForce => Err(ExposureError::InvalidConfig(
            "brute-force mode fits no proxy".into(),
        )),
        ProxyMode::FullGrid { level } => {
            let grid = Arc::new(SparseGrid::new(state.factors().len(), level)?);
            let interpolator = GridInterpolator::new(grid)?;
            build_full_grid_proxy(evaluator, state, &cache, date_idx, config, &interpolator)
        }
        ProxyMode::PerCurrency { n1, level } => {
            let sub_grid = if evaluator.subs().iter().any(|s| s.factor_dim == 2) {
                Some(GridInterpolator::new(Arc::new(SparseGrid::new(2, level)?))?)
            } else {
                None
            };
            build_per_currency_proxies(
                evaluator,
                state,
                &cache,
                date_idx,
                config,
                n1,
                sub_grid.as_ref(),
            )
        }
    }
}

/// Exposure output: the profile plus the per-path value/discount panel the
/// xVA aggregation consumes.
#[derive(Clone, Debug)]
pub struct ExposureRun {
    pub profile: ExposureProfile,
    /// Portfolio values per `[date][path]` (proxy or brute-force).
    pub values: Vec<Vec<f64>>,
    /// Discount factors `M(t_0)/M(T_k)` per `[date][path]`.
    pub discounts: Vec<Vec<f64>>,
}

/// Runs the pipeline over all exposure dates.
pub fn evaluate_exposures(
    evaluator: &PortfolioEvaluator,
    state: &ModelState,
    config: &ProxyConfig,
    quantile_levels: &[f64],
) -> Result<ExposureRun, ExposureError> {
    config.validate()?;
    let mut levels = quantile_levels.to_vec();
    levels.sort_unstable_by(f64::total_cmp);
    if levels.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
        return Err(ExposureError::InvalidConfig("PFE levels must lie in (0, 1)".into()));
    }
    let n_paths = state.n_paths();
    let n_dates = state.dates().len();

    // Grid machinery shared across dates: the basis LU depends only on
    // (dimension, level).
    let full_grid = match config.mode {
        ProxyMode::FullGrid { level } => {
            let grid = Arc::new(SparseGrid::new(state.factors().len(), level)?);
            Some(GridInterpolator::new(grid)?)
        }
        _ => None,
    };
    let sub_grid = match config.mode {
        ProxyMode::PerCurrency { level, .. }
            if evaluator.subs().iter().any(|s| s.factor_dim == 2) =>
        {
            let grid = Arc::new(SparseGrid::new(2, level)?);
            Some(GridInterpolator::new(grid)?)
        }
        _ => None,
    };

    let mut profile = ExposureProfile {
        dates: state.dates().to_vec(),
        quantile_levels: levels.clone(),
        ee: Vec::with_capacity(n_dates),
        pfe: Vec::with_capacity(n_dates),
        evals_per_date: Vec::with_capacity(n_dates),
        extrapolated_fraction: Vec::with_capacity(n_dates),
        per_sub_evals: Vec::new(),
        reference_evals: (n_dates * n_paths) as u64,
        n_paths,
        seed: state.seed(),
        discounted_pfe: config.discount_pfe,
        degenerate_box_count: 0,
        mode_label: config.mode_label(),
        box_alpha: config.box_alpha,
    };
    let mut per_sub: Vec<(String, u64)> = match config.mode {
        ProxyMode::PerCurrency { .. } => evaluator
            .subs()
            .iter()
            .map(|s| (s.currency.clone(), 0u64))
            .collect(),
        _ => vec![("portfolio".to_string(), 0u64)],
    };

    let mut values_panel = Vec::with_capacity(n_dates);
    let mut discount_panel = Vec::with_capacity(n_dates);
    for k in 0..n_dates {
        let t = state.dates()[k];
        let cache = evaluator.date_cache(t)?;
        let (values, evals, extrapolated) = match &config.mode {
            ProxyMode::BruteForce => {
                let values = brute_force_values(evaluator, state, &cache, k)?;
                per_sub[0].1 += n_paths as u64;
                (values, n_paths as u64, 0usize)
            }
            ProxyMode::FullGrid { .. } => {
                let bundle = build_full_grid_proxy(
                    evaluator,
                    state,
                    &cache,
                    k,
                    config,
                    full_grid.as_ref().expect("grid built for full mode"),
                )?;
                per_sub[0].1 += bundle.evals_per_sub;
                profile.degenerate_box_count += bundle.degenerate_dims;
                let (values, extrapolated) = bundle.eval_paths(state, k);
                (values, bundle.evals_per_sub, extrapolated)
            }
            ProxyMode::PerCurrency { n1, .. } => {
                let bundle = build_per_currency_proxies(
                    evaluator,
                    state,
                    &cache,
                    k,
                    config,
                    *n1,
                    sub_grid.as_ref(),
                )?;
                if let DateProxy::PerCurrency(pieces) = &bundle.proxy {
                    for (slot, piece) in per_sub.iter_mut().zip(pieces) {
                        slot.1 += piece.evals;
                    }
                }
                profile.degenerate_box_count += bundle.degenerate_dims;
                let (values, extrapolated) = bundle.eval_paths(state, k);
                (values, bundle.evals_per_sub, extrapolated)
            }
        };
        let discounts = state.discount_factors(k);
        let positives: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
        let discounted: Vec<f64> =
            positives.iter().zip(&discounts).map(|(e, d)| e * d).collect();
        profile.ee.push(pairwise_sum(&discounted) / n_paths as f64);
        let pfe_basis = if config.discount_pfe { &discounted } else { &positives };
        let sorted = sorted_copy(pfe_basis);
        profile
            .pfe
            .push(levels.iter().map(|&p| quantile_sorted(&sorted, p)).collect());
        profile.evals_per_date.push(evals);
        profile
            .extrapolated_fraction
            .push(extrapolated as f64 / n_paths as f64);
        values_panel.push(values);
        discount_panel.push(discounts);
    }
    profile.per_sub_evals = per_sub;
    Ok(ExposureRun { profile, values: values_panel, discounts: discount_panel })
}

fn brute_force_values(
    evaluator: &PortfolioEvaluator,
    state: &ModelState,
    cache: &DateCache,
    k: usize,
) -> Result<Vec<f64>, ExposureError> {
    let n_paths = state.n_paths();
    let slices: Vec<&[f64]> = (0..state.factors().len())
        .map(|f| state.factor_values(k, f))
        .collect();
    let mut values = vec![0.0; n_paths];
    values
        .par_chunks_mut(1024)
        .enumerate()
        .try_for_each(|(chunk, out)| -> Result<(), ExposureError> {
            let base = chunk * 1024;
            for (i, slot) in out.iter_mut().enumerate() {
                let p = base + i;
                *slot = evaluator.full_value(cache, |f| slices[f][p])?;
            }
            Ok(())
        })?;
    Ok(values)
}

fn build_full_grid_proxy(
    evaluator: &PortfolioEvaluator,
    state: &ModelState,
    cache: &DateCache,
    k: usize,
    config: &ProxyConfig,
    interpolator: &GridInterpolator,
) -> Result<DateProxyBundle, ExposureError> {
    let n_factors = state.factors().len();
    let factor_indices: Vec<usize> = (0..n_factors).collect();
    let (bx, degenerate) = domain_box_from_paths(state, k, &factor_indices, config.box_alpha)?;
    let grid = interpolator.grid();
    // Portfolio valuation only at the scaled grid nodes.
    let mut node_values = vec![0.0; grid.len()];
    node_values
        .par_iter_mut()
        .enumerate()
        .try_for_each(|(i, slot)| -> Result<(), ExposureError> {
            let x = bx.from_unit(grid.node(i));
            *slot = evaluator.full_value(cache, |f| x[f])?;
            Ok(())
        })?;
    let interp = interpolator.fit(&node_values, bx)?;
    Ok(DateProxyBundle {
        evals_per_sub: grid.len() as u64,
        degenerate_dims: degenerate,
        proxy: DateProxy::FullGrid(interp),
    })
}

fn build_per_currency_proxies(
    evaluator: &PortfolioEvaluator,
    state: &ModelState,
    cache: &DateCache,
    k: usize,
    config: &ProxyConfig,
    n1: usize,
    sub_grid: Option<&GridInterpolator>,
) -> Result<DateProxyBundle, ExposureError> {
    let n_subs = evaluator.subs().len();
    let mut pieces = Vec::with_capacity(n_subs);
    let mut degenerate_total = 0u64;
    let mut evals_per_sub = 0u64;
    for sub_idx in 0..n_subs {
        let indices = evaluator.sub_factor_indices(sub_idx);
        let (proxy, evals, degenerate) = match indices.len() {
            1 => {
                let samples = state.factor_values(k, indices[0]);
                build_1d_proxy(evaluator, cache, sub_idx, samples, config, n1)?
            }
            2 => {
                let interpolator =
                    sub_grid.expect("2-D sub-portfolios have a grid interpolator");
                let (bx, degenerate) =
                    domain_box_from_paths(state, k, &indices, config.box_alpha)?;
                let grid = interpolator.grid();
                let mut node_values = vec![0.0; grid.len()];
                node_values
                    .par_iter_mut()
                    .enumerate()
                    .try_for_each(|(i, slot)| -> Result<(), ExposureError> {
                        let x = bx.from_unit(grid.node(i));
                        *slot = evaluator.sub_value(cache, sub_idx, &x)?;
                        Ok(())
                    })?;
                let interp = interpolator.fit(&node_values, bx)?;
                (SubProxy::TwoDim(interp), grid.len() as u64, degenerate)
            }
            d => {
                return Err(ExposureError::InvalidConfig(format!(
                    "sub-portfolio of dimension {d} is not supported"
                )))
            }
        };
        evals_per_sub = evals_per_sub.max(evals);
        degenerate_total += degenerate;
        let sub = &evaluator.subs()[sub_idx];
        pieces.push(SubProxyPiece {
            currency: sub.currency.clone(),
            proxy,
            factor_indices: indices,
            fx_index: evaluator.system().fx_factor_index(sub.currency_index),
            evals,
        });
    }
    Ok(DateProxyBundle {
        proxy: DateProxy::PerCurrency(pieces),
        evals_per_sub,
        degenerate_dims: degenerate_total,
    })
}

/// Collocation points, sub-portfolio valuations and the 1-D Lagrange proxy
/// for one single-factor sub-portfolio.
fn build_1d_proxy(
    evaluator: &PortfolioEvaluator,
    cache: &DateCache,
    sub_idx: usize,
    samples: &[f64],
    config: &ProxyConfig,
    n1: usize,
) -> Result<(SubProxy, u64, u64), ExposureError> {
    let m = mean(samples);
    let var = if samples.len() > 1 { variance(samples) } else { 0.0 };
    // A factor with no dispersion needs a single valuation, not a fit.
    if var <= 1e-24 * (1.0 + m * m) {
        let value = evaluator.sub_value(cache, sub_idx, &[m])?;
        return Ok((SubProxy::Constant(value), 1, 1));
    }
    let points = match config.source {
        CollocationSource::NormalQuadrature => normal_collocation_points(n1, m, var)?,
        CollocationSource::Quantile => {
            let sorted = sorted_copy(samples);
            let default_levels;
            let levels: &[f64] = match &config.quantile_levels {
                Some(l) => l,
                None => {
                    default_levels = crate::collocation::interior_levels(n1)?;
                    &default_levels
                }
            };
            quantile_collocation_at(levels, |p| quantile_sorted(&sorted, p))?
        }
        CollocationSource::EmpiricalInverted => empirical_inverse_points(samples, n1)?,
    };
    if points.is_degenerate() {
        let value = evaluator.sub_value(cache, sub_idx, &[points.points[0]])?;
        return Ok((SubProxy::Constant(value), 1, 1));
    }
    let mut values = Vec::with_capacity(points.len());
    for &x in &points.points {
        values.push(evaluator.sub_value(cache, sub_idx, &[x])?);
    }
    let proxy = lagrange_proxy_1d(&points.points, &values)?;
    Ok((SubProxy::OneDim(proxy), points.len() as u64, 0))
}
