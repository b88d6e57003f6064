//! Expected-exposure and potential-future-exposure profiles for single- and
//! multi-currency interest-rate portfolios.
//!
//! The engine replaces the per-path portfolio revaluation of a Monte Carlo
//! exposure run with a stochastic-collocation proxy: at every exposure date
//! the portfolio is valued only at a handful of collocation states (normal
//! quadrature points in one dimension, Smolyak sparse-grid nodes in
//! several), a Lagrange interpolant is fitted through those values and then
//! evaluated across all simulated paths. Full brute-force revaluation stays
//! available as the verification reference.
//!
//! Module map:
//! - [`sparse_grid`]: Clenshaw-Curtis families, Smolyak grids (disjoint-set
//!   construction), Chebyshev-basis interpolation and domain scaling.
//! - [`collocation`]: 1-D collocation points (Gauss-Hermite/normal,
//!   quantile, empirical-CDF) and correlated point grids.
//! - [`models`]: Hull-White, multi-currency BSHW and G2++ simulation with
//!   exact big steps.
//! - [`instruments`]: swaps, European swaptions, portfolio generation and
//!   the bound evaluator.
//! - [`exposure`]: the per-date proxy pipeline, EE/PFE reduction, error
//!   metrics and xVA aggregation.
//! - [`report`]: CSV and text emission.

// Negated comparisons like `!(l < h)` are deliberate: they reject NaN along
// with the out-of-range case.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collocation;
pub mod exposure;
pub mod instruments;
pub mod math;
pub mod models;
pub mod report;
pub mod sparse_grid;
