//! Smolyak sparse grids on Clenshaw-Curtis points with Chebyshev-basis
//! Lagrange interpolation.
//!
//! The unidimensional family at level `j` holds `m(j)` Chebyshev extrema
//! (`m(1) = 1`, `m(j) = 2^{j-1} + 1`), which are nested across levels. The
//! grid for dimension `d` at level `mu` is assembled from *disjoint* sets:
//! each multi-index `w` with `d <= |w| <= d + mu` contributes the tensor
//! product of the points that are new at level `w_k` in dimension `k`, so
//! no node is ever produced twice. Each node slot is paired with one tensor
//! Chebyshev basis function whose per-dimension degree ranges over
//! `m(w_k - 1) .. m(w_k) - 1`, making the Lagrange system square.
//!
//! Interpolation solves that system directly (LU with one refinement pass)
//! and verifies the interpolation condition at every node.

use std::sync::Arc;

use thiserror::Error;

use crate::math::linalg::{mat_vec, LuFactor};

#[derive(Debug, Error)]
pub enum GridError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("node family size must be at least 1")]
    EmptyFamily,
    #[error("grid level {0} exceeds the supported maximum of {MAX_LEVEL}")]
    LevelTooLarge(usize),
    #[error("expected {expected} values (one per node), got {got}")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error("value at node {0} is not finite")]
    NonFiniteValue(usize),
    #[error("interpolation system is ill-conditioned: node residual {residual:.3e} exceeds {tolerance:.3e}")]
    IllConditioned { residual: f64, tolerance: f64 },
    #[error("interpolation matrix is singular")]
    SingularBasis,
    #[error("degenerate domain box in dimension {dim}: lower bound {lo} must be below upper bound {hi}")]
    DegenerateBox { dim: usize, lo: f64, hi: f64 },
    #[error("point dimension {got} does not match grid dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Highest supported per-dimension level; keeps basis degrees within `u16`.
pub const MAX_LEVEL: usize = 14;

/// Relative tolerance for the interpolation condition at the grid nodes.
pub const NODE_RESIDUAL_TOL: f64 = 1e-10;

/// Number of points in the level-j Clenshaw-Curtis family:
/// `m(1) = 1`, `m(j) = 2^{j-1} + 1` for j >= 2 (and `m(0) = 0`).
pub fn level_size(level: usize) -> usize {
    match level {
        0 => 0,
        1 => 1,
        j => (1usize << (j - 1)) + 1,
    }
}

/// Clenshaw-Curtis point `-cos(pi * num / den)` with exact symmetry:
/// the midpoint is exactly 0 and mirrored indices are exact negations.
fn cc_value(num: u32, den: u32) -> f64 {
    debug_assert!(num <= den);
    if 2 * num == den {
        return 0.0;
    }
    if 2 * num > den {
        return -cc_value(den - num, den);
    }
    if num == 0 {
        return -1.0;
    }
    -(std::f64::consts::PI * num as f64 / den as f64).cos()
}

/// Reduces `num/den` (den a power of two) to canonical lowest terms.
fn reduce(mut num: u32, mut den: u32) -> (u32, u32) {
    while num.is_multiple_of(2) && den > 1 {
        num /= 2;
        den /= 2;
        if num == 0 {
            return (0, 1);
        }
    }
    (num, den)
}

/// Rational indices of the points that are *new* at `level`, ascending.
fn disjoint_rationals(level: usize) -> Vec<(u32, u32)> {
    match level {
        0 => Vec::new(),
        1 => vec![(1, 2)],
        2 => vec![(0, 1), (1, 1)],
        j => {
            let den = 1u32 << (j - 1);
            (0..den / 2).map(|t| reduce(2 * t + 1, den)).collect()
        }
    }
}

/// Coordinates of the points that are new at `level`, ascending.
fn disjoint_points(level: usize) -> Vec<f64> {
    disjoint_rationals(level)
        .into_iter()
        .map(|(n, d)| cc_value(n, d))
        .collect()
}

/// The `n` extrema of the Chebyshev polynomial of degree `n - 1`,
/// `x_i = -cos(pi (i-1)/(n-1))`, ascending; `n = 1` yields the midpoint 0.
pub fn chebyshev_extrema(n: usize) -> Result<Vec<f64>, GridError> {
    if n == 0 {
        return Err(GridError::EmptyFamily);
    }
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let mut pts = vec![0.0; n];
    for i in 0..n / 2 {
        let x = -(std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
        pts[i] = x;
        pts[n - 1 - i] = -x;
    }
    if n % 2 == 1 {
        pts[n / 2] = 0.0;
    }
    Ok(pts)
}

/// Chebyshev polynomial of the first kind `T_degree(x)` by the recurrence
/// `T_n = 2 x T_{n-1} - T_{n-2}`. The caller is responsible for scaling
/// inputs onto [-1, 1]; out-of-range arguments follow the polynomial
/// extension rather than being clamped.
pub fn chebyshev_eval(degree: usize, x: f64) -> f64 {
    match degree {
        0 => 1.0,
        1 => x,
        _ => {
            let mut t0 = 1.0;
            let mut t1 = x;
            for _ in 2..=degree {
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    }
}

/// Fills `out[j] = T_j(x)` for `j = 0..out.len()`.
fn chebyshev_row(x: f64, out: &mut [f64]) {
    if let Some(first) = out.first_mut() {
        *first = 1.0;
    }
    if out.len() > 1 {
        out[1] = x;
        for j in 2..out.len() {
            out[j] = 2.0 * x * out[j - 1] - out[j - 2];
        }
    }
}

/// A d-dimensional Smolyak sparse grid in `[-1, 1]^d` (disjoint-set form).
#[derive(Clone, Debug)]
pub struct SparseGrid {
    dim: usize,
    level: usize,
    nodes: Vec<f64>,
    block_levels: Vec<u16>,
    basis_degrees: Vec<u16>,
    max_degree: usize,
}

impl SparseGrid {
    /// Builds the grid for `dim >= 1` risk factors at level `mu >= 0`.
    pub fn new(dim: usize, mu: usize) -> Result<Self, GridError> {
        if dim == 0 {
            return Err(GridError::ZeroDimension);
        }
        if mu + 1 > MAX_LEVEL {
            return Err(GridError::LevelTooLarge(mu));
        }
        // Per-level point and degree tables up to the deepest usable level.
        let max_lvl = mu + 1;
        let points: Vec<Vec<f64>> = (0..=max_lvl).map(disjoint_points).collect();
        let degrees: Vec<Vec<u16>> = (0..=max_lvl)
            .map(|l| {
                let lo = level_size(l.saturating_sub(1)) as u16;
                let hi = level_size(l) as u16;
                (lo..hi).collect()
            })
            .collect();

        let mut grid = SparseGrid {
            dim,
            level: mu,
            nodes: Vec::new(),
            block_levels: Vec::new(),
            basis_degrees: Vec::new(),
            max_degree: level_size(max_lvl) - 1,
        };
        let mut levels = vec![1u16; dim];
        grid.push_blocks(0, mu, &mut levels, &points, &degrees);
        Ok(grid)
    }

    /// Recursively enumerates multi-indices with total excess <= `budget`
    /// and appends each block's tensor product of new points.
    fn push_blocks(
        &mut self,
        k: usize,
        budget: usize,
        levels: &mut Vec<u16>,
        points: &[Vec<f64>],
        degrees: &[Vec<u16>],
    ) {
        if k == self.dim {
            self.push_block(levels, points, degrees);
            return;
        }
        for excess in 0..=budget {
            levels[k] = (excess + 1) as u16;
            self.push_blocks(k + 1, budget - excess, levels, points, degrees);
        }
        levels[k] = 1;
    }

    fn push_block(&mut self, levels: &[u16], points: &[Vec<f64>], degrees: &[Vec<u16>]) {
        let dim = self.dim;
        let sizes: Vec<usize> = levels.iter().map(|&l| points[l as usize].len()).collect();
        let count: usize = sizes.iter().product();
        let mut idx = vec![0usize; dim];
        for _ in 0..count {
            for k in 0..dim {
                let lvl = levels[k] as usize;
                self.nodes.push(points[lvl][idx[k]]);
                self.basis_degrees.push(degrees[lvl][idx[k]]);
                self.block_levels.push(levels[k]);
            }
            // Odometer increment, last dimension fastest.
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.nodes.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    /// Multi-index `w` that produced node `i`.
    pub fn node_multi_index(&self, i: usize) -> &[u16] {
        &self.block_levels[i * self.dim..(i + 1) * self.dim]
    }

    /// Per-dimension Chebyshev degrees of basis function `i`.
    pub fn basis_degrees(&self, i: usize) -> &[u16] {
        &self.basis_degrees[i * self.dim..(i + 1) * self.dim]
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Value of basis function `j` given precomputed per-dimension Chebyshev
    /// rows `t[k * stride + deg] = T_deg(u_k)`.
    #[inline]
    fn basis_value(&self, j: usize, t: &[f64], stride: usize) -> f64 {
        let degs = self.basis_degrees(j);
        let mut prod = 1.0;
        for (k, &d) in degs.iter().enumerate() {
            prod *= t[k * stride + d as usize];
        }
        prod
    }

    /// Structured-text dump: one line per node with coordinates, generating
    /// multi-index and paired basis degrees, full decimal precision.
    pub fn dump_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "sparse_grid dim={} level={} nodes={}", self.dim, self.level, self.len());
        for i in 0..self.len() {
            let coords: Vec<String> = self.node(i).iter().map(|x| format!("{x}")).collect();
            let w: Vec<String> = self.node_multi_index(i).iter().map(|x| x.to_string()).collect();
            let deg: Vec<String> = self.basis_degrees(i).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "node {i}: [{}] w=[{}] degrees=[{}]", coords.join(", "), w.join(", "), deg.join(", "));
        }
        s
    }
}

/// Axis-aligned box mapping the canonical cube onto risk-factor ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, GridError> {
        assert_eq!(lo.len(), hi.len());
        for (dim, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !(l < h) || !l.is_finite() || !h.is_finite() {
                return Err(GridError::DegenerateBox { dim, lo: l, hi: h });
            }
        }
        Ok(Self { lo, hi })
    }

    /// The canonical cube `[-1, 1]^d` itself.
    pub fn unit(dim: usize) -> Self {
        Self { lo: vec![-1.0; dim], hi: vec![1.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lo
    }

    pub fn upper(&self) -> &[f64] {
        &self.hi
    }

    /// Affine stretch `x_i = lb_i + (u_i + 1)(ub_i - lb_i)/2` from the cube.
    pub fn from_unit(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.dim());
        u.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&ui, (&l, &h))| l + 0.5 * (ui + 1.0) * (h - l))
            .collect()
    }

    /// Inverse of [`from_unit`](Self::from_unit).
    pub fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&xi, (&l, &h))| 2.0 * (xi - l) / (h - l) - 1.0)
            .collect()
    }

    #[inline]
    pub fn to_unit_coord(&self, k: usize, x: f64) -> f64 {
        2.0 * (x - self.lo[k]) / (self.hi[k] - self.lo[k]) - 1.0
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&l, &h))| xi >= l && xi <= h)
    }
}

/// Reusable Lagrange solver for one grid: the basis matrix depends only on
/// the canonical nodes, so its LU factorization is shared across exposure
/// dates and target functions.
#[derive(Debug)]
pub struct GridInterpolator {
    grid: Arc<SparseGrid>,
    matrix: Vec<f64>,
    lu: LuFactor,
}

impl GridInterpolator {
    pub fn new(grid: Arc<SparseGrid>) -> Result<Self, GridError> {
        let n = grid.len();
        let stride = grid.max_degree() + 1;
        let mut matrix = vec![0.0; n * n];
        let mut t = vec![0.0; grid.dim() * stride];
        for i in 0..n {
            for (k, &u) in grid.node(i).iter().enumerate() {
                chebyshev_row(u, &mut t[k * stride..(k + 1) * stride]);
            }
            for j in 0..n {
                matrix[i * n + j] = grid.basis_value(j, &t, stride);
            }
        }
        let lu = LuFactor::new(matrix.clone(), n).map_err(|_| GridError::SingularBasis)?;
        Ok(Self { grid, matrix, lu })
    }

    pub fn grid(&self) -> &Arc<SparseGrid> {
        &self.grid
    }

    /// Solves for basis coefficients reproducing `values` at the nodes.
    /// One iterative-refinement pass keeps node residuals near machine
    /// precision; residuals beyond [`NODE_RESIDUAL_TOL`] signal
    /// ill-conditioning.
    pub fn fit_coefficients(&self, values: &[f64]) -> Result<Vec<f64>, GridError> {
        let n = self.grid.len();
        if values.len() != n {
            return Err(GridError::ValueCountMismatch { expected: n, got: values.len() });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFiniteValue(bad));
        }
        let mut coeffs = self.lu.solve(values);
        // Refinement: b += A^{-1}(v - A b).
        let reproduced = mat_vec(&self.matrix, n, &coeffs);
        let residual: Vec<f64> = values.iter().zip(&reproduced).map(|(v, r)| v - r).collect();
        let correction = self.lu.solve(&residual);
        for (c, dc) in coeffs.iter_mut().zip(&correction) {
            *c += dc;
        }
        let reproduced = mat_vec(&self.matrix, n, &coeffs);
        let mut worst = 0.0f64;
        for (v, r) in values.iter().zip(&reproduced) {
            let scaled = (v - r).abs() / (1.0 + v.abs());
            worst = worst.max(scaled);
        }
        if worst > NODE_RESIDUAL_TOL || !worst.is_finite() {
            return Err(GridError::IllConditioned { residual: worst, tolerance: NODE_RESIDUAL_TOL });
        }
        Ok(coeffs)
    }

    pub fn fit(&self, values: &[f64], domain: DomainBox) -> Result<Interpolant, GridError> {
        if domain.dim() != self.grid.dim() {
            return Err(GridError::DimensionMismatch { expected: self.grid.dim(), got: domain.dim() });
        }
        let coeffs = self.fit_coefficients(values)?;
        Ok(Interpolant { grid: Arc::clone(&self.grid), coeffs, domain })
    }
}

/// Convenience one-shot fit on the canonical cube or a scaled box.
pub fn fit_interpolant(
    grid: &Arc<SparseGrid>,
    values: &[f64],
    domain: DomainBox,
) -> Result<Interpolant, GridError> {
    GridInterpolator::new(Arc::clone(grid))?.fit(values, domain)
}

/// A fitted sparse-grid proxy: immutable, cheap to evaluate anywhere, safe
/// to share across threads for read-only evaluation.
#[derive(Clone, Debug)]
pub struct Interpolant {
    grid: Arc<SparseGrid>,
    coeffs: Vec<f64>,
    domain: DomainBox,
}

impl Interpolant {
    pub fn grid(&self) -> &SparseGrid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    /// True when `x` lies outside the fitted box, so evaluation is a
    /// polynomial extension rather than interpolation. Never clamps.
    pub fn is_extrapolating(&self, x: &[f64]) -> bool {
        !self.domain.contains(x)
    }

    /// Evaluates at a point in risk-factor units.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let stride = self.grid.max_degree() + 1;
        let mut scratch = vec![0.0; self.grid.dim() * stride];
        self.eval_with_scratch(x, &mut scratch)
    }

    /// Evaluation with caller-provided scratch of size
    /// `dim * (max_degree + 1)`; avoids per-call allocation on hot paths.
    pub fn eval_with_scratch(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        let dim = self.grid.dim();
        assert_eq!(x.len(), dim);
        let stride = self.grid.max_degree() + 1;
        debug_assert!(scratch.len() >= dim * stride);
        for (k, &xk) in x.iter().enumerate() {
            let u = self.domain.to_unit_coord(k, xk);
            chebyshev_row(u, &mut scratch[k * stride..(k + 1) * stride]);
        }
        let mut sum = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            sum += c * self.grid.basis_value(j, scratch, stride);
        }
        sum
    }

    /// Evaluates a batch of points, returning the values together with the
    /// number of points that fell outside the domain box.
    pub fn eval_many(&self, points: &[Vec<f64>]) -> (Vec<f64>, usize) {
        let stride = self.grid.max_degree() + 1;
        let mut scratch = vec![0.0; self.grid.dim() * stride];
        let mut extrapolated = 0usize;
        let vals = points
            .iter()
            .map(|p| {
                if self.is_extrapolating(p) {
                    extrapolated += 1;
                }
                self.eval_with_scratch(p, &mut scratch)
            })
            .collect();
        (vals, extrapolated)
    }

    /// Structured-text dump of nodes and coefficients, full precision.
    pub fn dump_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "interpolant dim={} level={} nodes={}",
            self.grid.dim(),
            self.grid.level(),
            self.grid.len()
        );
        let lo: Vec<String> = self.domain.lower().iter().map(|x| format!("{x}")).collect();
        let hi: Vec<String> = self.domain.upper().iter().map(|x| format!("{x}")).collect();
        let _ = writeln!(s, "domain lo=[{}] hi=[{}]", lo.join(", "), hi.join(", "));
        for i in 0..self.grid.len() {
            let coords: Vec<String> = self.grid.node(i).iter().map(|x| format!("{x}")).collect();
            let _ = writeln!(s, "node {i}: [{}] coeff={}", coords.join(", "), self.coeffs[i]);
        }
        s
    }
}
