//! Collocation point generation and the one-dimensional Lagrange proxy.
//!
//! Points for a Gaussian factor come from the probabilists' Hermite Jacobi
//! matrix (Golub-Welsch eigenvalues), which relate to Gauss-Hermite
//! abscissas by `x^H = x^{N(0,1)} / sqrt(2)`. Non-Gaussian factors route
//! through equally spaced quantiles or through the normal kernel and an
//! empirical CDF inversion. Correlated grids condition the per-dimension
//! normal points through the Cholesky factor of the correlation matrix and
//! invert each marginal CDF.

use thiserror::Error;

use crate::math::linalg::{cholesky_lower, sym_tridiag_eigenvalues, LinalgError};
use crate::math::normal::norm_cdf;
use crate::math::stats::{quantile_sorted, sorted_copy};

#[derive(Debug, Error)]
pub enum CollocationError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("variance must be non-negative, got {0}")]
    NegativeVariance(f64),
    #[error("variance is zero; only a single collocation point is defined")]
    DegenerateDistribution,
    #[error("quantile function is not strictly increasing at level {level}")]
    NonMonotoneQuantile { level: f64 },
    #[error("sample set is empty")]
    EmptySamples,
    #[error("{requested} collocation points requested but samples contain only {distinct} distinct values")]
    TooFewDistinctSamples { requested: usize, distinct: usize },
    #[error("collocation points contain duplicates")]
    DuplicatePoints,
    #[error("values length {got} does not match point count {expected}")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error("correlation matrix is invalid: {0}")]
    BadCorrelation(#[from] LinalgError),
    #[error("correlation matrix dimension {got} does not match {expected} marginals")]
    CorrelationDimension { expected: usize, got: usize },
}

/// How a 1D collocation set was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSource {
    /// Gauss-Hermite / normal quadrature points, affinely mapped.
    NormalQuadrature,
    /// Equally spaced quantiles of a caller-supplied distribution.
    Quantile,
    /// Normal kernel mapped through an empirical CDF (suboptimal points).
    EmpiricalInverted,
}

/// A strictly increasing set of 1D collocation points.
#[derive(Clone, Debug)]
pub struct CollocationSet1D {
    pub points: Vec<f64>,
    pub source: PointSource,
    /// Generating mean/variance when the source is a normal family.
    pub moments: Option<(f64, f64)>,
}

impl CollocationSet1D {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when every point collapsed onto one location (degenerate CDF).
    pub fn is_degenerate(&self) -> bool {
        self.points.len() > 1 && self.points.first() == self.points.last()
    }
}

/// Collocation points of the standard normal: eigenvalues of the n-point
/// probabilists' Hermite Jacobi matrix (zero diagonal, off-diagonal sqrt(k)).
/// Antisymmetry is enforced exactly.
pub fn standard_normal_points(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![0.0];
    }
    let off: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    let mut eig = sym_tridiag_eigenvalues(&vec![0.0; n], &off);
    for i in 0..n / 2 {
        let s = 0.5 * (eig[n - 1 - i] - eig[i]);
        eig[i] = -s;
        eig[n - 1 - i] = s;
    }
    if n % 2 == 1 {
        eig[n / 2] = 0.0;
    }
    eig
}

/// Collocation points for `N(mean, variance)`:
/// `mean + sqrt(variance) * x_j^{N(0,1)}`.
pub fn normal_collocation_points(
    n: usize,
    mean: f64,
    variance: f64,
) -> Result<CollocationSet1D, CollocationError> {
    if n == 0 {
        return Err(CollocationError::TooFewPoints { needed: 1, got: 0 });
    }
    if variance < 0.0 {
        return Err(CollocationError::NegativeVariance(variance));
    }
    if variance == 0.0 && n > 1 {
        return Err(CollocationError::DegenerateDistribution);
    }
    let sd = variance.sqrt();
    let points = standard_normal_points(n)
        .into_iter()
        .map(|x| mean + sd * x)
        .collect();
    Ok(CollocationSet1D { points, source: PointSource::NormalQuadrature, moments: Some((mean, variance)) })
}

/// Points at equally spaced interior quantile levels `p_i = i/(n+1)`.
pub fn quantile_collocation_points<F: Fn(f64) -> f64>(
    n: usize,
    quantile_fn: F,
) -> Result<CollocationSet1D, CollocationError> {
    quantile_collocation_at(&interior_levels(n)?, quantile_fn)
}

/// Points at caller-chosen quantile levels (tail-weighted sweeps etc.).
pub fn quantile_collocation_at<F: Fn(f64) -> f64>(
    levels: &[f64],
    quantile_fn: F,
) -> Result<CollocationSet1D, CollocationError> {
    if levels.is_empty() {
        return Err(CollocationError::TooFewPoints { needed: 1, got: 0 });
    }
    let mut points = Vec::with_capacity(levels.len());
    for &p in levels {
        let x = quantile_fn(p);
        if let Some(&prev) = points.last() {
            if x <= prev {
                return Err(CollocationError::NonMonotoneQuantile { level: p });
            }
        }
        points.push(x);
    }
    Ok(CollocationSet1D { points, source: PointSource::Quantile, moments: None })
}

/// Equally spaced interior levels `i/(n+1)`, `i = 1..n`.
pub fn interior_levels(n: usize) -> Result<Vec<f64>, CollocationError> {
    if n == 0 {
        return Err(CollocationError::TooFewPoints { needed: 1, got: 0 });
    }
    Ok((1..=n).map(|i| i as f64 / (n + 1) as f64).collect())
}

/// Suboptimal collocation points through the normal kernel: normal points
/// mapped by the standard normal CDF and inverted through the empirical CDF
/// of `samples` (linear interpolation between order statistics, flat beyond
/// the extremes).
///
/// A fully degenerate sample set (all values equal) yields the constant
/// point set; partial collisions are rejected since duplicate points cannot
/// support interpolation.
pub fn empirical_inverse_points(
    samples: &[f64],
    n: usize,
) -> Result<CollocationSet1D, CollocationError> {
    if samples.is_empty() {
        return Err(CollocationError::EmptySamples);
    }
    if n == 0 {
        return Err(CollocationError::TooFewPoints { needed: 1, got: 0 });
    }
    let sorted = sorted_copy(samples);
    let degenerate = sorted.first() == sorted.last();
    let points: Vec<f64> = standard_normal_points(n)
        .into_iter()
        .map(|x| quantile_sorted(&sorted, norm_cdf(x)))
        .collect();
    if degenerate {
        return Ok(CollocationSet1D {
            points,
            source: PointSource::EmpiricalInverted,
            moments: None,
        });
    }
    if points.windows(2).any(|w| w[1] <= w[0]) {
        let distinct = sorted.windows(2).filter(|w| w[1] > w[0]).count() + 1;
        if n > distinct {
            return Err(CollocationError::TooFewDistinctSamples { requested: n, distinct });
        }
        return Err(CollocationError::DuplicatePoints);
    }
    Ok(CollocationSet1D { points, source: PointSource::EmpiricalInverted, moments: None })
}

/// A copula-correlated collocation grid over `d` marginals.
#[derive(Clone, Debug)]
pub struct CorrelatedGrid {
    pub counts: Vec<usize>,
    /// Lower Cholesky factor of the correlation matrix, row-major d x d.
    pub cholesky: Vec<f64>,
    /// Conditioned points in normal space, row-major (grid point, dimension).
    pub normal_points: Vec<f64>,
    /// Points after marginal CDF inversion, same layout.
    pub target_points: Vec<f64>,
}

impl CorrelatedGrid {
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn normal_point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.normal_points[i * d..(i + 1) * d]
    }

    pub fn target_point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.target_points[i * d..(i + 1) * d]
    }
}

/// Builds the correlated grid: for every index tuple the standard-normal
/// points are conditioned through the Cholesky factor (a triangular map,
/// `x_hat = L x`), then each coordinate is inverted through its marginal
/// quantile function composed with the normal CDF.
pub fn correlated_grid(
    marginal_quantiles: &[&dyn Fn(f64) -> f64],
    counts: &[usize],
    correlation: &[f64],
) -> Result<CorrelatedGrid, CollocationError> {
    let d = counts.len();
    assert_eq!(marginal_quantiles.len(), d);
    if d == 0 {
        return Err(CollocationError::TooFewPoints { needed: 1, got: 0 });
    }
    if correlation.len() != d * d {
        return Err(CollocationError::CorrelationDimension {
            expected: d,
            got: (correlation.len() as f64).sqrt() as usize,
        });
    }
    let chol = cholesky_lower(correlation, d)?;
    let marg_points: Vec<Vec<f64>> = counts.iter().map(|&n| standard_normal_points(n)).collect();
    let total: usize = counts.iter().product();
    let mut normal_points = Vec::with_capacity(total * d);
    let mut target_points = Vec::with_capacity(total * d);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        for i in 0..d {
            let mut hat = 0.0;
            for j in 0..=i {
                hat += chol[i * d + j] * marg_points[j][idx[j]];
            }
            normal_points.push(hat);
            target_points.push(marginal_quantiles[i](norm_cdf(hat)));
        }
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(CorrelatedGrid { counts: counts.to_vec(), cholesky: chol, normal_points, target_points })
}

/// A 1D Lagrange interpolant in barycentric form. Exact at its nodes and
/// exact for polynomials of degree below the node count.
#[derive(Clone, Debug)]
pub struct LagrangeProxy1D {
    points: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl LagrangeProxy1D {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xi, &vi), &wi) in self.points.iter().zip(&self.values).zip(&self.weights) {
            let dx = x - xi;
            if dx == 0.0 {
                return vi;
            }
            let q = wi / dx;
            num += q * vi;
            den += q;
        }
        num / den
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    /// Hull of the interpolation nodes; evaluation beyond it extrapolates.
    pub fn node_range(&self) -> (f64, f64) {
        (self.points[0], *self.points.last().unwrap())
    }
}

/// Builds the 1D proxy `g(x) = sum_j v_j psi_j(x)` through the supplied
/// point/value pairs, using barycentric weights internally for stability.
pub fn lagrange_proxy_1d(
    points: &[f64],
    values: &[f64],
) -> Result<LagrangeProxy1D, CollocationError> {
    if points.is_empty() {
        return Err(CollocationError::TooFewPoints { needed: 1, got: 0 });
    }
    if points.len() != values.len() {
        return Err(CollocationError::ValueCountMismatch {
            expected: points.len(),
            got: values.len(),
        });
    }
    // Scale-invariant duplicate detection.
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let span = hi - lo;
    let n = points.len();
    let mut weights = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                let diff = points[j] - points[k];
                if diff == 0.0 || (span > 0.0 && diff.abs() < 1e-14 * span) {
                    return Err(CollocationError::DuplicatePoints);
                }
                weights[j] /= diff;
            }
        }
    }
    if n > 1 && span == 0.0 {
        return Err(CollocationError::DuplicatePoints);
    }
    Ok(LagrangeProxy1D { points: points.to_vec(), values: values.to_vec(), weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::normal::inverse_norm_cdf;
    use crate::math::rng::StreamRng;

    /// Independent Gauss-Hermite oracle: roots of the physicists' Hermite
    /// polynomial H_n by bisection on sign changes of the recurrence.
    fn gauss_hermite_abscissas(n: usize) -> Vec<f64> {
        fn h(n: usize, x: f64) -> f64 {
            let mut h0 = 1.0;
            let mut h1 = 2.0 * x;
            if n == 0 {
                return h0;
            }
            for k in 2..=n {
                let h2 = 2.0 * x * h1 - 2.0 * (k as f64 - 1.0) * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        }
        let mut roots = Vec::new();
        let bound = (2.0 * n as f64 + 1.0).sqrt() + 2.0;
        let steps = 20000;
        let mut prev_x = -bound;
        let mut prev_f = h(n, prev_x);
        for i in 1..=steps {
            let x = -bound + 2.0 * bound * i as f64 / steps as f64;
            let f = h(n, x);
            if prev_f == 0.0 {
                roots.push(prev_x);
            } else if prev_f * f < 0.0 {
                let (mut a, mut b) = (prev_x, x);
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if h(n, a) * h(n, m) <= 0.0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev_x = x;
            prev_f = f;
        }
        roots
    }

    #[test]
    fn normal_points_closed_forms() {
        let one = normal_collocation_points(1, 0.02, 0.0).unwrap();
        assert_eq!(one.points, vec![0.02]);
        let two = normal_collocation_points(2, 0.0, 1.0).unwrap();
        assert!((two.points[0] + 1.0).abs() < 1e-12 && (two.points[1] - 1.0).abs() < 1e-12);
        let three = normal_collocation_points(3, 0.0, 1.0).unwrap();
        assert!((three.points[0] + 3.0f64.sqrt()).abs() < 1e-12);
        assert!(three.points[1].abs() < 1e-14);
        assert!((three.points[2] - 3.0f64.sqrt()).abs() < 1e-12);
        assert!(normal_collocation_points(3, 0.0, -1.0).is_err());
        assert!(normal_collocation_points(3, 0.0, 0.0).is_err());
    }

    #[test]
    fn normal_points_match_gauss_hermite_oracle() {
        for n in 1..=8 {
            let ours = standard_normal_points(n);
            let hermite = gauss_hermite_abscissas(n);
            assert_eq!(hermite.len(), n, "oracle found wrong root count for n={n}");
            for (a, h) in ours.iter().zip(&hermite) {
                assert!((a / 2.0f64.sqrt() - h).abs() < 1e-10, "n={n}: {a} vs {h}");
            }
        }
    }

    #[test]
    fn normal_points_are_antisymmetric() {
        for n in 2..=9 {
            let pts = standard_normal_points(n);
            for i in 0..n {
                assert!((pts[i] + pts[n - 1 - i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn quantile_points() {
        let med = quantile_collocation_points(1, inverse_norm_cdf).unwrap();
        assert!(med.points[0].abs() < 1e-14);
        let unif = quantile_collocation_points(3, |p| p).unwrap();
        assert_eq!(unif.points, vec![0.25, 0.5, 0.75]);
        let norm2 = quantile_collocation_points(2, inverse_norm_cdf).unwrap();
        assert!((norm2.points[0] - inverse_norm_cdf(1.0 / 3.0)).abs() < 1e-13);
        assert!((norm2.points[0] + norm2.points[1]).abs() < 1e-13, "antisymmetric pair");
        assert!(quantile_collocation_points(3, |p| -p).is_err());
    }

    #[test]
    fn empirical_inversion_recovers_normal_and_lognormal_points() {
        let m = 400_000;
        let mut rng = StreamRng::new(123);
        let z: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
        let got = empirical_inverse_points(&z, 3).unwrap();
        let s3 = 3.0f64.sqrt();
        // Tolerance O(m^{-1/2}) scaled for the tail quantile density.
        for (g, w) in got.points.iter().zip([-s3, 0.0, s3]) {
            assert!((g - w).abs() < 0.05, "{g} vs {w}");
        }
        let ln: Vec<f64> = z.iter().map(|zi| zi.exp()).collect();
        let got = empirical_inverse_points(&ln, 3).unwrap();
        for (g, w) in got.points.iter().zip([(-s3).exp(), 1.0, s3.exp()]) {
            assert!((g - w).abs() < 0.15 * w, "{g} vs {w}");
        }
    }

    #[test]
    fn empirical_inversion_degenerate_and_error_cases() {
        let constant = vec![3.5; 50];
        let got = empirical_inverse_points(&constant, 3).unwrap();
        assert_eq!(got.points, vec![3.5, 3.5, 3.5]);
        assert!(got.is_degenerate());
        let two_valued = vec![0.0, 0.0, 0.0, 1.0];
        let err = empirical_inverse_points(&two_valued, 4).unwrap_err();
        assert!(matches!(
            err,
            CollocationError::TooFewDistinctSamples { .. } | CollocationError::DuplicatePoints
        ));
        assert!(empirical_inverse_points(&[], 2).is_err());
    }

    #[test]
    fn correlated_grid_identity_and_independence() {
        let q1 = |p: f64| inverse_norm_cdf(p);
        let q2 = |p: f64| 2.0 * inverse_norm_cdf(p) + 1.0;
        let q3 = |p: f64| inverse_norm_cdf(p) - 4.0;
        let quantiles: Vec<&dyn Fn(f64) -> f64> = vec![&q1, &q2, &q3];
        let eye = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let grid = correlated_grid(&quantiles, &[3, 2, 3], &eye).unwrap();
        assert_eq!(grid.len(), 18);
        let p1 = standard_normal_points(3);
        let p2 = standard_normal_points(2);
        for i in 0..grid.len() {
            let np = grid.normal_point(i);
            let tp = grid.target_point(i);
            // With C = I the conditioned points equal the marginal points.
            assert!(p1.iter().any(|x| (x - np[0]).abs() < 1e-12));
            assert!(p2.iter().any(|x| (x - np[1]).abs() < 1e-12));
            assert!((tp[0] - np[0]).abs() < 1e-9);
            assert!((tp[1] - (2.0 * np[1] + 1.0)).abs() < 1e-9);
            assert!((tp[2] - (np[2] - 4.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn correlated_grid_lognormal_fan() {
        // Two lognormal marginals, rho = 0.6, 5 x 3 points: a monotone fan.
        let q1 = |p: f64| (-0.1 + 0.3 * inverse_norm_cdf(p)).exp();
        let q2 = |p: f64| (0.2 + 0.2 * inverse_norm_cdf(p)).exp();
        let quantiles: Vec<&dyn Fn(f64) -> f64> = vec![&q1, &q2];
        let c = [1.0, 0.6, 0.6, 1.0];
        let grid = correlated_grid(&quantiles, &[5, 3], &c).unwrap();
        assert_eq!(grid.len(), 15);
        for pt in (0..15).map(|i| grid.target_point(i)) {
            assert!(pt[0] > 0.0 && pt[1] > 0.0);
        }
        // Within a fixed second index, the second coordinate rises with the
        // first (positive correlation tilts the fan).
        for j in 0..3usize {
            let col: Vec<f64> = (0..5).map(|i| grid.target_point(i * 3 + j)[1]).collect();
            for w in col.windows(2) {
                assert!(w[1] > w[0], "fan not monotone: {col:?}");
            }
        }
        let bad = [1.0, 1.5, 1.5, 1.0];
        assert!(correlated_grid(&quantiles, &[2, 2], &bad).is_err());
    }

    #[test]
    fn lagrange_proxy_examples() {
        let constant = lagrange_proxy_1d(&[-1.0, 0.5, 2.0], &[7.0, 7.0, 7.0]).unwrap();
        for x in [-3.0, 0.0, 1.7, 5.0] {
            assert!((constant.eval(x) - 7.0).abs() < 1e-12);
        }
        let square = lagrange_proxy_1d(&[-1.0, 0.0, 1.0], &[1.0, 0.0, 1.0]).unwrap();
        assert!((square.eval(0.5) - 0.25).abs() < 1e-14);
        // Exact at the nodes.
        assert_eq!(square.eval(0.0), 0.0);
        assert_eq!(square.eval(-1.0), 1.0);
        assert!(lagrange_proxy_1d(&[0.0, 0.0], &[1.0, 2.0]).is_err());
        assert!(lagrange_proxy_1d(&[0.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn lagrange_proxy_reproduces_low_degree_polynomials() {
        let f = |x: f64| 2.0 - x + 3.0 * x * x - 0.25 * x * x * x;
        let pts = standard_normal_points(4);
        let vals: Vec<f64> = pts.iter().map(|&x| f(x)).collect();
        let proxy = lagrange_proxy_1d(&pts, &vals).unwrap();
        let mut rng = StreamRng::new(21);
        for _ in 0..200 {
            let x = rng.uniform_in(-3.0, 3.0);
            assert!((proxy.eval(x) - f(x)).abs() < 1e-9 * (1.0 + f(x).abs()));
        }
    }
}
