//! Dense linear algebra for small systems: LU with partial pivoting (the
//! Lagrange interpolation solve), Cholesky factors of correlation matrices
//! and Sturm-bisection eigenvalues of symmetric tridiagonal matrices
//! (Golub-Welsch quadrature nodes).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular to working precision (pivot {pivot:.3e} at column {col})")]
    Singular { col: usize, pivot: f64 },
    #[error("matrix is not positive definite (pivot {pivot:.3e} at column {col})")]
    NotPositiveDefinite { col: usize, pivot: f64 },
}

/// LU factorization with partial pivoting of a square row-major matrix.
#[derive(Clone, Debug)]
pub struct LuFactor {
    n: usize,
    lu: Vec<f64>,
    pivots: Vec<usize>,
}

impl LuFactor {
    pub fn new(mut a: Vec<f64>, n: usize) -> Result<Self, LinalgError> {
        assert_eq!(a.len(), n * n);
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            let mut imax = col;
            let mut vmax = a[col * n + col].abs();
            for row in col + 1..n {
                let v = a[row * n + col].abs();
                if v > vmax {
                    vmax = v;
                    imax = row;
                }
            }
            if vmax == 0.0 || !vmax.is_finite() {
                return Err(LinalgError::Singular { col, pivot: vmax });
            }
            pivots[col] = imax;
            if imax != col {
                for k in 0..n {
                    a.swap(col * n + k, imax * n + k);
                }
            }
            let inv = 1.0 / a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] * inv;
                a[row * n + col] = factor;
                for k in col + 1..n {
                    a[row * n + k] -= factor * a[col * n + k];
                }
            }
        }
        Ok(Self { n, lu: a, pivots })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for i in 0..n {
            b.swap(i, self.pivots[i]);
        }
        for i in 1..n {
            let mut s = b[i];
            for (k, bk) in b[..i].iter().enumerate() {
                s -= self.lu[i * n + k] * bk;
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for (k, bk) in b.iter().enumerate().skip(i + 1) {
                s -= self.lu[i * n + k] * bk;
            }
            b[i] = s / self.lu[i * n + i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// y = A x for a row-major square matrix.
pub fn mat_vec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    assert_eq!(x.len(), n);
    let mut y = vec![0.0; n];
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        let mut s = 0.0;
        for (aij, xj) in row.iter().zip(x) {
            s += aij * xj;
        }
        y[i] = s;
    }
    y
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky_lower(a: &[f64], n: usize) -> Result<Vec<f64>, LinalgError> {
    assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 1e-12 {
                    return Err(LinalgError::NotPositiveDefinite { col: j, pivot: s });
                }
                l[i * n + j] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending, by Sturm
/// sequence bisection. `off[k]` couples rows k and k+1.
pub fn sym_tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1));
    if n == 0 {
        return Vec::new();
    }
    // Gershgorin bound on the spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let off2: Vec<f64> = off.iter().map(|b| b * b).collect();
    // Number of eigenvalues below x (Sturm ratio recurrence
    // q_i = d_i - x - e_{i-1}^2 / q_{i-1}; negatives counted).
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut q = 1.0f64;
        for i in 0..n {
            let sub = if i > 0 { off2[i - 1] / q } else { 0.0 };
            q = diag[i] - x - sub;
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = lo - 1e-12;
        let mut b = hi + 1e-12;
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if count_below(mid) > k {
                b = mid;
            } else {
                a = mid;
            }
            if b - a < 1e-15 * (1.0 + mid.abs()) {
                break;
            }
        }
        eigs.push(0.5 * (a + b));
    }
    eigs
}
