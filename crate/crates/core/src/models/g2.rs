//! Two-factor Gaussian short-rate model (G2++ / HW2F).
//!
//! `r(t) = x(t) + y(t) + psi(t)` with centred OU factors
//!
//! ```text
//! dx = -lambda1 x dt + eta1 dW1,   dy = -lambda2 y dt + eta2 dW2,
//! dW1 dW2 = rho dt,   x(0) = y(0) = 0,
//! ```
//!
//! and `psi` the deterministic shift fitting the initial curve. Bonds
//! reconstruct as `P(t,T) = exp(A(t,T) - x B1(t,T) - y B2(t,T))` with
//! `A(t,T) = log(P(0,T)/P(0,t)) + (V^2(t,T) - V^2(0,T) + V^2(0,t))/2`,
//! where `V^2(t,T)` is the variance of the integrated short rate over
//! `[t, T]`. The convention is pinned by the martingale tests
//! `E[M(0)/M(T)] = P(0,T)`.

use super::curve::DiscountCurve;

#[derive(Clone, Debug)]
pub struct G2Params {
    pub lambda1: f64,
    pub eta1: f64,
    pub lambda2: f64,
    pub eta2: f64,
    /// Correlation between the factor Brownian motions, in [-1, 1].
    pub rho: f64,
    pub curve: DiscountCurve,
}

impl G2Params {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.lambda1 > 0.0 && self.lambda2 > 0.0) {
            return Err("G2 mean reversions must be positive".into());
        }
        if self.eta1 < 0.0 || self.eta2 < 0.0 {
            return Err("G2 volatilities must be non-negative".into());
        }
        if self.rho.abs() > 1.0 {
            return Err(format!("G2 factor correlation {} outside [-1, 1]", self.rho));
        }
        Ok(())
    }

    /// `B_j(t,T) = (1 - e^{-lambda_j (T-t)}) / lambda_j`.
    pub fn b1(&self, t: f64, maturity: f64) -> f64 {
        (1.0 - (-self.lambda1 * (maturity - t)).exp()) / self.lambda1
    }

    pub fn b2(&self, t: f64, maturity: f64) -> f64 {
        (1.0 - (-self.lambda2 * (maturity - t)).exp()) / self.lambda2
    }

    /// `B_{1,2}(t,T) = (1 - e^{-(lambda1+lambda2)(T-t)}) / (lambda1+lambda2)`.
    pub fn b12(&self, t: f64, maturity: f64) -> f64 {
        let l = self.lambda1 + self.lambda2;
        (1.0 - (-l * (maturity - t)).exp()) / l
    }

    /// Variance of `int_t^T r(u) du` contributed by the stochastic factors.
    pub fn v2(&self, t: f64, maturity: f64) -> f64 {
        let tau = maturity - t;
        let b1 = self.b1(t, maturity);
        let b2 = self.b2(t, maturity);
        let b12 = self.b12(t, maturity);
        let t1 = self.eta1 * self.eta1 / (self.lambda1 * self.lambda1)
            * (tau - b1 - 0.5 * self.lambda1 * b1 * b1);
        let t2 = self.eta2 * self.eta2 / (self.lambda2 * self.lambda2)
            * (tau - b2 - 0.5 * self.lambda2 * b2 * b2);
        let t12 = 2.0 * self.rho * self.eta1 * self.eta2 / (self.lambda1 * self.lambda2)
            * (tau - b1 - b2 + b12);
        t1 + t2 + t12
    }

    /// `A(t,T)` of the bond reconstruction, in log form.
    pub fn bond_log_a(&self, t: f64, maturity: f64) -> f64 {
        (self.curve.discount(maturity) / self.curve.discount(t)).ln()
            + 0.5 * (self.v2(t, maturity) - self.v2(0.0, maturity) + self.v2(0.0, t))
    }

    /// `P(t, T)` given the factor state.
    pub fn zcb(&self, t: f64, maturity: f64, x: f64, y: f64) -> f64 {
        (self.bond_log_a(t, maturity)
            - x * self.b1(t, maturity)
            - y * self.b2(t, maturity))
        .exp()
    }

    /// `(log A, B1, B2)` for the evaluator's bond tables.
    pub fn bond_coeffs(&self, t: f64, maturity: f64) -> (f64, f64, f64) {
        (self.bond_log_a(t, maturity), self.b1(t, maturity), self.b2(t, maturity))
    }

    /// Deterministic shift `psi(t)` fitting the initial curve.
    pub fn psi(&self, t: f64) -> f64 {
        let g1 = 1.0 - (-self.lambda1 * t).exp();
        let g2 = 1.0 - (-self.lambda2 * t).exp();
        self.curve.forward(t)
            + self.eta1 * self.eta1 / (2.0 * self.lambda1 * self.lambda1) * g1 * g1
            + self.eta2 * self.eta2 / (2.0 * self.lambda2 * self.lambda2) * g2 * g2
            + self.rho * self.eta1 * self.eta2 / (self.lambda1 * self.lambda2) * g1 * g2
    }

    /// Conditional step moments of the factor pair over `[s, t]`:
    /// decays, standard deviations and the cross-correlation.
    pub fn step_moments(&self, s: f64, t: f64) -> G2StepMoments {
        let dt = t - s;
        let d1 = (-self.lambda1 * dt).exp();
        let d2 = (-self.lambda2 * dt).exp();
        let v1 = self.eta1 * self.eta1 * (1.0 - d1 * d1) / (2.0 * self.lambda1);
        let v2 = self.eta2 * self.eta2 * (1.0 - d2 * d2) / (2.0 * self.lambda2);
        let cov = self.rho * self.eta1 * self.eta2 * self.b12(0.0, dt);
        let sd1 = v1.sqrt();
        let sd2 = v2.sqrt();
        let corr = if sd1 > 0.0 && sd2 > 0.0 { (cov / (sd1 * sd2)).clamp(-1.0, 1.0) } else { 0.0 };
        G2StepMoments { decay1: d1, decay2: d2, sd1, sd2, corr }
    }

    /// Means of `(x(T), y(T))` under the T-forward measure given the state
    /// at `s` is zero; the state contribution decays separately.
    pub fn forward_mean_shift(&self, s: f64, horizon: f64) -> (f64, f64) {
        let (l1, l2) = (self.lambda1, self.lambda2);
        let (e1, e2) = (self.eta1, self.eta2);
        let tau = horizon - s;
        let g1 = 1.0 - (-l1 * tau).exp();
        let g2 = 1.0 - (-l2 * tau).exp();
        let g11 = 1.0 - (-2.0 * l1 * tau).exp();
        let g22 = 1.0 - (-2.0 * l2 * tau).exp();
        let g12 = 1.0 - (-(l1 + l2) * tau).exp();
        let mx = -((e1 * e1 / (l1 * l1) + self.rho * e1 * e2 / (l1 * l2)) * g1
            - e1 * e1 / (2.0 * l1 * l1) * g11
            - self.rho * e1 * e2 / (l2 * (l1 + l2)) * g12);
        let my = -((e2 * e2 / (l2 * l2) + self.rho * e1 * e2 / (l1 * l2)) * g2
            - e2 * e2 / (2.0 * l2 * l2) * g22
            - self.rho * e1 * e2 / (l1 * (l1 + l2)) * g12);
        (mx, my)
    }

    /// Covariance matrix of `(x(T), y(T), I(T))` with
    /// `I(T) = int_0^T (x + y) du`, row-major 3x3. Exact; used for
    /// discretization-free sampling of terminal states and discounting.
    pub fn terminal_and_integral_covariance(&self, horizon: f64) -> [f64; 9] {
        let (l1, l2) = (self.lambda1, self.lambda2);
        let (e1, e2) = (self.eta1, self.eta2);
        let rho = self.rho;
        let b1 = self.b1(0.0, horizon);
        let b2 = self.b2(0.0, horizon);
        let b12 = self.b12(0.0, horizon);
        let g11 = (1.0 - (-2.0 * l1 * horizon).exp()) / (2.0 * l1);
        let g22 = (1.0 - (-2.0 * l2 * horizon).exp()) / (2.0 * l2);
        let var_x = e1 * e1 * g11;
        let var_y = e2 * e2 * g22;
        let cov_xy = rho * e1 * e2 * b12;
        // Cov(x, I_x) and the cross pieces follow from the dW kernels
        // e^{-l (T-u)} for the factor and (1 - e^{-l (T-u)})/l for its integral.
        let cov_x_ix = e1 * e1 / l1 * (b1 - g11);
        let cov_x_iy = rho * e1 * e2 / l2 * (b1 - b12);
        let cov_y_iy = e2 * e2 / l2 * (b2 - g22);
        let cov_y_ix = rho * e1 * e2 / l1 * (b2 - b12);
        let var_ix = e1 * e1 / (l1 * l1) * (horizon - 2.0 * b1 + g11);
        let var_iy = e2 * e2 / (l2 * l2) * (horizon - 2.0 * b2 + g22);
        let cov_ix_iy = rho * e1 * e2 / (l1 * l2) * (horizon - b1 - b2 + b12);
        let cov_x_i = cov_x_ix + cov_x_iy;
        let cov_y_i = cov_y_ix + cov_y_iy;
        let var_i = var_ix + var_iy + 2.0 * cov_ix_iy;
        [var_x, cov_xy, cov_x_i, cov_xy, var_y, cov_y_i, cov_x_i, cov_y_i, var_i]
    }
}

/// Exact transition moments of the factor pair over one step.
#[derive(Clone, Copy, Debug)]
pub struct G2StepMoments {
    pub decay1: f64,
    pub decay2: f64,
    pub sd1: f64,
    pub sd2: f64,
    pub corr: f64,
}

impl G2StepMoments {
    /// Applies the step to a state with two standard normal draws.
    #[inline]
    pub fn step(&self, x: f64, y: f64, z1: f64, z2: f64) -> (f64, f64) {
        let zc = self.corr * z1 + (1.0 - self.corr * self.corr).sqrt() * z2;
        (x * self.decay1 + self.sd1 * z1, y * self.decay2 + self.sd2 * zc)
    }
}
