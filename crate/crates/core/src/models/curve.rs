//! Parametric discount curves.
//!
//! Curves are named parametric families rather than quote tables: the flat
//! family `P(0,t) = exp(-r t)` and a polynomial zero-yield family
//! `P(0,t) = exp(-t (c0 + c1 t + c2 t^2))`. Both expose the instantaneous
//! forward `f(0,t) = -d log P / dt` and its slope, which the short-rate
//! term-structure fits consume.

/// A deterministic initial discount curve `P(0, t)`.
#[derive(Clone, Debug, PartialEq)]
pub enum DiscountCurve {
    /// `P(0,t) = exp(-rate * t)`.
    FlatYield { rate: f64 },
    /// `P(0,t) = exp(-t (c0 + c1 t + c2 t^2))`.
    PolyYield { c0: f64, c1: f64, c2: f64 },
}

impl DiscountCurve {
    pub fn flat(rate: f64) -> Self {
        DiscountCurve::FlatYield { rate }
    }

    /// `P(0, t)`.
    pub fn discount(&self, t: f64) -> f64 {
        match *self {
            DiscountCurve::FlatYield { rate } => (-rate * t).exp(),
            DiscountCurve::PolyYield { c0, c1, c2 } => (-t * (c0 + c1 * t + c2 * t * t)).exp(),
        }
    }

    /// Instantaneous forward rate `f(0,t) = -d/dt log P(0,t)`.
    pub fn forward(&self, t: f64) -> f64 {
        match *self {
            DiscountCurve::FlatYield { rate } => rate,
            DiscountCurve::PolyYield { c0, c1, c2 } => c0 + 2.0 * c1 * t + 3.0 * c2 * t * t,
        }
    }

    /// `d f(0,t) / dt`.
    pub fn forward_slope(&self, t: f64) -> f64 {
        match *self {
            DiscountCurve::FlatYield { .. } => 0.0,
            DiscountCurve::PolyYield { c1, c2, .. } => 2.0 * c1 + 6.0 * c2 * t,
        }
    }

    /// The flat short rate when the curve is the flat family.
    pub fn flat_rate(&self) -> Option<f64> {
        match *self {
            DiscountCurve::FlatYield { rate } => Some(rate),
            _ => None,
        }
    }

    /// Sanity check used at configuration load: positive and decreasing
    /// over the quoted horizon.
    pub fn is_decreasing_to(&self, horizon: f64) -> bool {
        let mut prev = 1.0;
        let steps = 200;
        for i in 1..=steps {
            let t = horizon * i as f64 / steps as f64;
            let p = self.discount(t);
            if !(p > 0.0) || p > prev {
                return false;
            }
            prev = p;
        }
        true
    }
}
