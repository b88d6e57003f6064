//! Shared numerical kernels: deterministic RNG substreams, normal-distribution
//! functions, dense linear algebra, Gauss quadrature and order statistics.

pub mod linalg;
pub mod normal;
pub mod quadrature;
pub mod rng;
pub mod stats;
