//! Risk-factor models: parametric curves, Hull-White and G2++ short rates,
//! multi-currency FX systems and their simulated state panels.

pub mod curve;
pub mod g2;
pub mod hull_white;
pub mod state;
pub mod system;

pub use curve::DiscountCurve;
pub use g2::{G2Params, G2StepMoments};
pub use hull_white::HullWhiteParams;
pub use state::{FactorId, ModelState};
pub use system::{BshwSystem, FxLeg, G2FxLeg, G2FxSystem, ModelError, RateModelRef, SystemModel};
