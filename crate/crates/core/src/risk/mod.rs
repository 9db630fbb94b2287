//! Economic utilities and the expected-loss engine.

mod engine;
pub mod quadrature;
mod utility;

pub use engine::{expected_loss_with, DecisionRisk, RiskEngine, RiskReport};
pub use quadrature::{simpson, simpson_with_floor, QuadEstimate, QuadratureConfig};
pub use utility::{utility_mc, AvailabilityUtility};
