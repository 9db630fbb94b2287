//! Risk-based short-term maintenance planning for a truck that raises a fault
//! alarm in the middle of a delivery.
//!
//! Three decisions are compared: drive to the nearest workshop at reduced
//! speed ([`Decision::Wr`]), at normal speed ([`Decision::Wn`]), or deliver
//! first and repair afterwards ([`Decision::Cn`]). The remaining useful life
//! of the faulty component is Gamma distributed per decision. Each decision's
//! economic risk is the expected utility of its availability loss plus its
//! maintenance cost, and the planner picks the decision with minimal risk.
//!
//! ```
//! use mer_core::{Decision, ImpactSelection, RiskEngine, Scenario};
//!
//! let scenario = Scenario::preset("paper-calibrated").unwrap().with_alarm(200.0).unwrap();
//! let (decision, report) = RiskEngine::new(&scenario)
//!     .choose_decision(ImpactSelection::Both)
//!     .unwrap();
//! assert_eq!(decision, Decision::Wn);
//! assert!(report.min_total() <= report.risk(Decision::Cn).total);
//! ```
//!
//! The guide in `book/` walks through each model; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod decision;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod impacts;
pub mod output;
pub mod risk;
pub mod rul;
pub mod scenario;
pub mod special;

pub use decision::{Decision, Impact, ImpactSelection};
pub use error::{Error, Result};
pub use experiments::{eer, sweep, EerReport, SweepResult};
pub use geometry::{Itinerary, RouteGeometry, SpeedProfile, Workshop};
pub use impacts::{Condition, ImpactModel, ImpactOutcome, MaintenanceParams};
pub use risk::{AvailabilityUtility, DecisionRisk, QuadratureConfig, RiskEngine, RiskReport};
pub use rul::{GammaDist, GammaRul, RulDistribution};
pub use scenario::{load_scenario, Numerics, Scenario};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/rul.md")]
    mod rul {}
    #[doc = include_str!("../../../book/src/impacts.md")]
    mod impacts {}
    #[doc = include_str!("../../../book/src/risk.md")]
    mod risk {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
