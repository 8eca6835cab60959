//! Plans, route simulation, penalized fitness, revolution allocation and an
//! exhaustive optimum for small instances.

mod allocate;
mod chromosome;
mod evaluate;
mod model;
mod models;
mod oracle;

use thiserror::Error;

pub use allocate::{allocate_revolutions, revolution_upper_bound};
pub use chromosome::Chromosome;
pub use evaluate::{
    evaluate_plan, evaluate_route, EvalConfig, Evaluation, LambertTransfer, Leg, Maneuver, RouteEvaluation,
    SlackRule,
};
pub use model::{MissionPlan, Route, Scenario, Servicer, Target};
pub use models::{plan_from_sequences, LambertModel, LambertPlan, LambertRoute, MixedModel, TransferModel};
pub use oracle::{exhaustive_solve, ORACLE_MAX_REVOLUTIONS, ORACLE_MAX_TARGETS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanningError {
    #[error(
        "instance too large for exhaustive search: {targets} targets, {max_revolutions} revolutions \
         (limits {ORACLE_MAX_TARGETS} and 1..={ORACLE_MAX_REVOLUTIONS})"
    )]
    InstanceTooLarge { targets: usize, max_revolutions: u32 },
}
