use serde::{Deserialize, Serialize};

use crate::astro::{lambert_solve, orbit_to_state, CartesianState, KM_S_TO_M_S};

use super::allocate::allocate_and_simulate;
use super::evaluate::{initial_state, Evaluation, Leg, RouteEvaluation};
use super::{EvalConfig, LambertTransfer, Maneuver, MissionPlan, Route, Scenario};

/// Turns a target ordering into a concrete route and its simulation. The
/// search operates on orderings only; the model decides the timing.
pub trait TransferModel: Sync {
    type Route: Clone + Send + Sync + std::fmt::Debug;
    type Plan: Clone + Send + Sync + std::fmt::Debug + Serialize;

    fn eval_config(&self) -> &EvalConfig;

    fn plan_route(&self, scenario: &Scenario, servicer_id: usize, sequence: &[usize]) -> (Self::Route, RouteEvaluation);

    fn sequence<'a>(&self, route: &'a Self::Route) -> &'a [usize];

    fn assemble(&self, routes: Vec<Self::Route>) -> Self::Plan;

    /// Routes for every servicer plus the plan-level evaluation.
    fn plan(&self, scenario: &Scenario, sequences: &[Vec<usize>]) -> (Vec<Self::Route>, Vec<RouteEvaluation>) {
        sequences
            .iter()
            .enumerate()
            .map(|(i, seq)| self.plan_route(scenario, i + 1, seq))
            .unzip()
    }
}

/// Plane change merged with a multi-revolution phasing ellipse; revolutions
/// come from [`allocate_revolutions`](super::allocate_revolutions).
#[derive(Debug, Clone, Default)]
pub struct MixedModel {
    pub cfg: EvalConfig,
}

impl TransferModel for MixedModel {
    type Route = Route;
    type Plan = MissionPlan;

    fn eval_config(&self) -> &EvalConfig {
        &self.cfg
    }

    fn plan_route(&self, scenario: &Scenario, servicer_id: usize, sequence: &[usize]) -> (Route, RouteEvaluation) {
        match allocate_and_simulate(scenario, servicer_id, sequence, &self.cfg) {
            Ok((revolutions, eval)) => (
                Route {
                    servicer_id,
                    target_sequence: sequence.to_vec(),
                    revolutions,
                },
                eval,
            ),
            Err(_) => (
                Route {
                    servicer_id,
                    target_sequence: sequence.to_vec(),
                    revolutions: vec![1; sequence.len()],
                },
                RouteEvaluation::failed(servicer_id),
            ),
        }
    }

    fn sequence<'a>(&self, route: &'a Route) -> &'a [usize] {
        &route.target_sequence
    }

    fn assemble(&self, routes: Vec<Route>) -> MissionPlan {
        MissionPlan { routes }
    }
}

/// Builds a mixed-strategy plan with allocated revolutions from orderings.
pub fn plan_from_sequences(scenario: &Scenario, sequences: &[Vec<usize>], cfg: &EvalConfig) -> (MissionPlan, Evaluation) {
    let model = MixedModel { cfg: *cfg };
    let (routes, evals) = model.plan(scenario, sequences);
    (MissionPlan { routes }, Evaluation::from_routes(evals, cfg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambertRoute {
    pub servicer_id: usize,
    pub target_sequence: Vec<usize>,
    /// Flight time of each leg, s.
    pub flight_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambertPlan {
    pub routes: Vec<LambertRoute>,
}

/// Zero-revolution prograde Lambert transfers. Each leg may use at most an
/// equal share of the time still unspent; within that share the cheapest
/// flight time on the grid is taken.
#[derive(Debug, Clone)]
pub struct LambertModel {
    pub cfg: EvalConfig,
    /// Candidate flight times, s, ascending.
    pub tof_grid: Vec<f64>,
}

impl LambertModel {
    pub fn new(cfg: EvalConfig, mut tof_grid: Vec<f64>) -> Self {
        tof_grid.retain(|t| *t > 0.0);
        tof_grid.sort_by(f64::total_cmp);
        tof_grid.dedup();
        assert!(!tof_grid.is_empty(), "flight time grid needs a positive entry");
        Self { cfg, tof_grid }
    }

    /// Sixteen flight times from T/8 to 2T.
    pub fn default_grid(scenario: &Scenario) -> Vec<f64> {
        let t = scenario.constants.t_geo;
        (1..=16).map(|i| i as f64 * t / 8.0).filter(|&x| x < scenario.deadline).collect()
    }

    fn leg_cost(
        &self,
        scenario: &Scenario,
        from: &CartesianState,
        target: usize,
        tof: f64,
    ) -> Option<(LambertTransfer, CartesianState)> {
        let consts = &scenario.constants;
        let arrival = orbit_to_state(&scenario.target(target).orbit, from.t + tof, consts);
        let (v1, v2) = lambert_solve(&from.r, &arrival.r, tof, true, consts).ok()?;
        let impulse1 = (v1 - from.v) * KM_S_TO_M_S;
        let impulse2 = (arrival.v - v2) * KM_S_TO_M_S;
        let transfer = LambertTransfer {
            impulse1,
            t1: from.t,
            impulse2,
            t2: arrival.t,
            total_dv: impulse1.norm() + impulse2.norm(),
        };
        transfer.total_dv.is_finite().then_some((transfer, arrival))
    }
}

impl TransferModel for LambertModel {
    type Route = LambertRoute;
    type Plan = LambertPlan;

    fn eval_config(&self) -> &EvalConfig {
        &self.cfg
    }

    fn plan_route(&self, scenario: &Scenario, servicer_id: usize, sequence: &[usize]) -> (LambertRoute, RouteEvaluation) {
        let consts = &scenario.constants;
        let mut state = initial_state(scenario, servicer_id);
        let mut repair_left: f64 = sequence.iter().map(|&t| scenario.target(t).repair_duration).sum();
        let mut legs = Vec::with_capacity(sequence.len());
        let mut flight_times = Vec::with_capacity(sequence.len());
        for (i, &target) in sequence.iter().enumerate() {
            let remaining_legs = (sequence.len() - i) as f64;
            let share = (scenario.deadline - state.t - repair_left) / remaining_legs;
            let allowed: Vec<f64> = match self.tof_grid.iter().copied().filter(|&t| t <= share).collect::<Vec<_>>() {
                v if v.is_empty() => vec![self.tof_grid[0]],
                v => v,
            };
            let mut best: Option<(LambertTransfer, CartesianState, f64)> = None;
            for tof in allowed {
                if let Some((tr, arr)) = self.leg_cost(scenario, &state, target, tof) {
                    if best.as_ref().is_none_or(|(b, _, _)| tr.total_dv < b.total_dv) {
                        best = Some((tr, arr, tof));
                    }
                }
            }
            let Some((transfer, arrival, tof)) = best else {
                let route = LambertRoute {
                    servicer_id,
                    target_sequence: sequence.to_vec(),
                    flight_times: vec![self.tof_grid[0]; sequence.len()],
                };
                return (route, RouteEvaluation::failed(servicer_id));
            };
            let repair = scenario.target(target).repair_duration;
            repair_left -= repair;
            let departure = arrival.t + repair;
            legs.push(Leg {
                servicer_id,
                target_id: target,
                maneuver: Maneuver::Lambert(transfer),
                arrival: arrival.t,
                departure,
            });
            flight_times.push(tof);
            state = orbit_to_state(&scenario.target(target).orbit, departure, consts);
        }
        let route = LambertRoute {
            servicer_id,
            target_sequence: sequence.to_vec(),
            flight_times,
        };
        (route, RouteEvaluation::from_legs(scenario, servicer_id, legs))
    }

    fn sequence<'a>(&self, route: &'a LambertRoute) -> &'a [usize] {
        &route.target_sequence
    }

    fn assemble(&self, routes: Vec<LambertRoute>) -> LambertPlan {
        LambertPlan { routes }
    }
}
