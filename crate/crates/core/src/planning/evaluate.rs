use serde::{Deserialize, Serialize};

use crate::astro::{orbit_to_state, rendezvous_mixed, AstroError, CartesianState, RendezvousSolution, Vector3};

use super::{MissionPlan, Route, Scenario};

/// Which leg receives the leftover whole revolutions in the allocator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlackRule {
    /// Leg with the largest |phase angle|.
    #[default]
    Largest,
    /// Leg with the smallest |phase angle|.
    Smallest,
}

/// Penalty weights and allocator settings shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Fitness units per minute of lateness.
    pub phi: f64,
    /// Fitness units per m/s over budget.
    pub gamma: f64,
    pub slack_rule: SlackRule,
    /// Optional cap on revolutions per leg.
    pub max_revolutions: Option<u32>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            phi: 1.0,
            gamma: 10.0,
            slack_rule: SlackRule::Largest,
            max_revolutions: None,
        }
    }
}

impl EvalConfig {
    pub fn fitness(&self, dv: f64, deadline_penalty_s: f64, budget_penalty: f64) -> f64 {
        dv + self.phi * deadline_penalty_s / 60.0 + self.gamma * budget_penalty
    }
}

/// Zero-revolution Lambert transfer used by the baseline solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambertTransfer {
    /// m/s
    pub impulse1: Vector3,
    pub t1: f64,
    /// m/s
    pub impulse2: Vector3,
    pub t2: f64,
    pub total_dv: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Maneuver {
    Mixed(RendezvousSolution),
    Lambert(LambertTransfer),
}

/// A single servicer → target transfer followed by the repair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Leg {
    pub servicer_id: usize,
    pub target_id: usize,
    pub maneuver: Maneuver,
    /// Rendezvous time, s since epoch.
    pub arrival: f64,
    /// Repair completion, s since epoch.
    pub departure: f64,
}

impl Leg {
    pub fn impulse1(&self) -> (Vector3, f64) {
        match &self.maneuver {
            Maneuver::Mixed(m) => (m.impulse1, m.t1),
            Maneuver::Lambert(l) => (l.impulse1, l.t1),
        }
    }

    pub fn impulse2(&self) -> (Vector3, f64) {
        match &self.maneuver {
            Maneuver::Mixed(m) => (m.impulse2, m.t2),
            Maneuver::Lambert(l) => (l.impulse2, l.t2),
        }
    }

    pub fn coast_time(&self) -> f64 {
        match &self.maneuver {
            Maneuver::Mixed(m) => m.coast_time,
            Maneuver::Lambert(_) => 0.0,
        }
    }

    /// Time between the two impulses.
    pub fn maneuver_time(&self) -> f64 {
        match &self.maneuver {
            Maneuver::Mixed(m) => m.phase_time,
            Maneuver::Lambert(l) => l.t2 - l.t1,
        }
    }

    /// Time from the previous departure to this arrival.
    pub fn transfer_time(&self) -> f64 {
        match &self.maneuver {
            Maneuver::Mixed(m) => m.total_time,
            Maneuver::Lambert(l) => l.t2 - l.t1,
        }
    }

    pub fn dv(&self) -> f64 {
        match &self.maneuver {
            Maneuver::Mixed(m) => m.total_dv,
            Maneuver::Lambert(l) => l.total_dv,
        }
    }

    pub fn revolutions(&self) -> Option<u32> {
        match &self.maneuver {
            Maneuver::Mixed(m) => Some(m.revolutions),
            Maneuver::Lambert(_) => None,
        }
    }
}

/// Simulation result for one servicer's route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteEvaluation {
    pub servicer_id: usize,
    pub legs: Vec<Leg>,
    /// m/s
    pub dv: f64,
    /// Σ max(arrival + repair − deadline, 0), s
    pub deadline_penalty: f64,
    /// max(dv − budget, 0), m/s
    pub budget_penalty: f64,
}

impl RouteEvaluation {
    pub(crate) fn from_legs(scenario: &Scenario, servicer_id: usize, legs: Vec<Leg>) -> Self {
        let dv: f64 = legs.iter().map(Leg::dv).sum();
        let deadline_penalty = legs
            .iter()
            .map(|l| (l.departure - scenario.deadline).max(0.0))
            .sum();
        let budget_penalty = (dv - scenario.servicer(servicer_id).dv_budget).max(0.0);
        Self {
            servicer_id,
            legs,
            dv,
            deadline_penalty,
            budget_penalty,
        }
    }

    /// A route whose transfers could not be computed.
    pub(crate) fn failed(servicer_id: usize) -> Self {
        Self {
            servicer_id,
            legs: Vec::new(),
            dv: f64::INFINITY,
            deadline_penalty: 0.0,
            budget_penalty: f64::INFINITY,
        }
    }

    pub fn fitness(&self, cfg: &EvalConfig) -> f64 {
        cfg.fitness(self.dv, self.deadline_penalty, self.budget_penalty)
    }

    pub fn feasible(&self) -> bool {
        self.deadline_penalty == 0.0 && self.budget_penalty == 0.0
    }

    /// Completion time of the last repair (0 for an empty route).
    pub fn end_time(&self) -> f64 {
        self.legs.last().map_or(0.0, |l| l.departure)
    }
}

/// Full plan assessment: Δv, penalties and penalized fitness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    /// All legs, grouped by servicer in route order.
    pub legs: Vec<Leg>,
    /// m/s, indexed by servicer order
    pub per_servicer_dv: Vec<f64>,
    /// m/s
    pub total_dv: f64,
    /// Total lateness over all repairs, s. Weighted per minute in `fitness`.
    pub deadline_penalty: f64,
    /// Total budget excess, m/s.
    pub budget_penalty: f64,
    pub fitness: f64,
    pub feasible: bool,
}

impl Evaluation {
    pub fn from_routes(routes: Vec<RouteEvaluation>, cfg: &EvalConfig) -> Self {
        let per_servicer_dv: Vec<f64> = routes.iter().map(|r| r.dv).collect();
        let total_dv = per_servicer_dv.iter().sum();
        let deadline_penalty = routes.iter().map(|r| r.deadline_penalty).sum();
        let budget_penalty = routes.iter().map(|r| r.budget_penalty).sum();
        let legs = routes.into_iter().flat_map(|r| r.legs).collect();
        Self {
            legs,
            per_servicer_dv,
            total_dv,
            deadline_penalty,
            budget_penalty,
            fitness: cfg.fitness(total_dv, deadline_penalty, budget_penalty),
            feasible: deadline_penalty == 0.0 && budget_penalty == 0.0,
        }
    }
}

pub(crate) fn initial_state(scenario: &Scenario, servicer_id: usize) -> CartesianState {
    orbit_to_state(&scenario.servicer(servicer_id).orbit, 0.0, &scenario.constants)
}

/// Simulates `targets` in order with the given revolutions per leg.
pub(crate) fn simulate_route(
    scenario: &Scenario,
    servicer_id: usize,
    targets: &[usize],
    revolutions: &[u32],
) -> Result<RouteEvaluation, AstroError> {
    debug_assert_eq!(targets.len(), revolutions.len());
    let consts = &scenario.constants;
    let mut state = initial_state(scenario, servicer_id);
    let mut legs = Vec::with_capacity(targets.len());
    for (&target_id, &k) in targets.iter().zip(revolutions) {
        let target = scenario.target(target_id);
        let sol = rendezvous_mixed(&state, &target.orbit, k, consts)?;
        let arrival = sol.t2;
        let departure = arrival + target.repair_duration;
        legs.push(Leg {
            servicer_id,
            target_id,
            maneuver: Maneuver::Mixed(sol),
            arrival,
            departure,
        });
        state = orbit_to_state(&target.orbit, departure, consts);
    }
    Ok(RouteEvaluation::from_legs(scenario, servicer_id, legs))
}

/// Simulates a route: each leg departs when the previous repair completes.
pub fn evaluate_route(scenario: &Scenario, route: &Route) -> Result<RouteEvaluation, AstroError> {
    simulate_route(scenario, route.servicer_id, &route.target_sequence, &route.revolutions)
}

/// Penalized fitness of a complete plan. Routes whose transfers fail score
/// infinite cost.
pub fn evaluate_plan(scenario: &Scenario, plan: &MissionPlan, cfg: &EvalConfig) -> Evaluation {
    let routes = plan
        .routes
        .iter()
        .map(|r| evaluate_route(scenario, r).unwrap_or_else(|_| RouteEvaluation::failed(r.servicer_id)))
        .collect();
    Evaluation::from_routes(routes, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::{GeoOrbit, PhysicalConstants};
    use approx::assert_relative_eq;
    use chrono::{TimeZone, Utc};

    pub(crate) fn tiny(deadline_days: f64, budget: f64) -> Scenario {
        let c = PhysicalConstants::default();
        Scenario::new(
            Utc.with_ymd_and_hms(2021, 3, 12, 4, 0, 0).unwrap(),
            deadline_days * 86400.0,
            vec![("S".into(), GeoOrbit::from_degrees(1.0, 10.0, 0.0), budget)],
            vec![
                ("A".into(), GeoOrbit::from_degrees(1.0, 10.0, 0.0), 3600.0),
                ("B".into(), GeoOrbit::from_degrees(2.0, 40.0, 100.0), 3600.0),
            ],
            c,
        )
        .unwrap()
    }

    #[test]
    fn empty_route_costs_nothing() {
        let s = tiny(10.0, 1000.0);
        let r = evaluate_route(&s, &Route::empty(1)).unwrap();
        assert_eq!(r.dv, 0.0);
        assert!(r.legs.is_empty());
        assert_eq!(r.end_time(), 0.0);
    }

    #[test]
    fn shared_orbit_leg_is_free() {
        let s = tiny(10.0, 1000.0);
        let route = Route {
            servicer_id: 1,
            target_sequence: vec![1],
            revolutions: vec![1],
        };
        let r = evaluate_route(&s, &route).unwrap();
        assert!(r.dv < 1e-6);
        assert_relative_eq!(r.legs[0].arrival, s.constants.t_geo, max_relative = 1e-9);
    }

    #[test]
    fn arrival_recursion_holds() {
        let s = tiny(30.0, 1000.0);
        let route = Route {
            servicer_id: 1,
            target_sequence: vec![2, 1],
            revolutions: vec![2, 3],
        };
        let r = evaluate_route(&s, &route).unwrap();
        let l0 = &r.legs[0];
        let l1 = &r.legs[1];
        assert_eq!(l0.departure, l0.arrival + 3600.0);
        assert_relative_eq!(l1.arrival - l0.departure, l1.transfer_time(), max_relative = 1e-12);
    }

    #[test]
    fn feasible_plan_fitness_is_dv() {
        let s = tiny(30.0, 1000.0);
        let plan = MissionPlan {
            routes: vec![Route {
                servicer_id: 1,
                target_sequence: vec![1, 2],
                revolutions: vec![3, 3],
            }],
        };
        let cfg = EvalConfig::default();
        let e = evaluate_plan(&s, &plan, &cfg);
        assert!(e.feasible);
        assert_eq!(e.fitness, e.total_dv);
        assert_eq!(e.total_dv, e.per_servicer_dv.iter().sum::<f64>());
    }

    #[test]
    fn lateness_weighted_per_minute() {
        let cfg = EvalConfig::default();
        assert_relative_eq!(cfg.fitness(100.0, 7200.0, 0.0) - 100.0, 120.0 * cfg.phi);
        assert_relative_eq!(cfg.fitness(100.0, 0.0, 50.0) - 100.0, 50.0 * cfg.gamma);
    }

    #[test]
    fn late_and_over_budget_penalized() {
        let cfg = EvalConfig::default();
        // deadline 1.5 days: second leg cannot finish in time
        let s = tiny(1.5, 1.0);
        let plan = MissionPlan {
            routes: vec![Route {
                servicer_id: 1,
                target_sequence: vec![1, 2],
                revolutions: vec![1, 1],
            }],
        };
        let e = evaluate_plan(&s, &plan, &cfg);
        assert!(!e.feasible);
        let last = e.legs.last().unwrap();
        assert_relative_eq!(e.deadline_penalty, last.departure - s.deadline, max_relative = 1e-12);
        assert_relative_eq!(e.budget_penalty, e.total_dv - 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            e.fitness,
            e.total_dv + cfg.phi * e.deadline_penalty / 60.0 + cfg.gamma * e.budget_penalty,
            max_relative = 1e-12
        );
        assert!(e.fitness > e.total_dv);
    }
}
