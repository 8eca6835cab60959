use crate::astro::{orbit_to_state, rendezvous_mixed, CartesianState};

use super::evaluate::initial_state;
use super::{evaluate_plan, EvalConfig, Evaluation, MissionPlan, PlanningError, Route, Scenario};

pub const ORACLE_MAX_TARGETS: usize = 5;
pub const ORACLE_MAX_REVOLUTIONS: u32 = 6;

#[derive(Debug, Clone)]
struct BestRoute {
    fitness: f64,
    targets: Vec<usize>,
    revolutions: Vec<u32>,
}

/// Minimum-fitness plan over every assignment, ordering and revolution tuple
/// in `[1, max_revolutions]`.
///
/// Route costs are independent across servicers, so the best route for each
/// (servicer, target subset) pair is found first by depth-first enumeration of
/// ordered legs, then the subsets are combined over all assignments.
pub fn exhaustive_solve(
    scenario: &Scenario,
    max_revolutions: u32,
    cfg: &EvalConfig,
) -> Result<(MissionPlan, Evaluation), PlanningError> {
    let m = scenario.target_count();
    if m > ORACLE_MAX_TARGETS || max_revolutions > ORACLE_MAX_REVOLUTIONS || max_revolutions == 0 {
        return Err(PlanningError::InstanceTooLarge {
            targets: m,
            max_revolutions,
        });
    }
    let n = scenario.servicer_count();
    let best: Vec<Vec<Option<BestRoute>>> = (1..=n)
        .map(|k| best_routes_by_subset(scenario, k, max_revolutions, cfg))
        .collect();

    let full = (1usize << m) - 1;
    let mut owner = vec![0usize; m];
    let mut winner: Option<(f64, Vec<usize>)> = None;
    loop {
        let mut masks = vec![0usize; n];
        for (t, &k) in owner.iter().enumerate() {
            masks[k] |= 1 << t;
        }
        let total: f64 = masks
            .iter()
            .enumerate()
            .map(|(k, &mask)| best[k][mask].as_ref().map_or(f64::INFINITY, |r| r.fitness))
            .sum();
        if winner.as_ref().is_none_or(|(f, _)| total < *f) {
            winner = Some((total, masks));
        }
        // next assignment in base-n counting
        let mut i = 0;
        while i < m {
            owner[i] += 1;
            if owner[i] < n {
                break;
            }
            owner[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
    }
    let (_, masks) = winner.expect("at least one assignment");
    debug_assert_eq!(masks.iter().fold(0, |a, b| a | b), full);
    let routes = masks
        .iter()
        .enumerate()
        .map(|(k, &mask)| match &best[k][mask] {
            Some(r) => Route {
                servicer_id: k + 1,
                target_sequence: r.targets.clone(),
                revolutions: r.revolutions.clone(),
            },
            None => Route {
                servicer_id: k + 1,
                target_sequence: mask_targets(mask),
                revolutions: vec![1; mask.count_ones() as usize],
            },
        })
        .collect();
    let plan = MissionPlan { routes };
    let eval = evaluate_plan(scenario, &plan, cfg);
    Ok((plan, eval))
}

fn mask_targets(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|t| mask & (1 << t) != 0).map(|t| t + 1).collect()
}

struct Search<'a> {
    scenario: &'a Scenario,
    cfg: &'a EvalConfig,
    budget: f64,
    max_revolutions: u32,
    targets: Vec<usize>,
    revolutions: Vec<u32>,
    best: Vec<Option<BestRoute>>,
}

impl Search<'_> {
    fn visit(&mut self, state: &CartesianState, mask: usize, dv: f64, late: f64) {
        let fitness = self.cfg.fitness(dv, late, (dv - self.budget).max(0.0));
        if self.best[mask].as_ref().is_none_or(|b| fitness < b.fitness) {
            self.best[mask] = Some(BestRoute {
                fitness,
                targets: self.targets.clone(),
                revolutions: self.revolutions.clone(),
            });
        }
        let consts = &self.scenario.constants;
        for t in 0..self.scenario.target_count() {
            if mask & (1 << t) != 0 {
                continue;
            }
            let target = self.scenario.target(t + 1);
            for k in 1..=self.max_revolutions {
                let Ok(leg) = rendezvous_mixed(state, &target.orbit, k, consts) else {
                    continue;
                };
                let departure = leg.t2 + target.repair_duration;
                let next = orbit_to_state(&target.orbit, departure, consts);
                self.targets.push(t + 1);
                self.revolutions.push(k);
                self.visit(
                    &next,
                    mask | (1 << t),
                    dv + leg.total_dv,
                    late + (departure - self.scenario.deadline).max(0.0),
                );
                self.targets.pop();
                self.revolutions.pop();
            }
        }
    }
}

fn best_routes_by_subset(
    scenario: &Scenario,
    servicer_id: usize,
    max_revolutions: u32,
    cfg: &EvalConfig,
) -> Vec<Option<BestRoute>> {
    let mut search = Search {
        scenario,
        cfg,
        budget: scenario.servicer(servicer_id).dv_budget,
        max_revolutions,
        targets: Vec::new(),
        revolutions: Vec::new(),
        best: vec![None; 1 << scenario.target_count()],
    };
    search.visit(&initial_state(scenario, servicer_id), 0, 0.0, 0.0);
    search.best
}
