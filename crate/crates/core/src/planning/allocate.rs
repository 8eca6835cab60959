use crate::astro::AstroError;

use super::evaluate::{simulate_route, RouteEvaluation};
use super::{EvalConfig, Scenario, SlackRule};

// guards floor() against round-off when a time budget is an exact multiple of the period
const FLOOR_TOL: f64 = 1e-9;

/// Largest revolution count allowed for a leg: strictly less than the
/// mission span in periods, and within the configured cap.
pub fn revolution_upper_bound(scenario: &Scenario, cfg: &EvalConfig) -> u32 {
    let span = scenario.deadline / scenario.constants.t_geo;
    let below_span = (span.ceil() as i64 - 1).max(1) as u32;
    match cfg.max_revolutions {
        Some(cap) => below_span.min(cap.max(1)),
        None => below_span,
    }
}

/// Heuristic phasing revolutions for one servicer's target sequence.
///
/// Coast times come from a one-revolution simulation of the route; since every
/// orbit shares the same period they do not depend on the revolutions chosen.
/// The remaining phasing time is split evenly over the legs, and whole
/// periods of slack left after re-simulating go to a single leg picked by
/// `cfg.slack_rule`.
pub fn allocate_revolutions(
    scenario: &Scenario,
    servicer_id: usize,
    sequence: &[usize],
    cfg: &EvalConfig,
) -> Result<Vec<u32>, AstroError> {
    allocate_and_simulate(scenario, servicer_id, sequence, cfg).map(|(revs, _)| revs)
}

/// Like [`allocate_revolutions`], also returning the simulation of the final
/// allocation.
pub(crate) fn allocate_and_simulate(
    scenario: &Scenario,
    servicer_id: usize,
    sequence: &[usize],
    cfg: &EvalConfig,
) -> Result<(Vec<u32>, RouteEvaluation), AstroError> {
    let legs = sequence.len();
    if legs == 0 {
        return Ok((Vec::new(), simulate_route(scenario, servicer_id, sequence, &[])?));
    }
    let period = scenario.constants.t_geo;
    let upper = revolution_upper_bound(scenario, cfg);

    let probe = simulate_route(scenario, servicer_id, sequence, &vec![1; legs])?;
    let coast: f64 = probe.legs.iter().map(|l| l.coast_time()).sum();
    let repair: f64 = sequence.iter().map(|&t| scenario.target(t).repair_duration).sum();
    let phase_budget = scenario.deadline - repair - coast;
    let whole = (phase_budget / period + FLOOR_TOL).floor().max(0.0) as u64;
    let each = ((whole / legs as u64).max(1)).min(upper as u64) as u32;
    let mut revs = vec![each; legs];

    let mut sim = simulate_route(scenario, servicer_id, sequence, &revs)?;
    let slack = scenario.deadline - sim.end_time();
    let extra = (slack / period + FLOOR_TOL).floor();
    if extra >= 1.0 {
        let leg = slack_leg(&sim, cfg.slack_rule);
        let topped = (revs[leg] as f64 + extra).min(upper as f64) as u32;
        if topped != revs[leg] {
            revs[leg] = topped;
            sim = simulate_route(scenario, servicer_id, sequence, &revs)?;
        }
    }
    Ok((revs, sim))
}

fn slack_leg(sim: &RouteEvaluation, rule: SlackRule) -> usize {
    let theta = |i: usize| match &sim.legs[i].maneuver {
        super::Maneuver::Mixed(m) => m.theta.abs(),
        super::Maneuver::Lambert(_) => 0.0,
    };
    let mut best = 0;
    for i in 1..sim.legs.len() {
        let better = match rule {
            SlackRule::Largest => theta(i) > theta(best),
            SlackRule::Smallest => theta(i) < theta(best),
        };
        if better {
            best = i;
        }
    }
    best
}
