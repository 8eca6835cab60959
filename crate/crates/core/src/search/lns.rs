use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::astro::{dihedral_angle, phase_angle};
use crate::planning::{EvalConfig, Evaluation, RouteEvaluation, Scenario, TransferModel};

use super::{LnsParams, SearchError};

/// Keeps relatedness finite for identical targets on the same route.
pub const RELATEDNESS_EPSILON: f64 = 1e-6;

/// How the route term of the relatedness measure is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteTerm {
    /// 0 when both targets are served by the same servicer.
    #[default]
    SameRoute,
    /// 0 only when the two targets are consecutive on a route.
    Adjacent,
}

/// A complete solution as the search sees it: per-servicer routes with their
/// simulations.
#[derive(Debug, Clone)]
pub struct Candidate<R> {
    pub routes: Vec<R>,
    pub evals: Vec<RouteEvaluation>,
    pub fitness: f64,
}

impl<R: Clone> Candidate<R> {
    pub fn new(routes: Vec<R>, evals: Vec<RouteEvaluation>, cfg: &EvalConfig) -> Self {
        let fitness = plan_fitness(&evals, cfg);
        Self { routes, evals, fitness }
    }

    pub fn from_sequences<M: TransferModel<Route = R>>(model: &M, scenario: &Scenario, sequences: &[Vec<usize>]) -> Self {
        let (routes, evals) = model.plan(scenario, sequences);
        Self::new(routes, evals, model.eval_config())
    }

    pub fn sequences<M: TransferModel<Route = R>>(&self, model: &M) -> Vec<Vec<usize>> {
        self.routes.iter().map(|r| model.sequence(r).to_vec()).collect()
    }

    pub fn evaluation(&self, cfg: &EvalConfig) -> Evaluation {
        Evaluation::from_routes(self.evals.clone(), cfg)
    }
}

/// Same arithmetic as [`Evaluation::from_routes`], without building legs.
pub(crate) fn plan_fitness(evals: &[RouteEvaluation], cfg: &EvalConfig) -> f64 {
    let dv: f64 = evals.iter().map(|r| r.dv).sum();
    let late: f64 = evals.iter().map(|r| r.deadline_penalty).sum();
    let over: f64 = evals.iter().map(|r| r.budget_penalty).sum();
    cfg.fitness(dv, late, over)
}

/// Normalized orbital dissimilarity C' between every pair of targets.
#[derive(Debug, Clone)]
pub struct RelatednessTable {
    m: usize,
    cost: Vec<f64>,
    term: RouteTerm,
}

impl RelatednessTable {
    /// C = β·α + (1 − β)·|Δu|, with α the dihedral angle and Δu the phase
    /// difference folded into [0, π], divided by the largest pairwise C.
    pub fn new(scenario: &Scenario, beta: f64, term: RouteTerm) -> Self {
        let m = scenario.target_count();
        let consts = &scenario.constants;
        let mut raw = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    let a = &scenario.targets[i].orbit;
                    let b = &scenario.targets[j].orbit;
                    let alpha = dihedral_angle(a, b);
                    let theta = phase_angle(a, b, 0.0, consts).abs();
                    raw[i * m + j] = beta * alpha + (1.0 - beta) * theta;
                }
            }
        }
        Self::from_costs(m, raw, term)
    }

    /// Table from raw pairwise costs, row-major `m × m`.
    pub fn from_costs(m: usize, raw: Vec<f64>, term: RouteTerm) -> Self {
        assert_eq!(raw.len(), m * m);
        let max = raw.iter().copied().fold(0.0, f64::max);
        let cost = if max > 0.0 { raw.iter().map(|c| c / max).collect() } else { raw };
        Self { m, cost, term }
    }

    /// C' for targets `i`, `j` (1-based).
    pub fn normalized_cost(&self, i: usize, j: usize) -> f64 {
        self.cost[(i - 1) * self.m + (j - 1)]
    }

    /// R(i, j) = 1 / (C' + V + ε) under the route assignment `sequences`.
    pub fn relatedness(&self, i: usize, j: usize, sequences: &[Vec<usize>]) -> f64 {
        let v = match self.term {
            RouteTerm::SameRoute => {
                let together = sequences.iter().any(|s| s.contains(&i) && s.contains(&j));
                if together { 0.0 } else { 1.0 }
            }
            RouteTerm::Adjacent => {
                let adjacent = sequences
                    .iter()
                    .any(|s| s.windows(2).any(|w| (w[0] == i && w[1] == j) || (w[0] == j && w[1] == i)));
                if adjacent { 0.0 } else { 1.0 }
            }
        };
        1.0 / (self.normalized_cost(i, j) + v + RELATEDNESS_EPSILON)
    }
}

/// Relatedness of targets `i` and `j` under `sequences`.
pub fn relatedness(i: usize, j: usize, sequences: &[Vec<usize>], beta: f64, scenario: &Scenario) -> f64 {
    RelatednessTable::new(scenario, beta, RouteTerm::SameRoute).relatedness(i, j, sequences)
}

/// Number of targets removed by one destroy step.
pub fn removal_count(targets: usize, remove_rate: f64) -> usize {
    // 10 × 0.3 is 3.0000000000000004 in binary
    let n = (targets as f64 * remove_rate - 1e-9).ceil() as usize;
    n.clamp(1, targets)
}

/// Removes a random target, then repeatedly the `⌊y^p·|L|⌋`-th most related
/// remaining target to the last one removed. Returns the removed targets in
/// removal order and the remaining sequences.
pub fn destroy<R: Rng + ?Sized>(
    sequences: &[Vec<usize>],
    params: &LnsParams,
    table: &RelatednessTable,
    rng: &mut R,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut remaining: Vec<usize> = sequences.iter().flatten().copied().collect();
    remaining.sort_unstable();
    let count = removal_count(remaining.len(), params.remove_rate);
    let first = remaining.remove(rng.gen_range(0..remaining.len()));
    let mut removed = vec![first];
    while removed.len() < count {
        let last = *removed.last().unwrap();
        let mut ranked: Vec<(f64, usize)> = remaining
            .iter()
            .map(|&t| (table.relatedness(last, t, sequences), t))
            .collect();
        // most related first; ties by target id
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let y: f64 = rng.gen();
        let idx = ((y.powf(params.determinism_p) * ranked.len() as f64) as usize).min(ranked.len() - 1);
        let pick = ranked[idx].1;
        remaining.retain(|&t| t != pick);
        removed.push(pick);
    }
    let partial = sequences
        .iter()
        .map(|s| s.iter().copied().filter(|t| !removed.contains(t)).collect())
        .collect();
    (removed, partial)
}

/// Where a target is inserted: servicer index (0-based) and slot in its
/// sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub route: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy)]
struct Scan {
    // best among insertions leaving the route feasible
    feasible: Option<(f64, Position)>,
    // best by fitness delta, penalties included
    penalized: (f64, Position),
}

fn scan_route<M: TransferModel>(
    model: &M,
    scenario: &Scenario,
    target: usize,
    partial: &Candidate<M::Route>,
    route: usize,
) -> Scan {
    let cfg = model.eval_config();
    let seq = model.sequence(&partial.routes[route]);
    let base = partial.evals[route].fitness(cfg);
    let mut scan = Scan {
        feasible: None,
        penalized: (f64::INFINITY, Position { route, slot: 0 }),
    };
    for slot in 0..=seq.len() {
        let mut trial = seq.to_vec();
        trial.insert(slot, target);
        let (_, eval) = model.plan_route(scenario, route + 1, &trial);
        let delta = eval.fitness(cfg) - base;
        let pos = Position { route, slot };
        if delta < scan.penalized.0 {
            scan.penalized = (delta, pos);
        }
        if eval.feasible() && scan.feasible.is_none_or(|(d, _)| delta < d) {
            scan.feasible = Some((delta, pos));
        }
    }
    scan
}

fn merge(scans: &[Scan]) -> (Option<(f64, Position)>, (f64, Position)) {
    let mut feasible: Option<(f64, Position)> = None;
    let mut penalized = scans[0].penalized;
    for s in scans {
        if let Some((d, p)) = s.feasible {
            if feasible.is_none_or(|(b, _)| d < b) {
                feasible = Some((d, p));
            }
        }
        if s.penalized.0 < penalized.0 {
            penalized = s.penalized;
        }
    }
    (feasible, penalized)
}

/// Cheapest feasible insertion of `target` into `partial`: the fitness
/// increase and its position. Insertions that leave the receiving route late
/// or over budget are not considered.
pub fn insertion_cost<M: TransferModel>(
    model: &M,
    scenario: &Scenario,
    target: usize,
    partial: &Candidate<M::Route>,
) -> Result<(f64, Position), SearchError> {
    let scans: Vec<_> = (0..partial.routes.len())
        .map(|k| scan_route(model, scenario, target, partial, k))
        .collect();
    merge(&scans).0.ok_or(SearchError::AllInfeasible { target })
}

fn insert<M: TransferModel>(
    model: &M,
    scenario: &Scenario,
    partial: &mut Candidate<M::Route>,
    target: usize,
    pos: Position,
) {
    let mut seq = model.sequence(&partial.routes[pos.route]).to_vec();
    seq.insert(pos.slot, target);
    let (route, eval) = model.plan_route(scenario, pos.route + 1, &seq);
    partial.routes[pos.route] = route;
    partial.evals[pos.route] = eval;
    partial.fitness = plan_fitness(&partial.evals, model.eval_config());
}

/// Farthest insertion: the removed target whose cheapest feasible insertion
/// is most expensive goes in first, at that position. Targets with no
/// feasible position count as most expensive and take their least-penalized
/// position.
pub fn repair<M: TransferModel>(
    model: &M,
    scenario: &Scenario,
    removed: &[usize],
    mut partial: Candidate<M::Route>,
) -> Candidate<M::Route> {
    let routes = partial.routes.len();
    let mut pending: Vec<usize> = removed.to_vec();
    // scans[target index][route], refreshed only for the route that changed
    let mut scans: Vec<Vec<Scan>> = pending
        .iter()
        .map(|&t| (0..routes).map(|k| scan_route(model, scenario, t, &partial, k)).collect())
        .collect();
    while !pending.is_empty() {
        let mut choice: Option<(usize, f64, Position)> = None;
        for (i, s) in scans.iter().enumerate() {
            let (feasible, penalized) = merge(s);
            let (cost, pos) = match feasible {
                Some((d, p)) => (d, p),
                None => (f64::INFINITY, penalized.1),
            };
            let better = match choice {
                None => true,
                Some((_, c, _)) => cost > c,
            };
            if better {
                choice = Some((i, cost, pos));
            }
        }
        let (i, _, pos) = choice.expect("pending targets have scans");
        let target = pending.remove(i);
        scans.remove(i);
        insert(model, scenario, &mut partial, target, pos);
        for (t, s) in pending.iter().zip(scans.iter_mut()) {
            s[pos.route] = scan_route(model, scenario, *t, &partial, pos.route);
        }
    }
    partial
}

/// Hill climbing over destroy/repair moves: up to `lns_iterations` attempts,
/// stopping at the first strictly better candidate.
pub fn lns_improve<M: TransferModel, G: Rng + ?Sized>(
    model: &M,
    scenario: &Scenario,
    incumbent: &Candidate<M::Route>,
    params: &LnsParams,
    table: &RelatednessTable,
    rng: &mut G,
) -> Candidate<M::Route> {
    let sequences = incumbent.sequences(model);
    for _ in 0..params.lns_iterations {
        let (removed, partial) = destroy(&sequences, params, table, rng);
        let partial = Candidate::from_sequences(model, scenario, &partial);
        let candidate = repair(model, scenario, &removed, partial);
        if candidate.fitness < incumbent.fitness {
            return candidate;
        }
    }
    incumbent.clone()
}
