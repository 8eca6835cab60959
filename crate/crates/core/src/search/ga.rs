use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::planning::{
    Chromosome, Evaluation, LambertModel, LambertPlan, MissionPlan, MixedModel, RouteEvaluation, Scenario,
    TransferModel,
};

use super::lns::{lns_improve, Candidate, RelatednessTable};
use super::operators::{
    adaptive_pc, adaptive_pm, argmin, init_population, pmx_crossover, random_cuts, selection_indices, selection_weight,
    swap_mutation,
};
use super::{GaParams, LnsParams, SearchError};

// beyond this many cached routes the cache is cleared
const ROUTE_CACHE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub average_fitness: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult<P> {
    pub best_plan: P,
    pub best_evaluation: Evaluation,
    pub history: Vec<GenerationStats>,
    pub generations_run: usize,
    pub seed: u64,
}

/// Hybrid solver: adaptive GA with a large neighborhood search applied to the
/// best individuals of every generation.
pub fn solve_lns_aga(
    scenario: &Scenario,
    ga: &GaParams,
    lns: &LnsParams,
    seed: u64,
) -> Result<SolveResult<MissionPlan>, SearchError> {
    lns.validate()?;
    let model = MixedModel { cfg: ga.eval_config() };
    solve_with(&model, scenario, ga, Some(lns), seed)
}

/// The same GA without the neighborhood search.
pub fn solve_ga(scenario: &Scenario, ga: &GaParams, seed: u64) -> Result<SolveResult<MissionPlan>, SearchError> {
    let model = MixedModel { cfg: ga.eval_config() };
    solve_with(&model, scenario, ga, None, seed)
}

/// GA over the same encoding with zero-revolution Lambert transfers whose
/// flight times come from `tof_grid` (s).
pub fn solve_lambert_ga(
    scenario: &Scenario,
    ga: &GaParams,
    seed: u64,
    tof_grid: &[f64],
) -> Result<SolveResult<LambertPlan>, SearchError> {
    if tof_grid.is_empty() || tof_grid.iter().any(|&t| !(t > 0.0 && t < scenario.deadline)) {
        return Err(SearchError::InvalidParams(
            "flight times must be positive and shorter than the deadline".into(),
        ));
    }
    let model = LambertModel::new(ga.eval_config(), tof_grid.to_vec());
    solve_with(&model, scenario, ga, None, seed)
}

struct Evaluator<'a, M: TransferModel> {
    model: &'a M,
    scenario: &'a Scenario,
    cache: HashMap<(usize, Vec<usize>), (M::Route, RouteEvaluation)>,
}

impl<M: TransferModel> Evaluator<'_, M> {
    fn evaluate(&mut self, population: &[Chromosome]) -> Vec<Candidate<M::Route>> {
        let m = self.scenario.target_count();
        let n = self.scenario.servicer_count();
        let decoded: Vec<Vec<Vec<usize>>> = population.iter().map(|c| c.decode(m, n)).collect();
        if self.cache.len() > ROUTE_CACHE_LIMIT {
            self.cache.clear();
        }
        let mut missing: Vec<(usize, Vec<usize>)> = decoded
            .iter()
            .flat_map(|seqs| seqs.iter().enumerate().map(|(k, s)| (k + 1, s.clone())))
            .filter(|key| !self.cache.contains_key(key))
            .collect();
        missing.sort_unstable();
        missing.dedup();
        let (model, scenario) = (self.model, self.scenario);
        let fresh: Vec<_> = missing
            .into_par_iter()
            .map(|(k, s)| {
                let planned = model.plan_route(scenario, k, &s);
                ((k, s), planned)
            })
            .collect();
        self.cache.extend(fresh);
        let cfg = self.model.eval_config();
        decoded
            .into_iter()
            .map(|seqs| {
                let (routes, evals) = seqs
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| self.cache[&(k + 1, s)].clone())
                    .unzip();
                Candidate::new(routes, evals, cfg)
            })
            .collect()
    }
}

fn stats(generation: usize, fitness: &[f64]) -> GenerationStats {
    GenerationStats {
        generation,
        best_fitness: fitness.iter().copied().fold(f64::INFINITY, f64::min),
        average_fitness: fitness.iter().sum::<f64>() / fitness.len() as f64,
    }
}

/// GA driver shared by every solver. `lns` switches the neighborhood search on.
pub fn solve_with<M: TransferModel>(
    model: &M,
    scenario: &Scenario,
    ga: &GaParams,
    lns: Option<&LnsParams>,
    seed: u64,
) -> Result<SolveResult<M::Plan>, SearchError> {
    ga.validate()?;
    let m = scenario.target_count();
    let n = scenario.servicer_count();
    let genes = m + n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluator = Evaluator {
        model,
        scenario,
        cache: HashMap::new(),
    };
    let table = lns.map(|p| RelatednessTable::new(scenario, p.beta, p.route_term));

    let mut population = init_population(m, n, ga.population_size, &mut rng);
    let mut candidates = evaluator.evaluate(&population);
    let mut fitness: Vec<f64> = candidates.iter().map(|c| c.fitness).collect();
    let mut history = vec![stats(0, &fitness)];
    let mut best = candidates[argmin(&fitness)].clone();
    let mut stall = 0;
    let mut generation = 0;

    while generation < ga.max_generations
        && !(generation >= ga.min_iterations && stall >= ga.stall_iterations)
    {
        generation += 1;
        let weights: Vec<f64> = fitness.iter().map(|&f| selection_weight(f)).collect();
        let w_max = weights.iter().copied().fold(0.0, f64::max);
        let w_avg = weights.iter().sum::<f64>() / weights.len() as f64;

        let picks = selection_indices(&fitness, &mut rng);
        let elite = population[picks[0]].clone();
        let elite_candidate = candidates[picks[0]].clone();
        let mut pool: Vec<Chromosome> = picks[1..].iter().map(|&i| population[i].clone()).collect();
        let mut pool_weights: Vec<f64> = picks[1..].iter().map(|&i| weights[i]).collect();

        // crossover on shuffled adjacent pairs
        let mut order: Vec<usize> = (0..pool.len()).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        for pair in order.chunks_exact(2) {
            let (i, j) = (pair[0], pair[1]);
            let pc = adaptive_pc(pool_weights[i].max(pool_weights[j]), w_avg, w_max, ga);
            if genes >= 2 && rng.gen::<f64>() < pc {
                let (c1, c2) = random_cuts(genes, &mut rng);
                let (a, b) = pmx_crossover(&pool[i], &pool[j], c1, c2);
                pool[i] = a;
                pool[j] = b;
            }
        }

        // mutation gated by each offspring's own weight
        let offspring = evaluator.evaluate(&pool);
        for (i, c) in offspring.iter().enumerate() {
            pool_weights[i] = selection_weight(c.fitness);
        }
        for (i, chrom) in pool.iter_mut().enumerate() {
            let pm = adaptive_pm(pool_weights[i], w_avg, w_max, ga);
            if genes >= 2 && rng.gen::<f64>() < pm {
                *chrom = swap_mutation(chrom, &mut rng);
            }
        }

        population = Vec::with_capacity(ga.population_size);
        population.push(elite);
        population.extend(pool);
        candidates = vec![elite_candidate];
        candidates.extend(evaluator.evaluate(&population[1..]));

        if let (Some(params), Some(table)) = (lns, table.as_ref()) {
            let count = ((ga.population_size as f64 * params.elite_fraction).ceil() as usize).clamp(1, ga.population_size);
            let mut ranked: Vec<usize> = (0..candidates.len()).collect();
            ranked.sort_by(|&a, &b| candidates[a].fitness.total_cmp(&candidates[b].fitness).then(a.cmp(&b)));
            for &i in ranked.iter().take(count) {
                let improved = lns_improve(model, scenario, &candidates[i], params, table, &mut rng);
                if improved.fitness < candidates[i].fitness {
                    population[i] = Chromosome::encode(&improved.sequences(model), m);
                    candidates[i] = improved;
                }
            }
        }

        fitness = candidates.iter().map(|c| c.fitness).collect();
        let gen_stats = stats(generation, &fitness);
        history.push(gen_stats);
        let gen_best = argmin(&fitness);
        if candidates[gen_best].fitness < best.fitness {
            best = candidates[gen_best].clone();
            stall = 0;
        } else {
            stall += 1;
        }
    }

    let cfg = model.eval_config();
    Ok(SolveResult {
        best_evaluation: best.evaluation(cfg),
        best_plan: model.assemble(best.routes),
        history,
        generations_run: generation,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planning::{evaluate_plan, exhaustive_solve, EvalConfig};
    use crate::scenarios::random_scenario;

    fn quick() -> GaParams {
        GaParams {
            population_size: 30,
            min_iterations: 20,
            stall_iterations: 10,
            ..GaParams::default()
        }
    }

    #[test]
    fn history_is_monotone_and_plan_consistent() {
        let s = random_scenario(6, 2, 20.0, 1);
        let ga = quick();
        let r = solve_lns_aga(&s, &ga, &LnsParams::default(), 5).unwrap();
        for w in r.history.windows(2) {
            assert!(w[1].best_fitness <= w[0].best_fitness);
        }
        assert_eq!(r.history.len(), r.generations_run + 1);
        r.best_plan.validate(&s).unwrap();
        let again = evaluate_plan(&s, &r.best_plan, &ga.eval_config());
        assert_eq!(again, r.best_evaluation);
        assert_eq!(r.history.last().unwrap().best_fitness, r.best_evaluation.fitness);
    }

    #[test]
    fn seeded_runs_repeat() {
        let s = random_scenario(5, 2, 20.0, 2);
        let ga = quick();
        let a = solve_ga(&s, &ga, 7).unwrap();
        let b = solve_ga(&s, &ga, 7).unwrap();
        assert_eq!(a.best_plan, b.best_plan);
        assert_eq!(a.history, b.history);
        let grid = LambertModel::default_grid(&s);
        let a = solve_lambert_ga(&s, &ga, 7, &grid).unwrap();
        let b = solve_lambert_ga(&s, &ga, 7, &grid).unwrap();
        assert_eq!(a.best_plan, b.best_plan);
    }

    #[test]
    fn single_target_matches_oracle() {
        let s = random_scenario(1, 1, 10.0, 3);
        let ga = GaParams {
            max_revolutions: Some(6),
            ..quick()
        };
        let r = solve_lns_aga(&s, &ga, &LnsParams::default(), 1).unwrap();
        let (_, oracle) = exhaustive_solve(&s, 6, &EvalConfig { max_revolutions: Some(6), ..EvalConfig::default() }).unwrap();
        assert!((r.best_evaluation.fitness - oracle.fitness).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = random_scenario(3, 1, 10.0, 3);
        let bad = GaParams {
            pc_lo: 0.95,
            ..GaParams::default()
        };
        assert!(matches!(solve_ga(&s, &bad, 1), Err(SearchError::InvalidParams(_))));
        assert!(solve_lambert_ga(&s, &quick(), 1, &[s.deadline * 2.0]).is_err());
    }
}
