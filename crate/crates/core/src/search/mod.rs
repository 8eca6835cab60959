//! Route search: the adaptive genetic algorithm, its large neighborhood
//! search hook and the baselines built on the same driver.

mod ga;
mod lns;
mod operators;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planning::{EvalConfig, SlackRule};

pub use ga::{solve_ga, solve_lambert_ga, solve_lns_aga, solve_with, GenerationStats, SolveResult};
pub use lns::{
    destroy, insertion_cost, lns_improve, relatedness, removal_count, repair, Candidate, Position, RelatednessTable,
    RouteTerm, RELATEDNESS_EPSILON,
};
pub use operators::{
    adaptive_pc, adaptive_pm, init_population, pmx_crossover, random_cuts, roulette, selection, selection_indices,
    selection_weight, swap_genes, swap_mutation, WEIGHT_EPSILON,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("target {target} has no feasible insertion position")]
    AllInfeasible { target: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population_size: usize,
    pub min_iterations: usize,
    /// Stop once the best fitness has not improved for this many generations.
    pub stall_iterations: usize,
    /// Hard stop regardless of progress.
    pub max_generations: usize,
    pub pc_hi: f64,
    pub pc_lo: f64,
    pub pm_hi: f64,
    pub pm_lo: f64,
    /// Fitness per minute late.
    pub phi: f64,
    /// Fitness per m/s over budget.
    pub gamma: f64,
    pub slack_rule: SlackRule,
    pub max_revolutions: Option<u32>,
}

impl Default for GaParams {
    fn default() -> Self {
        let eval = EvalConfig::default();
        Self {
            population_size: 100,
            min_iterations: 100,
            stall_iterations: 50,
            max_generations: 1000,
            pc_hi: 0.9,
            pc_lo: 0.7,
            pm_hi: 0.2,
            pm_lo: 0.01,
            phi: eval.phi,
            gamma: eval.gamma,
            slack_rule: eval.slack_rule,
            max_revolutions: eval.max_revolutions,
        }
    }
}

impl GaParams {
    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            phi: self.phi,
            gamma: self.gamma,
            slack_rule: self.slack_rule,
            max_revolutions: self.max_revolutions,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let fail = |m: &str| Err(SearchError::InvalidParams(m.into()));
        if self.population_size < 2 {
            return fail("population size must be at least 2");
        }
        if !(0.0 < self.pc_lo && self.pc_lo <= self.pc_hi && self.pc_hi <= 1.0) {
            return fail("crossover bounds must satisfy 0 < pc_lo <= pc_hi <= 1");
        }
        if !(0.0 < self.pm_lo && self.pm_lo <= self.pm_hi && self.pm_hi <= 1.0) {
            return fail("mutation bounds must satisfy 0 < pm_lo <= pm_hi <= 1");
        }
        if !(self.phi > 0.0 && self.gamma > 0.0) {
            return fail("penalty weights must be positive");
        }
        if self.max_revolutions == Some(0) {
            return fail("revolution cap must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LnsParams {
    /// Fraction of targets removed per destroy step.
    pub remove_rate: f64,
    /// Higher values make the removal order follow relatedness more closely.
    pub determinism_p: f64,
    /// Weight of the plane angle against the phase difference in relatedness.
    pub beta: f64,
    pub lns_iterations: usize,
    /// Fraction of the population improved by the LNS each generation.
    pub elite_fraction: f64,
    pub route_term: RouteTerm,
}

impl Default for LnsParams {
    fn default() -> Self {
        Self {
            remove_rate: 0.3,
            determinism_p: 6.0,
            beta: 0.5,
            lns_iterations: 2,
            elite_fraction: 0.1,
            route_term: RouteTerm::SameRoute,
        }
    }
}

impl LnsParams {
    pub fn validate(&self) -> Result<(), SearchError> {
        let fail = |m: &str| Err(SearchError::InvalidParams(m.into()));
        if !(self.remove_rate > 0.0 && self.remove_rate < 1.0) {
            return fail("remove rate must be in (0, 1)");
        }
        if !(self.determinism_p >= 1.0) {
            return fail("determinism parameter must be at least 1");
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return fail("beta must be in (0, 1)");
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction <= 1.0) {
            return fail("elite fraction must be in (0, 1]");
        }
        Ok(())
    }
}
