//! Command-line front end: `solve`, `bench`, `oracle` and `gen`.
//!
//! Exit codes: 0 when the reported plan is feasible, 2 when it is not, 1 on
//! any error (with a message on standard error).

mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::planning::{exhaustive_solve, Evaluation, LambertModel, PlanningError, Scenario, SlackRule};
use crate::scenarios::{self, ScenarioError};
use crate::search::{
    solve_ga, solve_lambert_ga, solve_lns_aga, GaParams, GenerationStats, LnsParams, RouteTerm, SearchError,
};

pub use report::{iso_time, short_time, timestamp, CONVERGENCE_HEADER, SCHEDULE_HEADER};
use report::{write_convergence, write_json, write_schedule, Summary};

/// Name accepted in place of a scenario path for the built-in case study.
pub const CASE_STUDY: &str = "case-study";

pub const BENCH_RUNS_HEADER: [&str; 8] = [
    "algorithm",
    "seed",
    "total_dv_mps",
    "fitness",
    "feasible",
    "generations",
    "wall_time_s",
    "error",
];

pub const BENCH_SUMMARY_HEADER: [&str; 10] = [
    "algorithm",
    "runs",
    "failed_runs",
    "min_dv_mps",
    "avg_dv_mps",
    "std_dv_mps",
    "feasible_proportion",
    "best_fitness",
    "avg_wall_time_s",
    "max_wall_time_s",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Planning(#[from] PlanningError),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "georepair", version, about = "Plan multi-servicer repair missions in GEO")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one scenario and write schedule.csv, convergence.csv and summary.json.
    Solve {
        /// Scenario file, or `case-study`.
        scenario: String,
        #[arg(long, value_enum, default_value_t = Algorithm::LnsAga)]
        algo: Algorithm,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Repeat solver runs over consecutive seeds and summarize them.
    Bench {
        /// Scenario file, or `case-study`.
        scenario: String,
        /// Algorithms to compare, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "lns-aga")]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Exhaustive optimum of a small instance.
    Oracle {
        scenario: String,
        #[arg(long, default_value_t = 4)]
        max_revs: u32,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[arg(long, default_value_t = 10.0)]
        gamma: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write a random scenario file.
    Gen {
        n_targets: usize,
        n_servicers: usize,
        days: f64,
        seed: u64,
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LnsAga,
    Ga,
    LambertGa,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LnsAga => "lns-aga",
            Algorithm::Ga => "ga",
            Algorithm::LambertGa => "lambert-ga",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SlackArg {
    Largest,
    Smallest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteTermArg {
    SameRoute,
    Adjacent,
}

/// Solver parameters; defaults are the case-study settings.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 100)]
    pub pop_size: usize,
    #[arg(long, default_value_t = 100)]
    pub min_iters: usize,
    #[arg(long, default_value_t = 50)]
    pub stall_iters: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_gens: usize,
    #[arg(long, default_value_t = 0.9)]
    pub pc_hi: f64,
    #[arg(long, default_value_t = 0.7)]
    pub pc_lo: f64,
    #[arg(long, default_value_t = 0.2)]
    pub pm_hi: f64,
    #[arg(long, default_value_t = 0.01)]
    pub pm_lo: f64,
    #[arg(long, default_value_t = 0.3)]
    pub remove_rate: f64,
    #[arg(long, default_value_t = 0.1)]
    pub elite_rate: f64,
    #[arg(long, default_value_t = 2)]
    pub lns_iters: usize,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 6.0)]
    pub det_p: f64,
    /// Fitness per minute past the deadline.
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
    /// Fitness per m/s over budget.
    #[arg(long, default_value_t = 10.0)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = SlackArg::Largest)]
    pub slack_rule: SlackArg,
    #[arg(long, value_enum, default_value_t = RouteTermArg::SameRoute)]
    pub route_term: RouteTermArg,
    /// Upper limit on phasing revolutions per leg (required by the oracle).
    #[arg(long)]
    pub max_revs: Option<u32>,
}

impl ParamArgs {
    pub fn ga(&self) -> GaParams {
        GaParams {
            population_size: self.pop_size,
            min_iterations: self.min_iters,
            stall_iterations: self.stall_iters,
            max_generations: self.max_gens,
            pc_hi: self.pc_hi,
            pc_lo: self.pc_lo,
            pm_hi: self.pm_hi,
            pm_lo: self.pm_lo,
            phi: self.phi,
            gamma: self.gamma,
            slack_rule: match self.slack_rule {
                SlackArg::Largest => SlackRule::Largest,
                SlackArg::Smallest => SlackRule::Smallest,
            },
            max_revolutions: self.max_revs,
        }
    }

    pub fn lns(&self) -> LnsParams {
        LnsParams {
            remove_rate: self.remove_rate,
            determinism_p: self.det_p,
            beta: self.beta,
            lns_iterations: self.lns_iters,
            elite_fraction: self.elite_rate,
            route_term: match self.route_term {
                RouteTermArg::SameRoute => RouteTerm::SameRoute,
                RouteTermArg::Adjacent => RouteTerm::Adjacent,
            },
        }
    }
}

/// One solver execution, independent of the algorithm that produced it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub algorithm: Algorithm,
    pub seed: Option<u64>,
    pub evaluation: Evaluation,
    pub history: Vec<GenerationStats>,
    pub generations: Option<usize>,
    pub wall_time_s: f64,
}

pub fn load_scenario(arg: &str) -> Result<Scenario, CliError> {
    if arg == CASE_STUDY {
        Ok(scenarios::case_study())
    } else {
        Ok(scenarios::load(arg)?)
    }
}

pub fn run_algorithm(
    scenario: &Scenario,
    algorithm: Algorithm,
    params: &ParamArgs,
    seed: u64,
) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let ga = params.ga();
    let (evaluation, history, generations, seed) = match algorithm {
        Algorithm::LnsAga => {
            let r = solve_lns_aga(scenario, &ga, &params.lns(), seed)?;
            (r.best_evaluation, r.history, Some(r.generations_run), Some(seed))
        }
        Algorithm::Ga => {
            let r = solve_ga(scenario, &ga, seed)?;
            (r.best_evaluation, r.history, Some(r.generations_run), Some(seed))
        }
        Algorithm::LambertGa => {
            let r = solve_lambert_ga(scenario, &ga, seed, &LambertModel::default_grid(scenario))?;
            (r.best_evaluation, r.history, Some(r.generations_run), Some(seed))
        }
        Algorithm::Oracle => {
            let revs = params.max_revs.unwrap_or(4);
            let cfg = crate::planning::EvalConfig {
                max_revolutions: Some(revs),
                ..ga.eval_config()
            };
            let (_, eval) = exhaustive_solve(scenario, revs, &cfg)?;
            (eval, Vec::new(), None, None)
        }
    };
    Ok(Outcome {
        algorithm,
        seed,
        evaluation,
        history,
        generations,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn write_outcome(
    out: &Path,
    scenario_name: &str,
    scenario: &Scenario,
    outcome: &Outcome,
    params: &ParamArgs,
) -> Result<(), CliError> {
    fs::create_dir_all(out)?;
    write_schedule(&out.join("schedule.csv"), scenario, &outcome.evaluation)?;
    write_convergence(&out.join("convergence.csv"), &outcome.history)?;
    let eval = &outcome.evaluation;
    let uses_ga = outcome.algorithm != Algorithm::Oracle;
    let summary = Summary {
        algorithm: outcome.algorithm.name().into(),
        scenario: scenario_name.into(),
        seed: outcome.seed,
        total_dv_mps: eval.total_dv,
        fitness: eval.fitness,
        feasible: eval.feasible,
        deadline_penalty_s: eval.deadline_penalty,
        budget_penalty_mps: eval.budget_penalty,
        servicers: Summary::servicers(scenario, eval),
        generations: outcome.generations,
        wall_time_s: outcome.wall_time_s,
        ga: uses_ga.then(|| params.ga()),
        lns: (outcome.algorithm == Algorithm::LnsAga).then(|| params.lns()),
        max_revolutions: if uses_ga { params.max_revs } else { Some(params.max_revs.unwrap_or(4)) },
    };
    write_json(&out.join("summary.json"), &summary)
}

fn exit_code(eval: &Evaluation) -> i32 {
    if eval.feasible {
        0
    } else {
        2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub runs: usize,
    pub failed_runs: usize,
    pub min_dv_mps: f64,
    pub avg_dv_mps: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std_dv_mps: f64,
    pub feasible_proportion: f64,
    pub best_fitness: f64,
    pub avg_wall_time_s: f64,
    pub max_wall_time_s: f64,
}

/// Table-style statistics over the completed runs of one algorithm.
pub fn bench_row(algorithm: Algorithm, runs: &[Result<Outcome, String>]) -> BenchRow {
    let ok: Vec<&Outcome> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let dv: Vec<f64> = ok.iter().map(|o| o.evaluation.total_dv).collect();
    let count = dv.len() as f64;
    let avg = dv.iter().sum::<f64>() / count;
    let std = if dv.len() > 1 {
        (dv.iter().map(|x| (x - avg).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    let wall: Vec<f64> = ok.iter().map(|o| o.wall_time_s).collect();
    BenchRow {
        algorithm: algorithm.name().into(),
        runs: runs.len(),
        failed_runs: runs.len() - ok.len(),
        min_dv_mps: dv.iter().copied().fold(f64::INFINITY, f64::min),
        avg_dv_mps: avg,
        std_dv_mps: std,
        feasible_proportion: ok.iter().filter(|o| o.evaluation.feasible).count() as f64 / runs.len() as f64,
        best_fitness: ok.iter().map(|o| o.evaluation.fitness).fold(f64::INFINITY, f64::min),
        avg_wall_time_s: wall.iter().sum::<f64>() / count,
        max_wall_time_s: wall.iter().copied().fold(0.0, f64::max),
    }
}

fn cmd_bench(
    scenario: &Scenario,
    algorithms: &[Algorithm],
    seed: u64,
    runs: u64,
    params: &ParamArgs,
    out: &Path,
) -> Result<Vec<BenchRow>, CliError> {
    let jobs: Vec<(Algorithm, u64)> = algorithms
        .iter()
        .flat_map(|&a| (0..runs).map(move |i| (a, seed + i)))
        .collect();
    let results: Vec<Result<Outcome, String>> = jobs
        .par_iter()
        .map(|&(a, s)| run_algorithm(scenario, a, params, s).map_err(|e| e.to_string()))
        .collect();

    fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("runs.csv"))?;
    w.write_record(BENCH_RUNS_HEADER)?;
    for ((a, s), r) in jobs.iter().zip(&results) {
        let row = match r {
            Ok(o) => [
                a.name().to_string(),
                s.to_string(),
                o.evaluation.total_dv.to_string(),
                o.evaluation.fitness.to_string(),
                o.evaluation.feasible.to_string(),
                o.generations.map(|g| g.to_string()).unwrap_or_default(),
                format!("{:.3}", o.wall_time_s),
                String::new(),
            ],
            Err(e) => [
                a.name().to_string(),
                s.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.clone(),
            ],
        };
        w.write_record(row)?;
    }
    w.flush()?;

    let rows: Vec<BenchRow> = algorithms
        .iter()
        .map(|&a| {
            let mine: Vec<Result<Outcome, String>> = jobs
                .iter()
                .zip(&results)
                .filter(|((alg, _), _)| *alg == a)
                .map(|(_, r)| r.clone())
                .collect();
            bench_row(a, &mine)
        })
        .collect();
    let mut w = csv::Writer::from_path(out.join("bench_summary.csv"))?;
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(rows)
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve {
            scenario,
            algo,
            seed,
            params,
            out,
        } => {
            let s = load_scenario(&scenario)?;
            let outcome = run_algorithm(&s, algo, &params, seed)?;
            write_outcome(&out, &scenario, &s, &outcome, &params)?;
            let e = &outcome.evaluation;
            println!(
                "{}: total dv {:.4} m/s, fitness {:.4}, {}",
                algo.name(),
                e.total_dv,
                e.fitness,
                if e.feasible { "feasible" } else { "infeasible" }
            );
            Ok(exit_code(e))
        }
        Command::Bench {
            scenario,
            algo,
            seed,
            runs,
            params,
            out,
        } => {
            let s = load_scenario(&scenario)?;
            let rows = cmd_bench(&s, &algo, seed, runs, &params, &out)?;
            println!(
                "{:<11} {:>5} {:>10} {:>10} {:>9} {:>9} {:>8}",
                "algorithm", "runs", "min dv", "avg dv", "std dv", "feasible", "avg s"
            );
            for r in rows {
                println!(
                    "{:<11} {:>5} {:>10.2} {:>10.2} {:>9.2} {:>9.2} {:>8.2}",
                    r.algorithm, r.runs, r.min_dv_mps, r.avg_dv_mps, r.std_dv_mps, r.feasible_proportion, r.avg_wall_time_s
                );
            }
            Ok(0)
        }
        Command::Oracle {
            scenario,
            max_revs,
            phi,
            gamma,
            out,
        } => {
            let s = load_scenario(&scenario)?;
            let params = ParamArgs {
                phi,
                gamma,
                max_revs: Some(max_revs),
                ..Cli::default_params()
            };
            let outcome = run_algorithm(&s, Algorithm::Oracle, &params, 0)?;
            write_outcome(&out, &scenario, &s, &outcome, &params)?;
            let e = &outcome.evaluation;
            println!("oracle: total dv {:.4} m/s, fitness {:.6}, feasible {}", e.total_dv, e.fitness, e.feasible);
            Ok(exit_code(e))
        }
        Command::Gen {
            n_targets,
            n_servicers,
            days,
            seed,
            out,
        } => {
            if n_targets == 0 || n_servicers == 0 || !(days > 0.0) {
                return Err(CliError::Usage("need at least one target, one servicer and a positive duration".into()));
            }
            let s = scenarios::random_scenario(n_targets, n_servicers, days, seed);
            scenarios::save(&s, &out)?;
            Ok(0)
        }
    }
}

impl Cli {
    /// Parameter defaults as the parser would fill them.
    pub fn default_params() -> ParamArgs {
        #[derive(Parser)]
        struct Only {
            #[command(flatten)]
            p: ParamArgs,
        }
        Only::parse_from(["georepair"]).p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn parser_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults_match_library() {
        let p = Cli::default_params();
        assert_eq!(p.ga(), GaParams::default());
        assert_eq!(p.lns(), LnsParams::default());
    }

    #[test]
    fn bench_statistics() {
        let s = scenarios::random_scenario(3, 1, 10.0, 1);
        let mk = |dv: f64, feasible: bool| {
            let mut o = run_algorithm(&s, Algorithm::Oracle, &Cli::default_params(), 0).unwrap();
            o.evaluation.total_dv = dv;
            o.evaluation.feasible = feasible;
            Ok(o)
        };
        let runs = vec![mk(1.0, true), mk(3.0, false), Err("boom".to_string())];
        let row = bench_row(Algorithm::Ga, &runs);
        assert_eq!(row.runs, 3);
        assert_eq!(row.failed_runs, 1);
        assert_eq!(row.min_dv_mps, 1.0);
        assert_eq!(row.avg_dv_mps, 2.0);
        assert!((row.std_dv_mps - 2f64.sqrt()).abs() < 1e-12);
        assert!((row.feasible_proportion - 1.0 / 3.0).abs() < 1e-12);
    }
}
