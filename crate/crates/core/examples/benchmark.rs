//! Runs the three solvers over consecutive seeds on one generated scenario
//! and prints min/average/std of Δv and the feasible share, like the
//! `bench` command.
//!
//! cargo run --release --example benchmark -- [runs] [days]

use georepair::cli::{bench_row, run_algorithm, Algorithm, Cli};
use georepair::scenarios::random_scenario;

fn main() {
    let mut args = std::env::args().skip(1);
    let runs: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let days: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(15.0);
    let scenario = random_scenario(10, 2, days, 2024);
    let params = Cli::default_params();

    println!("{:<11} {:>9} {:>9} {:>8} {:>9}", "algorithm", "min dv", "avg dv", "std", "feasible");
    for algo in [Algorithm::LnsAga, Algorithm::Ga, Algorithm::LambertGa] {
        let results: Vec<_> = (1..=runs)
            .map(|seed| run_algorithm(&scenario, algo, &params, seed).map_err(|e| e.to_string()))
            .collect();
        let row = bench_row(algo, &results);
        println!(
            "{:<11} {:>9.1} {:>9.1} {:>8.1} {:>9.2}",
            row.algorithm, row.min_dv_mps, row.avg_dv_mps, row.std_dv_mps, row.feasible_proportion
        );
    }
}
