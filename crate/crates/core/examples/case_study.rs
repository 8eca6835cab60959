//! Solves the embedded 14-target case study and prints the schedule.
//!
//! cargo run --release --example case_study -- [seed]

use std::time::Instant;

use georepair::planning::Maneuver;
use georepair::scenarios::case_study;
use georepair::search::{solve_lns_aga, GaParams, LnsParams};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let scenario = case_study();
    let start = Instant::now();
    let result = solve_lns_aga(&scenario, &GaParams::default(), &LnsParams::default(), seed).expect("default parameters are valid");
    let eval = &result.best_evaluation;

    println!(
        "seed {seed}: {} generations in {:.1} s",
        result.generations_run,
        start.elapsed().as_secs_f64()
    );
    for leg in &eval.legs {
        let k = match leg.maneuver {
            Maneuver::Mixed(m) => m.revolutions,
            Maneuver::Lambert(_) => 0,
        };
        println!(
            "  {:<5} -> {:<13} k={:<2} arrive {:>7.2} d  dv {:>7.2} m/s",
            scenario.servicer(leg.servicer_id).name,
            scenario.target(leg.target_id).name,
            k,
            leg.arrival / 86400.0,
            leg.dv()
        );
    }
    for (s, dv) in scenario.servicers.iter().zip(&eval.per_servicer_dv) {
        println!("  {} total {:.4} m/s", s.name, dv);
    }
    println!("total {:.4} m/s, fitness {:.4}, feasible {}", eval.total_dv, eval.fitness, eval.feasible);
}
