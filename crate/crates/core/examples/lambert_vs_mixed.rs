//! Compares the mixed-strategy solver with the Lambert baseline on random
//! scenarios of shrinking duration.
//!
//! cargo run --release --example lambert_vs_mixed -- [seed]

use georepair::planning::LambertModel;
use georepair::scenarios::random_scenario;
use georepair::search::{solve_lambert_ga, solve_lns_aga, GaParams, LnsParams};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let ga = GaParams::default();
    println!("days   LNS-AGA dv  feasible   L-GA dv  feasible");
    for days in [35.0, 25.0, 15.0, 10.0] {
        let s = random_scenario(10, 2, days, seed);
        let mixed = solve_lns_aga(&s, &ga, &LnsParams::default(), seed).unwrap().best_evaluation;
        let lambert = solve_lambert_ga(&s, &ga, seed, &LambertModel::default_grid(&s)).unwrap().best_evaluation;
        println!(
            "{days:>4} {:>12.1} {:>9} {:>9.1} {:>9}",
            mixed.total_dv, mixed.feasible, lambert.total_dv, lambert.feasible
        );
    }
}
