//! Exhaustive optimum of a tiny instance next to the hybrid solver's answer.
//!
//! cargo run --release --example oracle_small

use georepair::planning::{exhaustive_solve, EvalConfig};
use georepair::scenarios::random_scenario;
use georepair::search::{solve_lns_aga, GaParams, LnsParams};

fn main() {
    let scenario = random_scenario(4, 2, 30.0, 7);
    let cap = 4;
    let cfg = EvalConfig {
        max_revolutions: Some(cap),
        ..EvalConfig::default()
    };
    let (plan, best) = exhaustive_solve(&scenario, cap, &cfg).unwrap();
    println!("oracle fitness {:.6}", best.fitness);
    for r in &plan.routes {
        println!("  servicer {}: targets {:?} revolutions {:?}", r.servicer_id, r.target_sequence, r.revolutions);
    }

    let ga = GaParams {
        max_revolutions: Some(cap),
        ..GaParams::default()
    };
    for seed in 1..=5 {
        let r = solve_lns_aga(&scenario, &ga, &LnsParams::default(), seed).unwrap();
        println!(
            "seed {seed}: fitness {:.6} (gap {:.2e})",
            r.best_evaluation.fitness,
            r.best_evaluation.fitness - best.fitness
        );
    }
}
