//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use georepair::astro::{
    orbit_to_state, phasing_solution, propagate, rendezvous_mixed, GeoOrbit, PhysicalConstants,
};
use georepair::planning::{exhaustive_solve, EvalConfig, LambertModel, Scenario};
use georepair::scenarios::{case_study, random_scenario};
use georepair::search::{
    adaptive_pc, adaptive_pm, destroy, init_population, pmx_crossover, random_cuts, removal_count, solve_ga,
    solve_lambert_ga, solve_lns_aga, swap_mutation, GaParams, GenerationStats, LnsParams, RelatednessTable,
    RouteTerm, SolveResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const RUNS: u64 = 20;
const CASE_DV_LIMIT: f64 = 2100.0;
const BUDGET: f64 = 1000.0;
const POS_TOL_KM: f64 = 1e-6;
const VEL_TOL_KMS: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-6;
const ORACLE_SHARE: f64 = 0.95;
const CLOSED_FORM_REL: f64 = 1e-9;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {n:>2} {} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

struct Run {
    fitness: f64,
    total_dv: f64,
    feasible: bool,
    history: Vec<GenerationStats>,
}

fn summarize<P>(r: SolveResult<P>) -> Run {
    Run {
        fitness: r.best_evaluation.fitness,
        total_dv: r.best_evaluation.total_dv,
        feasible: r.best_evaluation.feasible,
        history: r.history,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn monotone(history: &[GenerationStats]) -> bool {
    history.windows(2).all(|w| w[1].best_fitness <= w[0].best_fitness)
}

fn lns_runs(s: &Scenario, ga: &GaParams) -> Vec<Run> {
    (1..=RUNS)
        .into_par_iter()
        .map(|seed| summarize(solve_lns_aga(s, ga, &LnsParams::default(), seed).unwrap()))
        .collect()
}

fn ga_runs(s: &Scenario, ga: &GaParams) -> Vec<Run> {
    (1..=RUNS)
        .into_par_iter()
        .map(|seed| summarize(solve_ga(s, ga, seed).unwrap()))
        .collect()
}

fn lambert_runs(s: &Scenario, ga: &GaParams) -> Vec<(Run, f64)> {
    let grid = LambertModel::default_grid(s);
    (1..=RUNS)
        .into_par_iter()
        .map(|seed| {
            let r = solve_lambert_ga(s, ga, seed, &grid).unwrap();
            let late = r.best_evaluation.deadline_penalty;
            (summarize(r), late)
        })
        .collect()
}

fn random_orbit(rng: &mut ChaCha8Rng) -> GeoOrbit {
    GeoOrbit::from_degrees(
        rng.gen_range(0.0..=10.0),
        rng.gen_range(0.0..360.0),
        rng.gen_range(0.0..360.0),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut report = Report { failures: 0 };
    let mut histories_ok = true;
    let ga = GaParams::default();

    // 1-3: case study
    let case = case_study();
    let lns = lns_runs(&case, &ga);
    let plain = ga_runs(&case, &ga);
    histories_ok &= lns.iter().chain(&plain).all(|r| monotone(&r.history));
    let best_seed = (0..lns.len()).min_by(|&a, &b| lns[a].fitness.total_cmp(&lns[b].fitness)).unwrap();
    let best = &lns[best_seed];
    report.line(
        1,
        "case-study quality",
        best.feasible && best.total_dv <= CASE_DV_LIMIT,
        format!(
            "best of {RUNS} runs (seed {}) total dv {:.2} m/s, feasible {} (limit {CASE_DV_LIMIT})",
            best_seed + 1,
            best.total_dv,
            best.feasible
        ),
    );

    let best_plan = solve_lns_aga(&case, &ga, &LnsParams::default(), best_seed as u64 + 1).unwrap();
    let eval = &best_plan.best_evaluation;
    let within_budget = eval.per_servicer_dv.iter().all(|&dv| dv <= BUDGET);
    let on_time = eval.legs.iter().all(|l| l.departure <= case.deadline);
    report.line(
        2,
        "budgets at the optimum",
        within_budget && on_time && eval.legs.len() == case.target_count(),
        format!(
            "per-servicer dv {:?} m/s, last repair ends {:.2} d of {:.0} d",
            eval.per_servicer_dv.iter().map(|d| (d * 100.0).round() / 100.0).collect::<Vec<_>>(),
            eval.legs.iter().map(|l| l.departure).fold(0.0, f64::max) / 86400.0,
            case.deadline / 86400.0
        ),
    );

    let med_lns = median(lns.iter().map(|r| r.fitness).collect());
    let med_ga = median(plain.iter().map(|r| r.fitness).collect());
    let feas = |runs: &[Run]| runs.iter().filter(|r| r.feasible).count() as f64 / runs.len() as f64;
    let (p_lns, p_ga) = (feas(&lns), feas(&plain));
    report.line(
        3,
        "LNS-AGA dominates GA",
        med_lns < med_ga && p_lns >= p_ga,
        format!("median fitness {med_lns:.2} vs {med_ga:.2}, feasible share {p_lns:.2} vs {p_ga:.2}"),
    );

    // 4: 15-day comparison against the Lambert baseline
    let mut wins = Vec::new();
    for sc in 0..5 {
        let s = random_scenario(10, 2, 15.0, 1000 + sc);
        let mixed = lns_runs(&s, &ga);
        let lambert = lambert_runs(&s, &ga);
        histories_ok &= mixed.iter().all(|r| monotone(&r.history));
        histories_ok &= lambert.iter().all(|(r, _)| monotone(&r.history));
        let m = mixed.iter().map(|r| r.total_dv).fold(f64::INFINITY, f64::min);
        let l = lambert.iter().map(|(r, _)| r.total_dv).fold(f64::INFINITY, f64::min);
        wins.push((m, l));
    }
    report.line(
        4,
        "mixed strategy beats Lambert",
        wins.iter().all(|(m, l)| m < l),
        format!(
            "min dv per scenario (LNS-AGA / L-GA): {}",
            wins.iter().map(|(m, l)| format!("{m:.0}/{l:.0}")).collect::<Vec<_>>().join(", ")
        ),
    );

    // 5: 10-day scenarios
    let mut mixed_feasible = 0;
    let mut mixed_total = 0;
    let mut lambert_late = 0;
    let mut lambert_total = 0;
    for sc in 0..5 {
        let s = random_scenario(10, 2, 10.0, 2000 + sc);
        for runs in [lns_runs(&s, &ga), ga_runs(&s, &ga)] {
            histories_ok &= runs.iter().all(|r| monotone(&r.history));
            mixed_feasible += runs.iter().filter(|r| r.feasible).count();
            mixed_total += runs.len();
        }
        let lambert = lambert_runs(&s, &ga);
        histories_ok &= lambert.iter().all(|(r, _)| monotone(&r.history));
        lambert_late += lambert.iter().filter(|(_, late)| *late > 0.0).count();
        lambert_total += lambert.len();
    }
    report.line(
        5,
        "10-day infeasibility",
        mixed_feasible == 0 && lambert_late == 0,
        format!(
            "mixed feasible {mixed_feasible}/{mixed_total}, Lambert runs past the deadline {lambert_late}/{lambert_total}"
        ),
    );

    // 6: closure of the mixed transfer
    let c = PhysicalConstants::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_r, mut worst_v) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let servicer = random_orbit(&mut rng);
        let target = random_orbit(&mut rng);
        let t0 = rng.gen_range(0.0..c.t_geo);
        let k = rng.gen_range(1..=10);
        let s0 = orbit_to_state(&servicer, t0, &c);
        let leg = rendezvous_mixed(&s0, &target, k, &c).unwrap();
        let (r1, v1) = propagate(&s0.r, &s0.v, leg.t1 - t0, c.mu).unwrap();
        let (r2, v2) = propagate(&r1, &(v1 + leg.impulse1 / 1000.0), leg.t2 - leg.t1, c.mu).unwrap();
        let goal = orbit_to_state(&target, leg.t2, &c);
        worst_r = worst_r.max((r2 - goal.r).norm());
        worst_v = worst_v.max((v2 + leg.impulse2 / 1000.0 - goal.v).norm());
    }
    report.line(
        6,
        "phasing closure",
        worst_r <= POS_TOL_KM && worst_v <= VEL_TOL_KMS,
        format!("worst miss {worst_r:.2e} km, {worst_v:.2e} km/s over 1000 legs"),
    );

    // 7: oracle equivalence on small instances
    let cap = 4;
    let capped = GaParams {
        max_revolutions: Some(cap),
        ..GaParams::default()
    };
    let oracle_cfg = EvalConfig {
        max_revolutions: Some(cap),
        ..EvalConfig::default()
    };
    let matched = (0..20u64)
        .into_par_iter()
        .filter(|inst| {
            let s = random_scenario(2 + (*inst as usize) % 3, 1 + (*inst as usize) % 2, 30.0, 500 + inst);
            let (_, optimum) = exhaustive_solve(&s, cap, &oracle_cfg).unwrap();
            let found = (1..=5)
                .map(|seed| solve_lns_aga(&s, &capped, &LnsParams::default(), seed).unwrap().best_evaluation.fitness)
                .fold(f64::INFINITY, f64::min);
            (found - optimum.fitness).abs() <= ORACLE_TOL
        })
        .count();
    report.line(
        7,
        "oracle equivalence",
        matched as f64 / 20.0 >= ORACLE_SHARE,
        format!("{matched}/20 instances match the exhaustive optimum within {ORACLE_TOL:e}"),
    );

    // 8: operator properties
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0usize;
    let lns_params = LnsParams::default();
    for trial in 0..100_000 {
        let m = rng.gen_range(1..=20);
        let n = rng.gen_range(1..=4);
        let pop = init_population(m, n, 2, &mut rng);
        let genes = m + n - 1;
        if genes >= 2 {
            let (c1, c2) = random_cuts(genes, &mut rng);
            let (a, b) = pmx_crossover(&pop[0], &pop[1], c1, c2);
            let mutated = swap_mutation(&a, &mut rng);
            bad += [&a, &b, &mutated].iter().filter(|x| !x.is_valid_for(m, n)).count();
        }
        let seqs = pop[0].decode(m, n);
        let raw: Vec<f64> = (0..m * m).map(|i| ((i * 7919 + trial) % 101) as f64).collect();
        let table = RelatednessTable::from_costs(m, raw, RouteTerm::SameRoute);
        let (removed, partial) = destroy(&seqs, &lns_params, &table, &mut rng);
        let mut all: Vec<usize> = removed.iter().chain(partial.iter().flatten()).copied().collect();
        all.sort_unstable();
        if removed.len() != removal_count(m, lns_params.remove_rate) || all != (1..=m).collect::<Vec<_>>() {
            bad += 1;
        }
        let mut w = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        w.sort_by(f64::total_cmp);
        let pc = adaptive_pc(w[rng.gen_range(0..3)], w[1], w[2], &ga);
        let pm = adaptive_pm(w[rng.gen_range(0..3)], w[1], w[2], &ga);
        if !(ga.pc_lo..=ga.pc_hi).contains(&pc) || !(ga.pm_lo..=ga.pm_hi).contains(&pm) {
            bad += 1;
        }
    }
    report.line(
        8,
        "operator properties",
        bad == 0 && histories_ok,
        format!("{bad} violations in 1e5 trials, logged best-fitness histories monotone: {histories_ok}"),
    );

    // 9: phasing cost falls with revolutions
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut decreasing = 0;
    for _ in 0..100 {
        let mut theta = rng.gen_range(-PI..PI);
        if theta == 0.0 {
            theta = 0.5;
        }
        let costs: Vec<f64> = (1..=10).map(|k| phasing_solution(-theta, k, &c).unwrap().dv).collect();
        if costs.windows(2).all(|w| w[1] < w[0]) {
            decreasing += 1;
        }
    }
    report.line(
        9,
        "monotone phasing cost",
        decreasing == 100,
        format!("{decreasing}/100 phase angles strictly decreasing over k = 1..10"),
    );

    // 10: combined first impulse
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut triangle_ok, mut worst_rel) = (true, 0.0f64);
    for _ in 0..1000 {
        let s0 = orbit_to_state(&random_orbit(&mut rng), rng.gen_range(0.0..c.t_geo), &c);
        let leg = rendezvous_mixed(&s0, &random_orbit(&mut rng), rng.gen_range(1..=10), &c).unwrap();
        let (a, b) = (leg.plane_change, leg.phasing_entry);
        let combined = (a + b).norm();
        triangle_ok &= combined <= a.norm() + b.norm() + 1e-12;
        let angle = a.cross(&b).norm().atan2(a.dot(&b));
        let closed = (a.norm_squared() + b.norm_squared() + 2.0 * a.norm() * b.norm() * angle.cos()).sqrt();
        if closed > 0.0 {
            worst_rel = worst_rel.max((leg.impulse1.norm() - closed).abs() / closed);
        }
    }
    report.line(
        10,
        "combined-impulse inequality",
        triangle_ok && worst_rel <= CLOSED_FORM_REL,
        format!("triangle inequality holds: {triangle_ok}, worst relative gap to closed form {worst_rel:.2e}"),
    );

    println!(
        "{} of 10 criteria passed in {:.0} s",
        10 - report.failures,
        start.elapsed().as_secs_f64()
    );
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
