use georepair::scenarios::{case_study, load, random_scenario, save, ScenarioError, ScenarioSpec};
use statrs::distribution::{ContinuousCDF, Uniform};
use tempfile::tempdir;

// Kolmogorov-Smirnov statistic of `samples` against `dist`
fn ks_statistic(mut samples: Vec<f64>, dist: &Uniform) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = dist.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn random_orbits_are_uniform() {
    let mut inc = Vec::new();
    let mut raan = Vec::new();
    let mut anomaly = Vec::new();
    for seed in 0..1000 {
        let s = random_scenario(10, 1, 15.0, seed);
        for t in &s.spec().targets {
            inc.push(t.inclination_deg);
            raan.push(t.raan_deg);
            anomaly.push(t.true_anomaly_deg);
        }
    }
    assert_eq!(inc.len(), 10_000);
    assert!(inc.iter().all(|i| (0.0..=10.0).contains(i)));
    assert!(raan.iter().chain(&anomaly).all(|a| (0.0..360.0).contains(a)));
    // critical value at the 1% level
    let critical = 1.628 / (inc.len() as f64).sqrt();
    assert!(ks_statistic(inc, &Uniform::new(0.0, 10.0).unwrap()) < critical);
    assert!(ks_statistic(raan, &Uniform::new(0.0, 360.0).unwrap()) < critical);
    assert!(ks_statistic(anomaly, &Uniform::new(0.0, 360.0).unwrap()) < critical);
}

#[test]
fn files_round_trip() {
    let dir = tempdir().unwrap();
    for s in [case_study(), random_scenario(12, 3, 25.0, 77)] {
        let path = dir.path().join("s.json");
        save(&s, &path).unwrap();
        let back = load(&path).unwrap();
        assert_eq!(back.spec(), s.spec());
        assert_eq!(back.targets, s.targets);
        assert_eq!(back.servicers, s.servicers);
        assert_eq!(back.deadline, s.deadline);
    }
}

#[test]
fn negative_budget_is_a_validation_error() {
    let mut spec = case_study().spec().clone();
    spec.servicers[0].dv_budget_mps = -1.0;
    let text = spec.to_json();
    assert!(matches!(ScenarioSpec::from_json(&text).unwrap().to_scenario(), Err(ScenarioError::Validation(_))));
}
