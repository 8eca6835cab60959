//! Scenario construction: the embedded 14-target case study, random
//! scenario generation and the JSON scenario file format.
//!
//! Files carry degrees and hours; [`Scenario`] holds radians and seconds.
//! Conversion happens once, at load.

use std::fs;
use std::path::Path;

use chrono::{DateTime, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::astro::{GeoOrbit, PhysicalConstants};
use crate::planning::Scenario;

const CASE_STUDY_JSON: &str = include_str!("../../data/case_study.json");

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("scenario I/O: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for ScenarioError {
    fn from(e: serde_json::Error) -> Self {
        ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// On-disk scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// ISO-8601 UTC timestamp.
    pub epoch: String,
    pub deadline_hours: f64,
    pub servicers: Vec<ServicerRecord>,
    pub targets: Vec<TargetRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServicerRecord {
    pub name: String,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub true_anomaly_deg: f64,
    pub dv_budget_mps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetRecord {
    pub name: String,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub true_anomaly_deg: f64,
    pub repair_hours: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsRecord {
    pub mu_km3s2: f64,
    pub t_geo_s: f64,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario spec serializes");
        s.push('\n');
        s
    }

    /// Converts to radians/seconds and validates.
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioError> {
        let epoch = DateTime::parse_from_rfc3339(&self.epoch)
            .map_err(|e| ScenarioError::Field {
                field: "epoch",
                message: e.to_string(),
            })?
            .with_timezone(&Utc);
        let constants = match self.constants {
            Some(c) => PhysicalConstants::from_mu_and_period(c.mu_km3s2, c.t_geo_s),
            None => PhysicalConstants::default(),
        };
        let angles = [
            self.servicers
                .iter()
                .flat_map(|s| [s.inclination_deg, s.raan_deg, s.true_anomaly_deg])
                .collect::<Vec<_>>(),
            self.targets
                .iter()
                .flat_map(|t| [t.inclination_deg, t.raan_deg, t.true_anomaly_deg])
                .collect(),
        ];
        if angles.iter().flatten().any(|a| !a.is_finite()) {
            return Err(ScenarioError::Validation("orbit angles must be finite".into()));
        }
        let servicers = self
            .servicers
            .iter()
            .map(|s| {
                (
                    s.name.clone(),
                    GeoOrbit::from_degrees(s.inclination_deg, s.raan_deg, s.true_anomaly_deg),
                    s.dv_budget_mps,
                )
            })
            .collect();
        let targets = self
            .targets
            .iter()
            .map(|t| {
                (
                    t.name.clone(),
                    GeoOrbit::from_degrees(t.inclination_deg, t.raan_deg, t.true_anomaly_deg),
                    t.repair_hours * 3600.0,
                )
            })
            .collect();
        let scenario = Scenario::new(epoch, self.deadline_hours * 3600.0, servicers, targets, constants)?;
        Ok(scenario.with_spec(self.clone()))
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let text = fs::read_to_string(path)?;
    ScenarioSpec::from_json(&text)?.to_scenario()
}

pub fn save(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    fs::write(path, scenario.spec().to_json())?;
    Ok(())
}

/// The 14-target, 2-servicer real-world scenario: 30-day deadline, 20 h
/// repairs, 1000 m/s budgets, starting 2021-03-12 04:00:00 UTC.
pub fn case_study() -> Scenario {
    ScenarioSpec::from_json(CASE_STUDY_JSON)
        .and_then(|s| s.to_scenario())
        .expect("embedded case study is valid")
}

/// Uniformly random GEO scenario: inclinations in [0°, 10°], RAAN and
/// anomaly in [0°, 360°), 2000 m/s budgets and 24 h repairs.
pub fn random_scenario(
    n_targets: usize,
    n_servicers: usize,
    duration_days: f64,
    seed: u64,
) -> Scenario {
    assert!(n_targets >= 1 && n_servicers >= 1, "need at least one target and servicer");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orbit = || {
        (
            rng.gen_range(0.0..=10.0),
            rng.gen_range(0.0..360.0),
            rng.gen_range(0.0..360.0),
        )
    };
    let servicers = (1..=n_servicers)
        .map(|i| {
            let (inc, raan, u) = orbit();
            ServicerRecord {
                name: format!("SSc{i}"),
                inclination_deg: inc,
                raan_deg: raan,
                true_anomaly_deg: u,
                dv_budget_mps: 2000.0,
            }
        })
        .collect();
    let targets = (1..=n_targets)
        .map(|i| {
            let (inc, raan, u) = orbit();
            TargetRecord {
                name: format!("T{i:02}"),
                inclination_deg: inc,
                raan_deg: raan,
                true_anomaly_deg: u,
                repair_hours: 24.0,
            }
        })
        .collect();
    let epoch = Utc.with_ymd_and_hms(2021, 3, 12, 4, 0, 0).unwrap();
    ScenarioSpec {
        epoch: epoch.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        deadline_hours: duration_days * 24.0,
        servicers,
        targets,
        constants: None,
    }
    .to_scenario()
    .expect("generated scenario is valid")
}
