use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Duration, SecondsFormat, Utc};
use serde::Serialize;

use crate::planning::{Evaluation, Scenario};
use crate::search::{GaParams, GenerationStats, LnsParams};

use super::CliError;

pub const SCHEDULE_HEADER: [&str; 17] = [
    "servicer",
    "target",
    "impulse1_x_mps",
    "impulse1_y_mps",
    "impulse1_z_mps",
    "impulse2_x_mps",
    "impulse2_y_mps",
    "impulse2_z_mps",
    "impulse1_time",
    "impulse2_time",
    "impulse1_iso",
    "impulse2_iso",
    "coast_time_s",
    "maneuver_time_s",
    "revolutions",
    "repair_end_iso",
    "dv_mps",
];

pub const CONVERGENCE_HEADER: [&str; 3] = ["generation", "best_fitness", "average_fitness"];

pub fn timestamp(epoch: &DateTime<Utc>, seconds: f64) -> DateTime<Utc> {
    *epoch + Duration::milliseconds((seconds * 1000.0).round() as i64)
}

/// `MM/DD HH:MM:SS` in UTC.
pub fn short_time(t: &DateTime<Utc>) -> String {
    t.format("%m/%d %H:%M:%S").to_string()
}

pub fn iso_time(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn write_schedule(path: &Path, scenario: &Scenario, eval: &Evaluation) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SCHEDULE_HEADER)?;
    for leg in &eval.legs {
        let (i1, t1) = leg.impulse1();
        let (i2, t2) = leg.impulse2();
        let (t1, t2) = (timestamp(&scenario.epoch, t1), timestamp(&scenario.epoch, t2));
        let end = timestamp(&scenario.epoch, leg.departure);
        let revs = leg.revolutions().map(|k| k.to_string()).unwrap_or_default();
        w.write_record([
            scenario.servicer(leg.servicer_id).name.clone(),
            scenario.target(leg.target_id).name.clone(),
            format!("{:.4}", i1.x),
            format!("{:.4}", i1.y),
            format!("{:.4}", i1.z),
            format!("{:.4}", i2.x),
            format!("{:.4}", i2.y),
            format!("{:.4}", i2.z),
            short_time(&t1),
            short_time(&t2),
            iso_time(&t1),
            iso_time(&t2),
            format!("{:.3}", leg.coast_time()),
            format!("{:.3}", leg.maneuver_time()),
            revs,
            iso_time(&end),
            format!("{:.4}", leg.dv()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_convergence(path: &Path, history: &[GenerationStats]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CONVERGENCE_HEADER)?;
    for g in history {
        w.write_record([g.generation.to_string(), g.best_fitness.to_string(), g.average_fitness.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ServicerSummary {
    pub name: String,
    pub dv_mps: f64,
    pub budget_mps: f64,
    pub targets: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub algorithm: String,
    pub scenario: String,
    pub seed: Option<u64>,
    pub total_dv_mps: f64,
    pub fitness: f64,
    pub feasible: bool,
    pub deadline_penalty_s: f64,
    pub budget_penalty_mps: f64,
    pub servicers: Vec<ServicerSummary>,
    pub generations: Option<usize>,
    pub wall_time_s: f64,
    pub ga: Option<GaParams>,
    pub lns: Option<LnsParams>,
    pub max_revolutions: Option<u32>,
}

impl Summary {
    pub fn servicers(scenario: &Scenario, eval: &Evaluation) -> Vec<ServicerSummary> {
        scenario
            .servicers
            .iter()
            .zip(&eval.per_servicer_dv)
            .map(|(s, dv)| ServicerSummary {
                name: s.name.clone(),
                dv_mps: *dv,
                budget_mps: s.dv_budget,
                targets: eval
                    .legs
                    .iter()
                    .filter(|l| l.servicer_id == s.id)
                    .map(|l| scenario.target(l.target_id).name.clone())
                    .collect(),
            })
            .collect()
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
