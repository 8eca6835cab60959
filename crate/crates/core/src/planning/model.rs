use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::astro::{GeoOrbit, PhysicalConstants};
use crate::scenarios::{ConstantsRecord, ScenarioError, ScenarioSpec, ServicerRecord, TargetRecord};

/// A satellite awaiting repair. Ids are 1-based and contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub id: usize,
    pub name: String,
    pub orbit: GeoOrbit,
    /// s
    pub repair_duration: f64,
}

/// A servicing spacecraft. Ids are 1-based and contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Servicer {
    pub id: usize,
    pub name: String,
    pub orbit: GeoOrbit,
    /// Total Δv available over the whole route, m/s.
    pub dv_budget: f64,
}

/// An immutable planning problem. Times are seconds since `epoch`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub epoch: DateTime<Utc>,
    /// Mission deadline, s since epoch.
    pub deadline: f64,
    pub servicers: Vec<Servicer>,
    pub targets: Vec<Target>,
    pub constants: PhysicalConstants,
    // the boundary representation this scenario was built from, kept so that
    // saving reproduces the input digits exactly
    spec: ScenarioSpec,
}

impl Scenario {
    /// Builds a scenario from radians/seconds values; ids are assigned from
    /// list order.
    pub fn new(
        epoch: DateTime<Utc>,
        deadline: f64,
        servicers: Vec<(String, GeoOrbit, f64)>,
        targets: Vec<(String, GeoOrbit, f64)>,
        constants: PhysicalConstants,
    ) -> Result<Self, ScenarioError> {
        let spec = ScenarioSpec {
            epoch: epoch.to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true),
            deadline_hours: deadline / 3600.0,
            servicers: servicers
                .iter()
                .map(|(name, o, dv)| ServicerRecord {
                    name: name.clone(),
                    inclination_deg: o.inclination.to_degrees(),
                    raan_deg: o.raan.to_degrees(),
                    true_anomaly_deg: o.arg_lat0.to_degrees(),
                    dv_budget_mps: *dv,
                })
                .collect(),
            targets: targets
                .iter()
                .map(|(name, o, t)| TargetRecord {
                    name: name.clone(),
                    inclination_deg: o.inclination.to_degrees(),
                    raan_deg: o.raan.to_degrees(),
                    true_anomaly_deg: o.arg_lat0.to_degrees(),
                    repair_hours: t / 3600.0,
                })
                .collect(),
            constants: Some(ConstantsRecord {
                mu_km3s2: constants.mu,
                t_geo_s: constants.t_geo,
            }),
        };
        let scenario = Self {
            epoch,
            deadline,
            servicers: servicers
                .into_iter()
                .enumerate()
                .map(|(i, (name, orbit, dv_budget))| Servicer {
                    id: i + 1,
                    name,
                    orbit,
                    dv_budget,
                })
                .collect(),
            targets: targets
                .into_iter()
                .enumerate()
                .map(|(i, (name, orbit, repair_duration))| Target {
                    id: i + 1,
                    name,
                    orbit,
                    repair_duration,
                })
                .collect(),
            constants,
            spec,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub(crate) fn with_spec(mut self, spec: ScenarioSpec) -> Self {
        self.spec = spec;
        self
    }

    /// The degree/hour representation used for files.
    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn target_count(&self) -> usize {
        self.targets.len()
    }

    pub fn servicer_count(&self) -> usize {
        self.servicers.len()
    }

    pub fn target(&self, id: usize) -> &Target {
        &self.targets[id - 1]
    }

    pub fn servicer(&self, id: usize) -> &Servicer {
        &self.servicers[id - 1]
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Validation(msg));
        if !(self.deadline > 0.0) {
            return invalid(format!("deadline must be positive, got {} s", self.deadline));
        }
        if self.servicers.is_empty() {
            return invalid("at least one servicer is required".into());
        }
        if self.targets.is_empty() {
            return invalid("at least one target is required".into());
        }
        let c = &self.constants;
        if !(c.mu > 0.0 && c.t_geo > 0.0 && c.r_geo > 0.0) {
            return invalid("physical constants must be positive".into());
        }
        for s in &self.servicers {
            if !(s.dv_budget > 0.0) {
                return invalid(format!("servicer {} has non-positive dv budget {}", s.name, s.dv_budget));
            }
            check_orbit(&s.name, &s.orbit)?;
        }
        for t in &self.targets {
            if !(t.repair_duration >= 0.0) {
                return invalid(format!("target {} has negative repair time", t.name));
            }
            check_orbit(&t.name, &t.orbit)?;
        }
        Ok(())
    }
}

fn check_orbit(name: &str, o: &GeoOrbit) -> Result<(), ScenarioError> {
    if o.inclination.is_finite() && o.raan.is_finite() && o.arg_lat0.is_finite() {
        Ok(())
    } else {
        Err(ScenarioError::Validation(format!("{name} has non-finite orbit angles")))
    }
}

/// One servicer's ordered targets and the phasing revolutions for each leg.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub servicer_id: usize,
    pub target_sequence: Vec<usize>,
    pub revolutions: Vec<u32>,
}

impl Route {
    pub fn empty(servicer_id: usize) -> Self {
        Self {
            servicer_id,
            target_sequence: Vec::new(),
            revolutions: Vec::new(),
        }
    }
}

/// One route per servicer, in servicer order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissionPlan {
    pub routes: Vec<Route>,
}

impl MissionPlan {
    pub fn sequences(&self) -> Vec<Vec<usize>> {
        self.routes.iter().map(|r| r.target_sequence.clone()).collect()
    }

    /// Servicer id serving `target`, if any.
    pub fn servicer_of(&self, target: usize) -> Option<usize> {
        self.routes
            .iter()
            .find(|r| r.target_sequence.contains(&target))
            .map(|r| r.servicer_id)
    }

    /// Checks the structural invariants against `scenario`: one route per
    /// servicer, each target exactly once, revolutions aligned and ≥ 1.
    pub fn validate(&self, scenario: &Scenario) -> Result<(), String> {
        if self.routes.len() != scenario.servicer_count() {
            return Err(format!(
                "plan has {} routes for {} servicers",
                self.routes.len(),
                scenario.servicer_count()
            ));
        }
        let mut seen = vec![false; scenario.target_count()];
        for (i, route) in self.routes.iter().enumerate() {
            if route.servicer_id != i + 1 {
                return Err(format!("route {i} belongs to servicer {}", route.servicer_id));
            }
            if route.revolutions.len() != route.target_sequence.len() {
                return Err(format!("route {} revolutions/targets length mismatch", i + 1));
            }
            if route.revolutions.iter().any(|&k| k < 1) {
                return Err(format!("route {} has a leg with zero revolutions", i + 1));
            }
            for &t in &route.target_sequence {
                if t == 0 || t > seen.len() {
                    return Err(format!("unknown target id {t}"));
                }
                if std::mem::replace(&mut seen[t - 1], true) {
                    return Err(format!("target {t} appears twice"));
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(t) => Err(format!("target {} is not served", t + 1)),
            None => Ok(()),
        }
    }
}
