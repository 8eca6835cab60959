//! Two-body orbital mechanics for circular geosynchronous orbits.
//!
//! Everything here is a pure function of its inputs. Positions are in km,
//! velocities in km/s and times in seconds since the scenario epoch. Impulses
//! and Δv magnitudes are reported in m/s.

mod geometry;
mod kepler;
mod lambert;
mod phasing;
mod rendezvous;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use geometry::{
    angular_momentum_dir, coast_time_to_node, dihedral_angle, node_intersections, orbit_to_state,
    phase_angle, plane_change_impulse,
};
pub use kepler::propagate;
pub use lambert::{lambert_rendezvous_cost, lambert_solve};
pub use phasing::{phasing_impulses, phasing_solution, PhasingSolution};
pub use rendezvous::{rendezvous_mixed, RendezvousSolution};

/// Cartesian 3-vector in the Earth-centred inertial frame.
pub type Vector3 = nalgebra::Vector3<f64>;

/// Dihedral angles below this are treated as coplanar.
pub const COPLANAR_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AstroError {
    #[error("orbit planes are coplanar (dihedral angle {0:e} rad); node line undefined")]
    DegeneratePlanes(f64),
    #[error("phasing revolutions must be at least 1, got {0}")]
    InvalidRevolutions(u32),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("transfer geometry is collinear; Lambert arc plane undefined")]
    CollinearGeometry,
    #[error("time of flight must be positive, got {0}")]
    InvalidTimeOfFlight(f64),
}

/// Gravitational parameter and the derived geosynchronous radius and period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// km³/s²
    pub mu: f64,
    /// km
    pub r_geo: f64,
    /// s
    pub t_geo: f64,
}

impl PhysicalConstants {
    pub const EARTH_MU: f64 = 398_600.441_8;
    pub const SIDEREAL_DAY: f64 = 86_164.090_5;

    /// Derives the GEO radius from the period so that Kepler's third law holds
    /// to rounding.
    pub fn from_mu_and_period(mu: f64, t_geo: f64) -> Self {
        let n = TAU / t_geo;
        let r_geo = (mu / (n * n)).cbrt();
        Self { mu, r_geo, t_geo }
    }

    pub fn mean_motion(&self) -> f64 {
        TAU / self.t_geo
    }

    /// Circular GEO speed in km/s.
    pub fn circular_speed(&self) -> f64 {
        (self.mu / self.r_geo).sqrt()
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::from_mu_and_period(Self::EARTH_MU, Self::SIDEREAL_DAY)
    }
}

/// A circular GEO orbit: plane orientation plus the argument of latitude at
/// the scenario epoch. Radius is always the GEO radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoOrbit {
    /// rad, in [0, π)
    pub inclination: f64,
    /// rad, in [0, 2π)
    pub raan: f64,
    /// rad, in [0, 2π), measured from the ascending node
    pub arg_lat0: f64,
}

impl GeoOrbit {
    /// Builds a normalized orbit. For equatorial orbits the node is undefined,
    /// so the RAAN is folded into the argument of latitude and set to zero,
    /// which leaves the position unchanged.
    pub fn new(inclination: f64, raan: f64, arg_lat0: f64) -> Self {
        let inclination = inclination.rem_euclid(PI);
        let (raan, arg_lat0) = if inclination == 0.0 {
            (0.0, wrap_two_pi(raan + arg_lat0))
        } else {
            (wrap_two_pi(raan), wrap_two_pi(arg_lat0))
        };
        Self {
            inclination,
            raan,
            arg_lat0,
        }
    }

    pub fn from_degrees(inclination_deg: f64, raan_deg: f64, arg_lat_deg: f64) -> Self {
        Self::new(
            inclination_deg.to_radians(),
            raan_deg.to_radians(),
            arg_lat_deg.to_radians(),
        )
    }

    /// Argument of latitude at time `t`.
    pub fn arg_lat_at(&self, t: f64, consts: &PhysicalConstants) -> f64 {
        wrap_two_pi(self.arg_lat0 + consts.mean_motion() * t)
    }
}

/// Position, velocity and epoch offset of a spacecraft.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianState {
    pub r: Vector3,
    pub v: Vector3,
    pub t: f64,
}

impl CartesianState {
    pub fn new(r: Vector3, v: Vector3, t: f64) -> Self {
        Self { r, v, t }
    }

    /// Unit orbit normal.
    pub fn normal(&self) -> Vector3 {
        self.r.cross(&self.v).normalize()
    }
}

pub(crate) fn wrap_two_pi(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Wraps to (−π, π].
pub(crate) fn wrap_pi(angle: f64) -> f64 {
    let a = wrap_two_pi(angle);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Signed angle from `from` to `to` about `axis`, in (−π, π].
pub(crate) fn signed_angle(from: &Vector3, to: &Vector3, axis: &Vector3) -> f64 {
    let y = from.cross(to).dot(axis);
    let x = from.dot(to);
    let a = y.atan2(x * axis.norm());
    if a <= -PI {
        PI
    } else {
        a
    }
}

pub(crate) const KM_S_TO_M_S: f64 = 1000.0;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn period_radius_consistent() {
        let c = PhysicalConstants::default();
        let t = TAU * (c.r_geo.powi(3) / c.mu).sqrt();
        assert_relative_eq!(t, c.t_geo, max_relative = 1e-9);
        assert!((c.r_geo - 42_164.17).abs() < 0.01, "{}", c.r_geo);
        assert!((c.circular_speed() * 1000.0 - 3074.7).abs() < 0.1);
    }

    #[test]
    fn equatorial_orbit_folds_raan() {
        let o = GeoOrbit::from_degrees(0.0, 30.0, 20.0);
        assert_eq!(o.raan, 0.0);
        assert_relative_eq!(o.arg_lat0, 50f64.to_radians(), epsilon = 1e-15);
    }

    #[test]
    fn wrap_helpers() {
        assert_eq!(wrap_two_pi(-1e-300), 0.0);
        assert_relative_eq!(wrap_pi(3.0 * PI), PI);
        assert_relative_eq!(wrap_pi(-PI), PI);
        assert_relative_eq!(wrap_pi(200f64.to_radians()), -160f64.to_radians(), epsilon = 1e-12);
    }
}
