use serde::Serialize;

use super::geometry::node_line;
use super::{
    angular_momentum_dir, coast_time_to_node, orbit_to_state, phasing_impulses, phasing_solution,
    signed_angle, AstroError, CartesianState, GeoOrbit, PhysicalConstants, Vector3, KM_S_TO_M_S,
};

/// One servicer-to-target transfer using the combined plane-change/phasing
/// strategy. Impulses are in m/s, times in seconds since epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RendezvousSolution {
    /// Combined plane change and phasing entry burn.
    pub impulse1: Vector3,
    pub t1: f64,
    /// Phasing exit burn, applied at the rendezvous.
    pub impulse2: Vector3,
    pub t2: f64,
    pub coast_time: f64,
    pub phase_time: f64,
    pub total_time: f64,
    pub total_dv: f64,
    pub revolutions: u32,
    /// Dihedral angle between the two planes.
    pub alpha: f64,
    /// Signed phase angle at the maneuver point, positive when the target leads.
    pub theta: f64,
    /// The plane-change component of `impulse1`.
    pub plane_change: Vector3,
    /// The phasing-entry component of `impulse1`.
    pub phasing_entry: Vector3,
}

impl RendezvousSolution {
    /// Cost of flying the plane change and both phasing burns separately.
    pub fn three_impulse_dv(&self) -> f64 {
        self.plane_change.norm() + 2.0 * self.phasing_entry.norm()
    }
}

/// Transfer from a circular GEO servicer state onto `target` with `k` phasing
/// revolutions.
///
/// The servicer coasts to the nearer node of the two planes, applies the plane
/// change merged with the phasing entry burn, flies `k` revolutions of the
/// phasing ellipse and circularizes on top of the target. For coplanar orbits
/// the maneuver starts immediately.
pub fn rendezvous_mixed(
    servicer: &CartesianState,
    target: &GeoOrbit,
    k: u32,
    consts: &PhysicalConstants,
) -> Result<RendezvousSolution, AstroError> {
    if k < 1 {
        return Err(AstroError::InvalidRevolutions(k));
    }
    let h_s = servicer.normal();
    let h_t = angular_momentum_dir(target);
    let alpha = h_s.cross(&h_t).norm().atan2(h_s.dot(&h_t));

    let (coast_time, node_dir) = match node_line(&h_s, &h_t) {
        Ok(n) => {
            let c1 = coast_time_to_node(servicer, &n, &h_s, consts);
            let c2 = coast_time_to_node(servicer, &-n, &h_s, consts);
            if c1 <= c2 {
                (c1, n)
            } else {
                (c2, -n)
            }
        }
        Err(AstroError::DegeneratePlanes(_)) => (0.0, servicer.r.normalize()),
        Err(e) => return Err(e),
    };

    let t1 = servicer.t + coast_time;
    let speed = consts.circular_speed();
    let v_servicer = h_s.cross(&node_dir) * speed;
    let v_m = h_t.cross(&node_dir) * speed;
    let plane_change = (v_m - v_servicer) * KM_S_TO_M_S;

    let target_at_node_time = orbit_to_state(target, t1, consts);
    let theta = signed_angle(&node_dir, &target_at_node_time.r, &h_t);
    // a leading target reaches the node after k revolutions minus its lead
    let phasing = phasing_solution(-theta, k, consts)?;
    let (entry, exit) = phasing_impulses(&v_m, theta, phasing.dv);

    let impulse1 = plane_change + entry;
    let phase_time = phasing.t_phase;
    Ok(RendezvousSolution {
        impulse1,
        t1,
        impulse2: exit,
        t2: t1 + phase_time,
        coast_time,
        phase_time,
        total_time: coast_time + phase_time,
        total_dv: impulse1.norm() + exit.norm(),
        revolutions: k,
        alpha,
        theta,
        plane_change,
        phasing_entry: entry,
    })
}
