use std::f64::consts::TAU;

use super::{
    signed_angle, wrap_pi, AstroError, CartesianState, GeoOrbit, PhysicalConstants, Vector3,
    COPLANAR_TOLERANCE, KM_S_TO_M_S,
};

/// Rz(Ω)·Rx(i) applied to an in-plane vector (x along the ascending node).
fn perifocal_to_inertial(orbit: &GeoOrbit, x: f64, y: f64) -> Vector3 {
    let (si, ci) = orbit.inclination.sin_cos();
    let (so, co) = orbit.raan.sin_cos();
    Vector3::new(co * x - so * ci * y, so * x + co * ci * y, si * y)
}

/// Circular GEO state at argument of latitude `arg_lat0 + n·t`.
pub fn orbit_to_state(orbit: &GeoOrbit, t: f64, consts: &PhysicalConstants) -> CartesianState {
    let (su, cu) = orbit.arg_lat_at(t, consts).sin_cos();
    let r = perifocal_to_inertial(orbit, cu, su) * consts.r_geo;
    let v = perifocal_to_inertial(orbit, -su, cu) * consts.circular_speed();
    CartesianState { r, v, t }
}

/// Unit orbit normal, Rz(Ω)·Rx(i)·ẑ.
pub fn angular_momentum_dir(orbit: &GeoOrbit) -> Vector3 {
    let (si, ci) = orbit.inclination.sin_cos();
    let (so, co) = orbit.raan.sin_cos();
    Vector3::new(si * so, -si * co, ci)
}

/// Angle between two orbit planes, in [0, π].
pub fn dihedral_angle(a: &GeoOrbit, b: &GeoOrbit) -> f64 {
    let cos_alpha = a.inclination.sin() * b.inclination.sin() * (a.raan - b.raan).cos()
        + a.inclination.cos() * b.inclination.cos();
    cos_alpha.clamp(-1.0, 1.0).acos()
}

/// The two points at GEO radius where the orbit planes intersect:
/// `r_m1 = r_geo·ĥ_a × ĥ_b` and `r_m2 = −r_m1`.
pub fn node_intersections(
    a: &GeoOrbit,
    b: &GeoOrbit,
    consts: &PhysicalConstants,
) -> Result<(Vector3, Vector3), AstroError> {
    node_line(&angular_momentum_dir(a), &angular_momentum_dir(b))
        .map(|n| (n * consts.r_geo, -n * consts.r_geo))
}

/// Unit vector along `h_a × h_b`, or `DegeneratePlanes` when the normals are
/// (anti)parallel.
pub(crate) fn node_line(h_a: &Vector3, h_b: &Vector3) -> Result<Vector3, AstroError> {
    let cross = h_a.cross(h_b);
    let alpha = cross.norm().atan2(h_a.dot(h_b));
    if alpha < COPLANAR_TOLERANCE || std::f64::consts::PI - alpha < COPLANAR_TOLERANCE {
        return Err(AstroError::DegeneratePlanes(alpha));
    }
    Ok(cross / cross.norm())
}

/// Velocity change that rotates a circular velocity at `r_node` into the
/// plane with unit normal `target_normal`, keeping the speed.
///
/// Returns the impulse in m/s and its magnitude, `2|v|·sin(α/2)`.
pub fn plane_change_impulse(
    r_node: &Vector3,
    v_before: &Vector3,
    target_normal: &Vector3,
) -> (Vector3, f64) {
    let speed = v_before.norm();
    let v_after = target_normal.cross(&r_node.normalize()) * speed;
    let dv = (v_after - v_before) * KM_S_TO_M_S;
    let mag = dv.norm();
    (dv, mag)
}

/// Prograde coast time until the position vector of `state` points along
/// `node`, on an orbit with unit normal `orbit_normal`.
pub fn coast_time_to_node(
    state: &CartesianState,
    node: &Vector3,
    orbit_normal: &Vector3,
    consts: &PhysicalConstants,
) -> f64 {
    let mut angle = signed_angle(&state.r, node, orbit_normal);
    if angle < 0.0 {
        angle += TAU;
    }
    // already at the node up to rounding
    if TAU - angle < 1e-12 {
        angle = 0.0;
    }
    angle / consts.mean_motion()
}

/// Signed phase separation of `b` relative to `a` at time `t`, in (−π, π].
///
/// Positive when `b` leads `a` prograde. Uses the `Ω + u` longitude, which is
/// exact for coplanar orbits and the usual approximation otherwise; its
/// magnitude is the folded phase difference.
pub fn phase_angle(a: &GeoOrbit, b: &GeoOrbit, t: f64, consts: &PhysicalConstants) -> f64 {
    let la = a.raan + a.arg_lat_at(t, consts);
    let lb = b.raan + b.arg_lat_at(t, consts);
    wrap_pi(lb - la)
}
