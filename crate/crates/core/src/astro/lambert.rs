use std::f64::consts::{PI, TAU};

use super::kepler::stumpff;
use super::{orbit_to_state, AstroError, CartesianState, GeoOrbit, PhysicalConstants, Vector3, KM_S_TO_M_S};

const MAX_BRACKET_STEPS: usize = 60;
const MAX_BISECTIONS: usize = 200;

/// Zero-revolution Lambert arc from `r1` to `r2` in `tof` seconds.
///
/// Universal-variable formulation solved by bisection on `z`, where the time
/// of flight is monotone. `prograde` selects the transfer sense relative to
/// the inertial +z axis.
pub fn lambert_solve(
    r1: &Vector3,
    r2: &Vector3,
    tof: f64,
    prograde: bool,
    consts: &PhysicalConstants,
) -> Result<(Vector3, Vector3), AstroError> {
    if !(tof > 0.0) {
        return Err(AstroError::InvalidTimeOfFlight(tof));
    }
    let mu = consts.mu;
    let r1n = r1.norm();
    let r2n = r2.norm();
    let cos_dnu = (r1.dot(r2) / (r1n * r2n)).clamp(-1.0, 1.0);
    let cross_z = r1.cross(r2).z;
    let mut dnu = cos_dnu.acos();
    if (prograde && cross_z < 0.0) || (!prograde && cross_z >= 0.0) {
        dnu = TAU - dnu;
    }
    let a = dnu.sin() * (r1n * r2n / (1.0 - cos_dnu)).sqrt();
    if !a.is_finite() || a.abs() < 1e-9 * (r1n + r2n) || (dnu - PI).abs() < 1e-8 {
        return Err(AstroError::CollinearGeometry);
    }

    let y_of = |z: f64| {
        let (c, s) = stumpff(z);
        r1n + r2n + a * (z * s - 1.0) / c.sqrt()
    };
    // time of flight as a function of z; None where y < 0 (below the feasible branch)
    let tof_of = |z: f64| -> Option<f64> {
        let y = y_of(z);
        if y < 0.0 {
            return None;
        }
        let (c, s) = stumpff(z);
        Some(((y / c).powf(1.5) * s + a * y.sqrt()) / mu.sqrt())
    };
    let too_short = |z: f64| tof_of(z).is_none_or(|t| t < tof);

    // approach the zero-revolution limit z = 4π² until the flight time exceeds tof
    let z_max = TAU * TAU;
    let mut gap = 1.0;
    let mut hi = z_max - gap;
    while too_short(hi) && gap > 1e-9 {
        gap *= 0.5;
        hi = z_max - gap;
    }
    let mut lo = -1.0_f64.min(hi - 1.0);
    let mut steps = 0;
    while !too_short(lo) {
        hi = lo;
        lo *= 2.0;
        steps += 1;
        if steps > MAX_BRACKET_STEPS || lo < -1e6 {
            return Err(AstroError::NoConvergence("Lambert bracket"));
        }
    }
    if too_short(hi) {
        return Err(AstroError::NoConvergence("Lambert bracket"));
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        z = 0.5 * (lo + hi);
        if too_short(z) {
            lo = z;
        } else {
            hi = z;
        }
        if hi - lo <= 1e-15 * z.abs().max(1.0) {
            break;
        }
    }
    let y = y_of(z);
    if y < 0.0 {
        return Err(AstroError::NoConvergence("Lambert iteration"));
    }
    let f = 1.0 - y / r1n;
    let g = a * (y / mu).sqrt();
    let gdot = 1.0 - y / r2n;
    let v1 = (r2 - r1 * f) / g;
    let v2 = (r2 * gdot - r1) / g;
    Ok((v1, v2))
}

/// Two-impulse rendezvous cost (m/s) to reach `target` after `tof` seconds
/// along a zero-revolution prograde Lambert arc.
pub fn lambert_rendezvous_cost(
    servicer: &CartesianState,
    target: &GeoOrbit,
    tof: f64,
    consts: &PhysicalConstants,
) -> Result<f64, AstroError> {
    let arrival = orbit_to_state(target, servicer.t + tof, consts);
    let (v1, v2) = lambert_solve(&servicer.r, &arrival.r, tof, true, consts)?;
    Ok(((v1 - servicer.v).norm() + (arrival.v - v2).norm()) * KM_S_TO_M_S)
}
