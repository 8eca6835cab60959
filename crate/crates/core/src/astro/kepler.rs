use std::f64::consts::TAU;

use super::{AstroError, Vector3};

/// Stumpff functions C(z) and S(z).
pub(crate) fn stumpff(z: f64) -> (f64, f64) {
    if z > 1e-6 {
        let s = z.sqrt();
        ((1.0 - s.cos()) / z, (s - s.sin()) / (s * z))
    } else if z < -1e-6 {
        let s = (-z).sqrt();
        ((s.cosh() - 1.0) / -z, (s.sinh() - s) / (s * -z))
    } else {
        (
            0.5 - z / 24.0 + z * z / 720.0 - z * z * z / 40_320.0,
            1.0 / 6.0 - z / 120.0 + z * z / 5040.0 - z * z * z / 362_880.0,
        )
    }
}

/// Two-body propagation of `(r0, v0)` by `dt` seconds (universal variables).
///
/// Elliptic arcs are reduced modulo the orbital period first, so many-revolution
/// propagation keeps full precision.
pub fn propagate(
    r0: &Vector3,
    v0: &Vector3,
    dt: f64,
    mu: f64,
) -> Result<(Vector3, Vector3), AstroError> {
    let r0n = r0.norm();
    let v0n2 = v0.norm_squared();
    let sqrt_mu = mu.sqrt();
    let vr0 = r0.dot(v0) / r0n;
    // reciprocal semimajor axis
    let alpha = 2.0 / r0n - v0n2 / mu;

    let mut dt = dt;
    if alpha > 1e-12 {
        let period = TAU / (alpha.powi(3) * mu).sqrt();
        dt -= (dt / period).round() * period;
    }
    if dt == 0.0 {
        return Ok((*r0, *v0));
    }

    let a_term = r0n * vr0 / sqrt_mu;
    let b_term = 1.0 - alpha * r0n;
    // residual of the universal Kepler equation and its derivative (r / √μ · √μ)
    let kepler = |chi: f64| {
        let z = alpha * chi * chi;
        let (c, s) = stumpff(z);
        let f = a_term * chi * chi * c + b_term * chi.powi(3) * s + r0n * chi - sqrt_mu * dt;
        let fp = a_term * chi * (1.0 - z * s) + b_term * chi * chi * c + r0n;
        (f, fp)
    };

    // the residual is increasing in chi; bracket the root, then Newton with bisection fallback
    let mut chi = if alpha > 1e-12 {
        sqrt_mu * alpha * dt
    } else {
        sqrt_mu * dt / r0n
    };
    let (mut lo, mut hi) = if alpha > 1e-12 {
        let full = TAU / alpha.sqrt();
        (-full, full)
    } else {
        let mut w = chi.abs().max(1.0);
        while kepler(-w).0 > 0.0 || kepler(w).0 < 0.0 {
            w *= 2.0;
            if !w.is_finite() {
                return Err(AstroError::NoConvergence("universal Kepler equation"));
            }
        }
        (-w, w)
    };
    chi = chi.clamp(lo, hi);
    let mut converged = false;
    for _ in 0..200 {
        let (f, fp) = kepler(chi);
        if f == 0.0 {
            converged = true;
            break;
        }
        if f > 0.0 {
            hi = chi;
        } else {
            lo = chi;
        }
        let newton = chi - f / fp;
        let next = if newton > lo && newton < hi && fp > 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = next - chi;
        chi = next;
        if step.abs() <= 1e-13 * chi.abs().max(1e-8) || hi - lo <= 1e-15 * chi.abs().max(1e-8) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(AstroError::NoConvergence("universal Kepler equation"));
    }

    let z = alpha * chi * chi;
    let (c, s) = stumpff(z);
    let f = 1.0 - chi * chi / r0n * c;
    let g = dt - chi.powi(3) / sqrt_mu * s;
    let r = r0 * f + v0 * g;
    let rn = r.norm();
    let fdot = sqrt_mu / (rn * r0n) * (alpha * chi.powi(3) * s - chi);
    let gdot = 1.0 - chi * chi / rn * c;
    let v = r0 * fdot + v0 * gdot;
    Ok((r, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::astro::{orbit_to_state, GeoOrbit, PhysicalConstants};

    #[test]
    fn circular_propagation_matches_closed_form() {
        let c = PhysicalConstants::default();
        let o = GeoOrbit::from_degrees(3.3, 47.0, 212.0);
        let s0 = orbit_to_state(&o, 0.0, &c);
        for dt in [1.0, 3600.0, 0.5 * c.t_geo, 7.3 * c.t_geo, 100.0 * c.t_geo + 17.0] {
            let (r, v) = propagate(&s0.r, &s0.v, dt, c.mu).unwrap();
            let s = orbit_to_state(&o, dt, &c);
            assert!((r - s.r).norm() < 1e-6, "dt={dt} {}", (r - s.r).norm());
            assert!((v - s.v).norm() < 1e-9);
            assert!(((r.norm() - c.r_geo) / c.r_geo).abs() < 1e-9);
            assert!(((v.norm() - c.circular_speed()) / c.circular_speed()).abs() < 1e-9);
        }
    }

    #[test]
    fn elliptic_round_trip() {
        let c = PhysicalConstants::default();
        let r0 = Vector3::new(c.r_geo, 0.0, 0.0);
        let v0 = Vector3::new(0.1, 3.3, 0.2);
        let (r1, v1) = propagate(&r0, &v0, 40_000.0, c.mu).unwrap();
        let (r2, v2) = propagate(&r1, &v1, -40_000.0, c.mu).unwrap();
        assert!((r2 - r0).norm() < 1e-6);
        assert!((v2 - v0).norm() < 1e-9);
    }

    #[test]
    fn hyperbolic_energy_conserved() {
        let mu = PhysicalConstants::EARTH_MU;
        let r0 = Vector3::new(7000.0, 0.0, 0.0);
        let v0 = Vector3::new(0.0, 12.0, 0.0);
        let (r, v) = propagate(&r0, &v0, 5000.0, mu).unwrap();
        let e0 = v0.norm_squared() / 2.0 - mu / r0.norm();
        let e1 = v.norm_squared() / 2.0 - mu / r.norm();
        assert!(((e1 - e0) / e0).abs() < 1e-10);
        let h0 = r0.cross(&v0);
        assert!((r.cross(&v) - h0).norm() / h0.norm() < 1e-10);
    }
}
