use std::f64::consts::TAU;

use super::{AstroError, PhysicalConstants, Vector3, KM_S_TO_M_S};

/// Phasing orbit that returns to its tangent point after `k` revolutions,
/// exactly when a body trailing the tangent point by `lag` radians arrives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasingSolution {
    /// s
    pub t_phase: f64,
    /// km
    pub a_phase: f64,
    /// Sum of both tangential burns, m/s.
    pub dv: f64,
}

/// Phasing time, semimajor axis and two-burn cost for `k` revolutions.
///
/// `lag` is the extra angle (rad) the rendezvous body must travel beyond `k`
/// full revolutions to reach the tangent point; negative when it is already
/// past it. With `k` revolutions on both orbits:
///
/// ```text
/// t_phase = (2πk + lag) / 2π · T
/// a_phase = r · ((2πk + lag) / 2πk)^(2/3)
/// Δv      = 2√μ · |√(2/r − 1/a_phase) − √(1/r)|
/// ```
pub fn phasing_solution(
    lag: f64,
    k: u32,
    consts: &PhysicalConstants,
) -> Result<PhasingSolution, AstroError> {
    if k < 1 {
        return Err(AstroError::InvalidRevolutions(k));
    }
    let turns = TAU * f64::from(k);
    let ratio = (turns + lag) / turns;
    let t_phase = ratio * f64::from(k) * consts.t_geo;
    let a_phase = consts.r_geo * ratio.powf(2.0 / 3.0);
    let r = consts.r_geo;
    let dv = 2.0 * consts.mu.sqrt() * ((2.0 / r - 1.0 / a_phase).sqrt() - (1.0 / r).sqrt()).abs();
    Ok(PhasingSolution {
        t_phase,
        a_phase,
        dv: dv * KM_S_TO_M_S,
    })
}

/// Tangential entry and exit burns of a phasing maneuver, in m/s.
///
/// `theta` is the signed phase angle, positive when the target leads. The
/// entry burn is `−½·Δv·sgn(θ)·v̂_m` and the exit burn its negative.
pub fn phasing_impulses(v_m: &Vector3, theta: f64, dv: f64) -> (Vector3, Vector3) {
    let sign = if theta > 0.0 {
        1.0
    } else if theta < 0.0 {
        -1.0
    } else {
        0.0
    };
    let entry = v_m.normalize() * (-0.5 * dv * sign);
    (entry, -entry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent vis-viva evaluation: the orbit with period
    /// (1 + lag/2πk)·T has semimajor axis from Kepler's third law; the burn
    /// at the tangent point changes speed from circular to the vis-viva speed.
    fn vis_viva_oracle(lag_deg: f64, k: u32, c: &PhysicalConstants) -> f64 {
        let period = c.t_geo * (1.0 + lag_deg.to_radians() / (TAU * f64::from(k)));
        let n = TAU / period;
        let a = (c.mu / (n * n)).cbrt();
        let speed = (c.mu * (2.0 / c.r_geo - 1.0 / a)).sqrt();
        2.0 * (speed - c.circular_speed()).abs() * 1000.0
    }

    #[test]
    fn zero_lag_is_free() {
        let c = PhysicalConstants::default();
        for k in 1..5 {
            let s = phasing_solution(0.0, k, &c).unwrap();
            assert_relative_eq!(s.t_phase, f64::from(k) * c.t_geo, max_relative = 1e-15);
            assert_eq!(s.a_phase, c.r_geo);
            assert_eq!(s.dv, 0.0);
        }
    }

    #[test]
    fn quarter_lag_values() {
        let c = PhysicalConstants::default();
        let s1 = phasing_solution(90f64.to_radians(), 1, &c).unwrap();
        assert_relative_eq!(s1.a_phase, c.r_geo * 1.25f64.powf(2.0 / 3.0), max_relative = 1e-14);
        assert!((s1.a_phase - 48_927.0).abs() < 1.0, "{}", s1.a_phase);
        assert_relative_eq!(s1.dv, vis_viva_oracle(90.0, 1, &c), max_relative = 1e-9);
        assert!((s1.dv - 411.0).abs() < 1.0, "{}", s1.dv);

        let s5 = phasing_solution(90f64.to_radians(), 5, &c).unwrap();
        assert_relative_eq!(s5.dv, vis_viva_oracle(90.0, 5, &c), max_relative = 1e-9);
        assert!((s5.dv - 98.0).abs() < 1.0, "{}", s5.dv);
        assert!(s5.dv < s1.dv);
    }

    #[test]
    fn negative_lag_matches_oracle() {
        let c = PhysicalConstants::default();
        for k in 1..=10 {
            for lag in [-179.0, -90.0, -10.0, 10.0, 170.0] {
                let s = phasing_solution(f64::to_radians(lag), k, &c).unwrap();
                assert_relative_eq!(s.dv, vis_viva_oracle(lag, k, &c), max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn zero_revolutions_rejected() {
        assert_eq!(
            phasing_solution(0.1, 0, &PhysicalConstants::default()),
            Err(AstroError::InvalidRevolutions(0))
        );
    }

    #[test]
    fn impulse_directions() {
        let v = Vector3::new(0.0, 3.07, 0.0);
        let (a, b) = phasing_impulses(&v, 0.0, 100.0);
        assert_eq!(a, Vector3::zeros());
        assert_eq!(b, Vector3::zeros());
        let (a, b) = phasing_impulses(&v, 0.3, 100.0);
        assert_relative_eq!(a, Vector3::new(0.0, -50.0, 0.0));
        assert_eq!(a + b, Vector3::zeros());
        let (a, _) = phasing_impulses(&v, -0.3, 100.0);
        assert!(a.dot(&v) > 0.0);
    }
}
