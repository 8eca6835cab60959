//! A single mixed plane-change/phasing transfer, swept over the number of
//! phasing revolutions.
//!
//! cargo run --release --example rendezvous_leg

use georepair::astro::{orbit_to_state, propagate, rendezvous_mixed, GeoOrbit, PhysicalConstants};

fn main() {
    let c = PhysicalConstants::default();
    let servicer = GeoOrbit::from_degrees(0.0, 0.0, 0.0);
    let target = GeoOrbit::from_degrees(2.0, 75.0, 140.0);
    let start = orbit_to_state(&servicer, 0.0, &c);

    println!(" k   coast h   phase h   |dv1| m/s  |dv2| m/s  total m/s  miss km");
    for k in 1..=8 {
        let leg = rendezvous_mixed(&start, &target, k, &c).expect("valid leg");
        // fly it: coast, burn, phase, burn, compare with the target
        let (r1, v1) = propagate(&start.r, &start.v, leg.t1, c.mu).unwrap();
        let (r2, _) = propagate(&r1, &(v1 + leg.impulse1 / 1000.0), leg.t2 - leg.t1, c.mu).unwrap();
        let miss = (r2 - orbit_to_state(&target, leg.t2, &c).r).norm();
        println!(
            "{k:>2} {:>9.3} {:>9.3} {:>11.3} {:>10.3} {:>10.3} {:>8.1e}",
            leg.coast_time / 3600.0,
            leg.phase_time / 3600.0,
            leg.impulse1.norm(),
            leg.impulse2.norm(),
            leg.total_dv,
            miss
        );
    }
}
