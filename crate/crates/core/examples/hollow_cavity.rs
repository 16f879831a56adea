//! Hollows a cavity for the heavy ball, with a bore wide enough to insert it.

use std::f64::consts::TAU;

use trajectoid::mesh_forge::{carve, core_cavity, CavityConfig};
use trajectoid::path_model::gen_straight;
use trajectoid::rolling_map::sphere_trace_with_step;

fn main() -> trajectoid::Result<()> {
    // a 1-period solid for a straight path: a ball with a flat band, r = 20 mm
    let r = 20.0;
    let trace = sphere_trace_with_step(&gen_straight(TAU * r)?, r, 5e-3)?;
    let solid = carve(&trace, 1.4 * r, 4)?;
    for ball in [0.5, 0.7] {
        let hollow = core_cavity(&solid, &CavityConfig::new(ball * r))?;
        let spec = hollow.cavity.expect("cavity recorded");
        let check = hollow.check();
        println!(
            "ball {:.1} mm: bore axis {:?}, neck height {:.3} mm, volume {:.1} → {:.1} mm³, watertight {}, χ = {}, pass {}",
            ball * r,
            [spec.axis.x, spec.axis.y, spec.axis.z],
            spec.neck_height(),
            solid.mesh.volume(),
            hollow.mesh.volume(),
            check.mesh.watertight,
            check.mesh.euler_characteristic,
            check.pass
        );
    }
    Ok(())
}
