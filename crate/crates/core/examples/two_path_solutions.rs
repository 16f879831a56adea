//! Two-period solutions of random smooth paths and the doubled-trace
//! checks at each of them.

use std::f64::consts::TAU;

use trajectoid::path_model::gen_fourier_random;
use trajectoid::rolling_map::sphere_trace;
use trajectoid::solver::{solve_n, SigmaRange};
use trajectoid::spherical_geometry::{double_trace, enclosed_area};

fn main() -> trajectoid::Result<()> {
    for seed in 0..5 {
        let path = gen_fourier_random(seed, 5, 1.0)?;
        let sols = solve_n(&path, 2, SigmaRange::default(), 2000)?;
        println!("seed {seed}: {} two-period solutions", sols.len());
        for s in sols.iter().filter(|s| !s.antipodal) {
            let trace = sphere_trace(&path, s.radius)?;
            let doubled = double_trace(&trace)?;
            let area = enclosed_area(&doubled.trace)?;
            let r2 = s.radius * s.radius;
            println!(
                "  σ* = {:.10}  |φ−π| = {:.1e}  |S̄−π| = {:.1e}  gap/r = {:.1e}  corner defect = {:.1e}  |S₂ − 2πr²|/r² = {:.1e}",
                s.sigma,
                s.residual_angle,
                s.area_residual.unwrap_or(f64::NAN),
                doubled.closure_gap / s.radius,
                doubled.corner_sum_defect(path.junction_turn()),
                (area.mod_sphere() / r2 - TAU).abs(),
            );
        }
    }
    Ok(())
}
