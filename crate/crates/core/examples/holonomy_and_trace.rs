//! One-period holonomy and the body-frame contact trace.

use std::f64::consts::TAU;

use trajectoid::path_model::{gen_straight, gen_v_path};
use trajectoid::rolling_map::{holonomy_at_sigma, is_vertical_axis, sphere_trace};
use trajectoid::spherical_geometry::enclosed_area;

fn main() -> trajectoid::Result<()> {
    // a straight path turns the ball about a horizontal axis by 2πσ
    let straight = gen_straight(1.0)?;
    for sigma in [0.25, 0.5, 0.75, 1.0, 1.3] {
        let rot = holonomy_at_sigma(&straight, sigma)?;
        println!(
            "straight σ = {sigma:<5} φ = {:.12}  expected {:.12}",
            rot.angle(),
            (TAU * sigma)
                .rem_euclid(TAU)
                .min(TAU - (TAU * sigma).rem_euclid(TAU))
        );
    }

    let v = gen_v_path(1.0, 1.0)?;
    for sigma in [0.5, 1.0, 2.0] {
        let rot = holonomy_at_sigma(&v, sigma)?;
        let r = v.length() / (TAU * sigma);
        let trace = sphere_trace(&v, r)?;
        let area = enclosed_area(&trace)?.normalized();
        println!(
            "V σ = {sigma}: φ = {:.6}, axis = {:?}, vertical = {}, trace points = {}, closure gap = {:.3e}, S̄ = {:.6}",
            rot.angle(),
            rot.axis().map(|a| [a.x, a.y, a.z]),
            is_vertical_axis(&rot),
            trace.len(),
            trace.closure_gap(),
            area.reduced
        );
    }

    let trace = sphere_trace(&v, v.length() / (TAU * 2.0))?;
    let csv = trace.to_csv();
    println!("trace CSV preview:");
    for line in csv.lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
