//! Carves the two-period solid of a random smooth path and exports it.

use std::f64::consts::TAU;

use trajectoid::mesh_forge::{
    carve_with, export_obj, export_stl, max_cut_spacing, CarveConfig, SolidMetadata,
};
use trajectoid::path_model::gen_fourier_random;
use trajectoid::roll_verify::SUPPORT_TOL_REL;
use trajectoid::rolling_map::sphere_trace_with_step;
use trajectoid::solver::{solve_n, SigmaRange};

fn main() -> trajectoid::Result<()> {
    // millimetre scale: a 100 mm path period
    let path = gen_fourier_random(0, 5, 1.0)?.scaled(100.0)?;
    let sol = solve_n(&path, 2, SigmaRange::default(), 2000)?
        .into_iter()
        .find(|s| !s.antipodal)
        .expect("seed 0 has a two-period solution");
    println!("σ* = {:.10}, r* = {:.6} mm", sol.sigma, sol.radius);

    let spacing = 0.9 * max_cut_spacing(SUPPORT_TOL_REL);
    let trace = sphere_trace_with_step(&path.repeated(2), sol.radius, spacing)?;
    println!(
        "trace spans {:.3} rad in {} points",
        trace.geodesic_length() / sol.radius,
        trace.len()
    );
    let config = CarveConfig {
        max_cuts: 2000,
        ..CarveConfig::default()
    };
    let start = std::time::Instant::now();
    let solid = carve_with(&trace, 1.4 * sol.radius, 5, &config)?;
    let check = solid.check();
    println!(
        "{} cuts, {} triangles in {:.2?}; watertight {}, manifold {}, χ = {}, planarity {:.1e}, pass {}",
        solid.cut_count(),
        solid.mesh.triangles.len(),
        start.elapsed(),
        check.mesh.watertight,
        check.mesh.manifold,
        check.mesh.euler_characteristic,
        check.facet_planarity,
        check.pass
    );
    println!(
        "volume {:.1} mm³ (ball {:.1}, shell ball {:.1})",
        solid.mesh.volume(),
        2.0 / 3.0 * TAU * sol.radius.powi(3),
        2.0 / 3.0 * TAU * (1.4 * sol.radius).powi(3)
    );

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("trajectoid.stl"), export_stl(&solid.mesh))?;
    std::fs::write(dir.join("trajectoid.obj"), export_obj(&solid.mesh))?;
    let meta = SolidMetadata::new(&solid, Some(2), Some(sol.sigma), check.pass);
    std::fs::write(dir.join("trajectoid.json"), serde_json::to_string_pretty(&meta)?)?;
    println!("wrote trajectoid.stl, .obj and .json to {}", dir.display());
    Ok(())
}
