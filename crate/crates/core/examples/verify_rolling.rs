//! Full verification of a two-period solution: holonomy by matrices,
//! replay of the roll, and the support function of the carved solid.

use trajectoid::mesh_forge::{carve_planes, carve_with, max_cut_spacing, CarveConfig};
use trajectoid::path_model::gen_fourier_random;
use trajectoid::roll_verify::{verify_solution, verify_trace_support, SUPPORT_TOL_REL};
use trajectoid::rolling_map::sphere_trace_with_step;
use trajectoid::solver::{solve_n, SigmaRange};

fn main() -> trajectoid::Result<()> {
    let path = gen_fourier_random(2, 5, 1.0)?;
    let sol = solve_n(&path, 2, SigmaRange::default(), 2000)?
        .into_iter()
        .find(|s| !s.antipodal)
        .expect("seed 2 has a two-period solution");

    let spacing = 0.9 * max_cut_spacing(SUPPORT_TOL_REL);
    let periods = path.repeated(2);
    let cut_trace = sphere_trace_with_step(&periods, sol.radius, spacing)?;
    let config = CarveConfig {
        max_cuts: cut_trace.len() + 1,
        ..CarveConfig::default()
    };
    let solid = carve_with(&cut_trace, 1.4 * sol.radius, 4, &config)?;
    // probe between the contact planes as well as on them
    let probe = sphere_trace_with_step(&periods, sol.radius, 0.25 * spacing)?;

    let report = verify_solution(&path, &sol, Some((&solid, &probe)), 6)?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    // removing a run of cuts leaves part of the trace without a contact plane
    let mut sparse = solid.cuts.clone();
    let drop = sparse.len() / 10;
    sparse.drain(0..drop);
    let ablated = carve_planes(&sparse, sol.radius, 1.4 * sol.radius, 4, &CarveConfig::default())?;
    let check = verify_trace_support(&ablated, &probe);
    println!(
        "after dropping {drop} of {} cuts ({} remain): on-trace deviation {:.3e} (tolerance {:.3e}), pass {}",
        solid.cut_count(),
        sparse.len(),
        check.on_trace_max_deviation,
        check.on_trace_tolerance,
        check.pass
    );
    Ok(())
}
