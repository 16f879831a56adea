//! Turning profile and index of the built-in path generators.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use trajectoid::path_model::{
    gen_fourier_random, gen_straight, gen_v_path, gen_zigzag, resample, turning_profile, PlanarPath,
};

fn describe(path: &PlanarPath) -> trajectoid::Result<()> {
    let t = turning_profile(path)?;
    let d = path.displacement();
    println!(
        "{:<28} L = {:>9.6}  Δψ = {:>+9.6}  index = {:>+8.5}  vertices = {:>5}  AΩ = ({:.4}, {:.4})",
        path.name(),
        path.length(),
        t.total_turning,
        t.index,
        path.vertices().len(),
        d.x,
        d.y
    );
    Ok(())
}

fn main() -> trajectoid::Result<()> {
    let paths = [
        gen_straight(1.0)?,
        gen_v_path(1.0, 1.0)?,
        gen_zigzag(FRAC_1_SQRT_2, 3.0 * PI / 4.0, PI / 5.0)?,
        gen_fourier_random(7, 5, 1.0)?,
        PlanarPath::from_xy(
            &[(0., 0.), (1., 0.), (1., 1.), (0., 1.), (0., 0.), (1e-3, -1.0)],
            "square loop",
        )?,
    ];
    for p in &paths {
        describe(p)?;
    }

    // inserting collinear vertices changes neither length nor turning
    let v = gen_v_path(1.0, 1.0)?;
    let fine = resample(&v, v.length() / 2000.0)?;
    println!(
        "resampled V: {} vertices, ΔL = {:.1e}, Δ(Δψ) = {:.1e}",
        fine.vertices().len(),
        (fine.length() - v.length()).abs(),
        (turning_profile(&fine)?.total_turning - turning_profile(&v)?.total_turning).abs()
    );
    Ok(())
}
