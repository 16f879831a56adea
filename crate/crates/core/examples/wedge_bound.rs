//! Wedge paths: the holonomy angle stays below twice the opening angle,
//! which rules out every period count n ≤ π/β.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trajectoid::path_model::{gen_wedge_path, PlanarPath};
use trajectoid::solver::{minimal_n, rodrigues_angle, scan, wedge_axis_dot, SigmaRange};

fn random_arm(seed: u64) -> trajectoid::Result<PlanarPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![(0.0, 0.0)];
    let mut heading: f64 = 0.0;
    for _ in 0..4 {
        heading += rng.random_range(-1.2..1.2);
        let len = rng.random_range(0.3..1.0);
        let (x, y) = *pts.last().unwrap();
        pts.push((x + len * heading.cos(), y + len * heading.sin()));
    }
    PlanarPath::from_xy(&pts, format!("arm{seed}"))
}

fn main() -> trajectoid::Result<()> {
    let range = SigmaRange::new(0.05, 6.0)?;
    for beta in [PI / 3.1, PI / 4.1, PI / 6.1] {
        let w = random_arm(11)?;
        let path = gen_wedge_path(&w, beta)?;
        let table = scan(&path, range, 1000)?;
        let class = minimal_n(&path, range, 12, 2000)?;
        println!(
            "β = π/{:.1}: max φ = {:.6} ≤ 2β = {:.6}; no n ≤ {}; smallest n found = {:?}",
            PI / beta,
            table.max_phi(),
            2.0 * beta,
            (PI / beta).floor(),
            class.n()
        );
    }

    // the holonomy angle of the wedge follows from the arm's axis alone
    let w = random_arm(3)?;
    let beta = PI / 4.0;
    let path = gen_wedge_path(&w, beta)?;
    for sigma_w in [0.3, 0.9, 1.7] {
        let d = wedge_axis_dot(&w, sigma_w)?;
        let sigma = sigma_w * path.length() / w.length();
        let phi = trajectoid::rolling_map::holonomy_at_sigma(&path, sigma)?.angle();
        println!(
            "σ_W = {sigma_w}: n₁·n₂ = {d:+.6}, Rodrigues γ = {:.12}, rolled φ = {phi:.12}",
            rodrigues_angle(beta, d)
        );
    }
    Ok(())
}
