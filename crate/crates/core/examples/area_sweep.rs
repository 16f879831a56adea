//! Holonomy angle and normalized enclosed area across σ for a random path.

use trajectoid::path_model::gen_fourier_random;
use trajectoid::solver::{scan, SigmaRange};

fn main() -> trajectoid::Result<()> {
    let path = gen_fourier_random(4, 5, 1.0)?;
    let table = scan(&path, SigmaRange::new(0.05, 4.0)?, 400)?;
    let antipodal = table.rows.iter().filter(|r| r.antipodal).count();
    println!(
        "{} rows, max φ = {:.6}, largest φ step = {:.3e}, antipodal rows = {antipodal}",
        table.rows.len(),
        table.max_phi(),
        table.max_phi_step()
    );
    println!("{:>8} {:>10} {:>10}", "σ", "φ", "S̄");
    for r in table.rows.iter().step_by(40) {
        println!("{:>8.4} {:>10.6} {:>10.6}", r.sigma, r.phi, r.area_norm);
    }
    let out = std::env::temp_dir().join("trajectoid_area_sweep.csv");
    std::fs::write(&out, table.to_csv())?;
    println!("wrote {}", out.display());
    Ok(())
}
