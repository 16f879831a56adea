//! Tunes the zigzag opening angle so the path first closes after exactly
//! n periods, for n = 3..8.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use trajectoid::solver::{zigzag_beta_n, SigmaRange};

fn main() -> trajectoid::Result<()> {
    let range = SigmaRange::new(0.05, 3.0)?;
    for n in 3..=8 {
        let t = zigzag_beta_n(n, FRAC_1_SQRT_2, 3.0 * PI / 4.0, range, 1000)?;
        let sol = t.classification.solution;
        println!(
            "n = {n}: β_n = {:.10}  max φ = {:.6}  classified n = {:?}  σ* = {:?}  residual = {:?}",
            t.beta,
            t.phi_max,
            t.classification.n(),
            sol.map(|s| s.sigma),
            sol.map(|s| s.residual_identity)
        );
    }
    Ok(())
}
