//! How often a random smooth path admits a two-period solution, with a few
//! narrow wedges mixed in as known failures.

use std::f64::consts::PI;

use rayon::prelude::*;
use trajectoid::path_model::{gen_fourier_random, gen_wedge_path};
use trajectoid::solver::{solve_n, SigmaRange};

fn main() -> trajectoid::Result<()> {
    let range = SigmaRange::default();
    let seeds: Vec<u64> = (0..30).collect();
    let hits: Vec<bool> = seeds
        .par_iter()
        .map(|&s| Ok(!solve_n(&gen_fourier_random(s, 5, 1.0)?, 2, range, 1000)?.is_empty()))
        .collect::<trajectoid::Result<_>>()?;
    let wedge_hits: Vec<bool> = (100..105u64)
        .into_par_iter()
        .map(|s| {
            let w = gen_wedge_path(&gen_fourier_random(s, 5, 1.0)?, PI / 8.0)?;
            Ok(!solve_n(&w, 2, range, 1000)?.is_empty())
        })
        .collect::<trajectoid::Result<_>>()?;
    let count = |v: &[bool]| v.iter().filter(|h| **h).count();
    println!(
        "random paths with a two-period solution: {}/{}",
        count(&hits),
        hits.len()
    );
    println!(
        "wedges (β = π/8) with a two-period solution: {}/{}",
        count(&wedge_hits),
        wedge_hits.len()
    );
    let total = hits.len() + wedge_hits.len();
    println!(
        "combined fraction: {:.3}",
        (count(&hits) + count(&wedge_hits)) as f64 / total as f64
    );
    Ok(())
}
