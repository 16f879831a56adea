use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Rotation2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{PlanarPath, Point2};
use crate::error::{require_positive, Error, Result};

/// Segments per Fourier path unless asked otherwise.
pub const FOURIER_DEFAULT_SAMPLES: usize = 2000;

/// A straight path of the given length along +x.
pub fn gen_straight(length: f64) -> Result<PlanarPath> {
    require_positive("length", length)?;
    PlanarPath::from_xy(&[(0.0, 0.0), (length, 0.0)], format!("straight({length})"))
}

/// The symmetric V through `(-x, y)`, `(0, 0)`, `(x, y)`.
pub fn gen_v_path(x: f64, y: f64) -> Result<PlanarPath> {
    require_positive("x", x)?;
    require_positive("y", y)?;
    PlanarPath::from_xy(&[(-x, y), (0.0, 0.0), (x, y)], format!("v({x},{y})"))
}

/// A wedge: `w` followed by `w` traversed backwards and rotated
/// counterclockwise by `beta` about the apex (the end of `w`).
///
/// The rolling holonomy of the result is the commutator
/// `B R(w)⁻¹ B⁻¹ R(w)` with `B` the vertical rotation by `beta`, so its
/// rotation angle never exceeds `2·beta`.
pub fn gen_wedge_path(w: &PlanarPath, beta: f64) -> Result<PlanarPath> {
    if !(beta > 0.0 && beta < FRAC_PI_2) {
        return Err(Error::param("beta", format!("must lie in (0, π/2), got {beta}")));
    }
    wedge_join(w, beta, format!("wedge({}, {beta})", w.name()))
}

fn wedge_join(w: &PlanarPath, beta: f64, name: String) -> Result<PlanarPath> {
    let apex = w.end();
    let rot = Rotation2::new(beta);
    let mut vertices = w.vertices().to_vec();
    vertices.extend(w.vertices().iter().rev().skip(1).map(|v| apex + rot * (v - apex)));
    PlanarPath::new(vertices, name)
}

/// The four-segment zigzag family.
///
/// The left half has a unit segment along +x followed by a segment of
/// length `k` meeting it at interior angle `alpha`; the right half is the
/// left half traversed back and rotated by `beta` about the shared apex.
/// A rational `k` makes the left half a 1-path, which is logged as a warning.
pub fn gen_zigzag(k: f64, alpha: f64, beta: f64) -> Result<PlanarPath> {
    require_positive("k", k)?;
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < PI) {
            return Err(Error::param(name, format!("must lie in (0, π), got {v}")));
        }
    }
    if zigzag_ratio_is_rational(k) {
        log::warn!("zigzag ratio k = {k} is rational; the half path is then a 1-path");
    }
    let heading = PI - alpha;
    let half = PlanarPath::from_xy(
        &[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0 + k * heading.cos(), k * heading.sin()),
        ],
        "zigzag half",
    )?;
    wedge_join(&half, beta, format!("zigzag({k}, {alpha}, {beta})"))
}

/// True when `k` equals p/q for some q ≤ 1000 to within floating precision.
pub fn zigzag_ratio_is_rational(k: f64) -> bool {
    (1..=1000u32).any(|q| {
        let kq = k * q as f64;
        (kq - kq.round()).abs() <= 1e-9 * kq.abs().max(1.0)
    })
}

/// A smooth random curve of unit length, sampled as a polyline.
///
/// The tangent angle is a random Fourier series
/// `ψ(s) = scale · Σ (a_k cos 2πks + b_k sin 2πks) / k²` with standard
/// normal coefficients, so start and end tangents agree and translated
/// copies join without a corner in the continuum limit.
pub fn gen_fourier_random(seed: u64, modes: usize, scale: f64) -> Result<PlanarPath> {
    gen_fourier_random_with_samples(seed, modes, scale, FOURIER_DEFAULT_SAMPLES)
}

pub fn gen_fourier_random_with_samples(
    seed: u64,
    modes: usize,
    scale: f64,
    samples: usize,
) -> Result<PlanarPath> {
    if modes == 0 {
        return Err(Error::param("modes", "must be at least 1"));
    }
    if samples < 2 {
        return Err(Error::param("samples", "must be at least 2"));
    }
    if !scale.is_finite() || scale < 0.0 {
        return Err(Error::param(
            "scale",
            format!("must be finite and ≥ 0, got {scale}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (1..=modes)
        .map(|k| {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            let damp = scale / (k * k) as f64;
            (a * damp, b * damp)
        })
        .collect();
    let psi = |s: f64| -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let phase = TAU * (i + 1) as f64 * s;
                a * phase.cos() + b * phase.sin()
            })
            .sum()
    };
    let h = 1.0 / samples as f64;
    let mut vertices = Vec::with_capacity(samples + 1);
    let mut p = Point2::zeros();
    vertices.push(p);
    for i in 0..samples {
        let angle = psi((i as f64 + 0.5) * h);
        p += Point2::new(angle.cos(), angle.sin()) * h;
        vertices.push(p);
    }
    PlanarPath::new(
        vertices,
        format!("fourier(seed={seed},modes={modes},scale={scale})"),
    )
}
