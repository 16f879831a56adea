//! Locating the radii at which a path becomes an n-path.
//!
//! Everything is parameterized by `σ = L / (2πr)`. The one-period holonomy
//! `R(σ)` is smooth in σ, and the path closes after `n` periods exactly when
//! its rotation angle `φ(σ)` equals `2πk/n` for some `k` coprime to `n`.
//!
//! Root finding uses three different scalar functions because `φ` is folded
//! into `[0, π]`:
//! - interior targets `0 < 2πk/n < π` bracket sign changes of `φ − target`;
//! - the half turn (`n = 2`) brackets sign changes of the unfolded scalar
//!   part `w` of the quaternion, since `φ` only touches `π`;
//! - the identity (`n = 1`) minimizes `|v|`, the quaternion's vector part,
//!   because `φ` only touches `0`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path_model::{gen_zigzag, PlanarPath};
use crate::rolling_map::{
    geodesic_angle, holonomy_unchecked, is_vertical_axis, sigma_to_radius, Rotation, Vec3, DOWN,
};
use crate::spherical_geometry::{circular_distance, normalized_area, ANTIPODAL_TOL};

/// Scan resolution used when the caller has no preference.
pub const DEFAULT_GRID: usize = 2000;

/// Largest change of `φ` allowed between adjacent sweep points before the cell is split.
pub const MAX_CELL_DPHI: f64 = 0.3;

/// Certification threshold on `|Rⁿ ∓ 1|`.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Relative width at which root refinement stops.
const ROOT_REL_TOL: f64 = 1e-12;

const MAX_REFINE_ROUNDS: usize = 30;

/// A closed interval of σ values with `0 < min < max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaRange {
    pub min: f64,
    pub max: f64,
}

impl Default for SigmaRange {
    fn default() -> Self {
        SigmaRange { min: 0.05, max: 6.0 }
    }
}

impl SigmaRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min > 0.0 && min < max) {
            return Err(Error::param(
                "sigma range",
                format!("need 0 < sigma_min < sigma_max, got [{min}, {max}]"),
            ));
        }
        Ok(SigmaRange { min, max })
    }

    /// `samples` equally spaced values including both ends.
    pub fn grid(&self, samples: usize) -> Vec<f64> {
        let h = (self.max - self.min) / (samples - 1) as f64;
        (0..samples)
            .map(|i| {
                if i + 1 == samples {
                    self.max
                } else {
                    self.min + h * i as f64
                }
            })
            .collect()
    }
}

fn check_grid(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::param(
            "grid",
            format!("needs at least 2 samples, got {samples}"),
        ));
    }
    Ok(())
}

/// Holonomy at σ. The radius is positive whenever σ is, so no checks are needed.
fn holonomy_sigma(path: &PlanarPath, sigma: f64) -> Rotation {
    holonomy_unchecked(path, path.length() / (TAU * sigma))
}

/// One row of a σ scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub sigma: f64,
    /// Rotation angle of the one-period holonomy, in `[0, π]`.
    pub phi: f64,
    /// Normalized enclosed area reduced into `[0, 2π)`; NaN when antipodal.
    pub area_norm: f64,
    pub antipodal: bool,
    /// The holonomy fixes the vertical, so the ball only spins about it.
    pub vertical_axis: bool,
}

/// Holonomy angle and normalized area over a uniform σ grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn sigmas(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.sigma)
    }

    pub fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.phi)
    }

    pub fn max_phi(&self) -> f64 {
        self.phis().fold(0.0, f64::max)
    }

    /// Largest jump in `φ` between adjacent rows.
    pub fn max_phi_step(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| (w[1].phi - w[0].phi).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("sigma,phi,area_norm,antipodal,vertical_axis\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{},{}",
                r.sigma, r.phi, r.area_norm, r.antipodal, r.vertical_axis
            );
        }
        out
    }
}

/// Evaluates `φ` and `S̄` on `samples` equally spaced σ values. Rows are
/// independent and computed in parallel.
pub fn scan(path: &PlanarPath, range: SigmaRange, samples: usize) -> Result<ScanTable> {
    check_grid(samples)?;
    let rows = range
        .grid(samples)
        .into_par_iter()
        .map(|sigma| {
            let rot = holonomy_sigma(path, sigma);
            let area = normalized_area(path, sigma)?;
            Ok(ScanRow {
                sigma,
                phi: rot.angle(),
                area_norm: area.reduced,
                antipodal: area.antipodal,
                vertical_axis: is_vertical_axis(&rot),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable { rows })
}

/// Holonomy sampled on a σ grid, refined until `φ` and the raw quaternion
/// move by at most [`MAX_CELL_DPHI`] between neighbours.
#[derive(Debug, Clone)]
pub struct Sweep {
    sigmas: Vec<f64>,
    rotations: Vec<Rotation>,
}

impl Sweep {
    pub fn new(path: &PlanarPath, range: SigmaRange, samples: usize) -> Result<Self> {
        check_grid(samples)?;
        let mut sigmas = range.grid(samples);
        let mut rotations: Vec<Rotation> = sigmas.par_iter().map(|&s| holonomy_sigma(path, s)).collect();
        for _ in 0..MAX_REFINE_ROUNDS {
            let coarse: Vec<usize> = (0..sigmas.len() - 1)
                .filter(|&i| {
                    let (a, b) = (&rotations[i], &rotations[i + 1]);
                    let dq = ((a.w - b.w).powi(2) + (a.vector() - b.vector()).norm_squared()).sqrt();
                    let wide = sigmas[i + 1] - sigmas[i] > 1e-9 * sigmas[i];
                    wide && ((a.angle() - b.angle()).abs() > MAX_CELL_DPHI || dq > MAX_CELL_DPHI)
                })
                .collect();
            if coarse.is_empty() {
                break;
            }
            let mids: Vec<(f64, Rotation)> = coarse
                .par_iter()
                .map(|&i| {
                    let s = 0.5 * (sigmas[i] + sigmas[i + 1]);
                    (s, holonomy_sigma(path, s))
                })
                .collect();
            let mut ns = Vec::with_capacity(sigmas.len() + mids.len());
            let mut nr = Vec::with_capacity(ns.capacity());
            let mut next = mids.into_iter().zip(coarse).peekable();
            for i in 0..sigmas.len() {
                ns.push(sigmas[i]);
                nr.push(rotations[i]);
                if let Some(((s, r), _)) = next.next_if(|(_, j)| *j == i) {
                    ns.push(s);
                    nr.push(r);
                }
            }
            sigmas = ns;
            rotations = nr;
        }
        Ok(Sweep { sigmas, rotations })
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn phis(&self) -> Vec<f64> {
        self.rotations.iter().map(Rotation::angle).collect()
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// `max φ − min φ` over the sweep.
    pub fn phi_span(&self) -> f64 {
        let (lo, hi) = self
            .phis()
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p), hi.max(p))
            });
        hi - lo
    }
}

/// A radius at which rolling `n` periods returns the ball to its start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solution {
    pub n: u32,
    /// Holonomy angle is `2πk/n` with `gcd(k, n) = 1`; `k = 0` only for `n = 1`.
    pub k: u32,
    pub sigma: f64,
    pub radius: f64,
    /// `|φ(σ*) − 2πk/n|`.
    pub residual_angle: f64,
    /// Quaternion distance of `R(σ*)ⁿ` from `±1`.
    pub residual_identity: f64,
    /// `n = 2` only: distance of `S̄(σ*)` from `π` on the circle.
    pub area_residual: Option<f64>,
    /// `|1 + 2cos φ − (cos S̄ (1 + cos a) + cos a)|` with `a` the closing-arc angle.
    pub trace_identity_residual: Option<f64>,
    /// Trace endpoints are antipodal, so the enclosed area is undefined.
    pub antipodal: bool,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced numerators `k` with `2πk/n ∈ (0, π]`.
fn numerators(n: u32) -> Vec<u32> {
    (1..=n / 2).filter(|&k| gcd(k, n) == 1).collect()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let lo_negative = f(lo) < 0.0;
    for _ in 0..200 {
        if hi - lo <= ROOT_REL_TOL * lo.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..300 {
        if hi - lo <= ROOT_REL_TOL * lo.abs() {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    // the bracket ends are candidates too, so minima at the range limits are kept
    [lo, hi, x1, x2]
        .into_iter()
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap()
}

fn certify(path: &PlanarPath, n: u32, k: u32, sigma: f64) -> Result<Option<Solution>> {
    let rot = holonomy_sigma(path, sigma);
    let residual_identity = rot.pow(n).distance_to_identity();
    if residual_identity > IDENTITY_TOL {
        log::debug!("root near sigma = {sigma} for n = {n} failed certification ({residual_identity:e})");
        return Ok(None);
    }
    let phi = rot.angle();
    let target = TAU * k as f64 / n as f64;
    let end = rot.inverse().apply(&DOWN);
    let a = geodesic_angle(&DOWN, &end);
    let antipodal = a > PI - ANTIPODAL_TOL;
    let (area_residual, trace_identity_residual) = if antipodal {
        (None, None)
    } else {
        let s = normalized_area(path, sigma)?.reduced;
        let ident = (1.0 + 2.0 * phi.cos() - (s.cos() * (1.0 + a.cos()) + a.cos())).abs();
        ((n == 2).then(|| circular_distance(s, PI)), Some(ident))
    };
    Ok(Some(Solution {
        n,
        k,
        sigma,
        radius: sigma_to_radius(path.length(), sigma)?,
        residual_angle: (phi - target).abs(),
        residual_identity,
        area_residual,
        trace_identity_residual,
        antipodal,
    }))
}

/// Certifies an n-path solution at a given σ, or `None` when `R(σ)ⁿ` is not the identity.
pub fn solution_at(path: &PlanarPath, n: u32, sigma: f64) -> Result<Option<Solution>> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    sigma_to_radius(path.length(), sigma)?;
    let phi = holonomy_sigma(path, sigma).angle();
    let k = (phi * n as f64 / TAU).round() as u32;
    certify(path, n, k, sigma)
}

fn sign_change_roots(sigmas: &[f64], values: &[f64], f: impl Fn(f64) -> f64 + Copy) -> Vec<f64> {
    (0..sigmas.len() - 1)
        .filter(|&i| (values[i] < 0.0) != (values[i + 1] < 0.0))
        .map(|i| bisect(sigmas[i], sigmas[i + 1], f))
        .collect()
}

fn identity_roots(path: &PlanarPath, sweep: &Sweep) -> Vec<f64> {
    let s = &sweep.sigmas;
    let v: Vec<f64> = sweep.rotations.iter().map(|q| q.vector().norm()).collect();
    let last = s.len() - 1;
    let f = |sigma: f64| holonomy_sigma(path, sigma).vector().norm();
    (0..=last)
        .filter(|&i| {
            let left = i == 0 || v[i] <= v[i - 1];
            let right = i == last || v[i] < v[i + 1];
            left && right
        })
        .map(|i| golden_min(s[i.saturating_sub(1)], s[(i + 1).min(last)], f))
        .collect()
}

/// Certified n-path solutions found on an existing sweep, sorted by σ.
pub fn solve_on_sweep(path: &PlanarPath, sweep: &Sweep, n: u32) -> Result<Vec<Solution>> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let mut candidates: Vec<(u32, f64)> = Vec::new();
    if n == 1 {
        candidates.extend(identity_roots(path, sweep).into_iter().map(|s| (0, s)));
    }
    for k in numerators(n) {
        if 2 * k == n {
            let w: Vec<f64> = sweep.rotations.iter().map(|q| q.w).collect();
            let f = |s: f64| holonomy_sigma(path, s).w;
            candidates.extend(
                sign_change_roots(&sweep.sigmas, &w, f)
                    .into_iter()
                    .map(|s| (k, s)),
            );
        } else {
            let target = TAU * k as f64 / n as f64;
            let g: Vec<f64> = sweep.rotations.iter().map(|q| q.angle() - target).collect();
            let f = |s: f64| holonomy_sigma(path, s).angle() - target;
            candidates.extend(
                sign_change_roots(&sweep.sigmas, &g, f)
                    .into_iter()
                    .map(|s| (k, s)),
            );
        }
    }
    let mut out = Vec::with_capacity(candidates.len());
    for (k, sigma) in candidates {
        if let Some(sol) = certify(path, n, k, sigma)? {
            out.push(sol);
        }
    }
    out.sort_by(|a, b| a.sigma.total_cmp(&b.sigma));
    out.dedup_by(|b, a| (b.sigma - a.sigma).abs() <= 1e-10 * a.sigma);
    Ok(out)
}

/// All certified n-path solutions with σ in `range`, smallest σ (largest ball) first.
pub fn solve_n(path: &PlanarPath, n: u32, range: SigmaRange, grid: usize) -> Result<Vec<Solution>> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let sweep = Sweep::new(path, range, grid)?;
    solve_on_sweep(path, &sweep, n)
}

/// Outcome of searching for the smallest period count.
///
/// This is an empirical classification: it only sees the scanned σ range
/// and `n ≤ n_max`, so `None` does not mean the path has no solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    /// Smallest-σ solution for the smallest `n` that has one.
    pub solution: Option<Solution>,
    pub n_max: u32,
    pub sigma_range: SigmaRange,
    /// `max φ − min φ ≤ 1e-9` over the sweep, meaning the trace of `R(σ)` does not depend on σ.
    pub trace_constant: bool,
    pub phi_span: f64,
}

impl Classification {
    pub fn n(&self) -> Option<u32> {
        self.solution.map(|s| s.n)
    }
}

pub fn minimal_n(path: &PlanarPath, range: SigmaRange, n_max: u32, grid: usize) -> Result<Classification> {
    if n_max == 0 {
        return Err(Error::param("n_max", "must be at least 1"));
    }
    let sweep = Sweep::new(path, range, grid)?;
    let phi_span = sweep.phi_span();
    let mut solution = None;
    for n in 1..=n_max {
        if let Some(first) = solve_on_sweep(path, &sweep, n)?.into_iter().next() {
            solution = Some(first);
            break;
        }
    }
    Ok(Classification {
        solution,
        n_max,
        sigma_range: range,
        trace_constant: phi_span <= 1e-9,
        phi_span,
    })
}

/// Rotation angle of the commutator of two rotations by `beta` whose axes
/// have dot product `axis_dot`, folded into `[0, π]`.
///
/// Evaluates `1 − cos(γ/2) = (1 − axis_dot) sin²(β/2)` in its
/// half-angle-of-half-angle form, which stays accurate near `γ = 0`.
pub fn rodrigues_angle(beta: f64, axis_dot: f64) -> f64 {
    let d = axis_dot.clamp(-1.0, 1.0);
    let s = ((0.5 * beta).sin().abs() * (0.5 * (1.0 - d)).sqrt()).min(1.0);
    let gamma = 4.0 * s.asin();
    if gamma > PI {
        TAU - gamma
    } else {
        gamma
    }
}

/// `ẑ · R(w) ẑ` for the holonomy of `w` alone, with σ measured against `w`'s own length.
pub fn wedge_axis_dot(w: &PlanarPath, sigma: f64) -> Result<f64> {
    let r = sigma_to_radius(w.length(), sigma)?;
    Ok(Vec3::z().dot(&holonomy_unchecked(w, r).apply(&Vec3::z())))
}

/// Result of tuning the zigzag opening angle for a target period count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZigzagTuning {
    pub n: u32,
    pub beta: f64,
    /// Largest holonomy angle over the σ range at the chosen `beta`.
    pub phi_max: f64,
    pub classification: Classification,
}

/// Finds an opening angle `β` at which `gen_zigzag(k, alpha, β)` is an n-path.
///
/// The largest holonomy angle over the σ range grows with `β`, so `β` is
/// bisected until that maximum sits halfway between `2π/n` and `2π/(n−1)`.
/// Every target `2πk'/n'` with `n' < n` then lies out of reach while `2π/n`
/// is crossed.
pub fn zigzag_beta_n(n: u32, k: f64, alpha: f64, range: SigmaRange, grid: usize) -> Result<ZigzagTuning> {
    if n < 3 {
        return Err(Error::param("n", format!("zigzag tuning needs n ≥ 3, got {n}")));
    }
    let goal = 0.5 * (TAU / n as f64 + TAU / (n - 1) as f64);
    let phi_max = |beta: f64| -> Result<f64> {
        let p = gen_zigzag(k, alpha, beta)?;
        Ok(Sweep::new(&p, range, grid)?
            .phis()
            .into_iter()
            .fold(0.0, f64::max))
    };
    let (mut lo, mut hi) = (1e-6, PI - 1e-6);
    if phi_max(hi)? < goal {
        return Err(Error::param(
            "beta",
            format!("no opening angle reaches φ = {goal} in the σ range"),
        ));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if phi_max(mid)? < goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let path = gen_zigzag(k, alpha, beta)?;
    Ok(ZigzagTuning {
        n,
        beta,
        phi_max: phi_max(beta)?,
        classification: minimal_n(&path, range, n, grid)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_model::{gen_straight, gen_v_path};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn folded(x: f64) -> f64 {
        let m = x.rem_euclid(TAU);
        m.min(TAU - m)
    }

    #[test]
    fn range_validation() {
        assert!(SigmaRange::new(0.0, 1.0).is_err());
        assert!(SigmaRange::new(2.0, 1.0).is_err());
        assert!(SigmaRange::new(0.1, f64::INFINITY).is_err());
        let g = SigmaRange::new(0.1, 2.1).unwrap().grid(11);
        assert_eq!(g.len(), 11);
        assert_eq!(*g.last().unwrap(), 2.1);
    }

    #[test]
    fn straight_scan_is_triangle_wave() {
        let p = gen_straight(1.0).unwrap();
        let t = scan(&p, SigmaRange::new(0.1, 2.1).unwrap(), 201).unwrap();
        for row in &t.rows {
            assert!((row.phi - folded(TAU * row.sigma)).abs() < 1e-10, "{row:?}");
        }
        assert!(t.rows.windows(2).all(|w| w[0].sigma < w[1].sigma));
    }

    #[test]
    fn refinement_bounds_phi_steps() {
        let p = gen_straight(1.0).unwrap();
        let sweep = Sweep::new(&p, SigmaRange::default(), 3).unwrap();
        let phis = sweep.phis();
        assert!(phis.windows(2).all(|w| (w[1] - w[0]).abs() <= MAX_CELL_DPHI));
    }

    #[test]
    fn straight_one_paths_at_integers() {
        let p = gen_straight(2.5).unwrap();
        let sols = solve_n(&p, 1, SigmaRange::default(), 500).unwrap();
        let sig: Vec<f64> = sols.iter().map(|s| s.sigma).collect();
        assert_eq!(sig.len(), 6, "{sig:?}");
        for (i, s) in sig.iter().enumerate() {
            assert!((s - (i + 1) as f64).abs() < 1e-10, "{s}");
        }
    }

    #[test]
    fn straight_half_turns_are_antipodal() {
        let p = gen_straight(1.0).unwrap();
        let sols = solve_n(&p, 2, SigmaRange::new(0.1, 2.0).unwrap(), 200).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().all(|s| s.antipodal && s.area_residual.is_none()));
        assert_relative_eq!(sols[0].sigma, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn straight_third_turns() {
        let p = gen_straight(1.0).unwrap();
        let sols = solve_n(&p, 3, SigmaRange::new(0.1, 1.0).unwrap(), 200).unwrap();
        let sig: Vec<f64> = sols.iter().map(|s| s.sigma).collect();
        assert_eq!(sig.len(), 2);
        assert_relative_eq!(sig[0], 1.0 / 3.0, epsilon = 1e-10);
        assert_relative_eq!(sig[1], 2.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn v_path_closes_at_even_sigma() {
        let p = gen_v_path(1.0, 1.0).unwrap();
        let sols = solve_n(&p, 1, SigmaRange::new(0.05, 4.0).unwrap(), 1000).unwrap();
        assert!(sols.iter().any(|s| (s.sigma - 2.0).abs() < 1e-9));
        assert!(sols.iter().all(|s| s.residual_identity <= IDENTITY_TOL));
    }

    #[test]
    fn numerators_are_reduced() {
        assert_eq!(numerators(1), Vec::<u32>::new());
        assert_eq!(numerators(2), vec![1]);
        assert_eq!(numerators(8), vec![1, 3]);
        assert_eq!(numerators(9), vec![1, 2, 4]);
    }

    #[test]
    fn rodrigues_limits() {
        assert_eq!(rodrigues_angle(0.7, 1.0), 0.0);
        assert_relative_eq!(rodrigues_angle(0.7, -1.0), 1.4, epsilon = 1e-15);
        assert_relative_eq!(rodrigues_angle(1.2, -1.0), 2.4, epsilon = 1e-15);
    }

    #[test]
    fn rodrigues_matches_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let beta = rng.random_range(0.0..PI);
            let axis = Vec3::new(rng.random(), rng.random(), rng.random()) - Vec3::repeat(0.5);
            let r = Rotation::from_axis_angle(&axis, rng.random_range(0.0..TAU));
            let b = Rotation::from_axis_angle(&Vec3::z(), beta);
            let c = b.inverse() * r.inverse() * b * r;
            let d = Vec3::z().dot(&r.apply(&Vec3::z()));
            assert!((rodrigues_angle(beta, d) - c.angle()).abs() < 1e-12);
        }
    }

    #[test]
    fn straight_wedge_axis_dot() {
        let w = gen_straight(1.0).unwrap();
        for sigma in [0.1, 0.4, 1.3] {
            let d = wedge_axis_dot(&w, sigma).unwrap();
            assert_relative_eq!(d, (TAU * sigma).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn trace_identity_holds_off_solutions() {
        let p = PlanarPath::from_xy(&[(0., 0.), (0.6, 0.1), (0.9, 0.7), (1.6, 0.5)], "t").unwrap();
        for sigma in [0.2, 0.45, 0.9, 1.7] {
            let rot = holonomy_sigma(&p, sigma);
            let a = geodesic_angle(&DOWN, &rot.inverse().apply(&DOWN));
            let s = normalized_area(&p, sigma).unwrap().reduced;
            let lhs = 1.0 + 2.0 * rot.angle().cos();
            let rhs = s.cos() * (1.0 + a.cos()) + a.cos();
            assert!((lhs - rhs).abs() < 1e-9, "sigma {sigma}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn straight_is_one_path() {
        let c = minimal_n(&gen_straight(1.0).unwrap(), SigmaRange::default(), 4, 400).unwrap();
        assert_eq!(c.n(), Some(1));
        assert!(!c.trace_constant);
    }
}
