//! Checks that a solution and its solid really roll along the path.
//!
//! Each check recomputes its quantity by a route other than the one used to
//! build it: holonomy with rotation matrices, contact stability with the
//! support function of the finished mesh, and the planar path by rolling the
//! body-frame trace back onto the plane.

use nalgebra::{Matrix3, Rotation3, Unit};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh_forge::{fibonacci_directions, support_height, TrajectoidSolid};
use crate::path_model::{PlanarPath, Point2};
use crate::rolling_map::{geodesic_angle, holonomy, sphere_trace, Rotation, SphereTrace, Vec3, DOWN};
use crate::solver::{Solution, IDENTITY_TOL};

/// On-trace support must equal `r` within this fraction of `r`.
pub const SUPPORT_TOL_REL: f64 = 1e-5;

/// Replay may stray from the path by this fraction of one period's length.
pub const REPLAY_TOL_REL: f64 = 1e-9;

/// A rotation this far from the identity does not count as closed.
pub const NOT_CLOSED_TOL: f64 = 1e-4;

pub const DEFAULT_OFF_TRACE_SAMPLES: usize = 2000;

/// Off-trace directions must lie at least this far (radians) from the trace.
pub const DEFAULT_OFF_TRACE_DELTA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomyCheck {
    /// Quaternion distance of `Rⁿ` from `±1`.
    pub residual: f64,
    /// `‖Mⁿ − I‖_F / 2√2` for the rotation-matrix product; matches `residual` to first order.
    pub matrix_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Recomputes the holonomy at the solution radius, once with quaternions
/// and once as a product of rotation matrices.
pub fn verify_holonomy(path: &PlanarPath, sol: &Solution) -> Result<HolonomyCheck> {
    let residual = holonomy(path, sol.radius)?.pow(sol.n).distance_to_identity();
    let mut m = Matrix3::identity();
    for seg in path.segments() {
        let axis = Vec3::z().cross(&Vec3::new(seg.direction.x, seg.direction.y, 0.0));
        let step = Rotation3::from_axis_angle(&Unit::new_normalize(axis), seg.length / sol.radius);
        m = step.matrix() * m;
    }
    let mut power = Matrix3::identity();
    for _ in 0..sol.n {
        power = m * power;
    }
    let matrix_residual = (power - Matrix3::identity()).norm() / (2.0 * 2f64.sqrt());
    Ok(HolonomyCheck {
        residual,
        matrix_residual,
        tolerance: IDENTITY_TOL,
        pass: residual <= IDENTITY_TOL && matrix_residual <= IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportCheck {
    /// Largest `|h(p) − r|` over trace directions `p`.
    pub on_trace_max_deviation: f64,
    pub on_trace_tolerance: f64,
    /// Smallest `h(d)/r − 1` over sampled directions far from the trace.
    pub off_trace_min_margin: f64,
    pub off_trace_delta: f64,
    pub off_trace_samples: usize,
    pub on_trace_pass: bool,
    pub off_trace_pass: bool,
    pub pass: bool,
}

/// Support height must be exactly `r` along the trace and strictly above it elsewhere.
pub fn verify_trace_support(solid: &TrajectoidSolid, trace: &SphereTrace) -> SupportCheck {
    verify_trace_support_with(solid, trace, DEFAULT_OFF_TRACE_DELTA, DEFAULT_OFF_TRACE_SAMPLES)
}

pub fn verify_trace_support_with(
    solid: &TrajectoidSolid,
    trace: &SphereTrace,
    delta: f64,
    samples: usize,
) -> SupportCheck {
    let r = solid.radius;
    let on = trace
        .points()
        .par_iter()
        .map(|p| (support_height(solid, p) - r).abs())
        .reduce(|| 0.0, f64::max);
    let far: Vec<Vec3> = fibonacci_directions(samples)
        .into_par_iter()
        .filter(|d| trace.points().iter().all(|p| geodesic_angle(p, d) >= delta))
        .collect();
    let margin = far
        .par_iter()
        .map(|d| support_height(solid, d) / r - 1.0)
        .reduce(|| f64::INFINITY, f64::min);
    let on_pass = on <= SUPPORT_TOL_REL * r;
    let off_pass = !far.is_empty() && margin > 0.0;
    SupportCheck {
        on_trace_max_deviation: on,
        on_trace_tolerance: SUPPORT_TOL_REL * r,
        off_trace_min_margin: margin,
        off_trace_delta: delta,
        off_trace_samples: far.len(),
        on_trace_pass: on_pass,
        off_trace_pass: off_pass,
        pass: on_pass && off_pass,
    }
}

/// The planar path traced by the centre when the ball rolls over its body-frame trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replay {
    pub periods: u32,
    pub n: u32,
    /// Planar centre positions, one per trace point.
    #[serde(skip)]
    pub points: Vec<Point2>,
    /// Largest distance from the translated copies of the input path.
    pub max_deviation: f64,
    pub deviation_tolerance: f64,
    /// Distance of the body orientation from `±1` after each whole period.
    pub closure_residuals: Vec<f64>,
    /// Orientation closes at every multiple of `n`.
    pub closure_pass: bool,
    /// Orientation does not close before `n` periods.
    pub minimality_pass: bool,
    pub pass: bool,
}

impl Replay {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.points {
            out.push_str(&format!("{:.16e},{:.16e}\n", p.x, p.y));
        }
        out
    }
}

/// Rolls the ball over `periods` copies of the body-frame contact trace.
///
/// Copies after the first are produced from the single-period trace by the
/// holonomy (`r_c(mL + t) = R⁻ᵐ r_c(t)`), and the centre is then moved by
/// pure rolling between consecutive contact points. The result must retrace
/// `path` and its translates.
pub fn replay(path: &PlanarPath, sol: &Solution, periods: u32) -> Result<Replay> {
    if periods == 0 {
        return Err(Error::param("periods", "must be at least 1"));
    }
    let r = sol.radius;
    let single = sphere_trace(path, r)?;
    let h_inv = holonomy(path, r)?.inverse();
    let mut body: Vec<Vec3> = single.points().to_vec();
    let mut arcs: Vec<f64> = single.arc_lengths().to_vec();
    let mut period_ends = vec![body.len() - 1];
    let mut copy = single.clone();
    for m in 1..periods {
        copy = copy.rotated(&h_inv);
        body.extend_from_slice(&copy.points()[1..]);
        arcs.extend(
            single.arc_lengths()[1..]
                .iter()
                .map(|s| s + path.length() * m as f64),
        );
        period_ends.push(body.len() - 1);
    }

    let mut orient = Rotation::IDENTITY;
    let mut pos = Point2::zeros();
    let mut points = Vec::with_capacity(body.len());
    points.push(pos);
    let mut closure = Vec::with_capacity(periods as usize);
    for i in 0..body.len() - 1 {
        let ahead = orient.apply(&body[i + 1]);
        let theta = geodesic_angle(&body[i], &body[i + 1]);
        if theta > 0.0 {
            let dir = Point2::new(ahead.x, ahead.y).normalize();
            let axis = Vec3::z().cross(&Vec3::new(dir.x, dir.y, 0.0));
            orient = Rotation::from_axis_angle(&axis, theta) * orient;
            pos += dir * (r * theta);
        }
        points.push(pos);
        if period_ends.contains(&(i + 1)) {
            closure.push(orient.distance_to_identity());
        }
    }

    let expected = path.repeated(periods as usize);
    let max_deviation = points
        .iter()
        .zip(&arcs)
        .map(|(p, s)| (p - expected.point_at(*s)).norm())
        .fold(0.0, f64::max);
    // the contact point must sit at the bottom after the roll; a cheap bookkeeping guard
    debug_assert!((orient.apply(body.last().unwrap()) - DOWN).norm() < 1e-6);

    let n = sol.n;
    let closure_pass = closure
        .iter()
        .enumerate()
        .filter(|(i, _)| (*i as u32 + 1).is_multiple_of(n))
        .all(|(_, c)| *c <= IDENTITY_TOL);
    let minimality_pass = closure.iter().take((n - 1) as usize).all(|c| *c > NOT_CLOSED_TOL);
    let tolerance = REPLAY_TOL_REL * path.length();
    let pass = max_deviation <= tolerance && closure_pass && minimality_pass;
    Ok(Replay {
        periods,
        n,
        points,
        max_deviation,
        deviation_tolerance: tolerance,
        closure_residuals: closure,
        closure_pass,
        minimality_pass,
        pass,
    })
}

/// Every check for one solution, with thresholds alongside results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub solution: Solution,
    pub holonomy: HolonomyCheck,
    pub replay: Replay,
    pub support: Option<SupportCheck>,
    pub pass: bool,
}

/// Runs the holonomy and replay checks, plus the support check when a solid is given.
pub fn verify_solution(
    path: &PlanarPath,
    sol: &Solution,
    solid: Option<(&TrajectoidSolid, &SphereTrace)>,
    periods: u32,
) -> Result<VerificationReport> {
    let holonomy = verify_holonomy(path, sol)?;
    let replay = replay(path, sol, periods)?;
    let support = solid.map(|(s, t)| verify_trace_support(s, t));
    let pass = holonomy.pass && replay.pass && support.as_ref().is_none_or(|s| s.pass);
    Ok(VerificationReport {
        solution: *sol,
        holonomy,
        replay,
        support,
        pass,
    })
}
