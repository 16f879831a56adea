//! Closed loops on the ball, their enclosed area, and the two-period
//! doubling construction.
//!
//! Areas come from the turning form of Gauss–Bonnet. Every loop built here
//! is a chain of geodesic arcs, so geodesic curvature vanishes between
//! vertices and `area / r² = 2π − Σ exterior angles (mod 4π)`. Exterior
//! angles are signed about the inward normal, which makes a corner of the
//! trace carry exactly the signed turn of the planar path that produced it.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::path_model::PlanarPath;
use crate::rolling_map::{
    geodesic_angle, sigma_to_radius, sphere_trace, Rotation, SphereTrace, Vec3, MAX_TRACE_STEP,
};

/// Endpoints closer than this (radians) to antipodal are treated as antipodal.
pub const ANTIPODAL_TOL: f64 = 1e-6;

/// Loops whose ends are closer than this (radians) are already closed.
const CLOSED_TOL: f64 = 1e-9;

/// Shortest great-circle arc from `b` to `a`, both endpoints included,
/// sampled with steps of at most [`MAX_TRACE_STEP`]. Empty when `a = b`.
pub fn closing_geodesic(a: &Vec3, b: &Vec3) -> Result<Vec<Vec3>> {
    let a = a.normalize();
    let b = b.normalize();
    let theta = geodesic_angle(&b, &a);
    if theta < 1e-12 {
        return Ok(Vec::new());
    }
    if theta > PI - ANTIPODAL_TOL {
        return Err(Error::Antipodal);
    }
    let pieces = (theta / MAX_TRACE_STEP).ceil().max(1.0) as usize;
    let s = theta.sin();
    Ok((0..=pieces)
        .map(|i| {
            let f = i as f64 / pieces as f64;
            (b * ((1.0 - f) * theta).sin() + a * (f * theta).sin()) / s
        })
        .map(|p| p.normalize())
        .collect())
}

/// Signed exterior angle at `p` for the geodesic chain `prev → p → next`,
/// about the inward normal `-p`.
pub fn exterior_angle(prev: &Vec3, p: &Vec3, next: &Vec3) -> f64 {
    let t_in = -(prev - p * prev.dot(p));
    let t_out = next - p * next.dot(p);
    let inward = -p;
    t_in.cross(&t_out).dot(&inward).atan2(t_in.dot(&t_out))
}

/// Index of the point closest to `target`; normalization may perturb the last bits.
fn nearest(points: &[Vec3], target: &Vec3) -> usize {
    (0..points.len())
        .min_by(|&i, &j| {
            (points[i] - target)
                .norm()
                .total_cmp(&(points[j] - target).norm())
        })
        .expect("loops have at least 3 points")
}

/// A closed chain of geodesic arcs on a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSphericalLoop {
    radius: f64,
    /// Cyclic list of unit vectors; the closing edge runs from the last point back to the first.
    points: Vec<Vec3>,
    turning: Vec<f64>,
    corner_a: Option<usize>,
    corner_m: Option<usize>,
}

impl ClosedSphericalLoop {
    /// Builds a loop from a cyclic point list. Repeated consecutive points
    /// (including a final copy of the first point) are dropped.
    pub fn from_cycle(points: &[Vec3], radius: f64) -> Result<Self> {
        require_positive("radius", radius)?;
        let mut pts: Vec<Vec3> = Vec::with_capacity(points.len());
        for p in points {
            let p = p.normalize();
            if pts.last().is_none_or(|q| geodesic_angle(q, &p) > CLOSED_TOL) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && geodesic_angle(&pts[0], pts.last().unwrap()) <= CLOSED_TOL {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(Error::param("loop", "needs at least 3 distinct points"));
        }
        let n = pts.len();
        let turning = (0..n)
            .map(|i| exterior_angle(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]))
            .collect();
        Ok(ClosedSphericalLoop {
            radius,
            points: pts,
            turning,
            corner_a: None,
            corner_m: None,
        })
    }

    /// Closes an open trace with the shortest geodesic from its end back to
    /// its start. Fails when the ends are antipodal.
    pub fn from_trace(trace: &SphereTrace) -> Result<Self> {
        let first = trace.first();
        let last = trace.last();
        let mut cycle: Vec<Vec3> = trace.points().to_vec();
        let closed = geodesic_angle(&first, &last) <= CLOSED_TOL;
        if !closed {
            let arc = closing_geodesic(&first, &last)?;
            if arc.len() > 2 {
                cycle.extend_from_slice(&arc[1..arc.len() - 1]);
            }
        }
        let mut lp = Self::from_cycle(&cycle, trace.radius())?;
        lp.corner_a = Some(0);
        if !closed {
            lp.corner_m = Some(nearest(&lp.points, &last));
        }
        Ok(lp)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn turning(&self) -> &[f64] {
        &self.turning
    }

    pub fn turning_sum(&self) -> f64 {
        self.turning.iter().sum()
    }

    /// Index of the start point A, when the loop came from a trace.
    pub fn corner_a(&self) -> Option<usize> {
        self.corner_a
    }

    /// Index of the trace end point M, when a closing arc was added.
    pub fn corner_m(&self) -> Option<usize> {
        self.corner_m
    }

    /// Turning at A plus turning at M.
    pub fn corner_sum(&self) -> Option<f64> {
        Some(self.turning[self.corner_a?] + self.turning[self.corner_m?])
    }

    /// Enclosed area on the inward-left side of the loop.
    pub fn area(&self) -> AreaValue {
        AreaValue::from_raw(
            self.radius * self.radius * (TAU - self.turning_sum()),
            self.radius,
        )
    }

    /// `x,y,z,turning` rows, coordinates scaled by the radius.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,turning\n");
        for (p, t) in self.points.iter().zip(&self.turning) {
            let q = p * self.radius;
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{t:.16e}", q.x, q.y, q.z);
        }
        out
    }
}

/// An enclosed area, kept both unreduced and modulo `2πr²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaValue {
    /// `r² (2π − Σ turning)` without reduction (NaN when antipodal).
    pub raw: f64,
    /// `raw` reduced into `[0, 2πr²)` (NaN when antipodal).
    pub reduced: f64,
    pub radius: f64,
    pub antipodal: bool,
}

impl AreaValue {
    fn from_raw(raw: f64, radius: f64) -> Self {
        let period = TAU * radius * radius;
        let mut reduced = raw.rem_euclid(period);
        if reduced >= period {
            reduced = 0.0;
        }
        AreaValue {
            raw,
            reduced,
            radius,
            antipodal: false,
        }
    }

    pub fn antipodal(radius: f64) -> Self {
        AreaValue {
            raw: f64::NAN,
            reduced: f64::NAN,
            radius,
            antipodal: true,
        }
    }

    /// The same area on the unit ball.
    pub fn normalized(&self) -> AreaValue {
        let r2 = self.radius * self.radius;
        AreaValue {
            raw: self.raw / r2,
            reduced: self.reduced / r2,
            radius: 1.0,
            antipodal: self.antipodal,
        }
    }

    /// Raw area reduced into `[0, 4πr²)`.
    pub fn mod_sphere(&self) -> f64 {
        self.raw.rem_euclid(2.0 * TAU * self.radius * self.radius)
    }

    /// Circular distance of `reduced / r²` from `target` on the circle of circumference 2π.
    pub fn distance_to(&self, target: f64) -> f64 {
        circular_distance(self.reduced / (self.radius * self.radius), target)
    }
}

/// Distance between two angles on a circle of circumference 2π.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Area enclosed by the trace and the geodesic closing it, reduced mod `2πr²`.
pub fn enclosed_area(trace: &SphereTrace) -> Result<AreaValue> {
    if trace.step_angles().any(|a| a > PI - ANTIPODAL_TOL) {
        return Err(Error::param(
            "trace",
            "contains a step of nearly π; arcs are ambiguous",
        ));
    }
    Ok(ClosedSphericalLoop::from_trace(trace)?.area())
}

/// `S̄(P, σ) = S(P, r) / r²` at `r = L / (2πσ)`; antipodal ends give a flagged value.
pub fn normalized_area(path: &PlanarPath, sigma: f64) -> Result<AreaValue> {
    let r = sigma_to_radius(path.length(), sigma)?;
    let trace = sphere_trace(path, r)?;
    match enclosed_area(&trace) {
        Ok(a) => Ok(a.normalized()),
        Err(Error::Antipodal) => Ok(AreaValue::antipodal(1.0)),
        Err(e) => Err(e),
    }
}

/// Result of the two-period doubling construction.
#[derive(Debug, Clone)]
pub struct DoubledTrace {
    /// Single-period trace followed by its half-turn image.
    pub trace: SphereTrace,
    /// Half-turn axis (midpoint of the closing arc); `None` for an already-closed trace.
    pub axis: Option<Vec3>,
    /// Distance between the doubled trace's end and start.
    pub closure_gap: f64,
    /// Exterior angle at the seam at M and at the seam back at A.
    pub junction_turns: [f64; 2],
    /// Turning at A plus turning at M in the single-period loop closed by the geodesic.
    pub corner_sum: f64,
    /// True when the input was already closed and doubling just repeats the loop.
    pub degenerate: bool,
}

impl DoubledTrace {
    /// How far the corner angles at A and M are from summing to π once the
    /// path's own junction turn is accounted for.
    pub fn corner_sum_defect(&self, path_junction_turn: f64) -> f64 {
        circular_distance(self.corner_sum - path_junction_turn, PI)
    }

    /// Largest deviation of the two seam turns from the path's junction turn.
    /// Zero means the two halves join exactly like consecutive copies of the path.
    pub fn junction_defect(&self, path_junction_turn: f64) -> f64 {
        self.junction_turns
            .iter()
            .map(|t| circular_distance(*t, path_junction_turn))
            .fold(0.0, f64::max)
    }
}

/// Rotates the trace by π about the midpoint of its closing geodesic and
/// appends the image, giving a closed two-period curve.
pub fn double_trace(trace: &SphereTrace) -> Result<DoubledTrace> {
    let a = trace.first();
    let m = trace.last();
    let single = ClosedSphericalLoop::from_trace(trace)?;
    if geodesic_angle(&a, &m) <= CLOSED_TOL {
        let doubled = trace.concat(trace);
        let lp = ClosedSphericalLoop::from_cycle(doubled.points(), trace.radius())?;
        let seam = lp.turning[0];
        return Ok(DoubledTrace {
            closure_gap: doubled.closure_gap(),
            trace: doubled,
            axis: None,
            junction_turns: [seam, seam],
            corner_sum: single.turning[0],
            degenerate: true,
        });
    }
    let axis = (a + m).normalize();
    let half_turn = Rotation::from_axis_angle(&axis, PI);
    let doubled = trace.concat(&trace.rotated(&half_turn));
    let closure_gap = doubled.closure_gap();
    let lp = ClosedSphericalLoop::from_cycle(doubled.points(), trace.radius())?;
    let m_index = nearest(&lp.points, &m);
    Ok(DoubledTrace {
        trace: doubled,
        axis: Some(axis),
        closure_gap,
        junction_turns: [lp.turning[m_index], lp.turning[0]],
        corner_sum: single.corner_sum().expect("open trace has both corners"),
        degenerate: false,
    })
}
