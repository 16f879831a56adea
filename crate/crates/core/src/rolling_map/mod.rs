//! Rolling a ball on the plane `z = 0` without slipping or pivoting.
//!
//! Conventions used throughout the crate:
//! - the ball centre sits at height `r` above the contact point;
//! - rolling a distance `ℓ` in the unit direction `d` rotates the ball by
//!   `ℓ / r` about the world axis `ẑ × d`, composed on the left of the
//!   rotation accumulated so far;
//! - the body-frame contact point after arc length `t` is `R(t)⁻¹ (0, 0, -r)`.

mod rotation;

pub use rotation::{Rotation, Vec3};

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{require_positive, Error, Result};
use crate::path_model::{PlanarPath, Point2};

/// Largest angular step between consecutive trace points.
pub const MAX_TRACE_STEP: f64 = 0.05;

/// Tolerance for "holonomy fixes the contact point".
pub const VERTICAL_AXIS_TOL: f64 = 1e-8;

/// Unit vector pointing from the ball centre to the contact point.
pub const DOWN: Vec3 = Vec3::new(0.0, 0.0, -1.0);

/// Rotation produced by rolling `length` along the unit `direction` on a ball of radius `r`.
pub fn segment_rotation(direction: Point2, length: f64, r: f64) -> Result<Rotation> {
    require_positive("r", r)?;
    if !(length >= 0.0) {
        return Err(Error::param("length", format!("must be ≥ 0, got {length}")));
    }
    let n = direction.norm();
    if !(n > 0.0) {
        return Err(Error::param("direction", "must be non-zero"));
    }
    let d = direction / n;
    Ok(unchecked_segment_rotation(d, length / r))
}

#[inline]
fn unchecked_segment_rotation(unit_dir: Point2, angle: f64) -> Rotation {
    Rotation::from_axis_angle(&Vec3::new(-unit_dir.y, unit_dir.x, 0.0), angle)
}

/// Net rotation `R_n ⋯ R_2 R_1` after rolling once along `path`.
///
/// One exact rotation per polyline segment; the result does not depend on
/// how finely straight stretches are subdivided.
pub fn holonomy(path: &PlanarPath, r: f64) -> Result<Rotation> {
    require_positive("r", r)?;
    Ok(holonomy_unchecked(path, r))
}

pub(crate) fn holonomy_unchecked(path: &PlanarPath, r: f64) -> Rotation {
    path.segments().fold(Rotation::IDENTITY, |acc, s| {
        unchecked_segment_rotation(s.direction, s.length / r) * acc
    })
}

/// Holonomy at scaled inverse radius σ.
pub fn holonomy_at_sigma(path: &PlanarPath, sigma: f64) -> Result<Rotation> {
    holonomy(path, sigma_to_radius(path.length(), sigma)?)
}

/// φ ∈ [0, π], the rotation angle.
pub fn rotation_angle(rot: &Rotation) -> f64 {
    rot.angle()
}

/// `r = L / (2πσ)`.
pub fn sigma_to_radius(length: f64, sigma: f64) -> Result<f64> {
    require_positive("L", length)?;
    require_positive("sigma", sigma)?;
    Ok(length / (TAU * sigma))
}

/// `σ = L / (2πr)`.
pub fn radius_to_sigma(length: f64, r: f64) -> Result<f64> {
    require_positive("L", length)?;
    require_positive("r", r)?;
    Ok(length / (TAU * r))
}

/// True when the rotation maps the contact direction to itself, i.e. it is
/// a rotation about the vertical axis.
pub fn is_vertical_axis(rot: &Rotation) -> bool {
    (rot.apply(&DOWN) - DOWN).norm() <= VERTICAL_AXIS_TOL
}

/// Body-frame trace of the contact point on a ball of radius `radius`.
///
/// Points are stored as unit vectors. Consecutive points always lie on a
/// common great circle (each planar segment maps to a geodesic arc), with
/// at most [`MAX_TRACE_STEP`] between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereTrace {
    radius: f64,
    points: Vec<Vec3>,
    arc_lengths: Vec<f64>,
    vertex_indices: Vec<usize>,
}

impl SphereTrace {
    /// Assembles a trace from unit points. Arc lengths are recomputed
    /// geodesically; every point is marked as a corner.
    pub fn from_unit_points(points: Vec<Vec3>, radius: f64) -> Result<Self> {
        require_positive("radius", radius)?;
        if points.is_empty() {
            return Err(Error::TooFewVertices(0));
        }
        let points: Vec<Vec3> = points.into_iter().map(|p| p.normalize()).collect();
        let mut arc_lengths = Vec::with_capacity(points.len());
        arc_lengths.push(0.0);
        for w in points.windows(2) {
            let last = *arc_lengths.last().unwrap();
            arc_lengths.push(last + radius * geodesic_angle(&w[0], &w[1]));
        }
        let vertex_indices = (0..points.len()).collect();
        Ok(SphereTrace {
            radius,
            points,
            arc_lengths,
            vertex_indices,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Unit directions of the contact points.
    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// Contact point `i` at distance `radius` from the centre.
    pub fn point(&self, i: usize) -> Vec3 {
        self.points[i] * self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Vec3 {
        self.points[0]
    }

    pub fn last(&self) -> Vec3 {
        *self.points.last().unwrap()
    }

    /// Planar arc length at which each point is reached.
    pub fn arc_lengths(&self) -> &[f64] {
        &self.arc_lengths
    }

    /// Indices of the points corresponding to path vertices.
    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertex_indices
    }

    /// Angular size of each step.
    pub fn step_angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| geodesic_angle(&w[0], &w[1]))
    }

    /// Sum of the geodesic step lengths on the ball of radius `radius`.
    pub fn geodesic_length(&self) -> f64 {
        self.radius * self.step_angles().sum::<f64>()
    }

    /// Distance between the last and first point, in length units.
    pub fn closure_gap(&self) -> f64 {
        self.radius * (self.last() - self.first()).norm()
    }

    /// The trace with every point mapped by `rot`.
    pub fn rotated(&self, rot: &Rotation) -> Self {
        SphereTrace {
            radius: self.radius,
            points: self.points.iter().map(|p| rot.apply(p)).collect(),
            arc_lengths: self.arc_lengths.clone(),
            vertex_indices: self.vertex_indices.clone(),
        }
    }

    /// Appends `other`, dropping its first point when it coincides with our last.
    pub fn concat(&self, other: &SphereTrace) -> Self {
        let mut out = self.clone();
        let skip = usize::from((other.first() - self.last()).norm() < 1e-12);
        let offset = *self.arc_lengths.last().unwrap();
        let base = out.points.len();
        for i in skip..other.points.len() {
            out.points.push(other.points[i]);
            out.arc_lengths.push(offset + other.arc_lengths[i]);
        }
        out.vertex_indices.extend(
            other
                .vertex_indices
                .iter()
                .filter(|&&i| i >= skip)
                .map(|&i| base + i - skip),
        );
        out
    }

    /// `t,x,y,z` rows with a header, coordinates scaled by the radius.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z\n");
        for (i, t) in self.arc_lengths.iter().enumerate() {
            let p = self.point(i);
            let _ = writeln!(out, "{t:.16e},{:.16e},{:.16e},{:.16e}", p.x, p.y, p.z);
        }
        out
    }
}

/// Angle between two unit vectors, accurate near 0 and π.
pub fn geodesic_angle(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Contact trace with the default step cap.
pub fn sphere_trace(path: &PlanarPath, r: f64) -> Result<SphereTrace> {
    sphere_trace_with_step(path, r, MAX_TRACE_STEP)
}

/// Contact trace with steps no larger than `max_step` radians (capped at [`MAX_TRACE_STEP`]).
///
/// Every point is computed from the exact cumulative rotation, so there
/// is no drift along long segments.
pub fn sphere_trace_with_step(path: &PlanarPath, r: f64, max_step: f64) -> Result<SphereTrace> {
    require_positive("r", r)?;
    require_positive("max_step", max_step)?;
    let step = max_step.min(MAX_TRACE_STEP);
    let mut points = vec![DOWN];
    let mut arc_lengths = vec![0.0];
    let mut vertex_indices = vec![0];
    let mut before = Rotation::IDENTITY;
    let mut travelled = 0.0;
    for seg in path.segments() {
        let theta = seg.length / r;
        let pieces = (theta / step).ceil().max(1.0) as usize;
        for i in 1..=pieces {
            let f = i as f64 / pieces as f64;
            let partial = unchecked_segment_rotation(seg.direction, theta * f) * before;
            points.push(partial.inverse().apply(&DOWN));
            arc_lengths.push(travelled + seg.length * f);
        }
        before = unchecked_segment_rotation(seg.direction, theta) * before;
        travelled += seg.length;
        vertex_indices.push(points.len() - 1);
    }
    Ok(SphereTrace {
        radius: r,
        points,
        arc_lengths,
        vertex_indices,
    })
}
