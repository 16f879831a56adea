//! Reference computations that share no code with the library's own routes.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trajectoid::path_model::PlanarPath;

pub type V3 = Vector3<f64>;

/// Signed spherical excess of the triangle `abc` on the unit sphere.
pub fn triangle_excess(a: &V3, b: &V3, c: &V3) -> f64 {
    2.0 * a.dot(&b.cross(c)).atan2(1.0 + a.dot(b) + b.dot(c) + c.dot(a))
}

/// Area of a closed spherical polygon by fanning from its first vertex,
/// reduced into `[0, 4π)` for the unit sphere. The orientation matches a
/// loop whose turning is measured against the inward normal.
pub fn fan_area(points: &[V3]) -> f64 {
    let p: Vec<V3> = points.iter().map(|v| v.normalize()).collect();
    let mut sum = 0.0;
    for i in 1..p.len() - 1 {
        sum += triangle_excess(&p[0], &p[i], &p[i + 1]);
    }
    (-sum).rem_euclid(2.0 * TAU)
}

/// Points of the shortest arc from `from` to `to`, excluding both ends.
pub fn arc_between(from: &V3, to: &V3, pieces: usize) -> Vec<V3> {
    let angle = from.cross(to).norm().atan2(from.dot(to));
    (1..pieces)
        .map(|i| {
            let t = i as f64 / pieces as f64;
            (from * ((1.0 - t) * angle).sin() + to * (t * angle).sin()) / angle.sin()
        })
        .collect()
}

/// One-period holonomy as a product of rotation matrices.
pub fn matrix_holonomy(path: &PlanarPath, r: f64) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    for w in path.vertices().windows(2) {
        let d = w[1] - w[0];
        let axis = V3::z().cross(&V3::new(d.x, d.y, 0.0));
        let step = Rotation3::from_axis_angle(&Unit::new_normalize(axis), d.norm() / r);
        m = step.matrix() * m;
    }
    m
}

/// Rotation angle in `[0, π]` from the skew and trace parts, accurate at both ends.
pub fn matrix_angle(m: &Matrix3<f64>) -> f64 {
    let skew = (m - m.transpose()).norm() / (2.0 * 2f64.sqrt());
    skew.atan2(0.5 * (m.trace() - 1.0))
}

/// Planar arc of radius `rho` whose roll traces a closed circle on a ball
/// of radius `r`: the circle's angular radius is `θ` with `cot θ = r/ρ`.
pub fn rolled_circle_path(rho: f64, r: f64, segments: usize) -> (PlanarPath, f64) {
    let theta = (rho / r).atan();
    let length = TAU * r * theta.sin();
    let sweep = length / rho;
    let pts: Vec<(f64, f64)> = (0..=segments)
        .map(|i| {
            let a = sweep * i as f64 / segments as f64;
            (rho * a.sin(), rho * (1.0 - a.cos()))
        })
        .collect();
    (PlanarPath::from_xy(&pts, "rolled circle").unwrap(), theta)
}

/// Area of a cap of angular radius `theta` on a ball of radius `r`.
pub fn cap_area(r: f64, theta: f64) -> f64 {
    TAU * r * r * (1.0 - theta.cos())
}

/// Largest excursion of any vertex beyond the plane of any triangle.
///
/// Only triangles whose smallest altitude is at least `min_altitude` take
/// part: a vertex `e` off a sliver's true plane tilts its computed normal by
/// about `e / altitude`, which swamps the measurement on long thin facets.
pub fn convexity_violation(vertices: &[V3], triangles: &[[u32; 3]], min_altitude: f64) -> f64 {
    let mut worst = 0.0f64;
    for t in triangles {
        let [a, b, c] = t.map(|i| vertices[i as usize]);
        let n = (b - a).cross(&(c - a));
        let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
        if n.norm() / longest < min_altitude {
            continue;
        }
        let n = n.normalize();
        let h = n.dot(&a);
        let over = vertices
            .iter()
            .map(|v| n.dot(v) - h)
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(over);
    }
    worst
}

/// A random polyline arm: `pieces` segments with bounded turns.
pub fn random_arm(seed: u64, pieces: usize) -> PlanarPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![(0.0, 0.0)];
    let mut heading: f64 = rng.random_range(-PI..PI);
    for _ in 0..pieces {
        let len = rng.random_range(0.2..1.0);
        let (x, y) = *pts.last().unwrap();
        pts.push((x + len * heading.cos(), y + len * heading.sin()));
        heading += rng.random_range(-2.0..2.0);
    }
    PlanarPath::from_xy(&pts, format!("arm{seed}")).unwrap()
}

/// Uniform random rotation from a normalized Gaussian quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation3<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let uq = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(q[0], q[1], q[2], q[3]));
    uq.to_rotation_matrix()
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> V3 {
    use rand_distr::{Distribution, StandardNormal};
    V3::from_fn(|_, _| StandardNormal.sample(rng)).normalize()
}
