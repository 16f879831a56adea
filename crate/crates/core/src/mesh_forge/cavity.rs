//! Inner cavity for the heavy ball, opened to the outside by a prismatic bore.
//!
//! The cavity is a latitude–longitude sphere of radius `r_ball` up to the
//! height `h0` where its ring matches the bore's regular `M`-gon cross-section
//! (corner radius `R_c`). Above `h0` the bore walls are the `M` prism side
//! planes, which run up to the outer surface.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::poly::{PolyFace, PolyMesh};
use super::{FaceTag, TrajectoidSolid};
use crate::error::{require_positive, Error, Result};
use crate::rolling_map::Vec3;

/// Snapping distance onto the bore walls, relative to the ball radius.
const WALL_SNAP_REL: f64 = 1e-4;

/// Geometry of a cut cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavitySpec {
    pub ball_radius: f64,
    /// Distance from the bore axis to the prism corners.
    pub bore_radius: f64,
    /// Unit direction of the bore, from the centre outwards.
    pub axis: Vec3,
    pub longitudes: usize,
    pub rings: usize,
}

impl CavitySpec {
    /// Height along the axis where the cavity sphere meets the bore.
    pub fn neck_height(&self) -> f64 {
        (self.ball_radius.powi(2) - self.bore_radius.powi(2))
            .max(0.0)
            .sqrt()
    }

    /// Area of the bore's polygonal cross-section.
    pub fn bore_area(&self) -> f64 {
        0.5 * self.longitudes as f64 * self.bore_radius.powi(2) * (TAU / self.longitudes as f64).sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    pub ball_radius: f64,
    /// Corner radius of the bore; `None` uses the ball radius so the ball fits through.
    pub bore_radius: Option<f64>,
    /// Bore direction; `None` picks the direction of greatest support.
    pub axis: Option<Vec3>,
    pub longitudes: usize,
    pub rings: usize,
    /// The outer surface around the bore must rise at least this far (relative to `r`) above the neck.
    pub min_wall_rel: f64,
}

impl CavityConfig {
    pub fn new(ball_radius: f64) -> Self {
        CavityConfig {
            ball_radius,
            bore_radius: None,
            axis: None,
            longitudes: 64,
            rings: 32,
            min_wall_rel: 0.02,
        }
    }
}

fn newell_normal(pts: &[Vec3]) -> Vec3 {
    let mut n = Vec3::zeros();
    for j in 0..pts.len() {
        n += pts[j].cross(&pts[(j + 1) % pts.len()]);
    }
    n
}

/// Hollows out a cavity of radius `ball_radius` with an access bore.
pub fn core_cavity(solid: &TrajectoidSolid, config: &CavityConfig) -> Result<TrajectoidSolid> {
    if solid.cavity.is_some() {
        return Err(Error::param("solid", "already has a cavity"));
    }
    let r = solid.radius;
    let rb = config.ball_radius;
    require_positive("ball_radius", rb)?;
    if rb > r {
        return Err(Error::param(
            "ball_radius",
            format!("must not exceed the ball radius {r}, got {rb}"),
        ));
    }
    let rc = config.bore_radius.unwrap_or(rb);
    require_positive("bore_radius", rc)?;
    if rc > rb {
        return Err(Error::param(
            "bore_radius",
            format!("must not exceed ball_radius {rb}, got {rc}"),
        ));
    }
    let (m, k_rings) = (config.longitudes, config.rings);
    if m < 8 || k_rings < 2 {
        return Err(Error::param(
            "longitudes/rings",
            "need at least 8 longitudes and 2 rings",
        ));
    }
    let axis = match config.axis {
        Some(a) => a
            .try_normalize(0.0)
            .ok_or_else(|| Error::param("axis", "must be non-zero"))?,
        None => solid
            .mesh
            .vertices
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .map(|v| v.normalize())
            .ok_or_else(|| Error::param("solid", "has no vertices"))?,
    };
    let e1 = axis
        .cross(&if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() })
        .normalize();
    let e2 = axis.cross(&e1);
    let spec = CavitySpec {
        ball_radius: rb,
        bore_radius: rc,
        axis,
        longitudes: m,
        rings: k_rings,
    };
    let h0 = spec.neck_height();
    let apothem = rc * (PI / m as f64).cos();
    let lon = |j: usize| TAU * (j % m) as f64 / m as f64;
    let wall_normal = |j: usize| {
        let t = lon(j) + PI / m as f64;
        e1 * t.cos() + e2 * t.sin()
    };
    let walls: Vec<Vec3> = (0..m).map(wall_normal).collect();

    let mut poly = PolyMesh::from_mesh(&solid.mesh, &solid.tags);
    poly.merge_planar_facets(1e-9 * r);
    // Vertices this close to a wall plane are snapped onto it instead of
    // spawning a crossing next to them; the bore walls are interior surfaces,
    // so the bend this allows costs nothing, while the slivers it prevents
    // would be degenerate at single precision.
    let eps = WALL_SNAP_REL * r;
    // only faces whose bounding sphere can reach the bore prism are split
    let near_bore = |pts: &[Vec3]| {
        let c = pts.iter().sum::<Vec3>() / pts.len() as f64;
        let rho = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
        let height = axis.dot(&c);
        let lateral = (c - axis * height).norm();
        height + rho >= h0 - eps && lateral <= rc + rho + eps
    };
    for n in &walls {
        poly.split_where(n, apothem, eps, near_bore);
    }
    let in_bore = |c: &Vec3| axis.dot(c) > h0 && walls.iter().all(|n| n.dot(c) < apothem);
    let verts = poly.verts.clone();
    poly.faces.retain(|f| {
        let c = f.idx.iter().map(|&i| verts[i as usize]).sum::<Vec3>() / f.idx.len() as f64;
        !in_bore(&c)
    });
    let hole = poly.open_loop()?;
    if hole.is_empty() {
        return Err(Error::ThinShell("bore does not reach the outer surface".into()));
    }
    let min_height = hole
        .iter()
        .map(|&i| axis.dot(&poly.verts[i as usize]))
        .fold(f64::INFINITY, f64::min);
    if min_height <= h0 + config.min_wall_rel * r {
        return Err(Error::ThinShell(format!(
            "outer surface comes within {:.3e} of the cavity neck along the bore",
            min_height - h0
        )));
    }

    // the loop vertex on the corner line between walls j-1 and j
    let plane_gap = |v: &Vec3, j: usize| (walls[j % m].dot(v) - apothem).abs();
    let mut corner_pos = Vec::with_capacity(m);
    for j in 0..m {
        let (pos, gap) = hole
            .iter()
            .enumerate()
            .map(|(p, &i)| {
                let v = &poly.verts[i as usize];
                (p, plane_gap(v, j + m - 1).max(plane_gap(v, j)))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if gap > 2.0 * eps {
            return Err(Error::ThinShell(format!(
                "bore corner {j} does not meet the outer surface cleanly"
            )));
        }
        corner_pos.push(pos);
    }
    let len = hole.len();
    let forward = {
        let mut p = corner_pos[0];
        loop {
            p = (p + 1) % len;
            if let Some(j) = corner_pos.iter().position(|&c| c == p) {
                break j == 1;
            }
        }
    };
    let chain = |from: usize, to: usize| -> Vec<u32> {
        let mut out = vec![hole[from]];
        let mut p = from;
        while p != to {
            p = if forward {
                (p + 1) % len
            } else {
                (p + len - 1) % len
            };
            out.push(hole[p]);
        }
        out
    };

    let ring_point = |polar: f64, j: usize| {
        let t = lon(j);
        (e1 * t.cos() + e2 * t.sin()) * (rb * polar.sin()) + axis * (rb * polar.cos())
    };
    let theta0 = (h0 / rb).clamp(-1.0, 1.0).acos();
    let mut rings: Vec<Vec<u32>> = Vec::with_capacity(k_rings + 1);
    for k in 0..k_rings {
        let polar = theta0 + (PI - theta0) * k as f64 / k_rings as f64;
        rings.push(
            (0..m)
                .map(|j| {
                    poly.verts.push(ring_point(polar, j));
                    poly.verts.len() as u32 - 1
                })
                .collect(),
        );
    }
    poly.verts.push(-axis * rb);
    let pole = poly.verts.len() as u32 - 1;

    let add_face = |poly: &mut PolyMesh, mut idx: Vec<u32>, outward: Vec3, tag: FaceTag| {
        let pts: Vec<Vec3> = idx.iter().map(|&i| poly.verts[i as usize]).collect();
        if newell_normal(&pts).dot(&outward) < 0.0 {
            idx.reverse();
        }
        poly.faces.push(PolyFace { idx, tag });
    };
    for k in 0..k_rings {
        for j in 0..m {
            let j1 = (j + 1) % m;
            let idx = if k + 1 < k_rings {
                vec![rings[k][j], rings[k][j1], rings[k + 1][j1], rings[k + 1][j]]
            } else {
                vec![rings[k][j], rings[k][j1], pole]
            };
            let c = idx.iter().map(|&i| poly.verts[i as usize]).sum::<Vec3>();
            add_face(&mut poly, idx, -c, FaceTag::Cavity);
        }
    }
    for j in 0..m {
        let j1 = (j + 1) % m;
        let mut idx = vec![rings[0][j], rings[0][j1]];
        let mut top = chain(corner_pos[j], corner_pos[j1]);
        top.reverse();
        idx.extend(top);
        add_face(&mut poly, idx, -walls[j], FaceTag::Bore);
    }
    poly.compact();
    let (mesh, tags) = poly.triangulate();
    Ok(TrajectoidSolid {
        mesh,
        tags,
        cuts: solid.cuts.clone(),
        radius: r,
        shell_radius: solid.shell_radius,
        cavity: Some(spec),
    })
}
