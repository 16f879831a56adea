//! Carving the solid: a shell ball shaved by the tangent planes at every
//! contact point of the trace.
//!
//! The solid is `{|x| ≤ r_shell} ∩ ⋂ {u·x ≤ r}` over cut normals `u`, an
//! intersection of convex sets. It is built by clipping a geodesic sphere
//! mesh plane by plane, so every carved facet is exactly planar.

mod cavity;
mod io;
mod poly;

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

pub use cavity::{core_cavity, CavityConfig, CavitySpec};
pub use io::{export_obj, export_stl, read_stl, SolidMetadata};

use crate::error::{require_positive, Error, Result};
use crate::rolling_map::{geodesic_angle, SphereTrace, Vec3};
use poly::PolyMesh;

/// Shell radius over ball radius unless asked otherwise.
pub const DEFAULT_SHELL_RATIO: f64 = 1.4;

/// Indexed triangle mesh with counterclockwise (outward) winding.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

impl Mesh {
    pub fn triangle(&self, t: usize) -> [Vec3; 3] {
        self.triangles[t].map(|i| self.vertices[i as usize])
    }

    /// Unit normal from the winding; zero for a degenerate triangle.
    pub fn normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangle(t);
        (b - a)
            .cross(&(c - a))
            .try_normalize(0.0)
            .unwrap_or_else(Vec3::zeros)
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| triangle_area(&self.triangle(t)))
            .sum()
    }

    /// Signed volume by the divergence theorem; positive for outward winding.
    pub fn volume(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle(t);
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }
}

fn triangle_area(t: &[Vec3; 3]) -> f64 {
    0.5 * (t[1] - t[0]).cross(&(t[2] - t[0])).norm()
}

/// Which surface a triangle came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FaceTag {
    /// Surviving part of the outer shell sphere.
    Shell,
    /// Facet of the cut with this index into [`TrajectoidSolid::cuts`].
    Cut(u32),
    /// Wall of the inner spherical cavity.
    Cavity,
    /// Wall of the access bore.
    Bore,
}

impl FaceTag {
    pub fn is_outer(&self) -> bool {
        matches!(self, FaceTag::Shell | FaceTag::Cut(_))
    }
}

/// Topological and metric summary of a triangle mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshReport {
    pub vertex_count: usize,
    pub triangle_count: usize,
    /// Every directed edge has exactly one reversed twin.
    pub watertight: bool,
    /// Watertight, and the triangles around every vertex form a single disc.
    pub manifold: bool,
    pub euler_characteristic: i64,
    pub volume: f64,
    pub area: f64,
    /// Positive enclosed volume.
    pub outward: bool,
    pub min_edge: f64,
    pub min_triangle_area: f64,
}

pub fn check_mesh(mesh: &Mesh) -> MeshReport {
    let mut directed: HashMap<(u32, u32), usize> = HashMap::new();
    let mut min_edge = f64::INFINITY;
    let mut min_area = f64::INFINITY;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (tri[j], tri[(j + 1) % 3]);
            *directed.entry((a, b)).or_default() += 1;
            min_edge = min_edge.min((mesh.vertices[a as usize] - mesh.vertices[b as usize]).norm());
        }
        min_area = min_area.min(triangle_area(&mesh.triangle(t)));
    }
    let watertight = directed
        .iter()
        .all(|(&(a, b), &count)| count == 1 && directed.get(&(b, a)) == Some(&1));

    // link of each vertex: the opposite edges of its triangles must chain into one cycle
    let mut links: HashMap<u32, HashMap<u32, u32>> = HashMap::new();
    let mut link_ok = true;
    for tri in &mesh.triangles {
        for j in 0..3 {
            let (v, a, b) = (tri[j], tri[(j + 1) % 3], tri[(j + 2) % 3]);
            if links.entry(v).or_default().insert(a, b).is_some() {
                link_ok = false;
            }
        }
    }
    if link_ok {
        link_ok = links.values().all(|link| {
            let start = *link.keys().next().unwrap();
            let mut cur = start;
            let mut steps = 0;
            loop {
                match link.get(&cur) {
                    Some(&n) => cur = n,
                    None => return false,
                }
                steps += 1;
                if cur == start || steps > link.len() {
                    break;
                }
            }
            cur == start && steps == link.len()
        });
    }
    let used = links.len() as i64;
    let edges = (directed.len() / 2) as i64;
    let volume = mesh.volume();
    MeshReport {
        vertex_count: used as usize,
        triangle_count: mesh.triangles.len(),
        watertight,
        manifold: watertight && link_ok,
        euler_characteristic: used - edges + mesh.triangles.len() as i64,
        volume,
        area: mesh.area(),
        outward: volume > 0.0,
        min_edge,
        min_triangle_area: min_area,
    }
}

/// Geodesic sphere: an icosahedron with each triangle split in four
/// `subdivisions` times and projected onto the sphere; `20·4^k` triangles.
pub fn build_shell(r_shell: f64, subdivisions: u32) -> Result<Mesh> {
    require_positive("r_shell", r_shell)?;
    if !(1..=8).contains(&subdivisions) {
        return Err(Error::param(
            "subdivisions",
            format!("must lie in [1, 8], got {subdivisions}"),
        ));
    }
    let g = 0.5 * (1.0 + 5f64.sqrt());
    let mut verts: Vec<Vec3> = [
        (-1.0, g, 0.0),
        (1.0, g, 0.0),
        (-1.0, -g, 0.0),
        (1.0, -g, 0.0),
        (0.0, -1.0, g),
        (0.0, 1.0, g),
        (0.0, -1.0, -g),
        (0.0, 1.0, -g),
        (g, 0.0, -1.0),
        (g, 0.0, 1.0),
        (-g, 0.0, -1.0),
        (-g, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
    .collect();
    let mut tris: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, verts: &mut Vec<Vec3>| -> u32 {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push((verts[a as usize] + verts[b as usize]).normalize());
                verts.len() as u32 - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    for v in &mut verts {
        *v *= r_shell;
    }
    Ok(Mesh {
        vertices: verts,
        triangles: tris,
    })
}

/// The half-space `normal · x ≤ offset`, tangent to the ball of radius `offset` at `offset·normal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutPlane {
    pub normal: Vec3,
    pub offset: f64,
}

impl CutPlane {
    pub fn tangent(direction: &Vec3, r: f64) -> Self {
        CutPlane {
            normal: direction.normalize(),
            offset: r,
        }
    }

    /// Positive outside the half-space.
    pub fn excess(&self, x: &Vec3) -> f64 {
        self.normal.dot(x) - self.offset
    }
}

/// Tuning for [`carve_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarveConfig {
    /// Target gap (radians) between consecutive cuts along the trace.
    pub min_cut_angle: f64,
    /// Cuts whose normals have at least this dot product are merged.
    pub dedup_dot: f64,
    /// Vertices within `eps_rel · r` of a plane count as on it.
    pub eps_rel: f64,
    /// Edges shorter than `collapse_rel · r` are merged after carving.
    pub collapse_rel: f64,
    /// Upper bound on the number of cuts; the decimation angle grows to respect it.
    pub max_cuts: usize,
}

impl Default for CarveConfig {
    fn default() -> Self {
        CarveConfig {
            min_cut_angle: 1e-3,
            dedup_dot: 1.0 - 1e-10,
            eps_rel: 1e-9,
            collapse_rel: 1e-7,
            max_cuts: 2000,
        }
    }
}

/// The carved body together with the planes that made it.
#[derive(Debug, Clone)]
pub struct TrajectoidSolid {
    pub mesh: Mesh,
    /// One tag per triangle.
    pub tags: Vec<FaceTag>,
    pub cuts: Vec<CutPlane>,
    pub radius: f64,
    pub shell_radius: f64,
    pub cavity: Option<CavitySpec>,
}

/// Validity of a solid against its defining constraints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolidCheck {
    pub mesh: MeshReport,
    /// Largest `u·x − r` over vertices and cuts, relative to `r`.
    pub cut_violation: f64,
    /// Largest `|x| − r_shell` over vertices, relative to `r_shell`.
    pub shell_violation: f64,
    /// Largest `r − (face plane offset)` over outer faces, relative to `r`;
    /// non-positive means the inner ball fits.
    pub inner_ball_violation: f64,
    /// Largest distance of a cut-facet vertex from its plane, relative to `r`.
    pub facet_planarity: f64,
    pub pass: bool,
}

/// Relative tolerance for the convexity, containment and planarity checks.
pub const SOLID_TOL: f64 = 1e-7;

impl TrajectoidSolid {
    pub fn support_height(&self, direction: &Vec3) -> f64 {
        support_height(self, direction)
    }

    pub fn cut_count(&self) -> usize {
        self.cuts.len()
    }

    pub fn check(&self) -> SolidCheck {
        let mesh = check_mesh(&self.mesh);
        let r = self.radius;
        let mut outer_vertex = vec![false; self.mesh.vertices.len()];
        for (tri, tag) in self.mesh.triangles.iter().zip(&self.tags) {
            if tag.is_outer() {
                for &i in tri {
                    outer_vertex[i as usize] = true;
                }
            }
        }
        let outer: Vec<&Vec3> = self
            .mesh
            .vertices
            .iter()
            .zip(&outer_vertex)
            .filter_map(|(v, &o)| o.then_some(v))
            .collect();
        let cut_violation = self
            .cuts
            .iter()
            .flat_map(|c| outer.iter().map(move |v| c.excess(v)))
            .fold(f64::NEG_INFINITY, f64::max)
            / r;
        let shell_violation = outer
            .iter()
            .map(|v| v.norm() - self.shell_radius)
            .fold(f64::NEG_INFINITY, f64::max)
            / self.shell_radius;
        let mut inner = f64::NEG_INFINITY;
        let mut planarity: f64 = 0.0;
        for (t, tag) in self.tags.iter().enumerate() {
            if !tag.is_outer() {
                continue;
            }
            let tri = self.mesh.triangle(t);
            match tag {
                // a cut facet's plane is its cut, at distance r; planarity confirms the facet lies on it
                FaceTag::Cut(k) => {
                    let c = &self.cuts[*k as usize];
                    inner = inner.max(r - c.offset);
                    for v in &tri {
                        planarity = planarity.max(c.excess(v).abs());
                    }
                }
                _ => {
                    let n = self.mesh.normal(t);
                    if n != Vec3::zeros() {
                        inner = inner.max(r - n.dot(&tri[0]));
                    }
                }
            }
        }
        let inner_ball_violation = inner / r;
        let facet_planarity = planarity / r;
        let pass = mesh.manifold
            && mesh.outward
            && mesh.euler_characteristic == 2
            && cut_violation <= SOLID_TOL
            && shell_violation <= SOLID_TOL
            && (self.cavity.is_some() || inner_ball_violation <= SOLID_TOL)
            && facet_planarity <= SOLID_TOL;
        SolidCheck {
            mesh,
            cut_violation,
            shell_violation,
            inner_ball_violation,
            facet_planarity,
            pass,
        }
    }
}

/// Height of the centre above the plane when the body rests with body
/// direction `direction` pointing down: `max x·d` over the vertices.
pub fn support_height(solid: &TrajectoidSolid, direction: &Vec3) -> f64 {
    let d = direction.normalize();
    solid
        .mesh
        .vertices
        .iter()
        .map(|v| v.dot(&d))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Cut normals for a trace. A point is kept when the next point would lie more
/// than `min_angle` past the last kept one, so gaps between consecutive cuts
/// stay within `min_angle` whenever trace steps do. Both endpoints are kept;
/// near-parallel normals are then merged.
pub fn cut_normals(trace: &SphereTrace, min_angle: f64, dedup_dot: f64) -> Vec<Vec3> {
    let pts = trace.points();
    let mut kept: Vec<Vec3> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let keep = match (kept.last(), pts.get(i + 1)) {
            (None, _) | (_, None) => true,
            (Some(q), Some(next)) => geodesic_angle(q, next) > min_angle,
        };
        if keep {
            kept.push(*p);
        }
    }
    let mut out: Vec<Vec3> = Vec::with_capacity(kept.len());
    for p in kept {
        if !out.iter().any(|q| q.dot(&p) >= dedup_dot) {
            out.push(p);
        }
    }
    out
}

/// Carves with the default configuration.
pub fn carve(trace: &SphereTrace, r_shell: f64, subdivisions: u32) -> Result<TrajectoidSolid> {
    carve_with(trace, r_shell, subdivisions, &CarveConfig::default())
}

/// Shaves the shell ball with the tangent plane at every trace point.
pub fn carve_with(
    trace: &SphereTrace,
    r_shell: f64,
    subdivisions: u32,
    config: &CarveConfig,
) -> Result<TrajectoidSolid> {
    let r = trace.radius();
    let mut min_angle = config.min_cut_angle;
    let mut normals = cut_normals(trace, min_angle, config.dedup_dot);
    if config.max_cuts == 0 {
        return Err(Error::param("max_cuts", "must be at least 1"));
    }
    while normals.len() > config.max_cuts {
        min_angle = min_angle.max(trace.geodesic_length() / trace.radius() / config.max_cuts as f64) * 1.01;
        normals = cut_normals(trace, min_angle, config.dedup_dot);
    }
    let cuts: Vec<CutPlane> = normals.iter().map(|u| CutPlane::tangent(u, r)).collect();
    carve_planes(&cuts, r, r_shell, subdivisions, config)
}

/// Shaves the shell ball with an explicit list of tangent planes of the ball of radius `r`.
pub fn carve_planes(
    cuts: &[CutPlane],
    r: f64,
    r_shell: f64,
    subdivisions: u32,
    config: &CarveConfig,
) -> Result<TrajectoidSolid> {
    require_positive("radius", r)?;
    if !(r_shell > r) {
        return Err(Error::param(
            "r_shell",
            format!("must exceed the ball radius {r}, got {r_shell}"),
        ));
    }
    let shell = build_shell(r_shell, subdivisions)?;
    let tags = vec![FaceTag::Shell; shell.triangles.len()];
    let mut poly = PolyMesh::from_mesh(&shell, &tags);
    let eps = config.eps_rel * r;
    let mut since_compact = 0;
    for (k, cut) in cuts.iter().enumerate() {
        let changed = poly
            .clip(&cut.normal, cut.offset, eps, FaceTag::Cut(k as u32))
            .map_err(|e| match e {
                Error::NonManifold { reason, .. } => Error::NonManifold {
                    cut: k,
                    reason: format!("{reason}; try a larger dedup angle or fewer cuts"),
                },
                other => other,
            })?;
        if changed {
            since_compact += 1;
        }
        if since_compact >= 64 {
            poly.compact();
            since_compact = 0;
        }
    }
    poly.compact();
    let merged = poly.collapse_short_edges(config.collapse_rel * r);
    if merged > 0 {
        log::debug!("merged {merged} short edges");
    }
    let (mesh, tags) = poly.triangulate();
    Ok(TrajectoidSolid {
        mesh,
        tags,
        cuts: cuts.to_vec(),
        radius: r,
        shell_radius: r_shell,
        cavity: None,
    })
}

/// Largest angle between neighbouring cut normals for which the support
/// function between them stays within `tol_rel · r` of `r`.
pub fn max_cut_spacing(tol_rel: f64) -> f64 {
    2.0 * (1.0 / (1.0 + tol_rel)).acos()
}

/// Fibonacci-lattice directions on the unit sphere.
pub fn fibonacci_directions(count: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            Vec3::new(rho * t.cos(), rho * t.sin(), z)
        })
        .collect()
}
