//! Polygon-face meshes used while carving.
//!
//! Faces are convex planar polygons with outward (counterclockwise) winding.
//! Clipping keeps this true: the part of a convex polygon on one side of a
//! plane is convex, and the cap closing a clipped convex body is the convex
//! cross-section.

use std::collections::{HashMap, HashSet};

use super::{FaceTag, Mesh};
use crate::error::{Error, Result};
use crate::rolling_map::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PolyFace {
    pub idx: Vec<u32>,
    pub tag: FaceTag,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct PolyMesh {
    pub verts: Vec<Vec3>,
    pub faces: Vec<PolyFace>,
}

/// How a plane splits the mesh: signed distances and the `|d| ≤ eps` band.
struct Classified {
    d: Vec<f64>,
    eps: f64,
}

impl Classified {
    fn inside(&self, i: u32) -> bool {
        self.d[i as usize] < -self.eps
    }
    fn outside(&self, i: u32) -> bool {
        self.d[i as usize] > self.eps
    }
    fn on(&self, i: u32) -> bool {
        self.d[i as usize].abs() <= self.eps
    }
}

impl PolyMesh {
    pub fn from_mesh(mesh: &Mesh, tags: &[FaceTag]) -> Self {
        PolyMesh {
            verts: mesh.vertices.clone(),
            faces: mesh
                .triangles
                .iter()
                .zip(tags)
                .map(|(t, tag)| PolyFace {
                    idx: t.to_vec(),
                    tag: *tag,
                })
                .collect(),
        }
    }

    /// Fuses faces back into planar polygons: every cut facet by its tag, and
    /// edge-adjacent shell faces whose planes agree within `plane_tol`. A group
    /// whose boundary is not a single loop is left as it is.
    pub fn merge_planar_facets(&mut self, plane_tol: f64) {
        let n = self.faces.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut first_cut: HashMap<u32, usize> = HashMap::new();
        let mut edge_face: HashMap<(u32, u32), usize> = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            match f.tag {
                FaceTag::Cut(k) => {
                    let j = *first_cut.entry(k).or_insert(i);
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a] = b;
                }
                FaceTag::Shell => {
                    for j in 0..f.idx.len() {
                        edge_face.insert((f.idx[j], f.idx[(j + 1) % f.idx.len()]), i);
                    }
                }
                _ => {}
            }
        }
        for (&(a, b), &i) in &edge_face {
            let Some(&j) = edge_face.get(&(b, a)) else {
                continue;
            };
            if i < j && self.coplanar(i, j, plane_tol) {
                let (x, y) = (root(&mut parent, i), root(&mut parent, j));
                parent[x] = y;
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut merged = Vec::new();
        let mut drop = vec![false; n];
        for members in groups.into_values().filter(|m| m.len() > 1) {
            let mut edges = HashSet::new();
            for &i in &members {
                let idx = &self.faces[i].idx;
                for j in 0..idx.len() {
                    edges.insert((idx[j], idx[(j + 1) % idx.len()]));
                }
            }
            let open: Vec<(u32, u32)> = edges
                .iter()
                .filter(|(a, b)| !edges.contains(&(*b, *a)))
                .copied()
                .collect();
            let Ok(mut ring) = chain_reversed(&open) else {
                continue;
            };
            ring.reverse();
            for &i in &members {
                drop[i] = true;
            }
            merged.push(PolyFace {
                idx: ring,
                tag: self.faces[members[0]].tag,
            });
        }
        let mut i = 0;
        self.faces.retain(|_| {
            i += 1;
            !drop[i - 1]
        });
        self.faces.extend(merged);
    }

    /// Every vertex of face `j` lies within `tol` of the plane of face `i`.
    fn coplanar(&self, i: usize, j: usize, tol: f64) -> bool {
        let p: Vec<Vec3> = self.faces[i]
            .idx
            .iter()
            .map(|&v| self.verts[v as usize])
            .collect();
        let Some(n) = (p[1] - p[0]).cross(&(p[2] - p[0])).try_normalize(0.0) else {
            return false;
        };
        self.faces[j]
            .idx
            .iter()
            .all(|&v| n.dot(&(self.verts[v as usize] - p[0])).abs() <= tol)
    }

    fn classify(&self, normal: &Vec3, offset: f64, eps: f64) -> Classified {
        Classified {
            d: self.verts.iter().map(|v| normal.dot(v) - offset).collect(),
            eps,
        }
    }

    /// Vertex where the edge `(a, b)` crosses the plane, shared by both faces on the edge.
    fn crossing(&mut self, c: &mut Classified, cache: &mut HashMap<(u32, u32), u32>, a: u32, b: u32) -> u32 {
        let key = (a.min(b), a.max(b));
        if let Some(&v) = cache.get(&key) {
            return v;
        }
        let (p, q) = (key.0 as usize, key.1 as usize);
        let t = c.d[p] / (c.d[p] - c.d[q]);
        let x = self.verts[p] + (self.verts[q] - self.verts[p]) * t;
        let id = self.verts.len() as u32;
        self.verts.push(x);
        c.d.push(0.0);
        cache.insert(key, id);
        id
    }

    /// Keeps the half-space `normal · x ≤ offset` and closes the hole with a
    /// face tagged `tag`. Returns false when the plane removes nothing.
    pub fn clip(&mut self, normal: &Vec3, offset: f64, eps: f64, tag: FaceTag) -> Result<bool> {
        let mut c = self.classify(normal, offset, eps);
        let used = self.used_vertices();
        if !(0..self.verts.len()).any(|i| used[i] && c.outside(i as u32)) {
            return Ok(false);
        }
        let mut cache = HashMap::new();
        let faces = std::mem::take(&mut self.faces);
        let mut kept = Vec::with_capacity(faces.len());
        for face in faces {
            let any_out = face.idx.iter().any(|&i| c.outside(i));
            let any_in = face.idx.iter().any(|&i| c.inside(i));
            if !any_in {
                // entirely outside, or lying in the plane: the cap replaces it
                continue;
            }
            if !any_out {
                kept.push(face);
                continue;
            }
            let m = face.idx.len();
            let mut poly = Vec::with_capacity(m + 1);
            for j in 0..m {
                let (a, b) = (face.idx[j], face.idx[(j + 1) % m]);
                if !c.outside(a) {
                    poly.push(a);
                }
                if (c.inside(a) && c.outside(b)) || (c.outside(a) && c.inside(b)) {
                    poly.push(self.crossing(&mut c, &mut cache, a, b));
                }
            }
            if poly.len() >= 3 {
                kept.push(PolyFace {
                    idx: poly,
                    tag: face.tag,
                });
            }
        }
        self.faces = kept;
        let cap = self.hole_loop(|i| c.on(i))?;
        if cap.len() < 3 {
            return Err(Error::NonManifold {
                cut: cut_index(tag),
                reason: format!("cut removed material but left a {}-vertex hole", cap.len()),
            });
        }
        self.faces.push(PolyFace { idx: cap, tag });
        Ok(true)
    }

    /// Splits every face crossing the plane into its two sides without removing anything.
    #[cfg(test)]
    pub fn split(&mut self, normal: &Vec3, offset: f64, eps: f64) {
        self.split_where(normal, offset, eps, |_| true);
    }

    /// Splits the crossing faces whose corner points pass `select`. Unselected
    /// faces sharing a split edge receive the new vertex on that edge, so the
    /// surface stays closed without cutting the whole section loop.
    pub fn split_where(&mut self, normal: &Vec3, offset: f64, eps: f64, select: impl Fn(&[Vec3]) -> bool) {
        let mut c = self.classify(normal, offset, eps);
        let mut cache = HashMap::new();
        let faces = std::mem::take(&mut self.faces);
        let mut out = Vec::with_capacity(faces.len());
        let mut kept = Vec::new();
        for face in faces {
            let any_out = face.idx.iter().any(|&i| c.outside(i));
            let any_in = face.idx.iter().any(|&i| c.inside(i));
            if !(any_in && any_out) {
                out.push(face);
                continue;
            }
            let pts: Vec<Vec3> = face.idx.iter().map(|&i| self.verts[i as usize]).collect();
            if !select(&pts) {
                kept.push(out.len());
                out.push(face);
                continue;
            }
            let m = face.idx.len();
            let (mut lo, mut hi) = (Vec::new(), Vec::new());
            for j in 0..m {
                let (a, b) = (face.idx[j], face.idx[(j + 1) % m]);
                if !c.outside(a) {
                    lo.push(a);
                }
                if !c.inside(a) {
                    hi.push(a);
                }
                if (c.inside(a) && c.outside(b)) || (c.outside(a) && c.inside(b)) {
                    let x = self.crossing(&mut c, &mut cache, a, b);
                    lo.push(x);
                    hi.push(x);
                }
            }
            for idx in [lo, hi] {
                if idx.len() >= 3 {
                    out.push(PolyFace { idx, tag: face.tag });
                }
            }
        }
        if !cache.is_empty() {
            for k in kept {
                let face = &mut out[k];
                let m = face.idx.len();
                let mut idx = Vec::with_capacity(m + 2);
                for j in 0..m {
                    let (a, b) = (face.idx[j], face.idx[(j + 1) % m]);
                    idx.push(a);
                    if let Some(&x) = cache.get(&(a.min(b), a.max(b))) {
                        idx.push(x);
                    }
                }
                face.idx = idx;
            }
        }
        self.faces = out;
    }

    /// Directed edges without a twin, reversed and chained into one loop.
    /// Only edges whose endpoints pass `on_boundary` are considered.
    fn hole_loop(&self, on_boundary: impl Fn(u32) -> bool) -> Result<Vec<u32>> {
        let mut edges = HashSet::new();
        for f in &self.faces {
            let m = f.idx.len();
            for j in 0..m {
                let (a, b) = (f.idx[j], f.idx[(j + 1) % m]);
                if on_boundary(a) && on_boundary(b) {
                    edges.insert((a, b));
                }
            }
        }
        let open: Vec<(u32, u32)> = edges
            .iter()
            .filter(|(a, b)| !edges.contains(&(*b, *a)))
            .copied()
            .collect();
        chain_reversed(&open)
    }

    /// All twinless directed edges of the mesh, reversed and chained into one loop.
    pub fn open_loop(&self) -> Result<Vec<u32>> {
        self.hole_loop(|_| true)
    }

    pub fn used_vertices(&self) -> Vec<bool> {
        let mut used = vec![false; self.verts.len()];
        for f in &self.faces {
            for &i in &f.idx {
                used[i as usize] = true;
            }
        }
        used
    }

    /// Drops unreferenced vertices and renumbers the rest.
    pub fn compact(&mut self) {
        let used = self.used_vertices();
        let mut remap = vec![u32::MAX; self.verts.len()];
        let mut verts = Vec::with_capacity(self.verts.len());
        for (i, v) in self.verts.iter().enumerate() {
            if used[i] {
                remap[i] = verts.len() as u32;
                verts.push(*v);
            }
        }
        for f in &mut self.faces {
            for i in &mut f.idx {
                *i = remap[*i as usize];
            }
        }
        self.verts = verts;
    }

    /// Merges the endpoints of edges shorter than `tol`, keeping the endpoint
    /// touched by more faces. A merge is skipped when the endpoints share a
    /// neighbour outside the faces containing the edge, which would pinch the surface.
    pub fn collapse_short_edges(&mut self, tol: f64) -> usize {
        let mut merged = 0;
        while let Some((a, b)) = self.find_short_edge(tol) {
            self.merge(a, b);
            merged += 1;
        }
        if merged > 0 {
            self.compact();
        }
        merged
    }

    fn find_short_edge(&self, tol: f64) -> Option<(u32, u32)> {
        let mut neighbours: HashMap<u32, HashSet<u32>> = HashMap::new();
        let mut degree: HashMap<u32, usize> = HashMap::new();
        let mut short = Vec::new();
        for f in &self.faces {
            let m = f.idx.len();
            for j in 0..m {
                let (a, b) = (f.idx[j], f.idx[(j + 1) % m]);
                neighbours.entry(a).or_default().insert(b);
                neighbours.entry(b).or_default().insert(a);
                *degree.entry(a).or_default() += 1;
                if a < b && (self.verts[a as usize] - self.verts[b as usize]).norm() < tol {
                    short.push((a, b));
                }
            }
        }
        short.into_iter().find_map(|(a, b)| {
            let shared_faces: HashSet<u32> = self
                .faces
                .iter()
                .filter(|f| f.idx.contains(&a) && f.idx.contains(&b))
                .flat_map(|f| f.idx.iter().copied())
                .collect();
            let na = &neighbours[&a];
            let nb = &neighbours[&b];
            let pinch = na.intersection(nb).any(|c| !shared_faces.contains(c));
            if pinch {
                return None;
            }
            Some(if degree[&a] >= degree[&b] { (a, b) } else { (b, a) })
        })
    }

    /// Replaces `b` by `a` everywhere and drops faces that degenerate.
    fn merge(&mut self, a: u32, b: u32) {
        for f in &mut self.faces {
            for i in &mut f.idx {
                if *i == b {
                    *i = a;
                }
            }
            f.idx.dedup();
            while f.idx.len() > 1 && f.idx.first() == f.idx.last() {
                f.idx.pop();
            }
        }
        self.faces.retain(|f| f.idx.len() >= 3);
    }

    /// Triangulates every face by the fan with the largest smallest
    /// triangle: from one of its corners, or from its area centroid.
    pub fn triangulate(&self) -> (Mesh, Vec<FaceTag>) {
        let mut verts = self.verts.clone();
        let mut tris = Vec::new();
        let mut tags = Vec::new();
        for f in &self.faces {
            let idx = &f.idx;
            let m = idx.len();
            if m == 3 {
                tris.push([idx[0], idx[1], idx[2]]);
                tags.push(f.tag);
                continue;
            }
            let pts: Vec<Vec3> = idx.iter().map(|&i| verts[i as usize]).collect();
            let area = |a: &Vec3, b: &Vec3, c: &Vec3| 0.5 * (b - a).cross(&(c - a)).norm();
            let centroid = polygon_centroid(&pts);
            let centroid_min = (0..m)
                .map(|j| area(&centroid, &pts[j], &pts[(j + 1) % m]))
                .fold(f64::INFINITY, f64::min);
            let (best_corner, corner_min) = (0..m)
                .map(|s| {
                    let min = (1..m - 1)
                        .map(|j| area(&pts[s], &pts[(s + j) % m], &pts[(s + j + 1) % m]))
                        .fold(f64::INFINITY, f64::min);
                    (s, min)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if corner_min >= centroid_min {
                for j in 1..m - 1 {
                    tris.push([
                        idx[best_corner],
                        idx[(best_corner + j) % m],
                        idx[(best_corner + j + 1) % m],
                    ]);
                    tags.push(f.tag);
                }
            } else {
                let ci = verts.len() as u32;
                verts.push(centroid);
                for j in 0..m {
                    tris.push([ci, idx[j], idx[(j + 1) % m]]);
                    tags.push(f.tag);
                }
            }
        }
        (
            Mesh {
                vertices: verts,
                triangles: tris,
            },
            tags,
        )
    }
}

fn cut_index(tag: FaceTag) -> usize {
    match tag {
        FaceTag::Cut(k) => k as usize,
        _ => usize::MAX,
    }
}

/// Area centroid of a planar polygon, falling back to the vertex mean when degenerate.
pub(crate) fn polygon_centroid(pts: &[Vec3]) -> Vec3 {
    let mean = pts.iter().sum::<Vec3>() / pts.len() as f64;
    let (mut acc, mut total) = (Vec3::zeros(), 0.0);
    for j in 0..pts.len() {
        let a = pts[j] - mean;
        let b = pts[(j + 1) % pts.len()] - mean;
        let w = a.cross(&b).norm();
        acc += (pts[j] + pts[(j + 1) % pts.len()] + mean) * (w / 3.0);
        total += w;
    }
    if total > 0.0 {
        acc / total
    } else {
        mean
    }
}

/// Chains directed edges `(a, b)` as `b → a` into a single loop.
fn chain_reversed(open: &[(u32, u32)]) -> Result<Vec<u32>> {
    if open.is_empty() {
        return Ok(Vec::new());
    }
    let mut next: HashMap<u32, u32> = HashMap::with_capacity(open.len());
    for &(a, b) in open {
        if next.insert(b, a).is_some() {
            return Err(Error::NonManifold {
                cut: usize::MAX,
                reason: format!("boundary branches at vertex {b}"),
            });
        }
    }
    let start = open.iter().map(|e| e.1).min().unwrap();
    let mut out = vec![start];
    let mut cur = next[&start];
    while cur != start {
        out.push(cur);
        cur = *next.get(&cur).ok_or_else(|| Error::NonManifold {
            cut: usize::MAX,
            reason: "boundary does not close".into(),
        })?;
        if out.len() > open.len() {
            break;
        }
    }
    if out.len() != open.len() {
        return Err(Error::NonManifold {
            cut: usize::MAX,
            reason: format!(
                "boundary splits into several loops ({} of {} edges chained)",
                out.len(),
                open.len()
            ),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh_forge::{build_shell, check_mesh};

    fn cube() -> PolyMesh {
        let verts = (0..8)
            .map(|i| {
                Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64) * 2.0
                    - Vec3::repeat(1.0)
            })
            .collect();
        let quads = [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ];
        PolyMesh {
            verts,
            faces: quads
                .iter()
                .map(|q| PolyFace {
                    idx: q.to_vec(),
                    tag: FaceTag::Shell,
                })
                .collect(),
        }
    }

    #[test]
    fn cube_corner_cut() {
        let mut m = cube();
        let n = Vec3::repeat(1.0).normalize();
        assert!(m.clip(&n, 2.0 / 3f64.sqrt(), 1e-12, FaceTag::Cut(0)).unwrap());
        let (mesh, _) = m.triangulate();
        let r = check_mesh(&mesh);
        assert!(r.watertight && r.manifold && r.outward, "{r:?}");
        assert_eq!(r.euler_characteristic, 2);
        // cube volume 8 minus corner tetrahedron with legs 1
        assert!((r.volume - (8.0 - 1.0 / 6.0)).abs() < 1e-12, "{}", r.volume);
    }

    #[test]
    fn clip_missing_the_mesh_is_a_no_op() {
        let mut m = cube();
        assert!(!m.clip(&Vec3::z(), 1.0, 1e-12, FaceTag::Cut(0)).unwrap());
        assert!(!m.clip(&Vec3::z(), 5.0, 1e-12, FaceTag::Cut(0)).unwrap());
        assert_eq!(m.faces.len(), 6);
    }

    #[test]
    fn clip_through_vertices() {
        // plane x + y = 0 passes through four cube vertices
        let mut m = cube();
        let n = Vec3::new(1.0, 1.0, 0.0).normalize();
        assert!(m.clip(&n, 0.0, 1e-12, FaceTag::Cut(0)).unwrap());
        let (mesh, _) = m.triangulate();
        let r = check_mesh(&mesh);
        assert!(r.watertight && r.manifold, "{r:?}");
        assert!((r.volume - 4.0).abs() < 1e-12);
    }

    #[test]
    fn split_preserves_volume_and_closure() {
        let shell = build_shell(1.0, 2).unwrap();
        let tags = vec![FaceTag::Shell; shell.triangles.len()];
        let mut m = PolyMesh::from_mesh(&shell, &tags);
        m.split(&Vec3::new(0.3, 0.2, 1.0).normalize(), 0.1, 1e-12);
        assert!(m.faces.len() > shell.triangles.len());
        let (mesh, _) = m.triangulate();
        let r = check_mesh(&mesh);
        assert!(r.watertight && r.manifold, "{r:?}");
        assert!((r.volume - check_mesh(&shell).volume).abs() < 1e-12);
    }

    #[test]
    fn centroid_of_square() {
        let pts = [Vec3::zeros(), Vec3::x(), Vec3::new(1.0, 1.0, 0.0), Vec3::y()];
        assert!((polygon_centroid(&pts) - Vec3::new(0.5, 0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn short_edge_collapse_keeps_closure() {
        let mut m = cube();
        let n = Vec3::repeat(1.0).normalize();
        // a cut barely touching a corner leaves a tiny triangle
        m.clip(&n, 3f64.sqrt() - 1e-9, 1e-14, FaceTag::Cut(0)).unwrap();
        assert_eq!(m.collapse_short_edges(1e-6), 2);
        let (mesh, _) = m.triangulate();
        let r = check_mesh(&mesh);
        assert!(r.watertight && r.manifold && r.euler_characteristic == 2, "{r:?}");
    }

    #[test]
    fn selective_split_stays_closed() {
        let shell = build_shell(1.0, 2).unwrap();
        let tags = vec![FaceTag::Shell; shell.triangles.len()];
        let mut m = PolyMesh::from_mesh(&shell, &tags);
        // only faces on the upper side are split; their lower neighbours gain the new vertices
        m.split_where(&Vec3::x(), 0.05, 1e-12, |pts| pts.iter().all(|p| p.z > 0.0));
        let (mesh, _) = m.triangulate();
        let r = check_mesh(&mesh);
        assert!(r.watertight && r.manifold, "{r:?}");
        assert!((r.volume - check_mesh(&shell).volume).abs() < 1e-12);
    }

    #[test]
    fn coplanar_triangles_merge_into_faces() {
        let (mesh, _) = cube().triangulate();
        let mut m = PolyMesh::from_mesh(&mesh, &vec![FaceTag::Shell; mesh.triangles.len()]);
        m.merge_planar_facets(1e-12);
        assert_eq!(m.faces.len(), 6);
        let (merged, _) = m.triangulate();
        let r = check_mesh(&merged);
        assert!(
            r.watertight && r.manifold && (r.volume - 8.0).abs() < 1e-12,
            "{r:?}"
        );
    }
}
