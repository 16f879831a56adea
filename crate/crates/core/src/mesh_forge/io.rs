use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{Mesh, TrajectoidSolid};
use crate::error::{Error, Result};
use crate::rolling_map::Vec3;

const STL_HEADER: &[u8] = b"trajectoid binary STL";

/// Binary little-endian STL: 80-byte header, triangle count, then per
/// triangle a normal, three vertices (all `f32`) and a zero attribute word.
pub fn export_stl(mesh: &Mesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * mesh.triangles.len());
    let mut header = [b' '; 80];
    header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.triangles.len() as u32).to_le_bytes());
    for t in 0..mesh.triangles.len() {
        let n = mesh.normal(t);
        for v in std::iter::once(n).chain(mesh.triangle(t)) {
            for c in [v.x, v.y, v.z] {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

/// Reads a binary STL, merging vertices with bit-identical coordinates.
pub fn read_stl(bytes: &[u8]) -> Result<Mesh> {
    if bytes.len() < 84 {
        return Err(Error::MalformedStl(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let expected = 84 + 50 * count;
    if bytes.len() != expected {
        return Err(Error::MalformedStl(format!(
            "{count} triangles need {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let f = |at: usize| f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let mut index: HashMap<[u32; 3], u32> = HashMap::new();
    let mut mesh = Mesh::default();
    for t in 0..count {
        let base = 84 + 50 * t + 12;
        let mut tri = [0u32; 3];
        for (k, slot) in tri.iter_mut().enumerate() {
            let at = base + 12 * k;
            let c = [f(at), f(at + 4), f(at + 8)];
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::MalformedStl(format!("non-finite vertex in triangle {t}")));
            }
            *slot = *index.entry(c.map(f32::to_bits)).or_insert_with(|| {
                mesh.vertices
                    .push(Vec3::new(c[0] as f64, c[1] as f64, c[2] as f64));
                mesh.vertices.len() as u32 - 1
            });
        }
        mesh.triangles.push(tri);
    }
    Ok(mesh)
}

/// Wavefront OBJ text with 1-based indices.
pub fn export_obj(mesh: &Mesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for [a, b, c] in &mesh.triangles {
        let _ = writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1);
    }
    out
}

/// JSON sidecar describing an exported solid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolidMetadata {
    pub radius: f64,
    pub shell_radius: f64,
    pub n: Option<u32>,
    pub sigma: Option<f64>,
    pub cut_count: usize,
    pub triangle_count: usize,
    pub vertex_count: usize,
    pub volume: f64,
    pub verified: bool,
    pub warning: Option<String>,
}

impl SolidMetadata {
    pub fn new(solid: &TrajectoidSolid, n: Option<u32>, sigma: Option<f64>, verified: bool) -> Self {
        SolidMetadata {
            radius: solid.radius,
            shell_radius: solid.shell_radius,
            n,
            sigma,
            cut_count: solid.cuts.len(),
            triangle_count: solid.mesh.triangles.len(),
            vertex_count: solid.mesh.vertices.len(),
            volume: solid.mesh.volume(),
            verified,
            warning: None,
        }
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warning = Some(warning.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh_forge::build_shell;

    #[test]
    fn stl_size_and_round_trip() {
        let m = build_shell(1.5, 1).unwrap();
        let bytes = export_stl(&m);
        assert_eq!(bytes.len(), 84 + 80 * 50);
        assert!(!bytes.starts_with(b"solid"));
        let back = read_stl(&bytes).unwrap();
        assert_eq!(back.vertices.len(), m.vertices.len());
        assert_eq!(back.triangles.len(), m.triangles.len());
        for a in &back.vertices {
            let nearest = m
                .vertices
                .iter()
                .map(|b| (a - b).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6);
        }
    }

    #[test]
    fn stl_rejects_truncation() {
        let bytes = export_stl(&build_shell(1.0, 1).unwrap());
        assert!(matches!(
            read_stl(&bytes[..bytes.len() - 1]),
            Err(Error::MalformedStl(_))
        ));
        assert!(matches!(read_stl(&bytes[..10]), Err(Error::MalformedStl(_))));
    }

    #[test]
    fn obj_counts() {
        let m = build_shell(1.0, 1).unwrap();
        let obj = export_obj(&m);
        assert_eq!(
            obj.lines().filter(|l| l.starts_with("v ")).count(),
            m.vertices.len()
        );
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 80);
    }
}
