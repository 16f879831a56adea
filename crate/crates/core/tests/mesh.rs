//! Carving, hollowing and export of solids at print scale.

mod common;

use std::f64::consts::{PI, TAU};
use std::io::Cursor;

use common::{convexity_violation, V3};
use trajectoid::mesh_forge::{
    carve, carve_planes, check_mesh, core_cavity, cut_normals, export_obj, export_stl, read_stl, CarveConfig,
    CavityConfig, CutPlane, FaceTag, TrajectoidSolid,
};
use trajectoid::path_model::{gen_fourier_random, gen_straight};
use trajectoid::rolling_map::{holonomy, sphere_trace_with_step};
use trajectoid::solver::{solve_n, SigmaRange};

fn validate_stl(solid: &TrajectoidSolid) {
    let stl = stl_io::read_stl(&mut Cursor::new(export_stl(&solid.mesh))).unwrap();
    stl.validate().unwrap();
    assert_eq!(stl.faces.len(), solid.mesh.triangles.len());
}

fn band(r: f64) -> TrajectoidSolid {
    let trace = sphere_trace_with_step(&gen_straight(TAU * r).unwrap(), r, 5e-3).unwrap();
    carve(&trace, 1.4 * r, 4).unwrap()
}

#[test]
fn two_antipodal_cuts_make_two_flats() {
    let r = 25.0;
    let cuts = [CutPlane::tangent(&V3::z(), r), CutPlane::tangent(&-V3::z(), r)];
    let solid = carve_planes(&cuts, r, 1.4 * r, 4, &CarveConfig::default()).unwrap();
    assert!(solid.check().pass);
    assert!((solid.support_height(&V3::z()) - r).abs() <= 1e-9 * r);
    assert!((solid.support_height(&-V3::z()) - r).abs() <= 1e-9 * r);
    // the shell survives around the equator; the icosphere's vertices lie on it
    let sideways = solid.support_height(&V3::x());
    assert!(sideways > 1.39 * r && sideways <= 1.4 * r * (1.0 + 1e-12));
    validate_stl(&solid);
}

#[test]
fn band_solid_is_valid_at_millimetre_scale() {
    let r = 25.0;
    let solid = band(r);
    let check = solid.check();
    assert!(check.pass, "{check:?}");
    assert_eq!(check.mesh.euler_characteristic, 2);
    let m = &solid.mesh;
    assert!(convexity_violation(&m.vertices, &m.triangles, 1e-2 * r) <= 1e-7 * r);
    validate_stl(&solid);
}

#[test]
fn cavity_keeps_the_solid_printable() {
    let r = 20.0;
    let solid = band(r);
    let ball = 0.6 * r;
    let hollow = core_cavity(&solid, &CavityConfig::new(ball)).unwrap();
    let check = hollow.check();
    assert!(check.pass, "{check:?}");
    assert!(check.mesh.watertight && check.mesh.manifold);
    let spec = hollow.cavity.unwrap();
    assert!((spec.axis.norm() - 1.0).abs() <= 1e-12);
    assert!(spec.bore_radius >= ball * (PI / spec.longitudes as f64).cos() - 1e-12);
    // at least the ball's volume is removed, never more than ball plus a full-length bore
    let removed = solid.mesh.volume() - hollow.mesh.volume();
    let ball_volume = 4.0 / 3.0 * PI * ball.powi(3);
    assert!(removed >= 0.9 * ball_volume, "{removed} vs {ball_volume}");
    assert!(removed <= ball_volume + spec.bore_area() * 1.4 * r);
    assert!(hollow.tags.contains(&FaceTag::Cavity) && hollow.tags.contains(&FaceTag::Bore));
    validate_stl(&hollow);
    assert!(core_cavity(&hollow, &CavityConfig::new(ball)).is_err());
}

#[test]
fn stl_round_trip_restores_a_closed_mesh() {
    let solid = band(25.0);
    let back = read_stl(&export_stl(&solid.mesh)).unwrap();
    let report = check_mesh(&back);
    assert!(
        report.watertight && report.manifold && report.outward,
        "{report:?}"
    );
    assert_eq!(back.triangles.len(), solid.mesh.triangles.len());
    assert_eq!(back.vertices.len(), solid.mesh.vertices.len());
    assert!((back.volume() - solid.mesh.volume()).abs() <= 1e-5 * solid.mesh.volume());
    assert!(read_stl(b"not an stl").is_err());
}

#[test]
fn obj_lists_every_vertex_and_face() {
    let solid = band(25.0);
    let obj = export_obj(&solid.mesh);
    let count = |prefix: &str| obj.lines().filter(|l| l.starts_with(prefix)).count();
    assert_eq!(count("v "), solid.mesh.vertices.len());
    assert_eq!(count("f "), solid.mesh.triangles.len());
    let max_index = obj
        .lines()
        .filter(|l| l.starts_with("f "))
        .flat_map(|l| l[2..].split_whitespace().map(|t| t.parse::<usize>().unwrap()))
        .max()
        .unwrap();
    assert_eq!(max_index, solid.mesh.vertices.len());
}

#[test]
fn two_period_cut_set_is_invariant_under_the_holonomy() {
    let path = gen_fourier_random(0, 5, 1.0).unwrap();
    let sol = solve_n(&path, 2, SigmaRange::default(), 2000)
        .unwrap()
        .into_iter()
        .find(|s| !s.antipodal)
        .unwrap();
    let trace = sphere_trace_with_step(&path.repeated(2), sol.radius, 0.02).unwrap();
    let normals = cut_normals(&trace, 0.0, 1.0 - 1e-10);
    let h = holonomy(&path, sol.radius).unwrap();
    for u in &normals {
        let image = h.apply(u);
        let nearest = normals
            .iter()
            .map(|v| (v - image).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest <= 1e-6, "{nearest}");
    }
}

#[test]
fn dense_two_period_trace_shaves_off_the_whole_shell() {
    let path = gen_fourier_random(0, 5, 1.0).unwrap().scaled(100.0).unwrap();
    let sol = solve_n(&path, 2, SigmaRange::default(), 2000)
        .unwrap()
        .into_iter()
        .find(|s| !s.antipodal)
        .unwrap();
    let trace = sphere_trace_with_step(&path.repeated(2), sol.radius, 0.01).unwrap();
    let solid = carve(&trace, 3.0 * sol.radius, 4).unwrap();
    assert!(solid.check().pass);
    assert!(!solid.tags.contains(&FaceTag::Shell));
    let outermost = solid.mesh.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(outermost < 3.0 * sol.radius * (1.0 - 1e-6));
}
