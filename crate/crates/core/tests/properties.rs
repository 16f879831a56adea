//! Property tests for the invariants each module promises.

mod common;

use std::f64::consts::{PI, TAU};

use common::{convexity_violation, fan_area, matrix_angle, matrix_holonomy, random_arm, V3};
use nalgebra::{Rotation3, Unit};
use proptest::prelude::*;
use trajectoid::mesh_forge::{carve_planes, export_stl, read_stl, CarveConfig, CutPlane};
use trajectoid::path_model::{gen_wedge_path, resample, turning_profile, PlanarPath, Point2};
use trajectoid::rolling_map::{holonomy, sigma_to_radius, sphere_trace, Rotation, DOWN};
use trajectoid::solver::{rodrigues_angle, scan, solve_n, wedge_axis_dot, SigmaRange, IDENTITY_TOL};
use trajectoid::spherical_geometry::{
    circular_distance, enclosed_area, normalized_area, ClosedSphericalLoop,
};

fn arm() -> impl Strategy<Value = PlanarPath> {
    (any::<u64>(), 2usize..12).prop_map(|(seed, pieces)| random_arm(seed, pieces))
}

/// An arm with one more segment parallel to its first, so start and end directions match.
fn direction_closed_arm() -> impl Strategy<Value = PlanarPath> {
    arm().prop_map(|p| {
        let mut v = p.vertices().to_vec();
        let end = *v.last().unwrap();
        v.push(end + p.start_direction() * 0.5);
        PlanarPath::new(v, "closed-direction arm").unwrap()
    })
}

fn rotation_distance(a: &Rotation, b: &Rotation) -> f64 {
    (a.inverse() * *b).distance_to_identity()
}

fn unit(v: (f64, f64, f64)) -> Option<V3> {
    V3::new(v.0, v.1, v.2).try_normalize(1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resampling_keeps_length_turning_and_holonomy(path in arm(), frac in 0.01f64..0.5, sigma in 0.1f64..3.0) {
        let fine = resample(&path, frac * path.length()).unwrap();
        prop_assert!((fine.length() - path.length()).abs() <= 1e-12 * path.length());
        let (a, b) = (turning_profile(&path).unwrap(), turning_profile(&fine).unwrap());
        prop_assert!((a.total_turning - b.total_turning).abs() <= 1e-12);
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let d = rotation_distance(&holonomy(&path, r).unwrap(), &holonomy(&fine, r).unwrap());
        prop_assert!(d <= 1e-10, "{d}");
    }

    #[test]
    fn rigid_motions_change_nothing(path in arm(), angle in -PI..PI, tx in -50.0f64..50.0, ty in -50.0f64..50.0, sigma in 0.1f64..3.0) {
        let moved = path.transformed(angle, Point2::new(tx, ty));
        prop_assert!((moved.length() - path.length()).abs() <= 1e-12 * path.length());
        let (a, b) = (turning_profile(&path).unwrap(), turning_profile(&moved).unwrap());
        prop_assert!((a.total_turning - b.total_turning).abs() <= 1e-12);
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let (ha, hb) = (holonomy(&path, r).unwrap(), holonomy(&moved, r).unwrap());
        prop_assert!((ha.angle() - hb.angle()).abs() <= 1e-10);
        let (sa, sb) = (normalized_area(&path, sigma).unwrap(), normalized_area(&moved, sigma).unwrap());
        if !sa.antipodal && !sb.antipodal {
            prop_assert!(circular_distance(sa.reduced, sb.reduced) <= 1e-8);
        }
    }

    #[test]
    fn repeated_path_index_and_holonomy(path in direction_closed_arm(), m in 2usize..5, sigma in 0.1f64..3.0) {
        let rep = path.repeated(m);
        let one = turning_profile(&path).unwrap().index;
        let many = turning_profile(&rep).unwrap().index;
        prop_assert!((many - m as f64 * one).abs() <= 1e-12, "{many} vs {m}·{one}");
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let h = holonomy(&path, r).unwrap();
        let d = rotation_distance(&holonomy(&rep, r).unwrap(), &h.pow(m as u32));
        prop_assert!(d <= 1e-9, "{d}");
    }

    #[test]
    fn holonomy_matches_matrix_product(path in arm(), sigma in 0.05f64..6.0) {
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let q = holonomy(&path, r).unwrap();
        prop_assert!((q.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((0.0..=PI).contains(&q.angle()));
        let diff = (q.to_matrix() - matrix_holonomy(&path, r)).abs().max();
        prop_assert!(diff <= 1e-12, "{diff}");
        prop_assert!((q.angle() - matrix_angle(&matrix_holonomy(&path, r))).abs() <= 1e-10);
    }

    #[test]
    fn reversed_path_undoes_the_roll(path in arm(), sigma in 0.05f64..6.0) {
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let there = holonomy(&path, r).unwrap();
        let back = holonomy(&path.reversed(), r).unwrap();
        prop_assert!((back * there).distance_to_identity() <= 1e-10);
    }

    #[test]
    fn scaling_path_and_ball_together(path in arm(), s in 1e-3f64..1e3, sigma in 0.1f64..3.0) {
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let big = path.scaled(s).unwrap();
        let d = rotation_distance(&holonomy(&path, r).unwrap(), &holonomy(&big, r * s).unwrap());
        prop_assert!(d <= 1e-10, "{d}");
    }

    #[test]
    fn trace_is_an_isometry_and_gap_tracks_holonomy(path in arm(), sigma in 0.05f64..4.0) {
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let trace = sphere_trace(&path, r).unwrap();
        prop_assert!((trace.geodesic_length() - path.length()).abs() <= 1e-9 * path.length());
        prop_assert!(trace.points().iter().all(|p| (p.norm() - 1.0).abs() <= 1e-12));
        // closed trace exactly when the holonomy fixes the contact direction
        let h = holonomy(&path, r).unwrap();
        let moved = r * (h.apply(&DOWN) - DOWN).norm();
        prop_assert!((trace.closure_gap() - moved).abs() <= 1e-9 * r);
    }

    #[test]
    fn turning_area_agrees_with_excess_oracle(path in arm(), sigma in 0.05f64..2.0) {
        let r = sigma_to_radius(path.length(), sigma).unwrap();
        let trace = sphere_trace(&path, r).unwrap();
        let Ok(area) = enclosed_area(&trace) else { return Ok(()); };
        prop_assert!((0.0..TAU * r * r).contains(&area.reduced));
        let lp = ClosedSphericalLoop::from_trace(&trace).unwrap();
        let gb = lp.turning_sum() + area.raw / (r * r);
        let wrapped = (gb - TAU).rem_euclid(2.0 * TAU);
        prop_assert!(wrapped.min(2.0 * TAU - wrapped) <= 1e-9, "Gauss–Bonnet residual {wrapped}");
        // the excess oracle counts winding, which the turning form matches modulo 2π
        let oracle = fan_area(lp.points());
        prop_assert!(circular_distance(area.reduced / (r * r), oracle) <= 1e-8);
    }

    #[test]
    fn reversal_complements_the_area(path in arm(), sigma in 0.05f64..3.0) {
        let (a, b) = (normalized_area(&path, sigma).unwrap(), normalized_area(&path.reversed(), sigma).unwrap());
        if !a.antipodal && !b.antipodal {
            prop_assert!(circular_distance(a.reduced + b.reduced, 0.0) <= 1e-8);
        }
    }

    #[test]
    fn rodrigues_agrees_with_composition(beta in 0.0f64..PI, n1 in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
                                         axis in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), angle in 0.0f64..PI) {
        let (Some(n1), Some(axis)) = (unit(n1), unit(axis)) else { return Ok(()); };
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
        let b = Rotation3::from_axis_angle(&Unit::new_normalize(n1), beta);
        let direct = (b.inverse() * r.inverse() * b * r).into_inner();
        prop_assert!((rodrigues_angle(beta, n1.dot(&(r * n1))) - matrix_angle(&direct)).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn returned_solutions_are_certified(seed in any::<u64>(), n in 1u32..4) {
        let path = random_arm(seed, 6);
        let range = SigmaRange::new(0.05, 3.0).unwrap();
        let sols = solve_n(&path, n, range, 600).unwrap();
        for w in sols.windows(2) {
            prop_assert!(w[0].sigma < w[1].sigma);
        }
        for s in &sols {
            prop_assert!(s.residual_identity <= IDENTITY_TOL);
            prop_assert!(s.sigma >= range.min && s.sigma <= range.max);
            prop_assert!((s.radius - path.length() / (TAU * s.sigma)).abs() <= 1e-12 * s.radius);
            let d = holonomy(&path, s.radius).unwrap().pow(n).distance_to_identity();
            prop_assert!(d <= IDENTITY_TOL, "{d}");
        }
    }

    #[test]
    fn wedge_holonomy_stays_below_twice_beta(seed in any::<u64>(), j in 2u32..6, frac in 0.1f64..0.95) {
        let beta = frac * PI / j as f64;
        let w = random_arm(seed, 5);
        let path = gen_wedge_path(&w, beta).unwrap();
        let range = SigmaRange::new(0.05, 3.0).unwrap();
        let table = scan(&path, range, 400).unwrap();
        prop_assert!(table.max_phi() <= 2.0 * beta + 1e-9);
        for row in &table.rows {
            let bound = rodrigues_angle(beta, wedge_axis_dot(&w, row.sigma * w.length() / path.length()).unwrap());
            prop_assert!((row.phi - bound).abs() <= 1e-8, "σ={} φ={} γ={}", row.sigma, row.phi, bound);
        }
        for n in 1..=j {
            prop_assert!(solve_n(&path, n, range, 400).unwrap().is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn random_cuts_give_valid_convex_solids(dirs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 4..40)) {
        let r = 25.0;
        let cuts: Vec<CutPlane> = dirs.into_iter().filter_map(unit).map(|u| CutPlane::tangent(&u, r)).collect();
        let config = CarveConfig::default();
        let solid = carve_planes(&cuts, r, 1.4 * r, 3, &config).unwrap();
        let check = solid.check();
        prop_assert!(check.pass, "{check:?}");
        let mesh = &solid.mesh;
        prop_assert!(convexity_violation(&mesh.vertices, &mesh.triangles, 1e-2 * r) <= 1e-7 * r);
        // adding cuts never grows the body
        let fewer = carve_planes(&cuts[..cuts.len() / 2], r, 1.4 * r, 3, &config).unwrap();
        prop_assert!(mesh.volume() <= fewer.mesh.volume() * (1.0 + 1e-12));
        prop_assert!(mesh.volume() >= 4.0 / 3.0 * PI * r.powi(3) * (1.0 - 1e-6));
        // binary STL round trip at single precision
        let back = read_stl(&export_stl(mesh)).unwrap();
        prop_assert_eq!(back.triangles.len(), mesh.triangles.len());
        prop_assert!((back.volume() - mesh.volume()).abs() <= 1e-5 * mesh.volume());
    }
}

#[test]
fn scan_roots_are_stable_under_grid_doubling() {
    for seed in [3, 11, 29] {
        let path = random_arm(seed, 8);
        let range = SigmaRange::default();
        for n in 1..=3 {
            let coarse = solve_n(&path, n, range, 1000).unwrap();
            let fine = solve_n(&path, n, range, 2000).unwrap();
            assert_eq!(coarse.len(), fine.len(), "seed {seed} n {n}");
            for (a, b) in coarse.iter().zip(&fine) {
                assert!((a.sigma - b.sigma).abs() <= 1e-9, "{} vs {}", a.sigma, b.sigma);
            }
        }
    }
}
