//! Planar paths: polylines parameterized by arc length, their turning
//! profile, CSV ingestion, resampling and the path generators.

mod generators;

pub use generators::{
    gen_fourier_random, gen_fourier_random_with_samples, gen_straight, gen_v_path, gen_wedge_path,
    gen_zigzag, zigzag_ratio_is_rational, FOURIER_DEFAULT_SAMPLES,
};

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use nalgebra::{Rotation2, Vector2};
use serde::Serialize;

use crate::error::{require_positive, Error, Result};

pub type Point2 = Vector2<f64>;

/// Exterior angles closer than this to ±π are treated as cusps.
const CUSP_TOLERANCE: f64 = 1e-12;

/// An open polyline in the rolling plane.
///
/// Consecutive vertices are distinct, so every segment has a well-defined
/// direction and the arc-length parameterization is strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPath {
    vertices: Vec<Point2>,
    cumulative: Vec<f64>,
    name: String,
}

/// One straight piece of a [`PlanarPath`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: Point2,
    pub end: Point2,
    /// Unit direction of travel.
    pub direction: Point2,
    pub length: f64,
}

impl PlanarPath {
    pub fn new(vertices: Vec<Point2>, name: impl Into<String>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        if let Some(i) = vertices
            .iter()
            .position(|v| !(v.x.is_finite() && v.y.is_finite()))
        {
            return Err(Error::NonFinite(i));
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        cumulative.push(0.0);
        for (i, w) in vertices.windows(2).enumerate() {
            let len = (w[1] - w[0]).norm();
            if len == 0.0 {
                return Err(Error::ZeroLengthSegment(i, i + 1));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(PlanarPath {
            vertices,
            cumulative,
            name: name.into(),
        })
    }

    /// Builds a path from `(x, y)` pairs.
    pub fn from_xy(points: &[(f64, f64)], name: impl Into<String>) -> Result<Self> {
        Self::new(points.iter().map(|&(x, y)| Point2::new(x, y)).collect(), name)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Total arc length L.
    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Arc length at each vertex; starts at 0 and ends at L.
    pub fn arc_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segments(&self) -> impl ExactSizeIterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| {
            let delta = w[1] - w[0];
            let length = delta.norm();
            Segment {
                start: w[0],
                end: w[1],
                direction: delta / length,
                length,
            }
        })
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().unwrap()
    }

    /// The translation vector from the first to the last vertex (AΩ).
    pub fn displacement(&self) -> Point2 {
        self.end() - self.start()
    }

    pub fn start_direction(&self) -> Point2 {
        self.segments().next().unwrap().direction
    }

    pub fn end_direction(&self) -> Point2 {
        self.segments().last().unwrap().direction
    }

    /// Signed turn from the last segment of one copy into the first segment
    /// of the next copy when the path is repeated by translation.
    pub fn junction_turn(&self) -> f64 {
        signed_angle(self.end_direction(), self.start_direction())
    }

    /// Position at arc length `t`, clamped to `[0, L]`.
    pub fn point_at(&self, t: f64) -> Point2 {
        let t = t.clamp(0.0, self.length());
        let i = match self.cumulative.binary_search_by(|c| c.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.vertices[i],
            Err(i) => i - 1,
        };
        let seg_len = self.cumulative[i + 1] - self.cumulative[i];
        let f = (t - self.cumulative[i]) / seg_len;
        self.vertices[i] + (self.vertices[i + 1] - self.vertices[i]) * f
    }

    /// Applies a rigid motion: rotation by `angle` about the origin, then translation.
    pub fn transformed(&self, angle: f64, translation: Point2) -> Self {
        let rot = Rotation2::new(angle);
        self.map_vertices(|v| rot * v + translation)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        require_positive("scale", factor)?;
        Ok(self.map_vertices(|v| v * factor))
    }

    /// The same polyline traversed from end to start.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self::new(vertices, format!("{} (reversed)", self.name)).expect("reversal keeps validity")
    }

    /// `copies` translated copies of the path joined end to start.
    pub fn repeated(&self, copies: usize) -> Self {
        let step = self.displacement();
        let mut vertices = Vec::with_capacity(self.segment_count() * copies.max(1) + 1);
        vertices.push(self.start());
        for m in 0..copies.max(1) {
            let offset = step * m as f64;
            vertices.extend(self.vertices[1..].iter().map(|v| v + offset));
        }
        Self::new(vertices, format!("{} x{}", self.name, copies.max(1)))
            .expect("translated copies keep validity")
    }

    fn map_vertices(&self, f: impl Fn(&Point2) -> Point2) -> Self {
        let vertices = self.vertices.iter().map(f).collect();
        Self::new(vertices, self.name.clone()).expect("similarity keeps validity")
    }
}

/// Signed angle turning `from` into `to`, counterclockwise positive, in (-π, π].
pub(crate) fn signed_angle(from: Point2, to: Point2) -> f64 {
    let cross = from.x * to.y - from.y * to.x;
    let dot = from.dot(&to);
    cross.atan2(dot)
}

/// Exterior turning angles of a path and their total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurningProfile {
    /// One signed angle per interior vertex, counterclockwise positive.
    pub exterior_angles: Vec<f64>,
    /// Δψ, the sum of the exterior angles.
    pub total_turning: f64,
    /// Δψ / 2π.
    pub index: f64,
}

impl TurningProfile {
    /// Index reduced to `[0, 1)`.
    pub fn index_mod1(&self) -> f64 {
        self.index.rem_euclid(1.0)
    }
}

/// Computes the per-vertex exterior angles, Δψ and the index Δψ/2π.
///
/// Counterclockwise (left) turns are positive. A turn of ±π (the path
/// doubling back on itself) is rejected.
pub fn turning_profile(path: &PlanarPath) -> Result<TurningProfile> {
    let dirs: Vec<Point2> = path.segments().map(|s| s.direction).collect();
    let mut exterior_angles = Vec::with_capacity(dirs.len().saturating_sub(1));
    for (i, w) in dirs.windows(2).enumerate() {
        let angle = signed_angle(w[0], w[1]);
        if angle.abs() > PI - CUSP_TOLERANCE {
            return Err(Error::Cusp(i + 1));
        }
        exterior_angles.push(angle);
    }
    let total_turning: f64 = exterior_angles.iter().sum();
    Ok(TurningProfile {
        exterior_angles,
        total_turning,
        index: total_turning / TAU,
    })
}

/// Splits every segment into equal pieces no longer than `max_seg`.
///
/// Original vertices are kept exactly; inserted vertices are collinear, so
/// length and total turning are unchanged.
pub fn resample(path: &PlanarPath, max_seg: f64) -> Result<PlanarPath> {
    require_positive("max_seg", max_seg)?;
    let mut vertices = Vec::with_capacity(path.vertices.len());
    vertices.push(path.start());
    for seg in path.segments() {
        let pieces = ((seg.length / max_seg) - 1e-9).ceil().max(1.0) as usize;
        for i in 1..pieces {
            let f = i as f64 / pieces as f64;
            vertices.push(seg.start + (seg.end - seg.start) * f);
        }
        vertices.push(seg.end);
    }
    PlanarPath::new(vertices, path.name.clone())
}

/// Default resampling bound: L/2000.
pub fn default_max_segment(path: &PlanarPath) -> f64 {
    path.length() / 2000.0
}

/// Parses two comma-separated numeric columns, with an optional header row.
///
/// Consecutive duplicate points are collapsed. Blank lines are skipped.
pub fn load_path_csv(bytes: &[u8]) -> Result<PlanarPath> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::MalformedCsv {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        reason: "invalid UTF-8".into(),
    })?;
    let mut points: Vec<Point2> = Vec::new();
    let mut first_content = true;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = parse_row(line);
        if first_content {
            first_content = false;
            if parsed.is_err() && looks_like_header(line) {
                continue;
            }
        }
        let p = parsed.map_err(|reason| Error::MalformedCsv {
            line: line_no,
            reason,
        })?;
        if points.last() != Some(&p) {
            points.push(p);
        }
    }
    if points.len() < 2 {
        return Err(Error::TooFewVertices(points.len()));
    }
    PlanarPath::new(points, "csv")
}

fn looks_like_header(line: &str) -> bool {
    line.split(',')
        .any(|f| f.trim().parse::<f64>().is_err() && !f.trim().is_empty())
}

fn parse_row(line: &str) -> std::result::Result<Point2, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != 2 {
        return Err(format!("expected 2 columns, found {}", fields.len()));
    }
    let mut xy = [0.0; 2];
    for (slot, field) in xy.iter_mut().zip(&fields) {
        let v: f64 = field.parse().map_err(|_| format!("`{field}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("`{field}` is not finite"));
        }
        *slot = v;
    }
    Ok(Point2::new(xy[0], xy[1]))
}

/// Writes the path as an `x,y` CSV with a header row.
pub fn path_to_csv(path: &PlanarPath) -> String {
    let mut out = String::from("x,y\n");
    for v in path.vertices() {
        let _ = writeln!(out, "{:.16e},{:.16e}", v.x, v.y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn csv_single_segment() {
        let p = load_path_csv(b"0,0\n1,0").unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.length(), 1.0);
    }

    #[test]
    fn csv_collapses_duplicates() {
        let p = load_path_csv(b"0,0\n1,0\n1,0\n1,1").unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.length(), 2.0);
    }

    #[test]
    fn csv_header_and_blank_lines() {
        let p = load_path_csv(b"x,y\n0,0\n\n3,4\n").unwrap();
        assert_eq!(p.length(), 5.0);
    }

    #[test]
    fn csv_reports_line_number() {
        let err = load_path_csv(b"x,y\n0,0\n1;0\n").unwrap_err();
        match err {
            Error::MalformedCsv { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = load_path_csv(b"0,0\n1,abc\n").unwrap_err();
        assert!(matches!(err, Error::MalformedCsv { line: 2, .. }));
    }

    #[test]
    fn csv_rejects_single_distinct_point() {
        assert!(matches!(
            load_path_csv(b"1,1\n1,1\n"),
            Err(Error::TooFewVertices(1))
        ));
    }

    #[test]
    fn csv_sine_arc_length_matches_summation() {
        let n = 1000;
        let mut text = String::new();
        let mut pts = Vec::new();
        for i in 0..n {
            let x = i as f64 / (n - 1) as f64 * PI;
            let y = x.sin();
            pts.push((x, y));
            text.push_str(&format!("{x:.17e},{y:.17e}\n"));
        }
        let p = load_path_csv(text.as_bytes()).unwrap();
        let mut oracle = 0.0;
        for w in pts.windows(2) {
            oracle += ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
        }
        assert!((p.length() - oracle).abs() <= 1e-12);
    }

    #[test]
    fn resample_even_split() {
        let p = PlanarPath::from_xy(&[(0.0, 0.0), (1.0, 0.0)], "s").unwrap();
        let r = resample(&p, 0.3).unwrap();
        assert_eq!(r.segment_count(), 4);
        for s in r.segments() {
            assert_relative_eq!(s.length, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn resample_noop_when_coarse() {
        let p = PlanarPath::from_xy(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0)], "L").unwrap();
        let r = resample(&p, 2.0).unwrap();
        assert_eq!(r.vertices(), p.vertices());
    }

    #[test]
    fn resample_rejects_nonpositive() {
        let p = gen_v_path(1.0, 1.0).unwrap();
        assert!(resample(&p, 0.0).is_err());
    }

    #[test]
    fn straight_path_has_zero_turning() {
        let p = PlanarPath::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.5, 0.0)], "line").unwrap();
        let t = turning_profile(&p).unwrap();
        assert_eq!(t.total_turning, 0.0);
        assert_eq!(t.index, 0.0);
    }

    #[test]
    fn v_path_turns_left() {
        let p = gen_v_path(1.0, 1.0).unwrap();
        let t = turning_profile(&p).unwrap();
        // directions (1,-1) then (1,1): atan2(cross=2, dot=0)
        assert_eq!(t.exterior_angles.len(), 1);
        assert_relative_eq!(t.total_turning, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn square_loop_index_one() {
        let p = PlanarPath::from_xy(
            &[(0., 0.), (1., 0.), (1., 1.), (0., 1.), (0., 0.), (1., 0.)],
            "square",
        )
        .unwrap();
        let t = turning_profile(&p).unwrap();
        assert_relative_eq!(t.total_turning, TAU, epsilon = 1e-14);
        assert_relative_eq!(t.index, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cusp_is_rejected() {
        let p = PlanarPath::from_xy(&[(0., 0.), (1., 0.), (0.5, 0.)], "back").unwrap();
        assert!(matches!(turning_profile(&p), Err(Error::Cusp(1))));
    }

    #[test]
    fn zero_length_segment_rejected() {
        assert!(matches!(
            PlanarPath::from_xy(&[(0., 0.), (0., 0.)], "z"),
            Err(Error::ZeroLengthSegment(0, 1))
        ));
    }

    #[test]
    fn repeated_index_scales() {
        // start and end directions agree
        let p = PlanarPath::from_xy(&[(0., 0.), (1., 0.), (1.5, 0.8), (2.5, 0.8)], "s").unwrap();
        let once = turning_profile(&p).unwrap();
        for m in 1..5 {
            let many = turning_profile(&p.repeated(m)).unwrap();
            assert_relative_eq!(many.index, m as f64 * once.index, epsilon = 1e-12);
        }
    }

    #[test]
    fn point_at_interpolates() {
        let p = PlanarPath::from_xy(&[(0., 0.), (1., 0.), (1., 2.)], "L").unwrap();
        assert_relative_eq!(p.point_at(2.0), Point2::new(1.0, 1.0), epsilon = 1e-15);
        assert_eq!(p.point_at(1.0), Point2::new(1.0, 0.0));
        assert_eq!(p.point_at(10.0), Point2::new(1.0, 2.0));
    }
}
