//! Minimal self-contained SVG line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 36.0;

/// A polyline; `None` entries break the line.
pub struct Series {
    pub points: Vec<Option<(f64, f64)>>,
    pub color: &'static str,
    pub dashed: bool,
}

pub struct Level {
    pub y: f64,
    pub label: String,
    pub color: &'static str,
}

pub struct Panel {
    pub title: String,
    pub y_label: String,
    pub y_range: (f64, f64),
    pub series: Vec<Series>,
    pub levels: Vec<Level>,
    pub markers: Vec<(f64, f64)>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    top: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        self.top + MARGIN_TOP + (self.y1 - y) / (self.y1 - self.y0) * h
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Stacks `panels` vertically over a shared x axis.
pub fn render(panels: &[Panel], x_range: (f64, f64), x_label: &str) -> String {
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        let f = Frame {
            x0: x_range.0,
            x1: x_range.1,
            y0: panel.y_range.0,
            y1: panel.y_range.1,
            top: PANEL_HEIGHT * i as f64,
        };
        let (left, right) = (f.px(f.x0), f.px(f.x1));
        let (bottom, top) = (f.py(f.y0), f.py(f.y1));
        let _ = writeln!(
            out,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(
            out,
            r#"<text x="{left:.2}" y="{:.2}" font-size="13">{}</text>"#,
            top - 8.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">{}</text>"#,
            0.5 * (top + bottom),
            0.5 * (top + bottom),
            escape(&panel.y_label)
        );
        for t in 0..=4 {
            let x = f.x0 + (f.x1 - f.x0) * t as f64 / 4.0;
            let y = f.y0 + (f.y1 - f.y0) * t as f64 / 4.0;
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x:.3}</text>"#,
                f.px(x),
                bottom + 14.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{y:.3}</text>"#,
                left - 4.0,
                f.py(y) + 4.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            0.5 * (left + right),
            bottom + 30.0,
            escape(x_label)
        );
        for level in &panel.levels {
            let y = f.py(level.y);
            let _ = writeln!(
                out,
                r#"<line x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}" stroke="{}" stroke-width="0.7" stroke-dasharray="4 3"/>"#,
                level.color
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="{}">{}</text>"#,
                right - 2.0,
                y - 2.0,
                level.color,
                escape(&level.label)
            );
        }
        for s in &panel.series {
            for run in s.points.split(|p| p.is_none()) {
                if run.len() < 2 {
                    continue;
                }
                let pts: Vec<String> = run
                    .iter()
                    .flatten()
                    .map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y)))
                    .collect();
                let dash = if s.dashed {
                    r#" stroke-dasharray="6 3""#
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.2"{dash}/>"#,
                    pts.join(" "),
                    s.color
                );
            }
        }
        for (x, y) in &panel.markers {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="red"/>"#,
                f.px(*x),
                f.py(*y)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
