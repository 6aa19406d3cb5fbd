//! Plain SVG drawing of solved plane curves, one panel per curve.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::curve::EmbeddedCurve;
use crate::plane::PointConfig;
use crate::ring::RefinedValue;
use crate::trees::Node;

const PANEL: f64 = 320.0;
const MARGIN: f64 = 24.0;
const COLUMNS: usize = 3;

fn f(v: &[crate::linalg::Q]) -> (f64, f64) {
    (v[0].to_f64().unwrap_or(0.0), v[1].to_f64().unwrap_or(0.0))
}

/// One panel per curve: finite edges, ends drawn as rays, the points as
/// dots, and the multiplicity as a caption.
pub fn render_plane_curves(curves: &[(EmbeddedCurve, RefinedValue)], points: &PointConfig) -> String {
    let rows = curves.len().div_ceil(COLUMNS).max(1);
    let (width, height) = (PANEL * COLUMNS as f64, (PANEL + MARGIN) * rows as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let pts: Vec<(f64, f64)> = points.points.iter().map(|p| f(p)).collect();
    for (i, (c, w)) in curves.iter().enumerate() {
        let (ox, oy) = ((i % COLUMNS) as f64 * PANEL, (i / COLUMNS) as f64 * (PANEL + MARGIN));
        let verts: Vec<(f64, f64)> = (0..c.ty.shape.n_vertices).map(|v| f(&c.vertex_position(v))).collect();
        let all: Vec<(f64, f64)> = verts.iter().chain(&pts).copied().collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in &all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0).max(1.0);
        let ray = 0.3 * span;
        let scale = (PANEL - 2.0 * MARGIN) / (span + 2.0 * ray);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let map = |(x, y): (f64, f64)| (ox + PANEL / 2.0 + (x - cx) * scale, oy + PANEL / 2.0 - (y - cy) * scale);
        let _ = writeln!(out, r##"<g><rect x="{ox}" y="{oy}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#ccc"/>"##);
        for (e, edge) in c.ty.shape.edges.iter().enumerate() {
            let a = verts[edge.tail];
            let b = match edge.head {
                Node::Vertex(h) => verts[h],
                Node::Leaf(_) => {
                    let d = &c.ty.directions[e].0;
                    let n = ((d[0] * d[0] + d[1] * d[1]) as f64).sqrt();
                    (a.0 + ray * d[0] as f64 / n, a.1 + ray * d[1] as f64 / n)
                }
            };
            let ((ax, ay), (bx, by)) = (map(a), map(b));
            let _ = writeln!(out, r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="black" stroke-width="1.5"/>"#);
        }
        for &p in &pts {
            let (x, y) = map(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="crimson"/>"#);
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="11">{}</text></g>"#,
            ox + 6.0,
            oy + PANEL + 14.0,
            escape(&format!("#{i}: {w}"))
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
