//! Minimal static SVG writers.

use std::fmt::Write;

use crate::geometry::Point;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;
const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Frame {
    min: Point,
    scale: f64,
}

impl Frame {
    fn fit<'a>(pts: impl Iterator<Item = &'a Point>) -> Self {
        let (mut min, mut max) = (Point::repeat(f64::INFINITY), Point::repeat(f64::NEG_INFINITY));
        for p in pts {
            min = min.inf(p);
            max = max.sup(p);
        }
        let span = (max - min).max().max(1e-12);
        Self {
            min,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let q = (p - self.min) * self.scale;
        (MARGIN + q.x, SIZE - MARGIN - q.y)
    }
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Closed outlines, one per labelled curve, with a legend when there are several.
pub fn curves(items: &[(String, Vec<Point>)]) -> String {
    let frame = Frame::fit(items.iter().flat_map(|(_, v)| v.iter()));
    let mut out = String::new();
    header(&mut out);
    for (i, (label, pts)) in items.iter().enumerate() {
        let mut d = String::new();
        for (j, p) in pts.iter().enumerate() {
            let (x, y) = frame.map(*p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if j == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let c = COLOURS[i % COLOURS.len()];
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{c}" stroke-width="1.5"><title>{}</title></path>"#,
            escape(label)
        );
    }
    if items.len() > 1 {
        let _ = writeln!(out, r#"<g id="legend" font-family="sans-serif" font-size="12">"#);
        for (i, (label, _)) in items.iter().enumerate() {
            let y = 16.0 + 16.0 * i as f64;
            let c = COLOURS[i % COLOURS.len()];
            let _ = writeln!(
                out,
                r#"<line x1="8" y1="{y}" x2="28" y2="{y}" stroke="{c}" stroke-width="2"/><text x="34" y="{}">{}</text>"#,
                y + 4.0,
                escape(label)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Energy against iteration as a polyline with labelled axes.
pub fn energy_trace(iters: &[f64], energy: &[f64]) -> String {
    let mut out = String::new();
    header(&mut out);
    let (x0, x1) = bounds(iters);
    let (y0, y1) = bounds(energy);
    let sx = (SIZE - 2.0 * MARGIN) / (x1 - x0).max(1e-12);
    let sy = (SIZE - 2.0 * MARGIN) / (y1 - y0).max(1e-12);
    let pts: Vec<String> = iters
        .iter()
        .zip(energy)
        .map(|(x, y)| format!("{:.3},{:.3}", MARGIN + (x - x0) * sx, SIZE - MARGIN - (y - y0) * sy))
        .collect();
    let base = SIZE - MARGIN;
    let _ = writeln!(
        out,
        r##"<line x1="{MARGIN}" y1="{base}" x2="{base}" y2="{base}" stroke="#444"/><line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="#444"/>"##
    );
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
        pts.join(" "),
        COLOURS[0]
    );
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="11"><text x="{}" y="{}">iteration</text><text x="4" y="{}">energy</text><text x="4" y="{}">{y1:.6}</text><text x="4" y="{}">{y0:.6}</text></g>"#,
        SIZE / 2.0,
        SIZE - 8.0,
        MARGIN - 22.0,
        MARGIN - 6.0,
        base + 14.0
    );
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}
