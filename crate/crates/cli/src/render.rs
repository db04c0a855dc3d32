//! Minimal SVG output. Presentation only; nothing here feeds back into
//! any computation.

use std::fmt::Write as _;

use betaskel::{Diamond, Point, PointSet};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// Maps data coordinates into the SVG canvas with `y` pointing up.
struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) =
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            lo_x = lo_x.min(x);
            lo_y = lo_y.min(y);
            hi_x = hi_x.max(x);
            hi_y = hi_y.max(y);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y);
        let scale = if span > 0.0 && span.is_finite() {
            (SIZE - 2.0 * MARGIN) / span
        } else {
            1.0
        };
        Frame {
            min_x: if lo_x.is_finite() { lo_x } else { 0.0 },
            max_y: if hi_y.is_finite() { hi_y } else { 0.0 },
            scale,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.min_x) * self.scale,
            MARGIN + (self.max_y - y) * self.scale,
        )
    }
}

fn header(out: &mut String) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

fn polyline(out: &mut String, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    writeln!(out, r#"<polyline points="{}" {style}/>"#, coords.join(" ")).unwrap();
}

/// Points as circles, edges as line segments, and optional diamonds.
pub fn graph_svg(ps: &PointSet, edges: &[(usize, usize)], diamonds: &[Diamond]) -> String {
    let corners: Vec<[Point; 4]> = diamonds.iter().map(Diamond::corners).collect();
    let frame = Frame::fit(
        ps.points()
            .iter()
            .chain(corners.iter().flatten())
            .map(|p| (p.x(), p.y())),
    );
    let at = |p: &Point| frame.map(p.x(), p.y());

    let mut out = String::new();
    header(&mut out);
    if !corners.is_empty() {
        writeln!(out, r#"<g fill="none" stroke="slategray" stroke-width="0.5">"#).unwrap();
        for c in &corners {
            let mut ring: Vec<(f64, f64)> = c.iter().map(at).collect();
            ring.push(ring[0]);
            polyline(&mut out, &ring, "");
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, r#"<g fill="none" stroke="black" stroke-width="1">"#).unwrap();
    let pts = ps.points();
    for &(i, j) in edges {
        polyline(&mut out, &[at(&pts[i]), at(&pts[j])], "");
    }
    writeln!(out, "</g>").unwrap();
    let radius = if pts.len() > 500 { 1.0 } else { 2.5 };
    writeln!(out, r#"<g fill="crimson">"#).unwrap();
    for p in pts {
        let (x, y) = at(p);
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius}"/>"#).unwrap();
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    out
}

/// Line plot of `(x, y)` samples with a bounding box and end-point labels.
pub fn line_plot_svg(samples: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let frame = Frame::fit(
        samples
            .iter()
            .copied()
            .chain([(samples.first().map_or(0.0, |s| s.0), 0.0)]),
    );
    let mut out = String::new();
    header(&mut out);
    let (x0, y0) = frame.map(frame.min_x, 0.0);
    let right = samples.last().map_or(x0, |s| frame.map(s.0, 0.0).0);
    polyline(
        &mut out,
        &[(x0, MARGIN), (x0, y0), (right, y0)],
        r#"fill="none" stroke="gray""#,
    );
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| frame.map(x, y)).collect();
    polyline(&mut out, &pts, r#"fill="none" stroke="steelblue" stroke-width="2""#);
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="end">{x_label}</text>"#,
        right,
        y0 - 6.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="14">{y_label}</text>"#,
        x0 + 6.0,
        MARGIN + 14.0
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_contains_every_element() {
        let ps = PointSet::from_coords([(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)]).unwrap();
        let d = Diamond::new(ps.points()[0], ps.points()[1], 1.0).unwrap();
        let svg = graph_svg(&ps, &[(0, 1), (1, 2)], &[d]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<polyline").count(), 3);
    }

    #[test]
    fn single_point_and_plot() {
        let ps = PointSet::from_coords([(2.0, 2.0)]).unwrap();
        assert!(graph_svg(&ps, &[], &[]).contains("<circle"));
        let plot = line_plot_svg(&[(0.1, 0.01), (0.5, 0.2), (0.8, 0.9)], "beta", "c");
        assert_eq!(plot.matches("<polyline").count(), 2);
    }
}
