//! SVG pictures of generators: the path, the lattice points it encloses and
//! an optional second path drawn dashed on top.

use std::fmt::Write as _;

use crate::generators::{ConvexGenerator, Label};

const UNIT: u64 = 40;
const MARGIN: u64 = 40;

struct Frame {
    height: u64,
}

impl Frame {
    fn x(&self, x: u64) -> u64 {
        MARGIN + x * UNIT
    }

    fn y(&self, y: u64) -> u64 {
        MARGIN + (self.height - y) * UNIT
    }

    fn points(&self, pts: &[(u64, u64)]) -> String {
        pts.iter().map(|&(x, y)| format!("{},{}", self.x(x), self.y(y))).collect::<Vec<_>>().join(" ")
    }
}

/// Lattice points on the path, from `(0, y)` to `(x, 0)`.
fn path_lattice_points(g: &ConvexGenerator) -> Vec<(u64, u64)> {
    let mut pos = (0, g.y());
    let mut out = vec![pos];
    for e in g.edges() {
        for _ in 0..e.multiplicity {
            pos = (pos.0 + e.direction.run, pos.1 - e.direction.drop);
            out.push(pos);
        }
    }
    out
}

fn edge_label(run: u64, drop: u64, multiplicity: u64, label: Label) -> String {
    let (em, h) = match label {
        Label::E => (multiplicity, false),
        Label::H => (multiplicity - 1, true),
    };
    let mut parts = Vec::new();
    if em == 1 {
        parts.push(format!("e({run},{drop})"));
    } else if em > 1 {
        parts.push(format!("e({run},{drop})^{em}"));
    }
    if h {
        parts.push(format!("h({run},{drop})"));
    }
    parts.join(" ")
}

/// An SVG document for `g`, with `overlay` dashed if given.
pub fn render_svg(g: &ConvexGenerator, overlay: Option<&ConvexGenerator>) -> String {
    let width = g.x().max(overlay.map_or(0, ConvexGenerator::x));
    let height = g.y().max(overlay.map_or(0, ConvexGenerator::y));
    let frame = Frame { height };
    let (w, h) = (2 * MARGIN + width * UNIT, 2 * MARGIN + height * UNIT + 30);

    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#)
        .unwrap();
    writeln!(svg, "<title>{g}</title>").unwrap();
    writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();

    let (ox, oy) = (frame.x(0), frame.y(0));
    writeln!(svg, r#"<g class="axes" stroke="black" stroke-width="1">"#).unwrap();
    writeln!(svg, r#"<line x1="{ox}" y1="{oy}" x2="{}" y2="{oy}"/>"#, frame.x(width) + UNIT / 2).unwrap();
    writeln!(svg, r#"<line x1="{ox}" y1="{oy}" x2="{ox}" y2="{}"/>"#, frame.y(height) - UNIT / 2).unwrap();
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r#"<g fill="gray">"#).unwrap();
    for (row, &x_max) in g.row_maxima().iter().enumerate() {
        for x in 0..=x_max {
            writeln!(svg, r#"<circle class="lattice" cx="{}" cy="{}" r="4"/>"#, frame.x(x), frame.y(row as u64))
                .unwrap();
        }
    }
    writeln!(svg, "</g>").unwrap();

    if let Some(o) = overlay {
        writeln!(
            svg,
            r#"<polyline class="overlay" points="{}" fill="none" stroke="steelblue" stroke-width="2" stroke-dasharray="6 4"/>"#,
            frame.points(&o.vertices())
        )
        .unwrap();
    }

    writeln!(
        svg,
        r#"<polyline class="generator" points="{}" fill="none" stroke="black" stroke-width="3"/>"#,
        frame.points(&g.vertices())
    )
    .unwrap();
    writeln!(svg, r#"<g fill="black">"#).unwrap();
    for (x, y) in path_lattice_points(g) {
        writeln!(svg, r#"<circle class="path-point" cx="{}" cy="{}" r="6"/>"#, frame.x(x), frame.y(y)).unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r#"<g font-family="monospace" font-size="14">"#).unwrap();
    let vertices = g.vertices();
    for (e, w) in g.edges().iter().zip(vertices.windows(2)) {
        let mx = (frame.x(w[0].0) + frame.x(w[1].0)) / 2 + 6;
        let my = (frame.y(w[0].1) + frame.y(w[1].1)) / 2 - 6;
        let color = if e.label == Label::H { "firebrick" } else { "black" };
        writeln!(
            svg,
            r#"<text class="edge" x="{mx}" y="{my}" fill="{color}">{}</text>"#,
            edge_label(e.direction.run, e.direction.drop, e.multiplicity, e.label)
        )
        .unwrap();
    }
    writeln!(svg, r#"<text class="count" x="{}" y="{}">L = {}</text>"#, MARGIN, h - 12, g.lattice_count()).unwrap();
    writeln!(svg, "</g>").unwrap();
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> ConvexGenerator {
        s.parse().unwrap()
    }

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn trapezoid_picture() {
        let t = g("e(1,0)^2 e(2,1)^2");
        let svg = render_svg(&t, None);
        assert_eq!(count(&svg, "path-point"), 5);
        assert_eq!(count(&svg, "lattice"), 15);
        assert!(svg.contains("L = 15"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn unit_diagonal() {
        let svg = render_svg(&g("e(1,1)"), None);
        assert_eq!(count(&svg, "lattice"), 3);
        assert_eq!(count(&svg, "overlay"), 0);
    }

    #[test]
    fn overlay_and_labels() {
        let svg = render_svg(&g("e(2,1)^4"), Some(&g("e(1,0)^8 e(0,1)^4")));
        assert_eq!(count(&svg, "overlay"), 1);
        assert_eq!(count(&svg, "lattice"), 25);
        let h = render_svg(&g("e(1,0) e(2,1) h(2,1)"), None);
        assert!(h.contains("e(2,1) h(2,1)"));
        assert!(h.contains("firebrick"));
    }

    #[test]
    fn deterministic() {
        let x = g("e(1,0)^3 e(3,2) e(0,1)");
        assert_eq!(render_svg(&x, None), render_svg(&x, None));
    }
}
