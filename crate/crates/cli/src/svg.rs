//! Schematic strategic diagram: one labelled point per cluster and the
//! two median lines.

use std::fmt::Write;

use scientrix_core::coword::StrategicDiagram;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn over(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        let pad = if hi > lo { (hi - lo) * 0.1 } else { 0.5 };
        Axis {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

pub fn strategic_svg(diagram: &StrategicDiagram) -> String {
    let x_axis = Axis::over(diagram.points.iter().map(|p| p.centrality));
    let y_axis = Axis::over(diagram.points.iter().map(|p| p.density));
    let x = |v: f64| MARGIN + x_axis.frac(v) * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - y_axis.frac(v) * (HEIGHT - 2.0 * MARGIN);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    if !diagram.points.is_empty() {
        let mx = x(diagram.median_centrality);
        let my = y(diagram.median_density);
        let _ = writeln!(
            s,
            r#"<line x1="{mx:.2}" y1="{top}" x2="{mx:.2}" y2="{bottom}" stroke="gray" stroke-dasharray="4 4"/>"#
        );
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{my:.2}" x2="{right}" y2="{my:.2}" stroke="gray" stroke-dasharray="4 4"/>"#
        );
    }
    for p in &diagram.points {
        let (px, py) = (x(p.centrality), y(p.density));
        let _ = writeln!(
            s,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="4" fill="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px,
            py - 8.0,
            p.id
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">centrality</text>"#,
        WIDTH / 2.0,
        HEIGHT - MARGIN / 3.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">density</text>"#,
        MARGIN / 3.0,
        HEIGHT / 2.0,
        MARGIN / 3.0,
        HEIGHT / 2.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use scientrix_core::coword::{Quadrant, StrategicPoint};

    #[test]
    fn empty_diagram_has_no_median_lines() {
        let svg = strategic_svg(&StrategicDiagram {
            points: vec![],
            median_centrality: 0.0,
            median_density: 0.0,
        });
        assert!(!svg.contains("stroke-dasharray"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn points_and_medians() {
        let point = |id, c, d| StrategicPoint {
            id,
            centrality: c,
            density: d,
            quadrant: Quadrant::LowerLeft,
        };
        let d = StrategicDiagram {
            points: vec![point(1, 0.1, 0.5), point(2, 0.3, 0.7)],
            median_centrality: 0.2,
            median_density: 0.6,
        };
        let svg = strategic_svg(&d);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert_eq!(svg, strategic_svg(&d));
        // Medians sit halfway between two symmetric points.
        assert!(svg.contains(r#"x1="320.00""#));
    }
}
