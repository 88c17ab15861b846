//! SVG frames of curve snapshots.

use std::fmt::Write as _;

use curvediff_core::SampledCurve;

/// Axis-aligned box in curve coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    /// Smallest square box containing every curve, padded by 5% per side.
    pub fn containing<'a>(curves: impl IntoIterator<Item = &'a SampledCurve>) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in curves {
            for p in c.vertices() {
                x0 = x0.min(p.x);
                y0 = y0.min(p.y);
                x1 = x1.max(p.x);
                y1 = y1.max(p.y);
            }
        }
        if !(x0.is_finite() && y0.is_finite()) {
            return Self {
                min_x: -1.0,
                min_y: -1.0,
                width: 2.0,
                height: 2.0,
            };
        }
        let side = (x1 - x0).max(y1 - y0).max(f64::EPSILON) * 1.1;
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        Self {
            min_x: cx - 0.5 * side,
            min_y: cy - 0.5 * side,
            width: side,
            height: side,
        }
    }
}

/// One frame showing `curve` in `view`, with `label` in the corner.
///
/// The y axis points up: the curve is mirrored into SVG coordinates.
pub fn render_frame(curve: &SampledCurve, view: &Viewport, label: &str) -> String {
    const SIZE: f64 = 512.0;
    let sx = SIZE / view.width;
    let sy = SIZE / view.height;
    let points: Vec<String> = curve
        .vertices()
        .iter()
        .map(|p| {
            let x = (p.x - view.min_x) * sx;
            let y = SIZE - (p.y - view.min_y) * sy;
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        points.join(" ")
    );
    let _ = writeln!(
        s,
        r#"<text x="8" y="20" font-family="monospace" font-size="14">{}</text>"#,
        escape(label)
    );
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvediff_core::geometry::generate;
    use curvediff_core::ShapeSpec;

    #[test]
    fn viewport_holds_all_curves() {
        let a = generate(&ShapeSpec::circle(1.0), 64).unwrap();
        let b = generate(&ShapeSpec::Ellipse { a: 3.0, b: 0.5 }, 64).unwrap();
        let v = Viewport::containing([&a, &b]);
        assert!((v.width - 6.6).abs() < 1e-9 && v.width == v.height);
        for c in [&a, &b] {
            for p in c.vertices() {
                assert!(p.x >= v.min_x && p.x <= v.min_x + v.width);
                assert!(p.y >= v.min_y && p.y <= v.min_y + v.height);
            }
        }
    }

    #[test]
    fn frame_is_a_closed_polygon() {
        let c = generate(&ShapeSpec::circle(1.0), 16).unwrap();
        let s = render_frame(&c, &Viewport::containing([&c]), "t < 1");
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polygon").count(), 1);
        assert!(s.contains("t &lt; 1"));
    }
}
