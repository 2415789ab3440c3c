//! Dependency-free SVG scatter plots: points, highlighted outliers, and
//! optional nested hull rings. Output bytes are a pure function of the
//! inputs, so plots can be diffed in tests.

use std::fmt::Write as _;

use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 600.0,
            margin: 40.0,
        }
    }
}

struct Frame {
    min_x: f64,
    min_y: f64,
    scale_x: f64,
    scale_y: f64,
    height: f64,
    margin: f64,
}

impl Frame {
    fn fit(points: &[Point2], rings: &[Vec<Point2>], opts: &SvgOptions) -> Frame {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for p in points.iter().chain(rings.iter().flatten()) {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        if !min_x.is_finite() {
            (min_x, max_x, min_y, max_y) = (0.0, 1.0, 0.0, 1.0);
        }
        // 5% padding, with a floor so single points and flat spans stay visible.
        let pad_x = (0.05 * (max_x - min_x)).max(1e-9);
        let pad_y = (0.05 * (max_y - min_y)).max(1e-9);
        min_x -= pad_x;
        max_x += pad_x;
        min_y -= pad_y;
        max_y += pad_y;
        Frame {
            min_x,
            min_y,
            scale_x: (opts.width - 2.0 * opts.margin) / (max_x - min_x),
            scale_y: (opts.height - 2.0 * opts.margin) / (max_y - min_y),
            height: opts.height,
            margin: opts.margin,
        }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        let px = self.margin + (p.x - self.min_x) * self.scale_x;
        let py = self.height - self.margin - (p.y - self.min_y) * self.scale_y;
        (px, py)
    }
}

/// Render a scatter plot. Ids in `highlighted` are drawn as marked outliers
/// on top of the base points; each entry of `rings` is drawn as a closed
/// polygon outline.
pub fn scatter_svg(
    points: &[Point2],
    highlighted: &[usize],
    rings: &[Vec<Point2>],
    opts: &SvgOptions,
) -> String {
    let frame = Frame::fit(points, rings, opts);
    let highlight: std::collections::HashSet<usize> = highlighted.iter().copied().collect();

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">",
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{:.0}\" height=\"{:.0}\" fill=\"white\"/>",
        opts.width, opts.height
    );
    let _ = writeln!(
        out,
        "  <rect x=\"{m:.1}\" y=\"{m:.1}\" width=\"{w:.1}\" height=\"{h:.1}\" fill=\"none\" stroke=\"#cccccc\"/>",
        m = opts.margin,
        w = opts.width - 2.0 * opts.margin,
        h = opts.height - 2.0 * opts.margin
    );

    for ring in rings {
        if ring.is_empty() {
            continue;
        }
        let coords: Vec<String> = ring
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"#9aa5b1\" stroke-width=\"1\"/>",
            coords.join(" ")
        );
    }

    for (i, &p) in points.iter().enumerate() {
        if highlight.contains(&i) {
            continue;
        }
        let (x, y) = frame.map(p);
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"#4878a8\" fill-opacity=\"0.7\"/>"
        );
    }

    for &i in highlighted {
        if i >= points.len() {
            continue;
        }
        let (x, y) = frame.map(points[i]);
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3.0\" fill=\"#c0392b\"/>"
        );
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6.0\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>"
        );
    }

    out.push_str("</svg>\n");
    out
}
