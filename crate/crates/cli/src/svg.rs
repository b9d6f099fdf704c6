//! Minimal SVG output: polylines and dots in a fitted viewport.

use std::fmt::Write as _;

pub struct Plot {
    width: f64,
    height: f64,
    lines: Vec<(Vec<(f64, f64)>, String)>,
    dots: Vec<((f64, f64), String)>,
}

impl Plot {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height, lines: Vec::new(), dots: Vec::new() }
    }

    pub fn polyline(&mut self, pts: Vec<(f64, f64)>, color: &str) {
        self.lines.push((pts, color.to_string()));
    }

    pub fn dot(&mut self, p: (f64, f64), color: &str) {
        self.dots.push((p, color.to_string()));
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self.lines.iter().flat_map(|l| l.0.iter()).chain(self.dots.iter().map(|d| &d.0));
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in all {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-9);
        (x0 - pad, x1 + pad, y0 - pad, y1 + pad)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let scale = (self.width / (x1 - x0)).min(self.height / (y1 - y0));
        // Flip y so the imaginary axis points up.
        let map = |(x, y): (f64, f64)| ((x - x0) * scale, (y1 - y) * scale);
        let (w, h) = ((x1 - x0) * scale, (y1 - y0) * scale);
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.1}\" height=\"{h:.1}\" viewBox=\"0 0 {w:.1} {h:.1}\">\n"
        );
        let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let (ax0, ay0) = map((x0, 0.0));
        let (ax1, _) = map((x1, 0.0));
        let (bx, by0) = map((0.0, y0));
        let (_, by1) = map((0.0, y1));
        let _ = writeln!(
            s,
            "<path d=\"M{ax0:.2} {ay0:.2}H{ax1:.2}M{bx:.2} {by0:.2}V{by1:.2}\" stroke=\"#bbb\" stroke-width=\"0.5\"/>"
        );
        for (pts, color) in &self.lines {
            let coords: Vec<String> = pts
                .iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\"/>",
                coords.join(" ")
            );
        }
        for (p, color) in &self.dots {
            let (x, y) = map(*p);
            let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"{color}\"/>");
        }
        s.push_str("</svg>\n");
        s
    }
}
