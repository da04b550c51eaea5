//! SVG overlays and PPM rasters.

use std::fmt::Write;

use whitext::geometry::domain::VoxelDomain;
use whitext::grid::Grid;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// An SVG drawing of a planar box, y axis pointing up.
pub struct Canvas {
    lo: [f64; 2],
    scale: f64,
    size: f64,
    body: String,
}

impl Canvas {
    pub fn new(lo: [f64; 2], hi: [f64; 2], size: f64) -> Self {
        let ext = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
        Canvas { lo, scale: size / ext, size, body: String::new() }
    }

    pub fn for_grid(g: &Grid, size: f64) -> Self {
        let (lo, hi) = g.bbox();
        Canvas::new([lo[0], lo[1]], [hi[0], hi[1]], size)
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        ((p[0] - self.lo[0]) * self.scale, self.size - (p[1] - self.lo[1]) * self.scale)
    }

    pub fn rect(&mut self, lo: [f64; 2], side: f64, fill: &str, stroke: &str) {
        let (x, y) = self.map([lo[0], lo[1] + side]);
        let s = side * self.scale;
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{s:.3}" height="{s:.3}" fill="{fill}" stroke="{stroke}" stroke-width="0.4"/>"#
        );
    }

    pub fn line(&mut self, a: [f64; 2], b: [f64; 2], color: &str, width: f64) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="{width}"/>"#
        );
    }

    pub fn polyline(&mut self, pts: &[[f64; 2]], color: &str, width: f64) {
        let mut d = String::new();
        for p in pts {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{x:.3},{y:.3} ");
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            d.trim_end()
        );
    }

    pub fn dot(&mut self, p: [f64; 2], color: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{color}"/>"#);
    }

    /// Boundary faces of a planar domain.
    pub fn boundary(&mut self, dom: &VoxelDomain, color: &str) {
        let g = dom.grid();
        let h = g.h();
        let o = g.origin();
        for f in dom.boundary_faces() {
            let x = (o[0] + f.cell[0]) as f64 * h;
            let y = (o[1] + f.cell[1]) as f64 * h;
            if f.axis == 0 {
                self.line([x, y], [x, y + h], color, 1.0);
            } else {
                self.line([x, y], [x + h, y], color, 1.0);
            }
        }
    }

    pub fn finish(self) -> String {
        let s = self.size;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Binary PPM of a planar grid (the middle slice in 3D), top row first.
pub fn ppm<F: Fn(usize) -> [u8; 3]>(g: &Grid, color: F) -> Vec<u8> {
    let d = g.dims();
    let z = d[2] / 2;
    let mut out = format!("P6\n{} {}\n255\n", d[0], d[1]).into_bytes();
    for y in (0..d[1]).rev() {
        for x in 0..d[0] {
            out.extend_from_slice(&color(g.index([x, y, z])));
        }
    }
    out
}

pub fn domain_ppm(dom: &VoxelDomain) -> Vec<u8> {
    ppm(dom.grid(), |i| if dom.contains_cell(i) { [200, 200, 200] } else { [255, 255, 255] })
}

/// Log-log line chart of several series.
pub fn loglog_chart(title: &str, xlabel: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.1.iter().copied())
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let (w, h, m) = (640.0, 420.0, 60.0);
    let mut body = String::new();
    let _ = writeln!(body, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#, w / 2.0);
    let _ = writeln!(body, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">log10 {xlabel}</text>"#, w / 2.0, h - 12.0);
    let _ = writeln!(
        body,
        r#"<text x="16" y="{}" font-size="12" transform="rotate(-90 16 {})" text-anchor="middle">log10 {ylabel}</text>"#,
        h / 2.0,
        h / 2.0
    );
    let _ = writeln!(
        body,
        r##"<rect x="{m}" y="{m}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        w - 2.0 * m,
        h - 2.0 * m
    );
    if !pts.is_empty() {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let (dx, dy) = ((x1 - x0).max(1e-9), (y1 - y0).max(1e-9));
        let px = |x: f64| m + (x - x0) / dx * (w - 2.0 * m);
        let py = |y: f64| h - m - (y - y0) / dy * (h - 2.0 * m);
        let _ = writeln!(body, r#"<text x="{m}" y="{}" font-size="10">{x0:.2}</text>"#, h - m + 14.0);
        let _ = writeln!(body, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{x1:.2}</text>"#, w - m, h - m + 14.0);
        let _ = writeln!(body, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{y0:.2}</text>"#, m - 4.0, h - m);
        let _ = writeln!(body, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{y1:.2}</text>"#, m - 4.0, m + 10.0);
        for (k, (label, s)) in series.iter().enumerate() {
            let c = PALETTE[k % PALETTE.len()];
            let mut d = String::new();
            for &(x, y) in s.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()) {
                let (a, b) = (px(x.log10()), py(y.log10()));
                let _ = write!(d, "{a:.2},{b:.2} ");
                let _ = writeln!(body, r#"<circle cx="{a:.2}" cy="{b:.2}" r="3" fill="{c}"/>"#);
            }
            let _ = writeln!(body, r#"<polyline points="{}" fill="none" stroke="{c}"/>"#, d.trim_end());
            let _ = writeln!(body, r#"<text x="{}" y="{}" font-size="11" fill="{c}">{label}</text>"#, w - m + 4.0, m + 14.0 * (k as f64 + 1.0));
        }
    }
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{body}</svg>\n")
}

pub fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}
