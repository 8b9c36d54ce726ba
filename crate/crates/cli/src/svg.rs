//! Self-contained SVG heatmaps and quiver plots on a fixed canvas.

use std::fmt::Write;

use crate::output::fmt_num;

const PLOT: f64 = 800.0;
const MARGIN: f64 = 50.0;
const LEGEND_W: f64 = 160.0;
const MAX_ARROWS: usize = 33;

const ANCHORS: [(f64, [f64; 3]); 9] = [
    (0.0, [68.0, 1.0, 84.0]),
    (0.125, [71.0, 44.0, 122.0]),
    (0.25, [59.0, 81.0, 139.0]),
    (0.375, [44.0, 113.0, 142.0]),
    (0.5, [33.0, 144.0, 141.0]),
    (0.625, [39.0, 173.0, 129.0]),
    (0.75, [92.0, 200.0, 99.0]),
    (0.875, [170.0, 220.0, 50.0]),
    (1.0, [253.0, 231.0, 37.0]),
];

/// 256-step dark-to-light ramp, interpolated between viridis anchors.
pub fn ramp() -> Vec<String> {
    (0..256)
        .map(|i| {
            let t = i as f64 / 255.0;
            let k = ANCHORS.iter().rposition(|(s, _)| *s <= t).unwrap_or(0).min(ANCHORS.len() - 2);
            let (t0, c0) = ANCHORS[k];
            let (t1, c1) = ANCHORS[k + 1];
            let u = (t - t0) / (t1 - t0);
            let c: Vec<u8> = (0..3).map(|j| (c0[j] + u * (c1[j] - c0[j])).round() as u8).collect();
            format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
        })
        .collect()
}

/// Sample layout of a plotted field: axis coordinates in meters, row-major
/// values with x fastest.
pub struct Layout<'a> {
    pub title: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    dx: f64,
    dy: f64,
}

impl Frame {
    fn new(l: &Layout) -> Self {
        let (x0, x1) = (l.xs[0], l.xs[l.xs.len() - 1]);
        let (y0, y1) = (l.ys[0], l.ys[l.ys.len() - 1]);
        let dx = if l.xs.len() > 1 { (x1 - x0) / (l.xs.len() - 1) as f64 } else { 1.0 };
        let dy = if l.ys.len() > 1 { (y1 - y0) / (l.ys.len() - 1) as f64 } else { 1.0 };
        let span = (x1 - x0 + dx).max(y1 - y0 + dy);
        Frame {
            x0: x0 - 0.5 * dx,
            y1: y1 + 0.5 * dy,
            scale: (PLOT - 2.0 * MARGIN) / span,
            dx,
            dy,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.scale
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.y1 - y) * self.scale
    }
}

fn header(out: &mut String, title: &str) {
    let w = PLOT + LEGEND_W;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{PLOT}" viewBox="0 0 {w} {PLOT}" font-family="sans-serif" font-size="14">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{PLOT}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="30">{title}</text>"#);
}

fn legend(out: &mut String, colors: &[String], lo: f64, hi: f64, label: &str) {
    let x = PLOT + 20.0;
    let top = MARGIN;
    let height = PLOT - 2.0 * MARGIN;
    let step = height / colors.len() as f64;
    for (i, c) in colors.iter().enumerate() {
        let y = top + height - (i + 1) as f64 * step;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="30" height="{:.2}" fill="{c}"/>"#,
            step + 0.01
        );
    }
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 36.0, top + 10.0, fmt_num(hi));
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 36.0, top + height, fmt_num(lo));
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, x, top + height + 30.0);
}

fn cells(out: &mut String, l: &Layout, f: &Frame, values: &[Option<f64>], colors: &[String]) -> (f64, f64) {
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let w = f.dx * f.scale;
    let h = f.dy * f.scale;
    for (j, &y) in l.ys.iter().enumerate() {
        for (i, &x) in l.xs.iter().enumerate() {
            let fill = match values[j * l.xs.len() + i] {
                Some(v) if hi > lo => colors[(((v - lo) / (hi - lo)) * 255.0).round().clamp(0.0, 255.0) as usize].as_str(),
                Some(_) => colors[0].as_str(),
                None => "#bdbdbd",
            };
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                f.px(x - 0.5 * f.dx),
                f.py(y + 0.5 * f.dy),
                w + 0.01,
                h + 0.01
            );
        }
    }
    (lo, hi)
}

/// Scalar heatmap; `None` samples are drawn gray.
pub fn heatmap(l: &Layout, values: &[Option<f64>], label: &str) -> String {
    let colors = ramp();
    let f = Frame::new(l);
    let mut out = String::new();
    header(&mut out, l.title);
    let (lo, hi) = cells(&mut out, l, &f, values, &colors);
    legend(&mut out, &colors, lo, hi, label);
    out.push_str("</svg>\n");
    out
}

/// Magnitude heatmap with an overlaid arrow field subsampled to at most
/// 33×33 arrows.
pub fn quiver(l: &Layout, vectors: &[Option<[f64; 2]>], label: &str) -> String {
    let colors = ramp();
    let f = Frame::new(l);
    let mut out = String::new();
    header(&mut out, l.title);
    let mags: Vec<Option<f64>> = vectors.iter().map(|v| v.map(|v| v[0].hypot(v[1]))).collect();
    let (lo, hi) = cells(&mut out, l, &f, &mags, &colors);

    let sx = l.xs.len().div_ceil(MAX_ARROWS);
    let sy = l.ys.len().div_ceil(MAX_ARROWS);
    let spacing = (sx as f64 * f.dx).min(sy as f64 * f.dy) * f.scale;
    let len_scale = if hi > 0.0 { 0.9 * spacing / hi } else { 0.0 };
    out.push_str("<g stroke=\"white\" stroke-width=\"1.2\">\n");
    for j in (0..l.ys.len()).step_by(sy) {
        for i in (0..l.xs.len()).step_by(sx) {
            let Some(v) = vectors[j * l.xs.len() + i] else { continue };
            let (ux, uy) = (v[0] * len_scale, -v[1] * len_scale);
            if ux.hypot(uy) < 0.5 {
                continue;
            }
            let cx = f.px(l.xs[i]) - 0.5 * ux;
            let cy = f.py(l.ys[j]) - 0.5 * uy;
            let (tx, ty) = (cx + ux, cy + uy);
            let _ = writeln!(out, r#"<line x1="{cx:.2}" y1="{cy:.2}" x2="{tx:.2}" y2="{ty:.2}"/>"#);
            let n = ux.hypot(uy);
            let (dx, dy) = (ux / n, uy / n);
            let head = 0.3 * n;
            for side in [-1.0, 1.0] {
                let hx = tx - head * (dx * 0.866 - side * dy * 0.5);
                let hy = ty - head * (dy * 0.866 + side * dx * 0.5);
                let _ = writeln!(out, r#"<line x1="{tx:.2}" y1="{ty:.2}" x2="{hx:.2}" y2="{hy:.2}"/>"#);
            }
        }
    }
    out.push_str("</g>\n");
    legend(&mut out, &colors, lo, hi, label);
    out.push_str("</svg>\n");
    out
}
