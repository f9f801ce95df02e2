//! Static SVG charts with a fixed layout.

use std::fmt::Write as _;

use mfgf::sim::Histogram;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn nice(x: f64, round: bool) -> f64 {
    let e = x.log10().floor();
    let f = x / 10f64.powf(e);
    let nf = if round {
        match f {
            f if f < 1.5 => 1.0,
            f if f < 3.0 => 2.0,
            f if f < 7.0 => 5.0,
            _ => 10.0,
        }
    } else {
        match f {
            f if f <= 1.0 => 1.0,
            f if f <= 2.0 => 2.0,
            f if f <= 5.0 => 5.0,
            _ => 10.0,
        }
    };
    nf * 10f64.powf(e)
}

/// Round-number ticks covering `[lo, hi]`, about ten of them.
pub fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let step = nice(nice(hi - lo, false) / 9.0, true);
    let start = (lo / step).floor();
    let end = (hi / step).ceil();
    (0..=(end - start) as i64).map(|i| (start + i as f64) * step).collect()
}

fn label(v: f64, step: f64) -> String {
    let d = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{:.*}", d, v);
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xt: Vec<f64>,
    yt: Vec<f64>,
}

impl Frame {
    fn new(x0: f64, y0: f64, w: f64, h: f64, xr: (f64, f64), yr: (f64, f64)) -> Self {
        Self { x0, y0, w, h, xt: nice_ticks(xr.0, xr.1), yt: nice_ticks(yr.0, yr.1) }
    }

    fn px(&self, x: f64) -> f64 {
        let (a, b) = (self.xt[0], *self.xt.last().unwrap());
        self.x0 + (x - a) / (b - a) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        let (a, b) = (self.yt[0], *self.yt.last().unwrap());
        self.y0 + self.h - (y - a) / (b - a) * self.h
    }

    fn draw(&self, out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (x0, y0, w, h) = (self.x0, self.y0, self.w, self.h);
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#000"/>"##
        );
        let xs = self.xt[1] - self.xt[0];
        for &t in &self.xt {
            let x = self.px(t);
            let _ = writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##,
                y0 + h,
                y0 + h + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + h + 18.0,
                label(t, xs)
            );
        }
        let ys = self.yt[1] - self.yt[0];
        for &t in &self.yt {
            let y = self.py(t);
            let _ =
                writeln!(out, r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="#000"/>"##, x0 - 5.0);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 8.0,
                y + 4.0,
                label(t, ys)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-weight="bold">{title}</text>"#,
            x0 + w / 2.0,
            y0 - 12.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
            x0 + w / 2.0,
            y0 + h + 40.0
        );
        let (lx, ly) = (x0 - 48.0, y0 + h / 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{ylabel}</text>"#
        );
    }
}

fn open(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r##"<rect width="{w}" height="{h}" fill="#fff"/>"##);
}

fn polyline(out: &mut String, f: &Frame, pts: &[(f64, f64)], stroke: &str, width: f64, dash: Option<&str>) {
    let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y))).collect();
    let dash = dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"{dash}/>"#,
        path.join(" ")
    );
}

pub struct Band {
    pub label: String,
    pub median: Vec<(f64, f64)>,
    pub lo: Vec<(f64, f64)>,
    pub hi: Vec<(f64, f64)>,
}

/// Median curves with shaded bands, plus an optional reference curve.
pub fn risk_chart(bands: &[Band], reference: Option<(&str, &[(f64, f64)])>) -> String {
    let all = bands
        .iter()
        .flat_map(|b| b.lo.iter().chain(&b.hi).chain(&b.median))
        .chain(reference.into_iter().flat_map(|r| r.1.iter()));
    let (mut xr, mut yr) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
    for &(x, y) in all {
        xr = (xr.0.min(x), xr.1.max(x));
        yr = (yr.0.min(y), yr.1.max(y));
    }
    let frame = Frame::new(80.0, 50.0, 560.0, 380.0, xr, yr);
    let mut out = String::new();
    open(&mut out, 820.0, 500.0);
    frame.draw(&mut out, "Upper risk: median and percentile band", "theta", "risk");
    for (i, b) in bands.iter().enumerate() {
        let pts: Vec<String> =
            b.lo.iter()
                .chain(b.hi.iter().rev())
                .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
                .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.2" stroke="none"/>"#,
            pts.join(" "),
            color(i)
        );
    }
    let mut legend: Vec<(String, &str, Option<&str>)> = Vec::new();
    for (i, b) in bands.iter().enumerate() {
        polyline(&mut out, &frame, &b.median, color(i), 2.0, None);
        legend.push((b.label.clone(), color(i), None));
    }
    if let Some((name, pts)) = reference {
        polyline(&mut out, &frame, pts, "#000", 2.0, Some("6 4"));
        legend.push((name.to_string(), "#000", Some("6 4")));
    }
    for (i, (name, c, dash)) in legend.iter().enumerate() {
        let y = 70.0 + 22.0 * i as f64;
        let dash = dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let _ =
            writeln!(out, r#"<line x1="660" y1="{y:.2}" x2="690" y2="{y:.2}" stroke="{c}" stroke-width="2"{dash}/>"#);
        let _ = writeln!(out, r#"<text x="698" y="{:.2}">{name}</text>"#, y + 4.0);
    }
    out.push_str("</svg>\n");
    out
}

/// One histogram panel per entry, side by side.
pub fn histogram_chart(panels: &[(String, &Histogram)]) -> String {
    let pw = 400.0;
    let mut out = String::new();
    open(&mut out, pw * panels.len().max(1) as f64, 400.0);
    for (i, (title, h)) in panels.iter().enumerate() {
        let xr = (h.edges[0], *h.edges.last().unwrap());
        let ymax = h.counts.iter().copied().max().unwrap_or(0) as f64;
        let frame = Frame::new(pw * i as f64 + 70.0, 40.0, 300.0, 290.0, xr, (0.0, ymax.max(1.0)));
        frame.draw(&mut out, title, "minimiser", "count");
        for (j, &c) in h.counts.iter().enumerate() {
            let (x1, x2) = (frame.px(h.edges[j]), frame.px(h.edges[j + 1]));
            let (ytop, ybase) = (frame.py(c as f64), frame.py(0.0));
            let _ = writeln!(
                out,
                r##"<rect x="{x1:.2}" y="{ytop:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="#fff" stroke-width="0.5"/>"##,
                x2 - x1,
                ybase - ytop,
                color(i)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
