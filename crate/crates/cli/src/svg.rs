//! Minimal line-plot SVG writer.

use std::fmt::Write;

use crate::config::Dash;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub points: Vec<(f64, f64)>,
    pub color: String,
    pub dash: Dash,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendEntry {
    pub label: String,
    pub color: String,
    pub dash: Dash,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub curves: Vec<Curve>,
    pub legend: Vec<LegendEntry>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

/// Roughly five round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn stroke_attrs(color: &str, dash: Dash) -> String {
    let mut a = format!("stroke=\"{}\" stroke-width=\"1.4\" fill=\"none\"", escape(color));
    if let Some(d) = dash.dasharray() {
        write!(a, " stroke-dasharray=\"{d}\"").unwrap();
    }
    a
}

pub fn render(panel: &Panel) -> String {
    let (x0, x1) = range(panel.curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)));
    let (y0, y1) = range(panel.curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)));
    let pad = 0.04 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    )
    .unwrap();
    writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();
    writeln!(s, "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>", LEFT + pw / 2.0, escape(&panel.title)).unwrap();

    writeln!(s, "<clipPath id=\"plot\"><rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\"/></clipPath>").unwrap();
    writeln!(s, "<g clip-path=\"url(#plot)\">").unwrap();
    for c in &panel.curves {
        let attrs = stroke_attrs(&c.color, c.dash);
        if c.points.len() == 1 {
            let (x, y) = c.points[0];
            writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{}\"/>", sx(x), sy(y), escape(&c.color)).unwrap();
            continue;
        }
        let pts: Vec<String> = c.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(s, "<polyline {attrs} points=\"{}\"/>", pts.join(" ")).unwrap();
    }
    writeln!(s, "</g>").unwrap();

    writeln!(s, "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>").unwrap();
    for t in ticks(x0, x1) {
        let x = sx(t);
        writeln!(s, "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>", TOP + ph, TOP + ph + 5.0).unwrap();
        writeln!(s, "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>", TOP + ph + 18.0, tick_label(t)).unwrap();
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        writeln!(s, "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>", LEFT - 5.0).unwrap();
        writeln!(s, "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", LEFT - 8.0, y + 4.0, tick_label(t)).unwrap();
    }
    writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", LEFT + pw / 2.0, HEIGHT - 12.0, escape(&panel.x_label)).unwrap();
    writeln!(
        s,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&panel.y_label)
    )
    .unwrap();

    let lx = WIDTH - RIGHT + 15.0;
    for (i, e) in panel.legend.iter().enumerate() {
        let y = TOP + 12.0 + 20.0 * i as f64;
        writeln!(s, "<line x1=\"{lx}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" {}/>", lx + 28.0, stroke_attrs(&e.color, e.dash)).unwrap();
        writeln!(s, "<text x=\"{}\" y=\"{}\">{}</text>", lx + 34.0, y + 4.0, escape(&e.label)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}
