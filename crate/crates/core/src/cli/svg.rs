//! Minimal self-contained SVG charts.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Points,
    Line,
    /// Vertical bars from zero (or the lower edge on a log axis).
    Bars,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, style: Style) -> Self {
        Series {
            label: label.into(),
            points,
            style,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        Axis {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn label(&self, u: f64) -> String {
        let v = self.lo + u * (self.hi - self.lo);
        let v = if self.log { 10f64.powf(v) } else { v };
        format!("{v:.3e}")
    }
}

/// Renders `plot` to SVG text. Rejects empty series, and nonpositive values
/// on a log axis.
pub fn render_svg(plot: &Plot) -> Result<String> {
    if plot.series.is_empty() || plot.series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::invalid("series", "every plot needs nonempty series"));
    }
    let pts = || plot.series.iter().flat_map(|s| s.points.iter().copied());
    if pts().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::invalid("series", "points must be finite"));
    }
    if (plot.log_x && pts().any(|(x, _)| x <= 0.0)) || (plot.log_y && pts().any(|(_, y)| y <= 0.0)) {
        return Err(Error::invalid("series", "log axes need positive values"));
    }
    let bars = plot.series.iter().any(|s| s.style == Style::Bars);
    let ys = pts().map(|p| p.1).chain((bars && !plot.log_y).then_some(0.0));
    let ax = Axis::fit(pts().map(|p| p.0), plot.log_x);
    let ay = Axis::fit(ys, plot.log_y);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + ax.unit(x) * pw;
    let sy = |y: f64| TOP + (1.0 - ay.unit(y)) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&plot.title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let u = i as f64 / 4.0;
        let x = LEFT + u * pw;
        let y = TOP + (1.0 - u) * ph;
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + ph,
            TOP + ph + 15.0,
            ax.label(u)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + pw,
            LEFT - 4.0,
            y + 4.0,
            ay.label(u)
        );
    }
    let scale = |log: bool| if log { " (log)" } else { "" };
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}{}</text>"#,
        LEFT + pw / 2.0,
        H - 12.0,
        escape(&plot.x_label),
        scale(plot.log_x)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&plot.y_label),
        scale(plot.log_y)
    );
    let base = if plot.log_y { TOP + ph } else { sy(0.0) };
    for (k, s) in plot.series.iter().enumerate() {
        let c = COLORS[k % COLORS.len()];
        match s.style {
            Style::Points => {
                for &(x, y) in &s.points {
                    let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{c}"/>"#, sx(x), sy(y));
                }
            }
            Style::Line => {
                let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.5"/>"#,
                    path.join(" ")
                );
            }
            Style::Bars => {
                let width = (0.8 * pw / s.points.len() as f64).max(1.0);
                for &(x, y) in &s.points {
                    let top = sy(y).min(base);
                    let h = (sy(y) - base).abs();
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{top:.2}" width="{width:.2}" height="{h:.2}" fill="{c}"/>"#,
                        sx(x) - width / 2.0
                    );
                }
            }
        }
        let ly = TOP + 14.0 + 16.0 * k as f64;
        let lx = W - RIGHT + 10.0;
        let _ = writeln!(
            out,
            r#"<rect x="{lx}" y="{:.2}" width="10" height="10" fill="{c}"/><text x="{:.2}" y="{ly:.2}">{}</text>"#,
            ly - 9.0,
            lx + 14.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes [`render_svg`] output to `path`.
pub fn emit_svg(plot: &Plot, path: &Path) -> Result<()> {
    let text = render_svg(plot)?;
    std::fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Two-point line `y = y0 (x/x0)^slope` spanning `[x_lo, x_hi]`, for log-log
/// reference slopes.
pub fn power_line(label: &str, x0: f64, y0: f64, slope: f64, x_lo: f64, x_hi: f64) -> Series {
    let f = |x: f64| y0 * (x / x0).powf(slope);
    Series::new(label, vec![(x_lo, f(x_lo)), (x_hi, f(x_hi))], Style::Line)
}
