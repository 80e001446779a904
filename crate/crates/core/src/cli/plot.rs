//! Minimal SVG line charts for eyeballing figure datasets.

use std::fmt::Write;

use super::dataset::Dataset;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_Y: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#7f7f7f"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// One polyline per `y` column against column `x`. Non-finite points (and
/// non-positive ones on a log axis) are dropped.
pub fn line_chart(data: &Dataset, x: &str, ys: &[&str], scale: Scale) -> Result<String> {
    let missing = |c: &str| Error::param(format!("dataset {} has no numeric column {c:?}", data.name));
    let xs = data.column(x).ok_or_else(|| missing(x))?;
    let series: Vec<(&str, Vec<f64>)> =
        ys.iter().map(|&c| data.column(c).map(|v| (c, v)).ok_or_else(|| missing(c))).collect::<Result<_>>()?;

    let transform = |v: f64| match scale {
        Scale::Linear if v.is_finite() => Some(v),
        Scale::Log if v > 0.0 && v.is_finite() => Some(v.log10()),
        _ => None,
    };
    let points: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, v)| xs.iter().zip(v).filter_map(|(&a, &b)| Some((a, transform(b)?))).collect())
        .collect();

    let (x_lo, x_hi) = bounds(xs.iter().copied());
    let (y_lo, y_hi) = bounds(points.iter().flatten().map(|p| p.1));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let px = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |v: f64| HEIGHT - MARGIN_Y - (v - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="25" font-size="14">{}</text>"#, MARGIN_LEFT, data.name);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_lo + f * (x_hi - x_lo);
        let yv = y_lo + f * (y_hi - y_lo);
        let label = match scale {
            Scale::Linear => format!("{yv:.3}"),
            Scale::Log => format!("1e{yv:.1}"),
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.3}</text>"#,
            px(xv),
            HEIGHT - MARGIN_Y + 18.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#, MARGIN_LEFT - 6.0, py(yv) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#, MARGIN_LEFT + plot_w / 2.0, HEIGHT - 10.0);

    for (i, ((name, _), pts)) in series.iter().zip(&points).enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", px(a), py(b))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        let ly = MARGIN_Y + 20.0 * (i as f64 + 1.0);
        let lx = WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{name}</text>"#, lx + 26.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Range of the finite values, widened when degenerate.
fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
