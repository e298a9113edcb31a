use std::fmt::Write;

use super::table::Table;
use super::ExperimentError;
use crate::competition::{Color, Coloring};

const W: f64 = 480.0;
const H: f64 = 360.0;
const MARGIN: f64 = 48.0;

#[derive(Clone, Debug, PartialEq)]
pub enum PlotKind {
    /// Points and a polyline of `y` against `x`, both axes logarithmic.
    LogLog { x: String, y: String },
    /// Points and a polyline of `y` against `x`.
    Line { x: String, y: String },
    /// Histogram of one column with equal-width bins.
    Histogram { column: String, bins: usize },
}

/// Deterministic SVG of a CSV table.
pub fn plot_table(table: &Table, kind: &PlotKind, title: &str) -> Result<String, ExperimentError> {
    match kind {
        PlotKind::LogLog { x, y } | PlotKind::Line { x, y } => {
            let log = matches!(kind, PlotKind::LogLog { .. });
            let xs = table.numbers(x)?;
            let ys = table.numbers(y)?;
            let pts: Vec<(f64, f64)> = xs
                .into_iter()
                .zip(ys)
                .filter(|p| !log || (p.0 > 0.0 && p.1 > 0.0))
                .map(|(a, b)| if log { (a.ln(), b.ln()) } else { (a, b) })
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .collect();
            let prefix = if log { "log " } else { "" };
            Ok(xy_svg(&pts, title, &format!("{prefix}{x}"), &format!("{prefix}{y}")))
        }
        PlotKind::Histogram { column, bins } => {
            let v: Vec<f64> = table.numbers(column)?.into_iter().filter(|v| v.is_finite()).collect();
            Ok(histogram_svg(&v, (*bins).max(1), title, column))
        }
    }
}

/// Parses `csv` and plots it.
pub fn plot_csv(csv: &str, kind: &PlotKind, title: &str) -> Result<String, ExperimentError> {
    plot_table(&Table::parse("plot.csv", csv)?, kind, title)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(s: &mut String, title: &str) {
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(s, "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>", W / 2.0, escape(title));
}

fn axes(s: &mut String, xlabel: &str, ylabel: &str, xr: Option<(f64, f64)>, yr: Option<(f64, f64)>) {
    let (x0, y0, x1, y1) = (MARGIN, H - MARGIN, W - MARGIN / 2.0, MARGIN / 1.5);
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>");
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>", (x0 + x1) / 2.0, H - 10.0, escape(xlabel));
    let _ = writeln!(
        s,
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 {})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
    if let Some((lo, hi)) = xr {
        let _ = writeln!(s, "<text x=\"{x0}\" y=\"{}\" font-size=\"10\">{lo:.3}</text>", y0 + 14.0);
        let _ = writeln!(s, "<text x=\"{x1}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{hi:.3}</text>", y0 + 14.0);
    }
    if let Some((lo, hi)) = yr {
        let _ = writeln!(s, "<text x=\"{}\" y=\"{y0}\" text-anchor=\"end\" font-size=\"10\">{lo:.3}</text>", x0 - 4.0);
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{hi:.3}</text>", x0 - 4.0, y1 + 8.0);
    }
}

fn no_data(s: &mut String) {
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">no data</text>", W / 2.0, H / 2.0);
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn scale(v: f64, (lo, hi): (f64, f64), a: f64, b: f64) -> f64 {
    a + (v - lo) / (hi - lo) * (b - a)
}

fn xy_svg(pts: &[(f64, f64)], title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    header(&mut s, title);
    if pts.is_empty() {
        axes(&mut s, xlabel, ylabel, None, None);
        no_data(&mut s);
    } else {
        let xr = range(pts.iter().map(|p| p.0));
        let yr = range(pts.iter().map(|p| p.1));
        axes(&mut s, xlabel, ylabel, Some(xr), Some(yr));
        let mut sorted = pts.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let px: Vec<(f64, f64)> = sorted
            .iter()
            .map(|&(x, y)| (scale(x, xr, MARGIN, W - MARGIN / 2.0), scale(y, yr, H - MARGIN, MARGIN / 1.5)))
            .collect();
        let line: Vec<String> = px.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"steelblue\" points=\"{}\"/>", line.join(" "));
        for (x, y) in px {
            let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"steelblue\"/>");
        }
    }
    s.push_str("</svg>\n");
    s
}

fn histogram_svg(v: &[f64], bins: usize, title: &str, label: &str) -> String {
    let mut s = String::new();
    header(&mut s, title);
    if v.is_empty() {
        axes(&mut s, label, "count", None, None);
        no_data(&mut s);
    } else {
        let xr = range(v.iter().copied());
        let mut counts = vec![0usize; bins];
        for &x in v {
            let b = (((x - xr.0) / (xr.1 - xr.0)) * bins as f64).floor() as usize;
            counts[b.min(bins - 1)] += 1;
        }
        let top = *counts.iter().max().unwrap() as f64;
        axes(&mut s, label, "count", Some(xr), Some((0.0, top)));
        let bw = (W - 1.5 * MARGIN) / bins as f64;
        for (i, &c) in counts.iter().enumerate() {
            let h = c as f64 / top * (H - MARGIN - MARGIN / 1.5);
            let _ = writeln!(
                s,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" fill=\"steelblue\" stroke=\"white\"/>",
                MARGIN + i as f64 * bw,
                H - MARGIN - h,
                bw
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Site map of a coloring: one `rect` per coloured site, plus in red and
/// minus in blue, row `x2` drawn upwards.
pub fn site_map_svg(coloring: &Coloring, title: &str) -> String {
    let region = coloring.passage().region();
    let sites: Vec<_> = region.iter().filter_map(|x| coloring.color(x).map(|c| (x, c))).collect();
    let mut s = String::new();
    header(&mut s, title);
    if sites.is_empty() {
        no_data(&mut s);
        s.push_str("</svg>\n");
        return s;
    }
    let (xlo, xhi) = range(sites.iter().map(|p| p.0 .0 as f64));
    let (ylo, yhi) = range(sites.iter().map(|p| p.0 .1 as f64));
    let cell = ((W - 2.0 * MARGIN) / (xhi - xlo + 1.0)).min((H - 2.0 * MARGIN) / (yhi - ylo + 1.0));
    for ((a, b), c) in sites {
        let fill = if c == Color::Plus { "#c0392b" } else { "#2e86c1" };
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"{fill}\"/>",
            MARGIN + (a as f64 - xlo) * cell,
            H - MARGIN - (b as f64 - ylo + 1.0) * cell
        );
    }
    s.push_str("</svg>\n");
    s
}
