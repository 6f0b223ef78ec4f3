//! SVG figures: adjacency heatmap panels and mean-metric curves with
//! standard-error bars. Output bytes depend only on the inputs.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::denoise::Method;
use crate::error::{Error, Result};
use crate::matrix::AdjacencyMatrix;
use crate::metrics::AggregateRecord;

use super::io::format_g;
use super::sweep::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    F1,
    Mse,
}

impl Metric {
    pub const BOTH: [Metric; 2] = [Metric::F1, Metric::Mse];

    pub fn name(self) -> &'static str {
        match self {
            Metric::F1 => "f1",
            Metric::Mse => "mse",
        }
    }

    fn of(self, a: &AggregateRecord) -> (f64, f64) {
        match self {
            Metric::F1 => (a.mean_f1, a.sem_f1),
            Metric::Mse => (a.mean_mse, a.sem_mse),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::BOTH
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::config(format!("unknown metric `{s}`")))
    }
}

/// Fixed-precision coordinate.
fn c(v: f64) -> String {
    format!("{v:.2}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const MID_COLOR: (u8, u8, u8) = (255, 255, 255);
const NEG_COLOR: (u8, u8, u8) = (33, 102, 172);
const POS_COLOR: (u8, u8, u8) = (178, 24, 43);

/// Diverging scale: blue for negative, white at zero, red for positive,
/// saturating at `|v| = scale`.
fn diverging(v: f64, scale: f64) -> (u8, u8, u8) {
    if scale == 0.0 || v == 0.0 {
        return MID_COLOR;
    }
    let t = (v.abs() / scale).min(1.0);
    let end = if v < 0.0 { NEG_COLOR } else { POS_COLOR };
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * t).round() as u8;
    (lerp(MID_COLOR.0, end.0), lerp(MID_COLOR.1, end.1), lerp(MID_COLOR.2, end.2))
}

fn hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

const PANEL: f64 = 216.0;
const GAP: f64 = 24.0;
const TITLE: f64 = 22.0;
const PANELS_PER_ROW: usize = 4;

/// Grid of labelled heatmaps sharing one colour scale centred at zero.
pub fn render_heatmaps(panels: &[(String, AdjacencyMatrix)]) -> Result<String> {
    let Some((_, first)) = panels.first() else {
        return Err(Error::invalid("no panels to render"));
    };
    let n = first.n();
    if panels.iter().any(|(_, m)| m.n() != n) {
        return Err(Error::invalid("heatmap panels must share one shape"));
    }
    let scale = panels
        .iter()
        .flat_map(|(_, m)| m.values().iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));

    let cols = PANELS_PER_ROW.min(panels.len());
    let rows = panels.len().div_ceil(PANELS_PER_ROW);
    let width = GAP + cols as f64 * (PANEL + GAP);
    let height = GAP + rows as f64 * (PANEL + TITLE + GAP) + 30.0;
    let cell = PANEL / n as f64;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" shape-rendering="crispEdges">"#,
        c(width),
        c(height),
        c(width),
        c(height)
    )
    .unwrap();
    writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    for (idx, (title, m)) in panels.iter().enumerate() {
        let x0 = GAP + (idx % PANELS_PER_ROW) as f64 * (PANEL + GAP);
        let y0 = GAP + (idx / PANELS_PER_ROW) as f64 * (PANEL + TITLE + GAP);
        writeln!(s, r#"<g class="panel" data-n="{n}">"#).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
            c(x0 + PANEL / 2.0),
            c(y0 + 14.0),
            escape(title)
        )
        .unwrap();
        let top = y0 + TITLE;
        writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            c(x0),
            c(top),
            c(PANEL),
            c(PANEL),
            hex(MID_COLOR)
        )
        .unwrap();
        for (i, row) in m.rows().enumerate() {
            // Runs of equal colour become one rectangle; mid-scale runs
            // are covered by the panel background.
            let mut j = 0;
            while j < n {
                let color = diverging(row[j], scale);
                let mut end = j + 1;
                while end < n && diverging(row[end], scale) == color {
                    end += 1;
                }
                if color != MID_COLOR {
                    writeln!(
                        s,
                        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                        c(x0 + j as f64 * cell),
                        c(top + i as f64 * cell),
                        c((end - j) as f64 * cell),
                        c(cell),
                        hex(color)
                    )
                    .unwrap();
                }
                j = end;
            }
        }
        writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444444" stroke-width="0.5"/>"##,
            c(x0),
            c(top),
            c(PANEL),
            c(PANEL)
        )
        .unwrap();
        writeln!(s, "</g>").unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">colour scale: blue {} .. white 0 .. red {}</text>"#,
        c(GAP),
        c(height - 10.0),
        format_g(-scale, 4),
        format_g(scale, 4)
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_heatmaps(panels: &[(String, AdjacencyMatrix)], path: &Path) -> Result<()> {
    fs::write(path, render_heatmaps(panels)?)?;
    Ok(())
}

const METHOD_COLORS: [&str; 5] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"];

fn method_color(m: Method) -> &'static str {
    METHOD_COLORS[Method::ALL.iter().position(|&x| x == m).unwrap()]
}

/// Roughly five round tick values covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|f| f * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// One line per method with ±1 SEM bars over the swept axis, and a dashed
/// vertical line at `default_value`.
pub fn render_curves(
    aggregates: &[AggregateRecord],
    metric: Metric,
    axis: Axis,
    default_value: f64,
) -> Result<String> {
    let Some(first) = aggregates.first() else {
        return Err(Error::invalid("no aggregates to plot"));
    };
    if aggregates.iter().any(|a| a.model != first.model) {
        return Err(Error::invalid("curves must come from a single model"));
    }
    let x_of = |a: &AggregateRecord| match axis {
        Axis::Prune => a.prune,
        Axis::Noise => a.noise_sd,
    };

    let (mut x_lo, mut x_hi) = aggregates
        .iter()
        .map(x_of)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    x_lo = x_lo.min(default_value);
    x_hi = x_hi.max(default_value);
    if x_hi - x_lo < 1e-12 {
        x_lo -= 0.05;
        x_hi += 0.05;
    }
    let (y_lo, y_hi) = match metric {
        Metric::F1 => (0.0, 1.0),
        Metric::Mse => {
            let top = aggregates
                .iter()
                .map(|a| {
                    let (m, e) = metric.of(a);
                    m + e
                })
                .fold(0.0_f64, f64::max);
            (0.0, if top > 0.0 { top * 1.05 } else { 1.0 })
        }
    };

    let (width, height) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 150.0, 40.0, 50.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let px = |x: f64| left + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}: mean {} vs {}</text>"#,
        c(left + plot_w / 2.0),
        first.model,
        metric.name().to_uppercase(),
        axis
    )
    .unwrap();

    // Axes, ticks and labels.
    writeln!(
        s,
        r##"<path d="M{} {} L{} {} L{} {}" fill="none" stroke="#000000"/>"##,
        c(left),
        c(top),
        c(left),
        c(top + plot_h),
        c(left + plot_w),
        c(top + plot_h)
    )
    .unwrap();
    for t in ticks(x_lo, x_hi) {
        writeln!(
            s,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#000000"/><text x="{0}" y="{3}" font-family="sans-serif" font-size="11" text-anchor="middle">{4}</text>"##,
            c(px(t)),
            c(top + plot_h),
            c(top + plot_h + 5.0),
            c(top + plot_h + 18.0),
            format_g(t, 3)
        )
        .unwrap();
    }
    for t in ticks(y_lo, y_hi) {
        writeln!(
            s,
            r##"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#000000"/><text x="{3}" y="{4}" font-family="sans-serif" font-size="11" text-anchor="end">{5}</text>"##,
            c(left - 5.0),
            c(py(t)),
            c(left),
            c(left - 8.0),
            c(py(t) + 4.0),
            format_g(t, 3)
        )
        .unwrap();
    }
    let axis_label = match axis {
        Axis::Prune => "pruning proportion",
        Axis::Noise => "noise SD",
    };
    writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{axis_label}</text>"#,
        c(left + plot_w / 2.0),
        c(height - 12.0)
    )
    .unwrap();

    writeln!(
        s,
        r##"<line class="default" x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#777777" stroke-dasharray="4 3"/>"##,
        c(px(default_value)),
        c(top),
        c(top + plot_h)
    )
    .unwrap();

    let mut methods: Vec<Method> = aggregates.iter().map(|a| a.method).collect();
    methods.sort();
    methods.dedup();
    for (slot, &method) in methods.iter().enumerate() {
        let color = method_color(method);
        let mut points: Vec<(f64, f64, f64)> = aggregates
            .iter()
            .filter(|a| a.method == method)
            .map(|a| {
                let (m, e) = metric.of(a);
                (x_of(a), m, e)
            })
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));

        writeln!(s, r#"<g class="series" data-method="{method}">"#).unwrap();
        if points.len() > 1 {
            let d: Vec<String> = points
                .iter()
                .enumerate()
                .map(|(i, &(x, y, _))| format!("{}{} {}", if i == 0 { "M" } else { "L" }, c(px(x)), c(py(y))))
                .collect();
            writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, d.join(" "))
                .unwrap();
        }
        for &(x, y, e) in &points {
            let (xp, lo, hi) = (px(x), py(y - e), py(y + e));
            writeln!(
                s,
                r#"<path class="errorbar" d="M{0} {1} L{0} {2} M{3} {1} L{4} {1} M{3} {2} L{4} {2}" stroke="{color}"/>"#,
                c(xp),
                c(lo),
                c(hi),
                c(xp - 3.0),
                c(xp + 3.0)
            )
            .unwrap();
            writeln!(s, r#"<circle cx="{}" cy="{}" r="2.5" fill="{color}"/>"#, c(xp), c(py(y))).unwrap();
        }
        writeln!(s, "</g>").unwrap();

        let ly = top + 10.0 + slot as f64 * 18.0;
        let lx = left + plot_w + 16.0;
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{method}</text>"#,
            c(lx),
            c(ly),
            c(lx + 18.0),
            c(ly),
            c(lx + 24.0),
            c(ly + 4.0)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_curves(
    aggregates: &[AggregateRecord],
    metric: Metric,
    axis: Axis,
    default_value: f64,
    path: &Path,
) -> Result<()> {
    fs::write(path, render_curves(aggregates, metric, axis, default_value)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_models::ModelKind;

    fn agg(method: Method, prune: f64, mean_f1: f64, sem_f1: f64) -> AggregateRecord {
        AggregateRecord {
            model: ModelKind::Kautz,
            method,
            prune,
            noise_sd: 0.25,
            n: 10,
            mean_f1,
            sem_f1,
            mean_mse: 0.01,
            sem_mse: 0.0,
        }
    }

    #[test]
    fn diverging_scale() {
        assert_eq!(diverging(0.0, 1.0), MID_COLOR);
        assert_eq!(diverging(5.0, 0.0), MID_COLOR);
        assert_eq!(diverging(1.0, 1.0), POS_COLOR);
        assert_eq!(diverging(-3.0, 1.0), NEG_COLOR);
    }

    #[test]
    fn one_by_one_panels() {
        let panels: Vec<(String, AdjacencyMatrix)> =
            (0..8).map(|i| (format!("p{i}"), AdjacencyMatrix::zeros(1))).collect();
        let svg = render_heatmaps(&panels).unwrap();
        assert_eq!(svg.matches(r#"<g class="panel" data-n="1">"#).count(), 8);
        // All-zero panels are the uniform mid-scale colour.
        let fills: Vec<&str> = svg.match_indices("fill=\"#").map(|(i, _)| &svg[i + 6..i + 13]).collect();
        assert!(fills.iter().all(|f| *f == "#ffffff"), "{fills:?}");
    }

    #[test]
    fn heatmap_rejects_mixed_shapes() {
        let panels = vec![
            ("a".to_string(), AdjacencyMatrix::zeros(2)),
            ("b".to_string(), AdjacencyMatrix::zeros(3)),
        ];
        assert!(render_heatmaps(&panels).is_err());
        assert!(render_heatmaps(&[]).is_err());
    }

    #[test]
    fn heatmap_is_deterministic() {
        let m = AdjacencyMatrix::from_rows(&[vec![1.0, -1.0], vec![0.0, 0.25]]).unwrap();
        let panels = vec![("x & y".to_string(), m)];
        let a = render_heatmaps(&panels).unwrap();
        assert_eq!(a, render_heatmaps(&panels).unwrap());
        assert!(a.contains("x &amp; y"));
        assert!(a.contains(&hex(POS_COLOR)) && a.contains(&hex(NEG_COLOR)));
    }

    #[test]
    fn single_point_curve() {
        let svg = render_curves(&[agg(Method::IterativeFt, 0.25, 0.5, 0.0)], Metric::F1, Axis::Prune, 0.25)
            .unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches(r#"class="errorbar""#).count(), 1);
        assert!(svg.contains(r#"class="default""#));
        assert!(svg.contains(">iterft</text>"));
    }

    #[test]
    fn zero_sem_gives_zero_length_bars() {
        let aggs: Vec<_> = [0.1, 0.2, 0.3].iter().map(|&p| agg(Method::Lans, p, 0.4, 0.0)).collect();
        let svg = render_curves(&aggs, Metric::F1, Axis::Prune, 0.25).unwrap();
        for bar in svg.lines().filter(|l| l.contains("errorbar")) {
            let d = bar.split("d=\"M").nth(1).unwrap();
            let nums: Vec<&str> = d.split([' ', 'L', 'M']).filter(|t| !t.is_empty()).collect();
            assert_eq!(nums[1], nums[3], "{bar}");
        }
        assert_eq!(svg, render_curves(&aggs, Metric::F1, Axis::Prune, 0.25).unwrap());
    }

    #[test]
    fn curves_validate_input() {
        assert!(render_curves(&[], Metric::Mse, Axis::Noise, 0.25).is_err());
        let mut other = agg(Method::Lans, 0.1, 0.2, 0.0);
        other.model = ModelKind::Tree;
        assert!(render_curves(&[agg(Method::Lans, 0.1, 0.2, 0.0), other], Metric::F1, Axis::Prune, 0.25).is_err());
    }

    #[test]
    fn tick_values_are_round() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(0.05, 0.95), vec![0.2, 0.4, 0.6000000000000001, 0.8]);
    }
}
