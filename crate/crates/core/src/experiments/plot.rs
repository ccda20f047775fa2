//! Minimal SVG line and scatter charts for the experiment CSVs.

use std::fmt::Write as _;

use super::curve::CurveReport;
use super::logits::LogitRow;
use super::progress::ProgressRecord;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    /// `(x, y, error bar half-height)`.
    pub points: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    /// Draw markers only.
    pub scatter: bool,
    pub series: Vec<Series>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        }
        let pad = if log { 0.0 } else { 0.05 * (hi - lo) };
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

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            (self.lo.floor() as i32..=self.hi.ceil() as i32)
                .map(|e| 10f64.powi(e))
                .filter(|&t| (self.lo - 1e-9..=self.hi + 1e-9).contains(&t.log10()))
                .collect()
        } else {
            (0..=5).map(|k| self.lo + (self.hi - self.lo) * k as f64 / 5.0).collect()
        }
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.0e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    pub fn to_svg(&self) -> String {
        let xs = Axis::fit(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), self.log_x);
        let ys = Axis::fit(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().flat_map(|p| [p.1 - p.2, p.1 + p.2])),
            false,
        );
        let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
        let px = |x: f64| LEFT + xs.unit(x) * pw;
        let py = |y: f64| TOP + (1.0 - ys.unit(y)) * ph;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for t in xs.ticks() {
            let x = px(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
                TOP + ph,
                TOP + ph + 14.0,
                label(t)
            );
        }
        for t in ys.ticks() {
            let y = py(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"##,
                LEFT + pw,
                LEFT - 4.0,
                y + 4.0,
                label(t)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (k, s) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite() && (!self.log_x || p.0 > 0.0))
                .map(|p| (px(p.0), py(p.1)))
                .collect();
            if self.scatter {
                for (x, y) in &pts {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{x:.1}" cy="{y:.1}" r="1.6" fill="{color}" fill-opacity="0.5"/>"#
                    );
                }
            } else {
                let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    path.join(" ")
                );
                for p in s.points.iter().filter(|p| p.2 > 0.0 && p.1.is_finite()) {
                    let x = px(p.0);
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="{color}"/>"#,
                        py(p.1 - p.2),
                        py(p.1 + p.2)
                    );
                }
            }
            let ly = TOP + 14.0 + 16.0 * k as f64;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                W - RIGHT + 12.0,
                ly - 9.0,
                W - RIGHT + 26.0,
                ly,
                escape(&s.name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Mean test accuracy against training-set size (log scale), one series per
/// model, with standard-deviation bars.
pub fn learning_curve_chart(report: &CurveReport) -> Chart {
    let mut series: Vec<Series> = Vec::new();
    for (model, size, _, mean, sd) in report.summary() {
        match series.iter_mut().find(|s| s.name == model) {
            Some(s) => s.points.push((size as f64, mean, sd)),
            None => series.push(Series {
                name: model,
                points: vec![(size as f64, mean, sd)],
            }),
        }
    }
    Chart {
        title: "Learning curves".into(),
        x_label: "training documents".into(),
        y_label: "test accuracy".into(),
        log_x: true,
        scatter: false,
        series,
    }
}

/// Test accuracy against training steps, one series per (variant, run).
pub fn progress_chart(records: &[ProgressRecord]) -> Chart {
    let mut series: Vec<Series> = Vec::new();
    for r in records {
        let name = format!("{} #{}", r.variant.name(), r.run_id);
        let point = (r.step as f64, r.test_accuracy, 0.0);
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(point),
            None => series.push(Series {
                name,
                points: vec![point],
            }),
        }
    }
    Chart {
        title: "Accuracy during training".into(),
        x_label: "step (documents processed)".into(),
        y_label: "test accuracy".into(),
        log_x: false,
        scatter: false,
        series,
    }
}

/// Dense part logit against sparse part logit, one colour per class.
pub fn logit_scatter(rows: &[LogitRow]) -> Chart {
    let pick = |class: bool, name: &str| Series {
        name: name.into(),
        points: rows
            .iter()
            .filter(|r| r.label == class)
            .map(|r| (r.dense_logit, r.sparse_logit, 0.0))
            .collect(),
    };
    Chart {
        title: "Part logits".into(),
        x_label: "dense logit".into(),
        y_label: "sparse logit".into(),
        log_x: false,
        scatter: true,
        series: vec![pick(true, "positive"), pick(false, "negative")],
    }
}
