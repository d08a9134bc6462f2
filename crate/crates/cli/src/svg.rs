//! Minimal SVG plots of scaling reports.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use blockmap::sampler::{ScalingFit, ScalingReport};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let span = if self.x1 > self.x0 { self.x1 - self.x0 } else { 1.0 };
        MARGIN + (x - self.x0) / span * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        let span = if self.y1 > self.y0 { self.y1 - self.y0 } else { 1.0 };
        HEIGHT - MARGIN - (y - self.y0) / span * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Median `L_j` against `ln n`, one polyline per `j`; supercritical reports
/// also get the fitted line in `ln n`.
pub fn render(report: &ScalingReport) -> Result<String> {
    if report.summaries.is_empty() {
        bail!("nothing to plot: the report has no sizes");
    }
    let xs: Vec<f64> = report.summaries.iter().map(|s| (s.map_size as f64).ln()).collect();
    let series: Vec<Vec<f64>> = (0..report.j_max)
        .map(|j| report.summaries.iter().map(|s| s.stats[j].median).collect())
        .collect();
    let all = series.iter().flatten().copied();
    let ymax = all.fold(0.0f64, f64::max).max(1.0) * 1.05;
    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let pad = if xmax > xmin { 0.05 * (xmax - xmin) } else { 0.5 };
    let f = Frame {
        x0: xmin - pad,
        x1: xmax + pad,
        y0: 0.0,
        y1: ymax,
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">scheme {}, u = {} ({}), {} replicates</text>"#,
        WIDTH / 2.0,
        report.scheme,
        report.u,
        report.regime,
        report.replicates
    )?;
    let (left, bottom, right, top) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    writeln!(
        s,
        r#"<line x1="{left:.1}" y1="{bottom:.1}" x2="{right:.1}" y2="{bottom:.1}" stroke="black"/>"#
    )?;
    writeln!(
        s,
        r#"<line x1="{left:.1}" y1="{bottom:.1}" x2="{left:.1}" y2="{top:.1}" stroke="black"/>"#
    )?;
    for (x, sum) in xs.iter().zip(&report.summaries) {
        let px = f.px(*x);
        writeln!(
            s,
            r#"<line x1="{px:.1}" y1="{bottom:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#,
            bottom + 5.0
        )?;
        writeln!(
            s,
            r#"<text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            bottom + 18.0,
            sum.map_size
        )?;
    }
    for i in 0..=4 {
        let y = ymax * i as f64 / 4.0;
        let py = f.py(y);
        writeln!(
            s,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{left:.1}" y2="{py:.1}" stroke="black"/>"#,
            left - 5.0
        )?;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{y:.1}</text>"#,
            left - 8.0,
            py + 4.0
        )?;
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">map size n (log scale)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    )?;
    writeln!(
        s,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">median L_j</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    )?;
    for (j, ys) in series.iter().enumerate() {
        let color = COLORS[j % COLORS.len()];
        if xs.len() > 1 {
            let pts: Vec<String> = xs
                .iter()
                .zip(ys)
                .map(|(x, y)| format!("{:.1},{:.1}", f.px(*x), f.py(*y)))
                .collect();
            writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            )?;
        }
        for (x, y) in xs.iter().zip(ys) {
            writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                f.px(*x),
                f.py(*y)
            )?;
        }
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{color}">L{}</text>"#,
            right - 30.0,
            top + 14.0 * (j + 1) as f64,
            j + 1
        )?;
    }
    if let ScalingFit::Supercritical {
        slope: Some(a),
        intercept: Some(b),
        ..
    } = &report.fit
    {
        if xs.len() > 1 {
            let (ya, yb) = (a * f.x0 + b, a * f.x1 + b);
            writeln!(
                s,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="gray" stroke-dasharray="4 3"/>"#,
                f.px(f.x0),
                f.py(ya),
                f.px(f.x1),
                f.py(yb)
            )?;
            writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="gray">slope {a:.3} per ln n</text>"#,
                left + 10.0,
                top + 14.0
            )?;
        }
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}

/// Empirical distribution function of `(L_1 - (1 - E) n) / n^(2/3)`, one step
/// curve per size.
pub fn render_fluctuation(report: &ScalingReport) -> Result<String> {
    if !matches!(report.fit, ScalingFit::Subcritical { .. }) {
        bail!(
            "the fluctuation plot is for subcritical reports, this one is {}",
            report.regime
        );
    }
    let samples: Vec<(usize, Vec<f64>)> = report
        .summaries
        .iter()
        .map(|s| {
            let n = s.map_size as f64;
            let mut v: Vec<f64> = report
                .rows
                .iter()
                .filter(|r| r.map_size == s.map_size)
                .map(|r| (r.largest[0] as f64 - (1.0 - report.mean) * n) / n.powf(2.0 / 3.0))
                .collect();
            v.sort_by(f64::total_cmp);
            (s.map_size, v)
        })
        .collect();
    let all = samples.iter().flat_map(|(_, v)| v.iter().copied());
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        bail!("nothing to plot: the report has no replicates");
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    let f = Frame {
        x0: lo - pad,
        x1: hi + pad,
        y0: 0.0,
        y1: 1.0,
    };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">scheme {}, u = {}: (L1 - (1 - E) n) / n^(2/3)</text>"#,
        WIDTH / 2.0,
        report.scheme,
        report.u
    )?;
    let (left, bottom, right, top) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    writeln!(
        s,
        r#"<line x1="{left:.1}" y1="{bottom:.1}" x2="{right:.1}" y2="{bottom:.1}" stroke="black"/>"#
    )?;
    writeln!(
        s,
        r#"<line x1="{left:.1}" y1="{bottom:.1}" x2="{left:.1}" y2="{top:.1}" stroke="black"/>"#
    )?;
    for i in 0..=4 {
        let x = f.x0 + (f.x1 - f.x0) * i as f64 / 4.0;
        let px = f.px(x);
        writeln!(
            s,
            r#"<text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{x:.2}</text>"#,
            bottom + 18.0
        )?;
        let y = i as f64 / 4.0;
        let py = f.py(y);
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{y:.2}</text>"#,
            left - 8.0,
            py + 4.0
        )?;
    }
    for (i, (size, v)) in samples.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let count = v.len() as f64;
        let mut pts = vec![format!("{:.1},{:.1}", f.px(f.x0), f.py(0.0))];
        for (k, x) in v.iter().enumerate() {
            pts.push(format!("{:.1},{:.1}", f.px(*x), f.py(k as f64 / count)));
            pts.push(format!("{:.1},{:.1}", f.px(*x), f.py((k + 1) as f64 / count)));
        }
        pts.push(format!("{:.1},{:.1}", f.px(f.x1), f.py(1.0)));
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        )?;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" fill="{color}">n = {size}</text>"#,
            left + 10.0,
            top + 14.0 * (i + 1) as f64
        )?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}

pub fn emit_fluctuation_plot(report: &ScalingReport, path: &Path) -> Result<()> {
    let text = render_fluctuation(report)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn emit_plot(report: &ScalingReport, path: &Path) -> Result<()> {
    let text = render(report)?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
