//! Minimal SVG line and bar charts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use wsqaoa_core::metrics::HISTOGRAM_BINS;
use wsqaoa_core::{AlphaHistogram, ProblemKind};

use crate::pipeline::RunRecord;
use crate::report::mean_std;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Band half-width relative to the sample standard deviation.
pub const BAND_SCALE: f64 = 0.25;

/// One curve: per depth `(depth, mean, half_width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(usize, f64, f64)>,
}

/// Curves for one kind and metric, one per (warm-start, rotation).
pub fn series(records: &[RunRecord], kind: ProblemKind, metric: &str) -> Vec<Series> {
    let mut groups: BTreeMap<String, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.kind == kind && r.is_ok()) {
        let v = if metric == "alpha" { r.alpha } else { r.p_opt };
        let Some(v) = v else { continue };
        let label = if r.rotation == "-" {
            r.warmstart.clone()
        } else {
            format!("{}-{}", r.warmstart, r.rotation)
        };
        groups.entry(label).or_default().entry(r.depth).or_default().push(v);
    }
    groups
        .into_iter()
        .map(|(label, by_depth)| Series {
            label,
            points: by_depth
                .into_iter()
                .map(|(d, v)| {
                    let (m, s) = mean_std(&v);
                    (d, m, BAND_SCALE * s)
                })
                .collect(),
        })
        .collect()
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    )
}

fn axes(out: &mut String, x_max: f64, x_label: &str, y_max: f64, y_label: &str) {
    let (x0, y0, x1, y1) = (PAD, H - PAD, W - PAD, PAD);
    let _ = writeln!(out, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>");
    let _ = writeln!(out, "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>");
    for t in 0..=4 {
        let f = t as f64 / 4.0;
        let y = y0 - f * (y0 - y1);
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{:.2}</text>",
            x0 - 4.0,
            y + 3.0,
            f * y_max
        );
        let x = x0 + f * (x1 - x0);
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{:.2}</text>",
            y0 + 14.0,
            f * x_max
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{x_label}</text>",
        W / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{y_label}</text>",
        H / 2.0,
        H / 2.0
    );
}

/// Line chart of metric vs depth with shaded bands.
pub fn line_chart(title: &str, y_label: &str, series: &[Series]) -> String {
    let max_depth = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let sx = |d: f64| PAD + d / max_depth * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - v.clamp(0.0, 1.0) * (H - 2.0 * PAD);
    let mut out = header(title);
    axes(&mut out, max_depth, "depth p", 1.0, y_label);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let upper: Vec<String> = s.points.iter().map(|&(d, m, h)| format!("{:.2},{:.2}", sx(d as f64), sy(m + h))).collect();
        let lower: Vec<String> = s.points.iter().rev().map(|&(d, m, h)| format!("{:.2},{:.2}", sx(d as f64), sy(m - h))).collect();
        let _ = writeln!(
            out,
            "<polygon points=\"{} {}\" fill=\"{color}\" fill-opacity=\"0.2\" stroke=\"none\"/>",
            upper.join(" "),
            lower.join(" ")
        );
        let line: Vec<String> = s.points.iter().map(|&(d, m, _)| format!("{:.2},{:.2}", sx(d as f64), sy(m))).collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            line.join(" ")
        );
        for &(d, m, _) in &s.points {
            let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>", sx(d as f64), sy(m));
        }
        let ly = PAD + 14.0 * k as f64;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{ly}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"{color}\">{}</text>",
            W - PAD - 90.0,
            s.label
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One SVG per (kind, metric) in `dir`. Returns the written paths.
pub fn emit_plots(records: &[RunRecord], dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    if records.is_empty() {
        log::warn!("no records to plot");
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir)?;
    let kinds: std::collections::BTreeSet<ProblemKind> = records.iter().map(|r| r.kind).collect();
    let mut written = Vec::new();
    for kind in kinds {
        for (metric, label) in [("alpha", "alpha"), ("p_opt", "P_opt")] {
            let s = series(records, kind, metric);
            if s.is_empty() {
                continue;
            }
            let path = dir.join(format!("{}_{metric}.svg", kind.name()));
            std::fs::write(&path, line_chart(&format!("{kind}: {label} vs depth"), label, &s))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Bar chart of a histogram's bin densities.
pub fn histogram_chart(title: &str, h: &AlphaHistogram) -> String {
    let y_max = if h.p_max > 0.0 { h.p_max } else { 1.0 };
    let bw = (W - 2.0 * PAD) / HISTOGRAM_BINS as f64;
    let mut out = header(title);
    axes(&mut out, 1.0, "alpha", y_max, "density");
    for (i, &d) in h.bins.iter().enumerate() {
        let bh = d / y_max * (H - 2.0 * PAD);
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
            PAD + i as f64 * bw,
            H - PAD - bh,
            bw,
            bh,
            PALETTE[0]
        );
    }
    out.push_str("</svg>\n");
    out
}
