use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{stream_key, ReplicateRecord};
use crate::error::{RcrError, Result};
use crate::estimators::Method;
use crate::rng::substream;

/// Confidence level of the bootstrap interval on RE.
/// Two-sided level of the RE interval is `1 - ALPHA`.
pub(crate) const ALPHA: f64 = 0.05;

/// Summary of the replicates of one (method, p) cell. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub graph: String,
    pub method: Method,
    pub p: f64,
    #[serde(rename = "R")]
    pub max_radius: u32,
    #[serde(rename = "N")]
    pub samples: usize,
    pub reps: usize,
    pub mean: f64,
    pub variance: f64,
    pub re: f64,
    pub wnrv: f64,
    pub time_mean_s: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub reference: f64,
    pub seed: u64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Percentile bootstrap interval of `statistic` at level `1 - alpha`.
///
/// Returns order statistics of the `b` resampled statistics. If every value
/// is equal the interval collapses to the statistic itself.
pub fn bootstrap_ci<R, F>(values: &[f64], statistic: F, b: usize, alpha: f64, rng: &mut R) -> Result<(f64, f64)>
where
    R: Rng + ?Sized,
    F: Fn(&[f64]) -> f64,
{
    if values.len() < 2 {
        return Err(RcrError::invalid("bootstrap needs at least 2 values"));
    }
    if b < 100 {
        return Err(RcrError::invalid("bootstrap needs at least 100 resamples"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(RcrError::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if values.iter().all(|&v| v == values[0]) {
        let s = statistic(values);
        return Ok((s, s));
    }
    let n = values.len();
    let mut resample = vec![0.0; n];
    let mut stats: Vec<f64> = (0..b)
        .map(|_| {
            for slot in resample.iter_mut() {
                *slot = values[rng.gen_range(0..n)];
            }
            statistic(&resample)
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let lo = ((alpha / 2.0) * b as f64).floor() as usize;
    let hi = (((1.0 - alpha / 2.0) * b as f64).ceil() as usize).clamp(1, b) - 1;
    Ok((stats[lo.min(b - 1)], stats[hi]))
}

/// One row per (method, p) cell of `records`, in first-appearance order.
///
/// `variance` is the unbiased sample variance of the estimates,
/// `re = sqrt(variance) / reference` and `wnrv = time_mean_s * re^2`.
pub fn summarize(records: &[ReplicateRecord], reference: f64, bootstrap: usize) -> Result<Vec<SummaryRow>> {
    if !(reference > 0.0 && reference.is_finite()) {
        return Err(RcrError::config(format!("reference must be positive, got {reference}")));
    }
    let mut cells: Vec<(Method, f64)> = Vec::new();
    for r in records {
        if !cells.iter().any(|&(m, p)| m == r.method && p == r.p) {
            cells.push((r.method, r.p));
        }
    }
    let mut rows = Vec::with_capacity(cells.len());
    for (method, p) in cells {
        let cell: Vec<&ReplicateRecord> = records.iter().filter(|r| r.method == method && r.p == p).collect();
        if cell.len() < 2 {
            return Err(RcrError::config(format!(
                "{method} at p = {p}: at least 2 replicates are needed"
            )));
        }
        let first = cell[0];
        let estimates: Vec<f64> = cell.iter().map(|r| r.estimate).collect();
        let times: Vec<f64> = cell.iter().map(|r| r.wall_time_s).collect();
        let variance = sample_variance(&estimates);
        let re = variance.sqrt() / reference;
        let time_mean_s = mean(&times);
        let key = stream_key(
            first.seed,
            &[b"bootstrap", first.graph.as_bytes(), method.name().as_bytes(), &p.to_bits().to_le_bytes()],
        );
        let (ci_low, ci_high) = bootstrap_ci(
            &estimates,
            |xs| sample_variance(xs).sqrt() / reference,
            bootstrap,
            ALPHA,
            &mut substream(key, 0),
        )?;
        rows.push(SummaryRow {
            graph: first.graph.clone(),
            method,
            p,
            max_radius: first.max_radius,
            samples: first.samples,
            reps: cell.len(),
            mean: mean(&estimates),
            variance,
            re,
            wnrv: time_mean_s * re * re,
            time_mean_s,
            ci_low,
            ci_high,
            reference,
            seed: first.seed,
        });
    }
    Ok(rows)
}

pub fn write_csv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let rows = reader.deserialize().collect::<std::result::Result<Vec<SummaryRow>, _>>()?;
    Ok(rows)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const PALETTE: [&str; 7] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"];

/// Line chart of `log10(re)` against `p`, one polyline per graph and method.
pub fn emit_svg(rows: &[SummaryRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(RcrError::invalid("no rows to plot"));
    }
    let (width, height) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 170.0, 30.0, 50.0);
    let plotted: Vec<&SummaryRow> = rows.iter().filter(|r| r.re > 0.0 && r.re.is_finite()).collect();

    let (mut pmin, mut pmax) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.p), b.max(r.p)));
    if pmax - pmin < 1e-12 {
        pmin -= 0.05;
        pmax += 0.05;
    }
    let (mut ymin, mut ymax) = plotted
        .iter()
        .map(|r| r.re.log10())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    if !ymin.is_finite() {
        ymin = -1.0;
        ymax = 0.0;
    }
    ymin = ymin.floor();
    ymax = ymax.ceil().max(ymin + 1.0);

    let sx = |p: f64| left + (p - pmin) / (pmax - pmin) * (width - left - right);
    let sy = |y: f64| top + (ymax - y) / (ymax - ymin) * (height - top - bottom);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#).unwrap();
    let (x0, x1, y0, y1) = (left, width - right, top, height - bottom);
    writeln!(svg, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#).unwrap();
    writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let p = pmin + (pmax - pmin) * i as f64 / 4.0;
        let x = sx(p);
        writeln!(svg, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{p:.2}</text>"#, y1 + 16.0).unwrap();
    }
    let mut y = ymin;
    while y <= ymax + 1e-9 {
        writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.0}</text>"#, x0 - 6.0, sy(y) + 4.0).unwrap();
        y += 1.0;
    }
    writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">p</text>"#, (x0 + x1) / 2.0, height - 12.0).unwrap();
    writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">log10(RE)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();

    let mut series: Vec<(&str, Method)> = Vec::new();
    for r in rows {
        if !series.contains(&(r.graph.as_str(), r.method)) {
            series.push((r.graph.as_str(), r.method));
        }
    }
    let several_graphs = series.iter().any(|(g, _)| *g != series[0].0);
    for (i, &(graph, method)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if several_graphs { (i / PALETTE.len()) * 4 } else { 0 };
        let mut pts: Vec<(f64, f64)> = plotted
            .iter()
            .filter(|r| r.method == method && r.graph == graph)
            .map(|r| (r.p, r.re.log10()))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let points: Vec<String> = pts.iter().map(|&(p, y)| format!("{:.2},{:.2}", sx(p), sy(y))).collect();
        writeln!(
            svg,
            r#"<polyline class="method" data-graph="{}" data-method="{}" fill="none" stroke="{color}" stroke-width="2" stroke-dasharray="{dash}" points="{}"/>"#,
            escape(graph),
            escape(method.name()),
            points.join(" ")
        )
        .unwrap();
        let ly = top + 16.0 * i as f64 + 6.0;
        writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2" stroke-dasharray="{dash}"/>"#,
            x1 + 12.0,
            x1 + 32.0
        )
        .unwrap();
        let label = if several_graphs { format!("{graph} {method}") } else { method.to_string() };
        writeln!(svg, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, x1 + 38.0, ly + 4.0, escape(&label)).unwrap();
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg)?;
    Ok(())
}
