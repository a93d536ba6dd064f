//! Writing a [`RunReport`] to disk as JSON, CSV tables or SVG plots.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::analysis::RunReport;
use crate::error::{io_error, PipelineError, Result};
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(PipelineError::config(format!(
                "unknown report format: {other}"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        })
    }
}

/// Pretty JSON with a trailing newline. Field order follows the type
/// definitions, so equal reports render to equal bytes.
pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<RunReport> {
    Ok(serde_json::from_str(text).map_err(crate::error::InputError::from)?)
}

/// Renders the report into `dir`, creating it if needed, and returns the
/// files written in a fixed order.
pub fn emit_report(
    report: &RunReport,
    format: Format,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(io_error(dir))?;
    let files = match format {
        Format::Json => vec![("report.json".to_string(), to_json(report))],
        Format::Csv => csv_tables(report),
        Format::Svg => svg_plots(report),
    };
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(io_error(&path))?;
            Ok(path)
        })
        .collect()
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_tables(report: &RunReport) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Some(c) = &report.correlations {
        let rows = c.rows.iter().map(|r| {
            vec![
                r.variable.clone(),
                r.pearson.to_string(),
                r.spearman.to_string(),
                r.kendall.to_string(),
                r.strength.pearson.to_string(),
                r.strength.spearman.to_string(),
                r.strength.kendall.to_string(),
            ]
        });
        out.push((
            "correlations.csv".into(),
            table(
                &[
                    "variable",
                    "pearson",
                    "spearman",
                    "kendall",
                    "pearson_strength",
                    "spearman_strength",
                    "kendall_strength",
                ],
                rows,
            ),
        ));
        let m = &c.column_distances;
        let header: Vec<&str> = std::iter::once("column")
            .chain(m.names.iter().map(String::as_str))
            .collect();
        let rows = m.names.iter().zip(&m.values).map(|(name, vals)| {
            std::iter::once(name.clone())
                .chain(vals.iter().map(f64::to_string))
                .collect()
        });
        out.push(("column_distances.csv".into(), table(&header, rows)));
    }
    if let Some(regs) = &report.regressions {
        let rows = regs.iter().map(|r| {
            vec![
                r.x.clone(),
                r.y.clone(),
                r.linear.slope.to_string(),
                r.linear.intercept.to_string(),
                r.linear.r_squared.to_string(),
                r.lowess.fraction.to_string(),
                r.lowess.robustness_iterations.to_string(),
            ]
        });
        out.push((
            "regressions.csv".into(),
            table(
                &[
                    "x",
                    "y",
                    "slope",
                    "intercept",
                    "r_squared",
                    "lowess_fraction",
                    "lowess_iterations",
                ],
                rows,
            ),
        ));
    }
    if let Some(v) = &report.validation {
        let rows = v.rows.iter().map(|r| {
            vec![
                r.k.to_string(),
                opt(r.silhouette),
                r.gap.to_string(),
                r.gap_s.to_string(),
                r.log_w.to_string(),
                r.ssw.to_string(),
            ]
        });
        out.push((
            "validation.csv".into(),
            table(&["k", "silhouette", "gap", "gap_s", "log_w", "ssw"], rows),
        ));
    }
    if let Some(c) = &report.clustering {
        let rows = c.assignments.iter().map(|a| {
            vec![
                a.id.clone(),
                a.label
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| "NOISE".into()),
            ]
        });
        out.push(("assignments.csv".into(), table(&["id", "cluster"], rows)));
    }
    out
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

fn svg_plots(report: &RunReport) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for r in report.regressions.iter().flatten() {
        out.push((format!("scatter_{}.svg", file_stem(&r.x)), svg::scatter(r)));
    }
    if let Some(c) = &report.correlations {
        out.push((
            "distance_heatmap.svg".into(),
            svg::heatmap(&c.column_distances),
        ));
    }
    if let Some(c) = &report.clustering {
        if let Some(tree) = &c.dendrogram {
            let ids: Vec<String> = c.assignments.iter().map(|a| a.id.clone()).collect();
            out.push(("dendrogram.svg".into(), svg::dendrogram(tree, &ids)));
        }
        if let Some(q) = &c.quality {
            let labels: Vec<Option<usize>> = c.assignments.iter().map(|a| a.label).collect();
            out.push((
                "silhouette_profile.svg".into(),
                svg::silhouette_profile(&q.silhouette_per_point, &labels),
            ));
        }
    }
    if let Some(v) = &report.validation {
        if v.applicable && !v.rows.is_empty() {
            out.push(("validation_curves.svg".into(), svg::validation_curves(v)));
        }
    }
    out
}
