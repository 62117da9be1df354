use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::experiment::{ExperimentReport, ModelResult, RegressorResult, REPORT_FORMAT_VERSION};
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 10] = [
    "id",
    "name",
    "regressor",
    "status",
    "r2_train_mean",
    "r2_train_sd",
    "r2_test_mean",
    "r2_test_sd",
    "top_features",
    "coverage",
];

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_row(m: &ModelResult, r: &RegressorResult) -> Vec<String> {
    let best = m.best_regressor == Some(r.regressor);
    let top = if best {
        m.top_features
            .iter()
            .map(|(f, v)| format!("{f}:{v:.4}"))
            .collect::<Vec<_>>()
            .join(";")
    } else {
        String::new()
    };
    vec![
        m.id.to_string(),
        m.name.clone(),
        r.regressor.name().to_string(),
        m.status.label().to_string(),
        opt(r.r2_train_mean),
        opt(r.r2_train_sd),
        opt(r.r2_test_mean),
        opt(r.r2_test_sd),
        top,
        m.coverage.as_ref().map(|c| c.summary()).unwrap_or_default(),
    ]
}

/// One row per model and regressor. Top features are listed on the best
/// regressor's row only.
pub fn write_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for m in &report.models {
        for r in &m.regressors {
            w.write_record(csv_row(m, r))?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn save_csv(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(report, BufWriter::new(file))
}

pub fn save_json(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn load_json(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: ExperimentReport = serde_json::from_str(&text)?;
    if report.format_version != REPORT_FORMAT_VERSION {
        return Err(Error::InvalidArgument(format!(
            "report format {} is not supported (expected {REPORT_FORMAT_VERSION})",
            report.format_version
        )));
    }
    Ok(report)
}

/// Predicted against observed ratings for model `id`, as `predicted,observed`.
pub fn write_scatter<W: Write>(report: &ExperimentReport, id: u32, out: W) -> Result<()> {
    let m = report
        .model(id)
        .ok_or_else(|| Error::InvalidArgument(format!("no model with id {id} in the report")))?;
    if m.scatter.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "model {id} has no predictions ({})",
            m.status.label()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["predicted", "observed"])?;
    for (p, o) in &m.scatter {
        w.write_record([p.to_string(), o.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn save_scatter(report: &ExperimentReport, id: u32, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_scatter(report, id, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
