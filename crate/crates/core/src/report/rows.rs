use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::protocols::{Bb84Point, SdcPoint};

pub const CSV_HEADER: [&str; 7] = [
    "x",
    "metric",
    "value",
    "shots",
    "accepted_fraction",
    "seed",
    "backend",
];

/// One metric value at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub x: f64,
    pub metric: String,
    pub value: f64,
    /// Shots per cell.
    pub shots: u64,
    pub accepted_fraction: Option<f64>,
    pub seed: u64,
    pub backend: String,
}

impl ReportRow {
    pub fn new(x: f64, metric: impl Into<String>, value: f64) -> Self {
        Self {
            x,
            metric: metric.into(),
            value,
            shots: 0,
            accepted_fraction: None,
            seed: 0,
            backend: String::new(),
        }
    }

    pub fn with_run(mut self, shots: u64, seed: u64, backend: impl Into<String>) -> Self {
        self.shots = shots;
        self.seed = seed;
        self.backend = backend.into();
        self
    }

    pub fn with_accepted(mut self, fraction: f64) -> Self {
        self.accepted_fraction = Some(fraction);
        self
    }

    fn fields(&self) -> [String; 7] {
        [
            format!("{:.3}", self.x),
            self.metric.clone(),
            format!("{:.9}", self.value),
            self.shots.to_string(),
            self.accepted_fraction
                .map(|f| format!("{f:.6}"))
                .unwrap_or_default(),
            self.seed.to_string(),
            self.backend.clone(),
        ]
    }
}

/// Writes a header and one line per row. Columns and number formatting are
/// fixed so identical rows give identical bytes.
pub fn emit_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no report rows".into()));
    }
    if let Some(r) = rows
        .iter()
        .find(|r| !r.value.is_finite() || !r.x.is_finite())
    {
        return Err(Error::InvalidParameter(format!(
            "non-finite {} = {} at x = {}",
            r.metric, r.value, r.x
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.fields()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ReportRow]) -> Result<String> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn write_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    let text = csv_string(rows)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Mutual information per point.
pub fn sdc_rows(points: &[SdcPoint], shots: u64, seed: u64, backend: &str) -> Vec<ReportRow> {
    points
        .iter()
        .map(|p| {
            if p.mutual_information.clipped {
                log::info!("mutual information clipped to 0 at x = {}", p.point.x);
            }
            ReportRow::new(p.point.x, "mutual_information", p.mutual_information.bits)
                .with_run(shots, seed, backend)
        })
        .collect()
}

/// Per-cell QBER (with accepted fraction), then q, l_sec and l_sec/N.
pub fn bb84_rows(points: &[Bb84Point], shots: u64, seed: u64, backend: &str) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for p in points {
        let x = p.point.x;
        for (label, cell) in &p.cells {
            rows.push(
                ReportRow::new(x, format!("qber_{label}"), cell.qber)
                    .with_run(shots, seed, backend)
                    .with_accepted(cell.accepted_fraction),
            );
        }
        for (metric, value) in [
            ("q", p.q),
            ("l_sec", p.l_sec),
            ("l_sec_per_n", p.l_sec_per_n),
        ] {
            rows.push(
                ReportRow::new(x, metric, value)
                    .with_run(shots, seed, backend)
                    .with_accepted(p.accepted_fraction),
            );
        }
    }
    rows
}

/// Groups rows by metric, keeping sweep order.
pub fn by_metric(rows: &[ReportRow]) -> BTreeMap<&str, Vec<(f64, f64)>> {
    let mut out: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        out.entry(r.metric.as_str())
            .or_default()
            .push((r.x, r.value));
    }
    out
}
