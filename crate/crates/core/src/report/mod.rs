//! Published fixtures, counts ingestion and CSV reports.

mod counts;
mod fixtures;
mod rows;

pub use counts::{emit_counts, parse_counts, CountsDocument};
pub use fixtures::{
    canonical_rendering, fixture_checksum, load_fixture, Bb84Column, FixtureAxis, FixtureData,
    FixtureTable, SdcBlock, FIXTURE_IDS, ROW_SUM_TOL,
};
pub use rows::{
    bb84_rows, by_metric, csv_string, emit_csv, sdc_rows, write_csv, ReportRow, CSV_HEADER,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metrics::{
    mutual_information, secret_key_length, Distribution, JointDistribution, KeyRateInput,
    MutualInformation,
};
use crate::protocols::{
    score_bb84_point, score_sdc_point, Aggregation, Protocol, SweepPoint, BB84_CELLS, SDC_INPUTS,
};
use crate::simcore::CellOutcome;

pub const FIXTURE_BACKEND: &str = "fixture";
pub const COUNTS_BACKEND: &str = "counts";

/// Mutual information of a published block, each row renormalized first.
pub fn replay_sdc_block(block: &SdcBlock) -> Result<MutualInformation> {
    let mut conditionals = BTreeMap::new();
    for (label, row) in SDC_INPUTS.iter().zip(&block.rows) {
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            log::debug!(
                "x = {}, input {label}: row sums to {sum:.3}, renormalized",
                block.x
            );
        }
        let weights = SDC_INPUTS
            .iter()
            .map(|b| b.to_string())
            .zip(row.iter().copied())
            .collect();
        conditionals.insert(label.to_string(), Distribution::normalized(weights)?);
    }
    Ok(mutual_information(&JointDistribution::uniform_inputs(
        &conditionals,
    )?))
}

/// Aggregate q (mean over cells), l_sec and l_sec/N of a published column.
/// N counts accepted runs when accepted fractions are published.
pub fn replay_bb84_column(col: &Bb84Column, shots_per_cell: u64) -> Result<(f64, f64, f64)> {
    let q = col.rates.iter().sum::<f64>() / col.rates.len() as f64;
    let n: f64 = match col.accepted {
        Some(a) => a.iter().map(|f| f * shots_per_cell as f64).sum(),
        None => shots_per_cell as f64 * col.rates.len() as f64,
    };
    let l_sec = secret_key_length(&KeyRateInput::new(n, q))?;
    Ok((q, l_sec, l_sec / n))
}

/// Metric rows computed from a published table.
pub fn replay_fixture(id: &str) -> Result<Vec<ReportRow>> {
    let table = load_fixture(id)?;
    let shots = table.shots_per_cell;
    let run = |r: ReportRow| r.with_run(shots, 0, FIXTURE_BACKEND);
    let mut rows = Vec::new();
    match &table.data {
        FixtureData::Sdc(blocks) => {
            for b in blocks {
                let mi = replay_sdc_block(b)?;
                rows.push(run(ReportRow::new(b.x, "mutual_information", mi.bits)));
            }
        }
        FixtureData::Bb84(cols) => {
            for c in cols {
                let mut cells: Vec<(&str, f64, Option<f64>)> = BB84_CELLS
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (*l, c.rates[i], c.accepted.map(|a| a[i])))
                    .collect();
                cells.sort_by_key(|(l, ..)| *l);
                for (label, rate, acc) in cells {
                    let row = run(ReportRow::new(c.x, format!("qber_{label}"), rate));
                    rows.push(match acc {
                        Some(a) => row.with_accepted(a),
                        None => row,
                    });
                }
                let (q, l_sec, per_n) = replay_bb84_column(c, shots)?;
                let mean_acc = c.accepted.map(|a| a.iter().sum::<f64>() / a.len() as f64);
                for (metric, value) in [("q", q), ("l_sec", l_sec), ("l_sec_per_n", per_n)] {
                    let row = run(ReportRow::new(c.x, metric, value));
                    rows.push(match mean_acc {
                        Some(a) => row.with_accepted(a),
                        None => row,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Scores a counts document with the same rows as a simulated run.
pub fn score_counts(doc: &CountsDocument, protocol: Option<Protocol>) -> Result<Vec<ReportRow>> {
    let protocol = protocol
        .or(doc.protocol)
        .ok_or_else(|| Error::Schema("no protocol given or declared in the document".into()))?;
    let width = match protocol {
        Protocol::Bb84Single => 1,
        Protocol::Sdc | Protocol::Bb84Dualrail => 2,
    };
    let mut outcomes = BTreeMap::new();
    for (label, table) in &doc.cells {
        if let Some(k) = table.counts().keys().find(|k| k.len() != width) {
            return Err(Error::Schema(format!(
                "cell `{label}`: outcome `{k}` should have {width} bit(s)"
            )));
        }
        let outcome = CellOutcome {
            distribution: Distribution::from_counts(table)?,
            counts: Some(table.clone()),
            shots: table.shots(),
        };
        outcomes.insert(label.clone(), outcome);
    }
    let point = SweepPoint {
        x: doc.x.unwrap_or(0.0),
        swaps: 0,
        delay_gates: 0,
    };
    let shots = doc.cells.values().map(|t| t.shots()).max().unwrap_or(0);
    Ok(match protocol {
        Protocol::Sdc => sdc_rows(
            &[score_sdc_point(point, outcomes)?],
            shots,
            0,
            COUNTS_BACKEND,
        ),
        _ => bb84_rows(
            &[score_bb84_point(
                point,
                protocol,
                Aggregation::Mean,
                outcomes,
            )?],
            shots,
            0,
            COUNTS_BACKEND,
        ),
    })
}
