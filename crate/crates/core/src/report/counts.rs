//! Counts documents: measured bitstring counts per experiment cell.
//!
//! ```json
//! {
//!   "experiment": "sdc-upper-row",
//!   "protocol": "sdc",
//!   "x": 2.0,
//!   "cells": [
//!     { "label": "00", "shots": 8192, "counts": { "00": 7700, "10": 180, "01": 250, "11": 62 } }
//!   ]
//! }
//! ```
//!
//! `protocol` and `x` are optional. Counts in a cell must sum to its shots;
//! bitstrings are `0`/`1` characters of one common width.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::CountsTable;
use crate::protocols::Protocol;

#[derive(Debug, Clone, PartialEq)]
pub struct CountsDocument {
    pub experiment: String,
    pub protocol: Option<Protocol>,
    pub x: Option<f64>,
    pub cells: BTreeMap<String, CountsTable>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    protocol: Option<Protocol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    cells: Vec<RawCell>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    label: String,
    shots: u64,
    counts: BTreeMap<String, i64>,
}

fn check_cell(cell: RawCell) -> Result<(String, CountsTable)> {
    let bad = |msg: String| Error::Schema(format!("cell `{}`: {msg}", cell.label));
    if cell.shots == 0 {
        return Err(bad("shots must be positive".into()));
    }
    let mut width = None;
    let mut counts = BTreeMap::new();
    for (key, &n) in &cell.counts {
        if key.is_empty() || !key.chars().all(|c| c == '0' || c == '1') {
            return Err(bad(format!("`{key}` is not a bitstring")));
        }
        if *width.get_or_insert(key.len()) != key.len() {
            return Err(bad(format!(
                "`{key}` differs in width from the other outcomes"
            )));
        }
        let n = u64::try_from(n).map_err(|_| bad(format!("negative count {n} for `{key}`")))?;
        counts.insert(key.clone(), n);
    }
    let total: u64 = counts.values().sum();
    if total != cell.shots {
        return Err(bad(format!(
            "counts sum to {total}, declared shots {}",
            cell.shots
        )));
    }
    let table = CountsTable::with_shots(counts, cell.shots)?;
    Ok((cell.label, table))
}

pub fn parse_counts(text: &str) -> Result<CountsDocument> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if raw.cells.is_empty() {
        return Err(Error::Schema("document has no cells".into()));
    }
    if let Some(x) = raw.x {
        if !x.is_finite() {
            return Err(Error::Schema(format!("x = {x} is not finite")));
        }
    }
    let mut cells = BTreeMap::new();
    for cell in raw.cells {
        let (label, table) = check_cell(cell)?;
        if cells.insert(label.clone(), table).is_some() {
            return Err(Error::Schema(format!("duplicate cell `{label}`")));
        }
    }
    Ok(CountsDocument {
        experiment: raw.experiment,
        protocol: raw.protocol,
        x: raw.x,
        cells,
    })
}

pub fn emit_counts(doc: &CountsDocument) -> String {
    let raw = RawDocument {
        experiment: doc.experiment.clone(),
        protocol: doc.protocol,
        x: doc.x,
        cells: doc
            .cells
            .iter()
            .map(|(label, t)| RawCell {
                label: label.clone(),
                shots: t.shots(),
                counts: t
                    .counts()
                    .iter()
                    .map(|(k, &n)| (k.clone(), n as i64))
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("counts document serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_document() {
        let doc = parse_counts(
            r#"{"experiment": "bell", "cells": [{"label": "00", "shots": 8192, "counts": {"00": 8192}}]}"#,
        )
        .unwrap();
        assert_eq!(doc.cells.len(), 1);
        assert_eq!(doc.cells["00"].get("00"), 8192);
        assert_eq!(doc.protocol, None);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            r#"{"experiment": "e", "cells": [{"label": "a", "shots": 10, "counts": {"0": 4, "1": 5}}]}"#,
            r#"{"experiment": "e", "cells": [{"label": "a", "shots": 1, "counts": {"0": -1, "1": 2}}]}"#,
            r#"{"experiment": "e", "cells": [{"label": "a", "shots": 1, "counts": {"0": 1}}, {"label": "a", "shots": 1, "counts": {"1": 1}}]}"#,
            r#"{"experiment": "e", "cells": [{"label": "a", "shots": 2, "counts": {"0": 1, "10": 1}}]}"#,
            r#"{"experiment": "e", "cells": [{"label": "a", "shots": 1, "counts": {"2": 1}}]}"#,
            r#"{"experiment": "e", "cells": []}"#,
            r#"{"experiment": "e", "cells": [{"label": "a", "shots": 1, "counts": {"1": 1}}], "extra": 1}"#,
            r#"{"experiment": "e", "protocol": "ghz", "cells": [{"label": "a", "shots": 1, "counts": {"1": 1}}]}"#,
        ];
        for text in bad {
            assert!(
                matches!(parse_counts(text), Err(Error::Schema(_))),
                "{text}"
            );
        }
    }

    fn cell_strategy() -> impl Strategy<Value = CountsTable> {
        (1usize..4)
            .prop_flat_map(|w| {
                prop::collection::btree_map(
                    prop::collection::vec(prop::bool::ANY, w).prop_map(|b| {
                        b.iter()
                            .map(|&x| if x { '1' } else { '0' })
                            .collect::<String>()
                    }),
                    0u64..100_000,
                    1..6,
                )
            })
            .prop_filter("needs shots", |m| m.values().sum::<u64>() > 0)
            .prop_map(CountsTable::new)
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(
            cells in prop::collection::btree_map("[a-z0-9+]{1,3}", cell_strategy(), 1..5),
            x in prop::option::of(-1e3f64..1e3),
            sdc in prop::bool::ANY,
        ) {
            let doc = CountsDocument {
                experiment: "prop".into(),
                protocol: sdc.then_some(Protocol::Sdc),
                x,
                cells,
            };
            prop_assert_eq!(parse_counts(&emit_counts(&doc)).unwrap(), doc);
        }
    }
}
