//! Published measurement tables, transcribed verbatim.
//!
//! Superdense-coding tables hold one 4x4 output distribution per sweep
//! point; rows are Alice's inputs and columns Bob's outputs, both in the
//! order 00, 10, 01, 11. BB84 tables hold one error rate per (basis, bit)
//! cell in the order +0, x0, +1, x1.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const FIXTURE_IDS: [&str; 7] = [
    "table1", "table2", "table3", "table4", "table5", "table6", "table7",
];

/// Published rows sum to one only up to rounding of the printed digits.
pub const ROW_SUM_TOL: f64 = 0.003;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureAxis {
    Swaps,
    /// Delay in us.
    TimeUs,
}

impl FixtureAxis {
    pub fn label(&self) -> &'static str {
        match self {
            FixtureAxis::Swaps => "swaps",
            FixtureAxis::TimeUs => "time_us",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdcBlock {
    pub x: f64,
    pub rows: [[f64; 4]; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Column {
    pub x: f64,
    pub rates: [f64; 4],
    /// Fraction of runs kept by post-selection, when published.
    pub accepted: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixtureData {
    Sdc(Vec<SdcBlock>),
    Bb84(Vec<Bb84Column>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureTable {
    pub id: &'static str,
    pub description: &'static str,
    pub device: &'static str,
    pub measured: &'static str,
    pub shots_per_cell: u64,
    pub axis: FixtureAxis,
    pub data: FixtureData,
    pub note: Option<&'static str>,
}

impl FixtureTable {
    pub fn axis_values(&self) -> Vec<f64> {
        match &self.data {
            FixtureData::Sdc(b) => b.iter().map(|b| b.x).collect(),
            FixtureData::Bb84(c) => c.iter().map(|c| c.x).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            FixtureData::Sdc(b) => b.len(),
            FixtureData::Bb84(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const SDC_DATES: &str = "2018-04-25 to 2018-05-21";
const BB84_DATES: &str = "2018-04-04 to 2018-05-21";

const TABLE1: [[[f64; 4]; 4]; 8] = [
    [
        [0.940, 0.022, 0.031, 0.008],
        [0.117, 0.815, 0.029, 0.039],
        [0.121, 0.015, 0.840, 0.024],
        [0.031, 0.114, 0.115, 0.739],
    ],
    [
        [0.684, 0.078, 0.172, 0.067],
        [0.154, 0.551, 0.094, 0.201],
        [0.250, 0.063, 0.617, 0.069],
        [0.113, 0.265, 0.136, 0.486],
    ],
    [
        [0.595, 0.127, 0.164, 0.114],
        [0.190, 0.454, 0.143, 0.213],
        [0.263, 0.117, 0.511, 0.109],
        [0.177, 0.256, 0.173, 0.393],
    ],
    [
        [0.510, 0.145, 0.219, 0.126],
        [0.240, 0.430, 0.166, 0.164],
        [0.324, 0.151, 0.396, 0.129],
        [0.194, 0.227, 0.193, 0.386],
    ],
    [
        [0.406, 0.172, 0.276, 0.147],
        [0.253, 0.370, 0.184, 0.193],
        [0.326, 0.166, 0.366, 0.142],
        [0.212, 0.249, 0.205, 0.334],
    ],
    [
        [0.374, 0.188, 0.287, 0.151],
        [0.257, 0.314, 0.209, 0.220],
        [0.353, 0.176, 0.313, 0.157],
        [0.250, 0.264, 0.218, 0.268],
    ],
    [
        [0.357, 0.197, 0.282, 0.163],
        [0.264, 0.293, 0.212, 0.231],
        [0.360, 0.179, 0.297, 0.164],
        [0.257, 0.268, 0.225, 0.250],
    ],
    [
        [0.357, 0.197, 0.283, 0.164],
        [0.264, 0.293, 0.212, 0.231],
        [0.360, 0.180, 0.297, 0.164],
        [0.257, 0.268, 0.225, 0.250],
    ],
];

const TABLE2: [[[f64; 4]; 4]; 6] = [
    [
        [0.950, 0.018, 0.024, 0.008],
        [0.083, 0.885, 0.010, 0.022],
        [0.083, 0.007, 0.893, 0.016],
        [0.014, 0.070, 0.083, 0.833],
    ],
    [
        [0.889, 0.029, 0.061, 0.020],
        [0.093, 0.824, 0.024, 0.059],
        [0.128, 0.021, 0.822, 0.028],
        [0.032, 0.121, 0.091, 0.756],
    ],
    [
        [0.792, 0.044, 0.137, 0.028],
        [0.094, 0.731, 0.044, 0.131],
        [0.195, 0.037, 0.729, 0.040],
        [0.054, 0.209, 0.089, 0.649],
    ],
    [
        [0.679, 0.056, 0.226, 0.039],
        [0.102, 0.619, 0.059, 0.220],
        [0.286, 0.049, 0.616, 0.050],
        [0.076, 0.319, 0.092, 0.514],
    ],
    [
        [0.565, 0.061, 0.324, 0.050],
        [0.101, 0.510, 0.074, 0.315],
        [0.386, 0.053, 0.501, 0.061],
        [0.089, 0.407, 0.094, 0.410],
    ],
    [
        [0.496, 0.065, 0.386, 0.054],
        [0.105, 0.447, 0.078, 0.370],
        [0.459, 0.063, 0.417, 0.061],
        [0.094, 0.456, 0.093, 0.357],
    ],
];

const TABLE3: [[[f64; 4]; 4]; 6] = [
    [
        [0.945, 0.011, 0.043, 0.001],
        [0.144, 0.775, 0.030, 0.051],
        [0.156, 0.026, 0.765, 0.053],
        [0.044, 0.135, 0.128, 0.694],
    ],
    [
        [0.794, 0.090, 0.074, 0.042],
        [0.156, 0.728, 0.054, 0.061],
        [0.163, 0.057, 0.706, 0.074],
        [0.079, 0.147, 0.135, 0.638],
    ],
    [
        [0.699, 0.117, 0.118, 0.066],
        [0.170, 0.641, 0.082, 0.107],
        [0.204, 0.084, 0.617, 0.095],
        [0.109, 0.183, 0.151, 0.556],
    ],
    [
        [0.620, 0.118, 0.179, 0.082],
        [0.170, 0.574, 0.098, 0.159],
        [0.269, 0.101, 0.528, 0.102],
        [0.131, 0.234, 0.158, 0.477],
    ],
    [
        [0.531, 0.129, 0.244, 0.096],
        [0.181, 0.485, 0.120, 0.215],
        [0.339, 0.112, 0.438, 0.110],
        [0.149, 0.287, 0.156, 0.408],
    ],
    [
        [0.461, 0.133, 0.307, 0.099],
        [0.180, 0.421, 0.128, 0.272],
        [0.399, 0.122, 0.367, 0.112],
        [0.169, 0.348, 0.150, 0.333],
    ],
];

const TABLE4: [[[f64; 4]; 4]; 6] = [
    [
        [0.907, 0.039, 0.040, 0.013],
        [0.139, 0.801, 0.023, 0.036],
        [0.156, 0.027, 0.771, 0.046],
        [0.033, 0.119, 0.117, 0.731],
    ],
    [
        [0.862, 0.054, 0.056, 0.028],
        [0.150, 0.777, 0.033, 0.040],
        [0.147, 0.055, 0.722, 0.075],
        [0.051, 0.112, 0.130, 0.707],
    ],
    [
        [0.817, 0.069, 0.076, 0.039],
        [0.163, 0.737, 0.050, 0.051],
        [0.159, 0.085, 0.657, 0.099],
        [0.068, 0.125, 0.137, 0.670],
    ],
    [
        [0.760, 0.081, 0.102, 0.057],
        [0.169, 0.710, 0.063, 0.058],
        [0.181, 0.108, 0.602, 0.109],
        [0.084, 0.129, 0.144, 0.643],
    ],
    [
        [0.709, 0.092, 0.131, 0.068],
        [0.180, 0.674, 0.078, 0.068],
        [0.205, 0.119, 0.564, 0.111],
        [0.093, 0.140, 0.159, 0.608],
    ],
    [
        [0.656, 0.107, 0.160, 0.076],
        [0.181, 0.647, 0.088, 0.084],
        [0.215, 0.125, 0.541, 0.119],
        [0.110, 0.133, 0.156, 0.601],
    ],
];

const TABLE5: [[f64; 6]; 4] = [
    [0.008, 0.011, 0.009, 0.010, 0.008, 0.005],
    [0.011, 0.027, 0.052, 0.081, 0.098, 0.120],
    [0.051, 0.076, 0.095, 0.119, 0.177, 0.251],
    [0.050, 0.071, 0.091, 0.122, 0.176, 0.260],
];

const TABLE6: [[f64; 4]; 4] = [
    [0.009, 0.036, 0.062, 0.078],
    [0.009, 0.043, 0.077, 0.084],
    [0.061, 0.092, 0.125, 0.184],
    [0.053, 0.089, 0.133, 0.175],
];

const TABLE7: [[f64; 4]; 4] = [
    [0.003, 0.028, 0.048, 0.076],
    [0.024, 0.053, 0.081, 0.111],
    [0.002, 0.029, 0.059, 0.094],
    [0.021, 0.050, 0.089, 0.139],
];

const TABLE7_ACCEPTED: [[f64; 4]; 4] = [
    [0.90, 0.85, 0.79, 0.75],
    [0.86, 0.84, 0.81, 0.78],
    [0.89, 0.82, 0.77, 0.71],
    [0.83, 0.76, 0.70, 0.63],
];

fn sdc_blocks(xs: &[f64], blocks: &[[[f64; 4]; 4]]) -> FixtureData {
    FixtureData::Sdc(
        xs.iter()
            .zip(blocks)
            .map(|(&x, rows)| SdcBlock { x, rows: *rows })
            .collect(),
    )
}

fn bb84_columns<const N: usize>(
    xs: &[f64; N],
    rates: &[[f64; N]; 4],
    accepted: Option<&[[f64; N]; 4]>,
) -> FixtureData {
    FixtureData::Bb84(
        (0..N)
            .map(|j| Bb84Column {
                x: xs[j],
                rates: [0, 1, 2, 3].map(|i| rates[i][j]),
                accepted: accepted.map(|a| [0, 1, 2, 3].map(|i| a[i][j])),
            })
            .collect(),
    )
}

pub fn load_fixture(id: &str) -> Result<FixtureTable> {
    let swaps8 = [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0];
    let swaps4 = [0.0, 2.0, 4.0, 6.0];
    let qx5_times = [0.0, 0.9, 1.8, 2.8, 3.7, 4.6];
    let table = match id {
        "table1" => FixtureTable {
            id: "table1",
            description: "superdense coding output distributions vs SWAPs along the upper row",
            device: "ibmqx5",
            measured: SDC_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::Swaps,
            data: sdc_blocks(&swaps8, &TABLE1),
            note: Some(
                "12- and 14-SWAP blocks are printed almost identically (three entries differ \
                 by 0.001); transcribed as printed, possibly a duplicated block",
            ),
        },
        "table2" => FixtureTable {
            id: "table2",
            description: "superdense coding output distributions vs delay",
            device: "ibmqx4",
            measured: SDC_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::TimeUs,
            data: sdc_blocks(&[0.0, 1.3, 2.5, 3.8, 5.1, 6.0], &TABLE2),
            note: None,
        },
        "table3" => FixtureTable {
            id: "table3",
            description: "superdense coding output distributions vs delay, no phase correction",
            device: "ibmqx5",
            measured: SDC_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::TimeUs,
            data: sdc_blocks(&qx5_times, &TABLE3),
            note: None,
        },
        "table4" => FixtureTable {
            id: "table4",
            description: "superdense coding output distributions vs delay, phase corrected",
            device: "ibmqx5",
            measured: SDC_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::TimeUs,
            data: sdc_blocks(&qx5_times, &TABLE4),
            note: None,
        },
        "table5" => FixtureTable {
            id: "table5",
            description: "BB84 error rates vs delay",
            device: "ibmqx4",
            measured: BB84_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::TimeUs,
            data: bb84_columns(&[0.0, 1.2, 2.4, 3.6, 4.8, 6.0], &TABLE5, None),
            note: None,
        },
        "table6" => FixtureTable {
            id: "table6",
            description: "BB84 error rates vs SWAPs, single-qubit encoding",
            device: "ibmqx4",
            measured: BB84_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::Swaps,
            data: bb84_columns(&swaps4, &TABLE6, None),
            note: None,
        },
        "table7" => FixtureTable {
            id: "table7",
            description: "BB84 error rates vs SWAPs, dual-rail encoding with post-selection",
            device: "ibmqx4",
            measured: BB84_DATES,
            shots_per_cell: 8192,
            axis: FixtureAxis::Swaps,
            data: bb84_columns(&swaps4, &TABLE7, Some(&TABLE7_ACCEPTED)),
            note: Some("accepted fractions are printed as whole percentages"),
        },
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(table)
}

/// Canonical text rendering of every fixture number, in table order.
pub fn canonical_rendering() -> String {
    let mut out = String::new();
    for id in FIXTURE_IDS {
        let t = load_fixture(id).expect("bundled fixture");
        writeln!(out, "{id} {}", t.axis.label()).unwrap();
        match &t.data {
            FixtureData::Sdc(blocks) => {
                for b in blocks {
                    writeln!(out, "x={:.1}", b.x).unwrap();
                    for r in &b.rows {
                        writeln!(out, "{:.3} {:.3} {:.3} {:.3}", r[0], r[1], r[2], r[3]).unwrap();
                    }
                }
            }
            FixtureData::Bb84(cols) => {
                for c in cols {
                    write!(out, "x={:.1}", c.x).unwrap();
                    for (i, r) in c.rates.iter().enumerate() {
                        write!(out, " {r:.3}").unwrap();
                        if let Some(a) = c.accepted {
                            write!(out, "/{:.2}", a[i]).unwrap();
                        }
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}

/// SHA-256 of [`canonical_rendering`], lowercase hex.
pub fn fixture_checksum() -> String {
    Sha256::digest(canonical_rendering().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
