//! Entropy-based scoring: Shannon and conditional entropy, mutual
//! information, QBER and secret-key length.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on probability sums.
pub const PROB_TOL: f64 = 1e-9;
/// Reconciliation efficiency used for key lengths.
pub const F_EC: f64 = 1.15;

fn xlog2x(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn entropy<'a>(probs: impl IntoIterator<Item = &'a f64>) -> f64 {
    -probs.into_iter().map(|&p| xlog2x(p)).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Distribution {
    probs: BTreeMap<String, f64>,
}

impl Distribution {
    pub fn new(probs: BTreeMap<String, f64>) -> Result<Self> {
        if let Some((k, p)) = probs.iter().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("P({k}) = {p}")));
        }
        let sum: f64 = probs.values().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self { probs })
    }

    /// Scales non-negative weights to sum to one.
    pub fn normalized(weights: BTreeMap<String, f64>) -> Result<Self> {
        let sum: f64 = weights.values().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Self::new(weights.into_iter().map(|(k, w)| (k, w / sum)).collect())
    }

    pub fn point(outcome: &str) -> Self {
        Self {
            probs: BTreeMap::from([(outcome.to_string(), 1.0)]),
        }
    }

    pub fn from_counts(counts: &CountsTable) -> Result<Self> {
        let accepted = counts.accepted();
        if accepted == 0 {
            return Err(Error::NoAcceptedShots);
        }
        Self::new(
            counts
                .counts()
                .iter()
                .map(|(k, &n)| (k.clone(), n as f64 / accepted as f64))
                .collect(),
        )
    }

    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }

    pub fn get(&self, outcome: &str) -> f64 {
        self.probs.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn total_variation(&self, other: &Distribution) -> f64 {
        let keys: std::collections::BTreeSet<&String> =
            self.probs.keys().chain(other.probs.keys()).collect();
        0.5 * keys
            .into_iter()
            .map(|k| (self.get(k) - other.get(k)).abs())
            .sum::<f64>()
    }

    /// Keeps only `outcomes` and renormalizes. Returns the kept mass too.
    pub fn restrict(&self, outcomes: &[&str]) -> Result<(Distribution, f64)> {
        let kept: BTreeMap<String, f64> = outcomes
            .iter()
            .map(|o| (o.to_string(), self.get(o)))
            .collect();
        let mass: f64 = kept.values().sum();
        if mass <= 0.0 {
            return Err(Error::NoAcceptedShots);
        }
        Ok((Distribution::normalized(kept)?, mass))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    counts: BTreeMap<String, u64>,
    shots: u64,
}

impl CountsTable {
    /// A raw table; `shots` is the sum of the counts.
    pub fn new(counts: BTreeMap<String, u64>) -> Self {
        let shots = counts.values().sum();
        Self { counts, shots }
    }

    /// A table carrying more shots than counted, as after post-selection.
    pub fn with_shots(counts: BTreeMap<String, u64>, shots: u64) -> Result<Self> {
        let accepted: u64 = counts.values().sum();
        if accepted > shots {
            return Err(Error::InvalidParameter(format!(
                "{accepted} counts exceed {shots} shots"
            )));
        }
        Ok(Self { counts, shots })
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn accepted(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn accepted_fraction(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.accepted() as f64 / self.shots as f64
        }
    }
}

/// `P(a, b)` stored as rows `a -> (b -> p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: BTreeMap<String, BTreeMap<String, f64>>,
}

impl JointDistribution {
    pub fn new(rows: BTreeMap<String, BTreeMap<String, f64>>) -> Result<Self> {
        let mut sum = 0.0;
        for (a, row) in &rows {
            for (b, p) in row {
                if !(p.is_finite() && *p >= 0.0) {
                    return Err(Error::InvalidDistribution(format!("P({a}, {b}) = {p}")));
                }
                sum += p;
            }
        }
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("joint sums to {sum}")));
        }
        Ok(Self { rows })
    }

    /// Uniform inputs, each row given by a conditional output distribution.
    pub fn uniform_inputs(conditionals: &BTreeMap<String, Distribution>) -> Result<Self> {
        if conditionals.is_empty() {
            return Err(Error::EmptySelection);
        }
        let w = 1.0 / conditionals.len() as f64;
        Self::new(
            conditionals
                .iter()
                .map(|(a, d)| {
                    (
                        a.clone(),
                        d.probs().iter().map(|(b, p)| (b.clone(), w * p)).collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> &BTreeMap<String, BTreeMap<String, f64>> {
        &self.rows
    }

    pub fn input_marginal(&self) -> BTreeMap<String, f64> {
        self.rows
            .iter()
            .map(|(a, row)| (a.clone(), row.values().sum()))
            .collect()
    }

    pub fn output_marginal(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for row in self.rows.values() {
            for (b, p) in row {
                *m.entry(b.clone()).or_insert(0.0) += p;
            }
        }
        m
    }
}

pub fn shannon_entropy(d: &Distribution) -> f64 {
    entropy(d.probs().values())
}

/// `H(B|A) = sum_a P(a) H(B | A = a)`; empty rows contribute nothing.
pub fn conditional_entropy(j: &JointDistribution) -> f64 {
    j.rows
        .values()
        .map(|row| {
            let pa: f64 = row.values().sum();
            if pa > 0.0 {
                pa * entropy(row.values().map(|p| p / pa).collect::<Vec<_>>().iter())
            } else {
                0.0
            }
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    pub bits: f64,
    /// Set when a rounding-level negative value was clipped to zero.
    pub clipped: bool,
}

/// `I(A, B) = H(B) - H(B|A)`.
pub fn mutual_information(j: &JointDistribution) -> MutualInformation {
    let raw = entropy(j.output_marginal().values()) - conditional_entropy(j);
    if raw < 0.0 {
        if raw < -PROB_TOL {
            log::warn!("mutual information {raw:e} below rounding tolerance");
        }
        MutualInformation {
            bits: 0.0,
            clipped: true,
        }
    } else {
        MutualInformation {
            bits: raw,
            clipped: false,
        }
    }
}

/// Joint distribution with uniform inputs from per-input counts. Every label
/// in `inputs` must be present with at least one accepted shot.
pub fn counts_to_joint(
    per_input: &BTreeMap<String, CountsTable>,
    inputs: &[&str],
) -> Result<JointDistribution> {
    let rows = inputs
        .iter()
        .map(|a| {
            let counts = per_input
                .get(*a)
                .ok_or_else(|| Error::MissingCell(a.to_string()))?;
            Ok((a.to_string(), Distribution::from_counts(counts)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    JointDistribution::uniform_inputs(&rows)
}

/// Fraction of single-bit outcomes differing from `expected`.
pub fn qber(counts: &CountsTable, expected: u8) -> Result<f64> {
    if expected > 1 {
        return Err(Error::InvalidParameter(format!("expected bit {expected}")));
    }
    let accepted = counts.accepted();
    if accepted == 0 {
        return Err(Error::NoAcceptedShots);
    }
    if let Some(k) = counts.counts().keys().find(|k| *k != "0" && *k != "1") {
        return Err(Error::InvalidParameter(format!(
            "outcome `{k}` is not a single bit"
        )));
    }
    let wrong = counts.get(if expected == 0 { "1" } else { "0" });
    Ok(wrong as f64 / accepted as f64)
}

pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidProbability {
            name: "q",
            value: q,
        });
    }
    Ok(-xlog2x(q) - xlog2x(1.0 - q))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRateInput {
    /// Sifted key length.
    pub n: f64,
    pub q: f64,
    pub f_ec: f64,
}

impl KeyRateInput {
    pub fn new(n: f64, q: f64) -> Self {
        Self { n, q, f_ec: F_EC }
    }
}

/// `N (1 - h(q)) - N f_ec h(q)`; negative when no secure key can be
/// distilled.
pub fn secret_key_length(input: &KeyRateInput) -> Result<f64> {
    if !(input.n >= 0.0 && input.n.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "key length N = {}",
            input.n
        )));
    }
    if !(0.0..=0.5).contains(&input.q) {
        return Err(Error::InvalidProbability {
            name: "q",
            value: input.q,
        });
    }
    if input.f_ec < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "f_ec = {} < 1",
            input.f_ec
        )));
    }
    let h = binary_entropy(input.q)?;
    Ok(input.n * (1.0 - (1.0 + input.f_ec) * h))
}
