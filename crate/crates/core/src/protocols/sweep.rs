//! Sweep grids written as `start..end:step`.
//!
//! SWAP sweeps take plain integers (`0..14:2`, default step 2). Delay sweeps
//! take times with an optional `us` or `ns` suffix (`0..6us:1.26us`, default
//! step 1.26 us); a bare number borrows the unit of another bound, else us.
//! A single value (`4`, `2.5us`) is a one-point sweep.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SWAP_STEP: usize = 2;
pub const DEFAULT_DELAY_STEP_NS: f64 = 1260.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Swaps,
    Delay,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Swaps => "swaps",
            SweepAxis::Delay => "delay",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Swaps(Vec<usize>),
    /// Delay times in ns.
    Delay(Vec<f64>),
}

impl Sweep {
    pub fn parse(axis: SweepAxis, text: &str) -> Result<Sweep> {
        match axis {
            SweepAxis::Swaps => parse_swaps(text).map(Sweep::Swaps),
            SweepAxis::Delay => parse_delays(text).map(Sweep::Delay),
        }
    }

    pub fn axis(&self) -> SweepAxis {
        match self {
            Sweep::Swaps(_) => SweepAxis::Swaps,
            Sweep::Delay(_) => SweepAxis::Delay,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Sweep::Swaps(v) => v.len(),
            Sweep::Delay(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn err(text: &str, col: usize, msg: &str) -> Error {
    Error::InvalidParameter(format!("sweep `{text}`, column {}: {msg}", col + 1))
}

/// Splits `text` into (start, end, step) slices with their byte offsets.
fn split(text: &str) -> Result<[(usize, Option<&str>); 3]> {
    let (range, step) = match text.find(':') {
        Some(i) => (&text[..i], Some((i + 1, &text[i + 1..]))),
        None => (text, None),
    };
    let (start, end) = match range.find("..") {
        Some(i) => ((0, &range[..i]), Some((i + 2, &range[i + 2..]))),
        None => {
            if let Some((col, _)) = step {
                return Err(err(text, col - 1, "step given without a range"));
            }
            ((0, range), None)
        }
    };
    let parts = [Some(start), end, step];
    for (col, s) in parts.iter().flatten() {
        if s.trim().is_empty() {
            return Err(err(text, *col, "missing value"));
        }
    }
    Ok(parts.map(|p| match p {
        Some((col, s)) => (col, Some(s)),
        None => (0, None),
    }))
}

fn parse_swaps(text: &str) -> Result<Vec<usize>> {
    let [(c0, start), (c1, end), (c2, step)] = split(text)?;
    let num = |col: usize, s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| err(text, col, &format!("`{s}` is not a SWAP count")))
    };
    let start = num(c0, start.expect("start"))?;
    let end = match end {
        Some(s) => num(c1, s)?,
        None => return Ok(vec![start]),
    };
    let step = match step {
        Some(s) => num(c2, s)?,
        None => DEFAULT_SWAP_STEP,
    };
    if step == 0 {
        return Err(err(text, c2, "step must be positive"));
    }
    if end < start {
        return Err(err(text, c1, "end is before start"));
    }
    Ok((start..=end).step_by(step).collect())
}

#[derive(Clone, Copy, PartialEq)]
enum Unit {
    Us,
    Ns,
}

fn parse_time(text: &str, col: usize, s: &str) -> Result<(f64, Option<Unit>)> {
    let s = s.trim();
    let (num, unit) = if let Some(n) = s.strip_suffix("us") {
        (n, Some(Unit::Us))
    } else if let Some(n) = s.strip_suffix("ns") {
        (n, Some(Unit::Ns))
    } else {
        (s, None)
    };
    let v: f64 = num
        .parse()
        .map_err(|_| err(text, col, &format!("`{s}` is not a time (use us or ns)")))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(err(text, col, "time must be finite and non-negative"));
    }
    Ok((v, unit))
}

fn parse_delays(text: &str) -> Result<Vec<f64>> {
    let [(c0, start), (c1, end), (c2, step)] = split(text)?;
    let start = parse_time(text, c0, start.expect("start"))?;
    let end = end.map(|s| parse_time(text, c1, s)).transpose()?;
    let step = step.map(|s| parse_time(text, c2, s)).transpose()?;
    let fallback = [end, step]
        .iter()
        .flatten()
        .find_map(|(_, u)| *u)
        .or(start.1)
        .unwrap_or(Unit::Us);
    let ns = |(v, u): (f64, Option<Unit>)| match u.unwrap_or(fallback) {
        Unit::Us => v * 1000.0,
        Unit::Ns => v,
    };
    let start_ns = ns(start);
    let Some(end) = end else {
        return Ok(vec![start_ns]);
    };
    let end_ns = ns(end);
    let step_ns = step.map(ns).unwrap_or(DEFAULT_DELAY_STEP_NS);
    if step_ns <= 0.0 {
        return Err(err(text, c2, "step must be positive"));
    }
    if end_ns < start_ns {
        return Err(err(text, c1, "end is before start"));
    }
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let t = start_ns + f64::from(i) * step_ns;
        if t > end_ns + 1e-6 {
            break;
        }
        out.push(t);
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_grids() {
        assert_eq!(Sweep::parse(SweepAxis::Swaps, "0..14:2").unwrap().len(), 8);
        assert_eq!(
            Sweep::parse(SweepAxis::Swaps, "0..6:2").unwrap(),
            Sweep::Swaps(vec![0, 2, 4, 6])
        );
        assert_eq!(Sweep::parse(SweepAxis::Swaps, "0..6").unwrap().len(), 4);
        assert_eq!(
            Sweep::parse(SweepAxis::Swaps, "4").unwrap(),
            Sweep::Swaps(vec![4])
        );
    }

    #[test]
    fn delay_grids() {
        let Sweep::Delay(v) = Sweep::parse(SweepAxis::Delay, "0..6us").unwrap() else {
            unreachable!()
        };
        assert_eq!(v.len(), 5);
        assert!((v[1] - 1260.0).abs() < 1e-9);
        let Sweep::Delay(v) = Sweep::parse(SweepAxis::Delay, "0..900ns:90").unwrap() else {
            unreachable!()
        };
        assert_eq!(v.len(), 11);
        assert!((v[10] - 900.0).abs() < 1e-9);
        let Sweep::Delay(v) = Sweep::parse(SweepAxis::Delay, "2.5us").unwrap() else {
            unreachable!()
        };
        assert_eq!(v, [2500.0]);
    }

    #[test]
    fn errors_carry_columns() {
        let e = Sweep::parse(SweepAxis::Swaps, "0..x:2")
            .unwrap_err()
            .to_string();
        assert!(e.contains("column 4"), "{e}");
        let e = Sweep::parse(SweepAxis::Swaps, "0..4:0")
            .unwrap_err()
            .to_string();
        assert!(e.contains("column 6"), "{e}");
        assert!(Sweep::parse(SweepAxis::Swaps, "6..2").is_err());
        assert!(Sweep::parse(SweepAxis::Swaps, "..2").is_err());
        assert!(Sweep::parse(SweepAxis::Delay, "0..6ms").is_err());
        assert!(Sweep::parse(SweepAxis::Swaps, "3:1").is_err());
    }
}
