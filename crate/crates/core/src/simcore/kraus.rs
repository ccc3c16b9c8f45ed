use crate::error::{Error, Result};
use crate::linalg::{identity, kron, max_abs_diff, CMatrix, ZERO};

/// Completeness tolerance for `sum K^dagger K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-8;

/// A completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
    arity: usize,
}

impl KrausChannel {
    pub fn new(operators: Vec<CMatrix>, arity: usize) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::IncompleteChannel {
                deviation: f64::INFINITY,
            });
        }
        let dim = 1usize << arity;
        for op in &operators {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: op.nrows().max(op.ncols()),
                });
            }
        }
        let channel = Self { operators, arity };
        let deviation = channel.completeness_deviation();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompleteChannel { deviation });
        }
        Ok(channel)
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            operators: vec![identity(1 << arity)],
            arity,
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::from_element(dim, dim, ZERO), |acc, k| {
                acc + k.adjoint() * k
            });
        max_abs_diff(&sum, &identity(dim))
    }

    /// `sum K (x) conj(K)`, the map acting on the (row, column) index pair of
    /// a vectorized density matrix.
    pub fn superoperator(&self) -> CMatrix {
        let d2 = self.dim() * self.dim();
        self.operators
            .iter()
            .fold(CMatrix::from_element(d2, d2, ZERO), |acc, k| {
                acc + kron(k, &k.map(|z| z.conj()))
            })
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        if self.arity != next.arity {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: next.dim(),
            });
        }
        let ops = next
            .operators
            .iter()
            .flat_map(|b| self.operators.iter().map(move |a| b * a))
            .collect();
        KrausChannel::new(ops, self.arity)
    }

    /// Drops operators that are identically zero.
    pub(crate) fn pruned(mut self) -> Self {
        self.operators
            .retain(|k| k.iter().any(|z| z.norm_sqr() > 0.0));
        self
    }
}
