use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// A vector on the nonnegative orthant `R^N_+`.
///
/// Construction rejects negative or non-finite coordinates, so every value of
/// this type is a valid argument for a standard interference mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NonnegVector(Vec<f64>);

impl NonnegVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidCoordinate { index, value });
            }
        }
        Ok(Self(values))
    }

    /// All-ones vector of the given dimension.
    pub fn ones(dim: usize) -> Self {
        Self(vec![1.0; dim])
    }

    /// All-zeros vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Coordinate-wise scaling by a nonnegative factor.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&v| v > 0.0)
    }

    /// Coordinate-wise `self >= other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl std::ops::Index<usize> for NonnegVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `max_i |a_i - b_i|`; panics on length mismatch.
pub(crate) fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
