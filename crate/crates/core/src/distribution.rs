//! Class probability distributions shared by every layer of the framework.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Components must sum to one within this tolerance.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DistributionError {
    #[error("distribution must have at least one component")]
    Empty,
    #[error("component {index} is {value}, expected a finite non-negative value")]
    NegativeComponent { index: usize, value: f64 },
    #[error("components sum to {sum}, expected 1 within {SUM_TOLERANCE}")]
    SumNotOne { sum: f64 },
}

/// A probability vector over the decision classes.
///
/// Validity (non-negative components summing to one within [`SUM_TOLERANCE`])
/// is checked at construction; operations taking a `ClassDistribution` can
/// therefore treat it as well-formed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDistribution(Vec<f64>);

impl ClassDistribution {
    /// Validates and wraps raw probabilities.
    pub fn new(probs: Vec<f64>) -> Result<Self, DistributionError> {
        if probs.is_empty() {
            return Err(DistributionError::Empty);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(DistributionError::NegativeComponent { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(DistributionError::SumNotOne { sum });
        }
        Ok(Self(probs))
    }

    /// Builds a distribution from class counts with additive smoothing:
    /// `p_i = (counts_i + epsilon) / (total + K * epsilon)`.
    ///
    /// With `epsilon = 0` the counts must not all be zero.
    pub fn from_counts(counts: &[usize], epsilon: f64) -> Result<Self, DistributionError> {
        if counts.is_empty() {
            return Err(DistributionError::Empty);
        }
        let total: usize = counts.iter().sum();
        let denom = total as f64 + counts.len() as f64 * epsilon;
        if denom <= 0.0 {
            return Err(DistributionError::SumNotOne { sum: 0.0 });
        }
        Ok(Self(
            counts.iter().map(|&c| (c as f64 + epsilon) / denom).collect(),
        ))
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// Index of the most probable class; ties go to the lowest class index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate().skip(1) {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }
}
