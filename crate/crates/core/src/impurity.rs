//! Homogeneity measures used to score pivot candidates.
//!
//! Both measures are concave, so the count-weighted gain of any valid split
//! is non-negative. Entropy uses base-2 logarithms; only the relative
//! ordering of gains matters for optimisation, the base is fixed so that
//! reported gains are reproducible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::ClassDistribution;

#[derive(Debug, Error, PartialEq)]
pub enum ImpurityError {
    #[error("child counts {left} + {right} do not sum to parent count {parent}")]
    CountMismatch {
        parent: usize,
        left: usize,
        right: usize,
    },
    #[error("split has an empty side")]
    EmptySide,
}

/// The impurity measure driving split optimisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImpurityMeasure {
    Gini,
    Entropy,
}

impl ImpurityMeasure {
    /// Impurity of a class distribution.
    ///
    /// Gini: `1 - sum(p_i^2)`. Entropy: `-sum(p_i * log2(p_i))` with
    /// `0 * log 0 = 0`.
    pub fn impurity(&self, dist: &ClassDistribution) -> f64 {
        match self {
            ImpurityMeasure::Gini => 1.0 - dist.probs().iter().map(|p| p * p).sum::<f64>(),
            ImpurityMeasure::Entropy => dist
                .probs()
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * p.log2())
                .sum(),
        }
    }

    /// Impurity straight from class counts, bypassing normalisation.
    pub fn impurity_from_counts(&self, counts: &[usize]) -> f64 {
        let total: usize = counts.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let total = total as f64;
        match self {
            ImpurityMeasure::Gini => {
                1.0 - counts
                    .iter()
                    .map(|&c| {
                        let p = c as f64 / total;
                        p * p
                    })
                    .sum::<f64>()
            }
            ImpurityMeasure::Entropy => counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / total;
                    -p * p.log2()
                })
                .sum(),
        }
    }
}

/// Impurity decrease of a split:
/// `impurity(parent) - (n_l * impurity(left) + n_r * impurity(right)) / n`.
///
/// The parent distribution is expected to be the count-weighted mix of the
/// children.
pub fn split_gain(
    measure: ImpurityMeasure,
    parent: (&ClassDistribution, usize),
    left: (&ClassDistribution, usize),
    right: (&ClassDistribution, usize),
) -> Result<f64, ImpurityError> {
    let (parent_dist, n) = parent;
    let (left_dist, n_left) = left;
    let (right_dist, n_right) = right;
    if n_left == 0 || n_right == 0 {
        return Err(ImpurityError::EmptySide);
    }
    if n_left + n_right != n {
        return Err(ImpurityError::CountMismatch {
            parent: n,
            left: n_left,
            right: n_right,
        });
    }
    let children = n_left as f64 * measure.impurity(left_dist)
        + n_right as f64 * measure.impurity(right_dist);
    Ok(measure.impurity(parent_dist) - children / n as f64)
}

/// Gain computed directly from child class counts; the parent counts are the
/// element-wise sum. Used by the split search hot path.
pub(crate) fn gain_from_counts(
    measure: ImpurityMeasure,
    left: &[usize],
    right: &[usize],
) -> f64 {
    debug_assert_eq!(left.len(), right.len());
    let n_left: usize = left.iter().sum();
    let n_right: usize = right.iter().sum();
    let n = n_left + n_right;
    debug_assert!(n_left > 0 && n_right > 0);
    let parent: Vec<usize> = left.iter().zip(right).map(|(&l, &r)| l + r).collect();
    let children = n_left as f64 * measure.impurity_from_counts(left)
        + n_right as f64 * measure.impurity_from_counts(right);
    measure.impurity_from_counts(&parent) - children / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dist(probs: &[f64]) -> ClassDistribution {
        ClassDistribution::new(probs.to_vec()).unwrap()
    }

    #[test]
    fn gini_of_even_binary_split() {
        assert_eq!(ImpurityMeasure::Gini.impurity(&dist(&[0.5, 0.5])), 0.5);
    }

    #[test]
    fn entropy_of_pure_node_is_zero() {
        assert_eq!(ImpurityMeasure::Entropy.impurity(&dist(&[1.0, 0.0])), 0.0);
    }

    #[test]
    fn entropy_of_uniform_four_classes_is_two_bits() {
        let d = dist(&[0.25, 0.25, 0.25, 0.25]);
        assert!((ImpurityMeasure::Entropy.impurity(&d) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_split_gain_is_half_under_gini() {
        let gain = split_gain(
            ImpurityMeasure::Gini,
            (&dist(&[0.5, 0.5]), 4),
            (&dist(&[1.0, 0.0]), 2),
            (&dist(&[0.0, 1.0]), 2),
        )
        .unwrap();
        assert_eq!(gain, 0.5);
    }

    #[test]
    fn uninformative_split_gain_is_zero() {
        for measure in [ImpurityMeasure::Gini, ImpurityMeasure::Entropy] {
            let gain = split_gain(
                measure,
                (&dist(&[0.5, 0.5]), 4),
                (&dist(&[0.5, 0.5]), 2),
                (&dist(&[0.5, 0.5]), 2),
            )
            .unwrap();
            assert!(gain.abs() < 1e-12, "{measure:?} gain {gain}");
        }
    }

    #[test]
    fn count_mismatch_rejected() {
        let err = split_gain(
            ImpurityMeasure::Gini,
            (&dist(&[0.5, 0.5]), 5),
            (&dist(&[1.0, 0.0]), 2),
            (&dist(&[0.0, 1.0]), 2),
        )
        .unwrap_err();
        assert!(matches!(err, ImpurityError::CountMismatch { .. }));
    }

    #[test]
    fn empty_side_rejected() {
        let err = split_gain(
            ImpurityMeasure::Gini,
            (&dist(&[0.5, 0.5]), 4),
            (&dist(&[0.5, 0.5]), 4),
            (&dist(&[0.5, 0.5]), 0),
        )
        .unwrap_err();
        assert_eq!(err, ImpurityError::EmptySide);
    }

    #[test]
    fn gain_from_counts_matches_public_path() {
        let left = [3usize, 1];
        let right = [0usize, 4];
        let parent = [3usize, 5];
        for measure in [ImpurityMeasure::Gini, ImpurityMeasure::Entropy] {
            let fast = gain_from_counts(measure, &left, &right);
            let slow = split_gain(
                measure,
                (&ClassDistribution::from_counts(&parent, 0.0).unwrap(), 8),
                (&ClassDistribution::from_counts(&left, 0.0).unwrap(), 4),
                (&ClassDistribution::from_counts(&right, 0.0).unwrap(), 4),
            )
            .unwrap();
            assert!((fast - slow).abs() < 1e-12);
        }
    }

    proptest! {
        // Both measures are bounded by their value at the uniform distribution.
        #[test]
        fn impurity_bounds(counts in prop::collection::vec(0usize..50, 2..6)) {
            prop_assume!(counts.iter().sum::<usize>() > 0);
            let k = counts.len() as f64;
            let gini = ImpurityMeasure::Gini.impurity_from_counts(&counts);
            prop_assert!(gini >= -1e-12 && gini <= 1.0 - 1.0 / k + 1e-12);
            let entropy = ImpurityMeasure::Entropy.impurity_from_counts(&counts);
            prop_assert!(entropy >= -1e-12 && entropy <= k.log2() + 1e-12);
        }

        // Concavity: every valid split has non-negative gain.
        #[test]
        fn split_gain_nonnegative(
            left in prop::collection::vec(0usize..30, 2..5),
            right_seed in prop::collection::vec(0usize..30, 2..5),
        ) {
            let k = left.len().min(right_seed.len());
            let left = &left[..k];
            let right = &right_seed[..k];
            prop_assume!(left.iter().sum::<usize>() > 0);
            prop_assume!(right.iter().sum::<usize>() > 0);
            for measure in [ImpurityMeasure::Gini, ImpurityMeasure::Entropy] {
                prop_assert!(gain_from_counts(measure, left, right) >= -1e-12);
            }
        }

        // Swapping left and right leaves the gain unchanged.
        #[test]
        fn split_gain_symmetric(
            left in prop::collection::vec(0usize..30, 3),
            right in prop::collection::vec(0usize..30, 3),
        ) {
            prop_assume!(left.iter().sum::<usize>() > 0);
            prop_assume!(right.iter().sum::<usize>() > 0);
            for measure in [ImpurityMeasure::Gini, ImpurityMeasure::Entropy] {
                let a = gain_from_counts(measure, &left, &right);
                let b = gain_from_counts(measure, &right, &left);
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
