//! The decision tree sharpener: pivots stacked recursively, splitting each
//! node's subset until it is class-pure, smaller than the node-size floor,
//! at the depth cap, or out of valid pivots.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{InformationSystem, ObjectSubset};
use crate::distribution::ClassDistribution;
use crate::pivot::{generate_pivot, Direction, GenerationStrategy, Pivot};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Internal {
        pivot: Pivot,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        /// Empirical (unsmoothed) class distribution of the training
        /// objects routed here; a pure leaf is one-hot.
        dist: ClassDistribution,
        support: usize,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn leaf_count(&self) -> u64 {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    root: TreeNode,
}

impl TreeModel {
    pub fn from_root(root: TreeNode) -> Self {
        Self { root }
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn n_leaves(&self) -> u64 {
        self.root.leaf_count()
    }

    pub fn predict(&self, is: &InformationSystem, row: usize) -> &ClassDistribution {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { dist, .. } => return dist,
                TreeNode::Internal { pivot, left, right } => {
                    node = match pivot.apply(is, row) {
                        Direction::Left => left,
                        Direction::Right => right,
                    };
                }
            }
        }
    }

    /// Ordinal of the leaf the object is routed to, counting leaves left to
    /// right.
    pub fn terminal_region(&self, is: &InformationSystem, row: usize) -> u64 {
        let mut node = &self.root;
        let mut offset = 0u64;
        loop {
            match node {
                TreeNode::Leaf { .. } => return offset,
                TreeNode::Internal { pivot, left, right } => match pivot.apply(is, row) {
                    Direction::Left => node = left,
                    Direction::Right => {
                        offset += left.leaf_count();
                        node = right;
                    }
                },
            }
        }
    }
}

fn class_counts(is: &InformationSystem, indices: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; is.n_classes()];
    for &row in indices {
        counts[is.decisions()[row]] += 1;
    }
    counts
}

fn leaf(counts: &[usize], support: usize) -> TreeNode {
    TreeNode::Leaf {
        dist: ClassDistribution::from_counts(counts, 0.0).expect("leaf is non-empty"),
        support,
    }
}

fn grow<R: Rng>(
    is: &InformationSystem,
    indices: Vec<usize>,
    depth: usize,
    max_depth: usize,
    min_node_size: usize,
    strategy: &GenerationStrategy,
    rng: &mut R,
) -> TreeNode {
    let counts = class_counts(is, &indices);
    let support = indices.len();
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if pure || support < min_node_size || depth >= max_depth {
        return leaf(&counts, support);
    }
    let subset = ObjectSubset::from_indices(indices);
    let Some(pivot) = generate_pivot(strategy, is, &subset, rng) else {
        return leaf(&counts, support);
    };
    let mut left_indices = Vec::new();
    let mut right_indices = Vec::new();
    for &row in subset.indices() {
        match pivot.apply(is, row) {
            Direction::Left => left_indices.push(row),
            Direction::Right => right_indices.push(row),
        }
    }
    let left = grow(is, left_indices, depth + 1, max_depth, min_node_size, strategy, rng);
    let right = grow(is, right_indices, depth + 1, max_depth, min_node_size, strategy, rng);
    TreeNode::Internal {
        pivot,
        left: Box::new(left),
        right: Box::new(right),
    }
}

pub(crate) fn train_tree<R: Rng>(
    is: &InformationSystem,
    bag: &ObjectSubset,
    max_depth: usize,
    min_node_size: usize,
    strategy: &GenerationStrategy,
    rng: &mut R,
) -> TreeModel {
    TreeModel {
        root: grow(
            is,
            bag.indices().to_vec(),
            0,
            max_depth,
            min_node_size,
            strategy,
            rng,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_csv;
    use crate::impurity::ImpurityMeasure;
    use crate::pivot::SplitRule;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gini() -> GenerationStrategy {
        GenerationStrategy::optimised(ImpurityMeasure::Gini)
    }

    #[test]
    fn pure_bag_becomes_a_single_one_hot_leaf() {
        let is = parse_csv("x,cls\n1,a\n2,a\n3,b\n".as_bytes(), "cls", None).unwrap();
        let bag = ObjectSubset::from_indices(vec![0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = train_tree(&is, &bag, 32, 1, &gini(), &mut rng);
        match tree.root() {
            TreeNode::Leaf { dist, support } => {
                assert_eq!(dist.probs(), &[1.0, 0.0]);
                assert_eq!(*support, 2);
            }
            other => panic!("expected leaf, got {other:?}"),
        }
    }

    #[test]
    fn separable_line_trains_to_a_depth_one_tree() {
        let is = parse_csv(
            "x,cls\n1,a\n2,a\n3,b\n4,b\n".as_bytes(),
            "cls",
            None,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = train_tree(&is, &ObjectSubset::full(4), 32, 1, &gini(), &mut rng);
        assert_eq!(tree.depth(), 1);
        match tree.root() {
            TreeNode::Internal { pivot, left, right } => {
                assert_eq!(pivot.rule, SplitRule::Threshold { threshold: 2.5 });
                for side in [left, right] {
                    match side.as_ref() {
                        TreeNode::Leaf { dist, .. } => {
                            assert!(dist.probs().contains(&1.0), "leaf should be pure")
                        }
                        _ => panic!("expected leaf children"),
                    }
                }
            }
            _ => panic!("expected a split at the root"),
        }
    }

    #[test]
    fn depth_cap_leaves_impure_empirical_leaves() {
        // xor-style data cannot be separated by one split
        let is = parse_csv(
            "x,y,cls\n0,0,a\n0,1,b\n1,0,b\n1,1,a\n".as_bytes(),
            "cls",
            None,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = train_tree(&is, &ObjectSubset::full(4), 1, 1, &gini(), &mut rng);
        assert_eq!(tree.depth(), 1);
        for row in 0..4 {
            let dist = tree.predict(&is, row);
            assert_eq!(dist.probs(), &[0.5, 0.5]);
        }
        // without the cap the tree resolves it fully
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let full = train_tree(&is, &ObjectSubset::full(4), 32, 1, &gini(), &mut rng);
        for row in 0..4 {
            assert_eq!(full.predict(&is, row).argmax(), is.decisions()[row]);
        }
    }

    #[test]
    fn min_node_size_stops_splitting() {
        let is = parse_csv(
            "x,cls\n1,a\n2,a\n3,b\n4,b\n".as_bytes(),
            "cls",
            None,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = train_tree(&is, &ObjectSubset::full(4), 32, 10, &gini(), &mut rng);
        assert_eq!(tree.depth(), 0);
    }

    #[test]
    fn routing_partition_recovers_the_bag_multiset() {
        let is = parse_csv(
            "x,y,cls\n1,4,a\n2,3,b\n3,2,a\n4,1,b\n5,0,a\n".as_bytes(),
            "cls",
            None,
        )
        .unwrap();
        // multiset bag with duplicates
        let bag = ObjectSubset::from_indices(vec![0, 0, 1, 2, 3, 3, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tree = train_tree(&is, &bag, 32, 1, &gini(), &mut rng);

        let mut by_region: Vec<(u64, usize)> = bag
            .indices()
            .iter()
            .map(|&row| (tree.terminal_region(&is, row), row))
            .collect();
        by_region.sort_unstable();
        let mut recovered: Vec<usize> = by_region.iter().map(|&(_, row)| row).collect();
        recovered.sort_unstable();
        let mut expected = bag.indices().to_vec();
        expected.sort_unstable();
        assert_eq!(recovered, expected);

        // leaf supports sum to the bag size
        let total_support: usize = (0..tree.n_leaves())
            .map(|region| {
                bag.indices()
                    .iter()
                    .filter(|&&row| tree.terminal_region(&is, row) == region)
                    .count()
            })
            .sum();
        assert_eq!(total_support, bag.len());
    }

    #[test]
    fn terminal_regions_distinguish_leaves() {
        let is = parse_csv(
            "x,cls\n1,a\n2,b\n3,a\n4,b\n".as_bytes(),
            "cls",
            None,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = train_tree(&is, &ObjectSubset::full(4), 32, 1, &gini(), &mut rng);
        let regions: Vec<u64> = (0..4).map(|row| tree.terminal_region(&is, row)).collect();
        let mut unique = regions.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len() as u64, tree.n_leaves());
    }
}
