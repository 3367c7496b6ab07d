//! Pivots: single-feature binary split rules, and the strategies that
//! generate them.
//!
//! A pivot routes an object `Right` when a categorical value falls inside
//! the rule's category subset, or when a continuous value is greater than or
//! equal to the rule's threshold (the boundary itself goes right); otherwise
//! the object goes `Left`.
//!
//! Three generation strategies are provided: `Optimised` exhaustively
//! maximises impurity gain over the candidate features, `Random` draws a
//! valid rule uniformly, and `Heuristic` draws several random rules and
//! keeps the best by gain. Every returned pivot sends at least one object of
//! the generating subset each way; the constraint is evaluated against the
//! current node's subset, not the whole bag. Candidate features are an
//! `m_try`-sized sample without replacement (0 means all features).
//!
//! Threshold candidates are midpoints between consecutive distinct values:
//! the gain is piecewise constant between observed values, so midpoints lose
//! nothing and serialise stably. Category subsets are searched exhaustively
//! up to 10 categories (one category's side is fixed to skip mirror
//! duplicates, which leaves `2^(|C|-1) - 1` non-trivial candidates) and by
//! random sampling with `4|C|` draws above that. Ties are broken by lowest
//! feature index, then smallest threshold or lexicographically smallest
//! subset, making generation reproducible for a given random stream.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Column, FeatureKind, InformationSystem, ObjectSubset};
use crate::impurity::{gain_from_counts, ImpurityMeasure};

/// Attempt budget for drawing a valid random pivot before giving up.
const RANDOM_ATTEMPTS: usize = 32;

/// How many random subsets to try per categorical feature when the category
/// set is too large for exhaustive search.
const SUBSET_SAMPLE_FACTOR: usize = 4;

/// Largest category count searched exhaustively.
const EXHAUSTIVE_SUBSET_LIMIT: usize = 10;

/// The branch an object descends into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// The decision rule of a pivot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SplitRule {
    /// Continuous rule: right iff `value >= threshold`.
    Threshold { threshold: f64 },
    /// Categorical rule: right iff the value's category index is in
    /// `in_right` (kept sorted).
    Subset { in_right: Vec<u32> },
}

/// A binary split over one feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pivot {
    pub feature: usize,
    pub rule: SplitRule,
}

impl Pivot {
    /// Routes one object. Deterministic and pure in the pivot and the
    /// object's value.
    ///
    /// Panics if the rule kind does not match the feature's column kind;
    /// that is schema corruption, not recoverable input.
    pub fn apply(&self, is: &InformationSystem, row: usize) -> Direction {
        match &self.rule {
            SplitRule::Threshold { threshold } => {
                if is.continuous_value(self.feature, row) >= *threshold {
                    Direction::Right
                } else {
                    Direction::Left
                }
            }
            SplitRule::Subset { in_right } => {
                let value = is.categorical_value(self.feature, row);
                if in_right.binary_search(&value).is_ok() {
                    Direction::Right
                } else {
                    Direction::Left
                }
            }
        }
    }
}

/// Answer of a ternary trunk segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TernaryOutcome {
    ClassA,
    ClassB,
    Undecided,
}

/// A pair of pivots acting as one ternary rule: `pivot_a` is optimised for
/// purity of its right branch toward class A, `pivot_b` likewise for class
/// B. An object is answered A when only `pivot_a` sends it right, B when
/// only `pivot_b` does, and undecided when the two agree (both right is a
/// conflict, both left claims neither class).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TernaryPivot {
    pub pivot_a: Pivot,
    pub pivot_b: Pivot,
}

impl TernaryPivot {
    pub fn apply(&self, is: &InformationSystem, row: usize) -> TernaryOutcome {
        match (self.pivot_a.apply(is, row), self.pivot_b.apply(is, row)) {
            (Direction::Right, Direction::Left) => TernaryOutcome::ClassA,
            (Direction::Left, Direction::Right) => TernaryOutcome::ClassB,
            _ => TernaryOutcome::Undecided,
        }
    }
}

/// Pivot generation strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    /// Exhaustive gain maximisation over the candidate features.
    Optimised { measure: ImpurityMeasure },
    /// A uniformly drawn valid rule.
    Random,
    /// Best of `k` random rules by gain.
    Heuristic { k: usize, measure: ImpurityMeasure },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStrategy {
    pub kind: StrategyKind,
    /// Number of candidate features sampled per generation; 0 means all.
    pub m_try: usize,
}

impl GenerationStrategy {
    pub fn optimised(measure: ImpurityMeasure) -> Self {
        Self {
            kind: StrategyKind::Optimised { measure },
            m_try: 0,
        }
    }

    pub fn random() -> Self {
        Self {
            kind: StrategyKind::Random,
            m_try: 0,
        }
    }

    pub fn heuristic(k: usize, measure: ImpurityMeasure) -> Self {
        Self {
            kind: StrategyKind::Heuristic { k, measure },
            m_try: 0,
        }
    }

    pub fn with_m_try(mut self, m_try: usize) -> Self {
        self.m_try = m_try;
        self
    }

    /// The conventional default candidate count for `p` features.
    pub fn sqrt_m_try(p: usize) -> usize {
        (p as f64).sqrt().ceil() as usize
    }
}

/// Midpoints between consecutive distinct sorted values of a continuous
/// feature over the subset; empty iff the feature is constant there.
pub fn enumerate_thresholds(
    is: &InformationSystem,
    subset: &ObjectSubset,
    feature: usize,
) -> Vec<f64> {
    let mut values: Vec<f64> = subset
        .indices()
        .iter()
        .map(|&row| is.continuous_value(feature, row))
        .collect();
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    values.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
}

/// Best pivot found so far, under the total order: highest score, then
/// lowest feature, then smallest threshold / lexicographically smallest
/// subset.
struct BestCandidate {
    score: f64,
    feature: usize,
    rule: SplitRule,
}

fn rule_precedes(a: &SplitRule, b: &SplitRule) -> bool {
    match (a, b) {
        (SplitRule::Threshold { threshold: ta }, SplitRule::Threshold { threshold: tb }) => {
            ta < tb
        }
        (SplitRule::Subset { in_right: sa }, SplitRule::Subset { in_right: sb }) => sa < sb,
        // A feature has a single kind, so mixed comparisons cannot arise.
        _ => false,
    }
}

/// Scores a candidate partition from its left/right class counts.
trait SplitScorer {
    fn score(&self, left: &[usize], right: &[usize]) -> f64;
    /// Whether categorical candidates may fix one category's side (gain is
    /// mirror-symmetric) or must consider both orientations.
    fn mirror_symmetric(&self) -> bool;
}

/// Impurity gain; symmetric in the two sides.
struct GainScorer {
    measure: ImpurityMeasure,
}

impl SplitScorer for GainScorer {
    fn score(&self, left: &[usize], right: &[usize]) -> f64 {
        gain_from_counts(self.measure, left, right)
    }

    fn mirror_symmetric(&self) -> bool {
        true
    }
}

/// One-sided purity toward `target` in the right branch:
/// `(right count of target) * (target fraction of right)^2`. The squared
/// purity term penalises contaminated branches sharply. Not symmetric, so
/// categorical search must keep both orientations.
struct OneSidedScorer {
    target: usize,
}

impl SplitScorer for OneSidedScorer {
    fn score(&self, _left: &[usize], right: &[usize]) -> f64 {
        let captured = right[self.target] as f64;
        let total: usize = right.iter().sum();
        let fraction = captured / total as f64;
        captured * fraction * fraction
    }

    fn mirror_symmetric(&self) -> bool {
        false
    }
}

fn search_continuous_feature(
    is: &InformationSystem,
    subset: &ObjectSubset,
    feature: usize,
    scorer: &dyn SplitScorer,
    best: &mut Option<BestCandidate>,
) {
    let n_classes = is.n_classes();
    let mut pairs: Vec<(f64, usize)> = subset
        .indices()
        .iter()
        .map(|&row| (is.continuous_value(feature, row), is.decisions()[row]))
        .collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let mut right: Vec<usize> = vec![0; n_classes];
    for &(_, class) in &pairs {
        right[class] += 1;
    }
    let mut left = vec![0usize; n_classes];

    let mut i = 0;
    while i < pairs.len() {
        // move one group of equal values to the left side
        let value = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == value {
            let class = pairs[i].1;
            left[class] += 1;
            right[class] -= 1;
            i += 1;
        }
        if i == pairs.len() {
            break;
        }
        let threshold = (value + pairs[i].0) / 2.0;
        let score = scorer.score(&left, &right);
        push_candidate(best, score, feature, || SplitRule::Threshold { threshold });
    }
}

fn push_candidate(
    best: &mut Option<BestCandidate>,
    score: f64,
    feature: usize,
    rule: impl FnOnce() -> SplitRule,
) {
    match best {
        None => {
            *best = Some(BestCandidate {
                score,
                feature,
                rule: rule(),
            })
        }
        Some(current) => {
            if score > current.score {
                *best = Some(BestCandidate {
                    score,
                    feature,
                    rule: rule(),
                });
            } else if score == current.score && feature <= current.feature {
                let rule = rule();
                if feature < current.feature || rule_precedes(&rule, &current.rule) {
                    *best = Some(BestCandidate {
                        score,
                        feature,
                        rule,
                    });
                }
            }
        }
    }
}

/// Per-category class counts over the subset, plus how many categories
/// exist in the schema.
fn category_counts(
    is: &InformationSystem,
    subset: &ObjectSubset,
    feature: usize,
) -> Vec<Vec<usize>> {
    let n_categories = is
        .feature(feature)
        .categories()
        .expect("categorical feature")
        .len();
    let mut counts = vec![vec![0usize; is.n_classes()]; n_categories];
    for &row in subset.indices() {
        let category = is.categorical_value(feature, row) as usize;
        counts[category][is.decisions()[row]] += 1;
    }
    counts
}

fn subset_from_mask(mask: u32, offset: u32) -> Vec<u32> {
    let mut categories = Vec::new();
    let mut bit = 0;
    while (mask >> bit) != 0 {
        if mask & (1 << bit) != 0 {
            categories.push(bit + offset);
        }
        bit += 1;
    }
    categories
}

fn evaluate_mask(
    counts: &[Vec<usize>],
    right_categories: &[u32],
    n_classes: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut right = vec![0usize; n_classes];
    for &category in right_categories {
        for (class, count) in counts[category as usize].iter().enumerate() {
            right[class] += count;
        }
    }
    let mut left = vec![0usize; n_classes];
    for (class, left_count) in left.iter_mut().enumerate() {
        let total: usize = counts.iter().map(|c| c[class]).sum();
        *left_count = total - right[class];
    }
    let n_right: usize = right.iter().sum();
    let n_left: usize = left.iter().sum();
    if n_right == 0 || n_left == 0 {
        return None;
    }
    Some((left, right))
}

fn search_categorical_feature<R: Rng>(
    is: &InformationSystem,
    subset: &ObjectSubset,
    feature: usize,
    scorer: &dyn SplitScorer,
    rng: &mut R,
    best: &mut Option<BestCandidate>,
) {
    let counts = category_counts(is, subset, feature);
    let n_categories = counts.len();
    let n_classes = is.n_classes();
    if n_categories < 2 {
        return;
    }

    if n_categories <= EXHAUSTIVE_SUBSET_LIMIT {
        if scorer.mirror_symmetric() {
            // Category 0 always stays left; enumerating subsets of the rest
            // covers every partition once.
            let masks = 1u32 << (n_categories - 1);
            for mask in 1..masks {
                let right_categories = subset_from_mask(mask, 1);
                if let Some((left, right)) = evaluate_mask(&counts, &right_categories, n_classes) {
                    let score = scorer.score(&left, &right);
                    push_candidate(best, score, feature, || SplitRule::Subset {
                        in_right: right_categories,
                    });
                }
            }
        } else {
            // One-sided scores are not mirror-symmetric: both orientations
            // of every partition are distinct candidates.
            let full = (1u32 << n_categories) - 1;
            for mask in 1..full {
                let right_categories = subset_from_mask(mask, 0);
                if let Some((left, right)) = evaluate_mask(&counts, &right_categories, n_classes) {
                    let score = scorer.score(&left, &right);
                    push_candidate(best, score, feature, || SplitRule::Subset {
                        in_right: right_categories,
                    });
                }
            }
        }
    } else {
        for _ in 0..SUBSET_SAMPLE_FACTOR * n_categories {
            let right_categories = random_subset(n_categories, rng);
            if right_categories.is_empty() || right_categories.len() == n_categories {
                continue;
            }
            if let Some((left, right)) = evaluate_mask(&counts, &right_categories, n_classes) {
                let score = scorer.score(&left, &right);
                push_candidate(best, score, feature, || SplitRule::Subset {
                    in_right: right_categories,
                });
            }
        }
    }
}

fn random_subset<R: Rng>(n_categories: usize, rng: &mut R) -> Vec<u32> {
    (0..n_categories as u32).filter(|_| rng.gen::<bool>()).collect()
}

fn best_scored_pivot<R: Rng>(
    is: &InformationSystem,
    subset: &ObjectSubset,
    features: &[usize],
    scorer: &dyn SplitScorer,
    rng: &mut R,
) -> Option<Pivot> {
    let mut best: Option<BestCandidate> = None;
    for &feature in features {
        match is.column(feature) {
            Column::Continuous(_) => {
                search_continuous_feature(is, subset, feature, scorer, &mut best)
            }
            Column::Categorical(_) => {
                search_categorical_feature(is, subset, feature, scorer, rng, &mut best)
            }
        }
    }
    best.map(|b| Pivot {
        feature: b.feature,
        rule: b.rule,
    })
}

fn sample_features<R: Rng>(p: usize, m_try: usize, rng: &mut R) -> Vec<usize> {
    if m_try == 0 || m_try >= p {
        (0..p).collect()
    } else {
        let mut sampled = rand::seq::index::sample(rng, p, m_try).into_vec();
        sampled.sort_unstable();
        sampled
    }
}

/// Splits the subset by the pivot; `None` if either side is empty.
fn side_counts(
    is: &InformationSystem,
    subset: &ObjectSubset,
    pivot: &Pivot,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut left = vec![0usize; is.n_classes()];
    let mut right = vec![0usize; is.n_classes()];
    for &row in subset.indices() {
        match pivot.apply(is, row) {
            Direction::Left => left[is.decisions()[row]] += 1,
            Direction::Right => right[is.decisions()[row]] += 1,
        }
    }
    if left.iter().sum::<usize>() == 0 || right.iter().sum::<usize>() == 0 {
        None
    } else {
        Some((left, right))
    }
}

fn random_pivot<R: Rng>(
    is: &InformationSystem,
    subset: &ObjectSubset,
    features: &[usize],
    rng: &mut R,
) -> Option<Pivot> {
    for _ in 0..RANDOM_ATTEMPTS {
        let feature = features[rng.gen_range(0..features.len())];
        let rule = match is.feature(feature).kind {
            FeatureKind::Continuous => {
                let mut min = f64::INFINITY;
                let mut max = f64::NEG_INFINITY;
                for &row in subset.indices() {
                    let v = is.continuous_value(feature, row);
                    min = min.min(v);
                    max = max.max(v);
                }
                if !(min < max) {
                    continue;
                }
                SplitRule::Threshold {
                    threshold: rng.gen_range(min..max),
                }
            }
            FeatureKind::Categorical { ref categories } => {
                let in_right = random_subset(categories.len(), rng);
                if in_right.is_empty() || in_right.len() == categories.len() {
                    continue;
                }
                SplitRule::Subset { in_right }
            }
        };
        let pivot = Pivot { feature, rule };
        if side_counts(is, subset, &pivot).is_some() {
            return Some(pivot);
        }
    }
    None
}

/// Generates one pivot for the subset per the strategy, or `None` when no
/// valid pivot exists (all candidate features constant on the subset, or
/// the random attempt budget is exhausted). Every returned pivot sends at
/// least one subset object in each direction.
pub fn generate_pivot<R: Rng>(
    strategy: &GenerationStrategy,
    is: &InformationSystem,
    subset: &ObjectSubset,
    rng: &mut R,
) -> Option<Pivot> {
    if subset.len() < 2 {
        return None;
    }
    let features = sample_features(is.n_features(), strategy.m_try, rng);
    match strategy.kind {
        StrategyKind::Optimised { measure } => {
            best_scored_pivot(is, subset, &features, &GainScorer { measure }, rng)
        }
        StrategyKind::Random => random_pivot(is, subset, &features, rng),
        StrategyKind::Heuristic { k, measure } => {
            let mut best: Option<BestCandidate> = None;
            for _ in 0..k {
                if let Some(pivot) = random_pivot(is, subset, &features, rng) {
                    let (left, right) =
                        side_counts(is, subset, &pivot).expect("random pivot is valid");
                    let gain = gain_from_counts(measure, &left, &right);
                    push_candidate(&mut best, gain, pivot.feature, || pivot.rule);
                }
            }
            best.map(|b| Pivot {
                feature: b.feature,
                rule: b.rule,
            })
        }
    }
}

/// Generates a ternary segment for a binary problem: each side is a regular
/// pivot search, scored one-sidedly toward its class. Each pivot draws its
/// own candidate feature sample. `None` when either side finds no valid
/// pivot.
pub fn generate_ternary<R: Rng>(
    is: &InformationSystem,
    subset: &ObjectSubset,
    class_a: usize,
    class_b: usize,
    m_try: usize,
    rng: &mut R,
) -> Option<TernaryPivot> {
    assert!(class_a != class_b, "ternary classes must differ");
    assert!(class_a < is.n_classes() && class_b < is.n_classes());
    if subset.len() < 2 {
        return None;
    }
    let features_a = sample_features(is.n_features(), m_try, rng);
    let pivot_a = best_scored_pivot(
        is,
        subset,
        &features_a,
        &OneSidedScorer { target: class_a },
        rng,
    )?;
    let features_b = sample_features(is.n_features(), m_try, rng);
    let pivot_b = best_scored_pivot(
        is,
        subset,
        &features_b,
        &OneSidedScorer { target: class_b },
        rng,
    )?;
    Some(TernaryPivot { pivot_a, pivot_b })
}
