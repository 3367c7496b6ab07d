//! A modular classification framework built from three interchangeable layers:
//!
//! - **pivots** — single-feature binary split rules (category subsets and
//!   numeric thresholds), the only layer that touches predictor values;
//! - **sharpeners** — mid-layer models assembled from pivots (decision trees,
//!   decision ferns, decision trunks, or a single-pivot null model), each
//!   mapping an object to a class distribution;
//! - **conditioner** — the outer bagging ensemble that trains many sharpeners
//!   on bootstrap resamples and aggregates them by voting, with out-of-bag
//!   error estimation, permutation feature importance, and an object-object
//!   proximity measure.
//!
//! Datasets are typed tables (an "information system") of categorical and
//! continuous predictor columns plus a categorical decision column, ingested
//! from CSV. Trained forests serialise to a versioned, human-readable model
//! file via [`model_io`].
//!
//! Training is deterministic: every member derives its own random stream from
//! the forest seed and its member index, so results are bit-identical
//! regardless of how many worker threads run the training.

pub mod conditioner;
pub mod dataset;
pub mod distribution;
pub mod impurity;
pub mod model_io;
pub mod pivot;
pub mod sharpener;

pub use conditioner::{
    bootstrap, train_forest, ForestConfig, ForestError, ForestModel, ForestPrediction,
    ImportanceReport, OobReport, ProximityMatrix, VoteRule,
};
pub use dataset::{
    class_distribution, parse_csv, parse_csv_with_schema, DataSchema, DatasetError, DecisionColumn,
    FeatureKind, FeatureSchema, InformationSystem, ObjectSubset, SchemaHint,
};
pub use distribution::{ClassDistribution, DistributionError};
pub use impurity::{split_gain, ImpurityError, ImpurityMeasure};
pub use model_io::{load_model, save_model, ModelIoError, FORMAT_VERSION};
pub use pivot::{
    enumerate_thresholds, generate_pivot, generate_ternary, Direction, GenerationStrategy, Pivot,
    SplitRule, StrategyKind, TernaryOutcome, TernaryPivot,
};
pub use sharpener::{
    train_sharpener, FernModel, NullModel, SharpenerConfig, SharpenerKind, SharpenerModel,
    TrainError, TreeModel, TrunkModel,
};
