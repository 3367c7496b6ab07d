//! The information system: a typed tabular dataset of categorical and
//! continuous predictor columns plus a categorical decision column.
//!
//! CSV ingestion is strict: missing cells, ragged rows and (for pinned
//! continuous columns) non-finite numbers are hard errors, since every
//! downstream computation assumes total functions on objects. Without an
//! explicit schema, a column is continuous iff every value parses as a
//! finite real; otherwise it is categorical with categories recorded in
//! first-appearance order, which keeps subset pivots serialisable in a
//! stable form. Ordered categoricals have no special treatment: encode them
//! as numbers if the order matters.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::distribution::ClassDistribution;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("decision column '{name}' not found in header")]
    MissingDecisionColumn { name: String },
    #[error("duplicate column '{name}' in header")]
    DuplicateColumn { name: String },
    #[error("no predictor columns besides the decision column")]
    NoPredictors,
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty cell at row {row}, column '{column}'")]
    EmptyCell { row: usize, column: String },
    #[error("value '{value}' at row {row}, column '{column}' is not numeric")]
    NotNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("value '{value}' at row {row}, column '{column}' is not finite")]
    NonFinite {
        row: usize,
        column: String,
        value: String,
    },
    #[error("decision column has {found} distinct classes, need at least 2")]
    TooFewClasses { found: usize },
    #[error("unknown category '{value}' in column '{column}'")]
    UnknownCategory { column: String, value: String },
    #[error("unknown decision class '{value}'")]
    UnknownClass { value: String },
    #[error("required column '{name}' not found in header")]
    MissingColumn { name: String },
    #[error("unexpected column '{name}' in header")]
    UnknownColumn { name: String },
    #[error("subset is empty")]
    EmptySubset,
    #[error("invalid information system: {0}")]
    Invalid(String),
}

/// Whether a predictor column is continuous or categorical, and in the
/// latter case the ordered category list the column's values index into.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureKind {
    Continuous,
    Categorical { categories: Vec<String> },
}

impl FeatureKind {
    pub fn is_categorical(&self) -> bool {
        matches!(self, FeatureKind::Categorical { .. })
    }
}

/// Name and kind of one predictor column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl FeatureSchema {
    pub fn continuous(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Continuous,
        }
    }

    pub fn categorical(name: impl Into<String>, categories: Vec<String>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Categorical { categories },
        }
    }

    /// Category labels, or `None` for a continuous feature.
    pub fn categories(&self) -> Option<&[String]> {
        match &self.kind {
            FeatureKind::Categorical { categories } => Some(categories),
            FeatureKind::Continuous => None,
        }
    }
}

/// Complete column-level description of a dataset: predictor schemas, the
/// decision column name and the ordered class labels. This is what a model
/// file pins so that prediction data is encoded identically to training
/// data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSchema {
    pub features: Vec<FeatureSchema>,
    pub decision: String,
    pub classes: Vec<String>,
}

impl DataSchema {
    /// Stable hex digest of the canonical schema serialisation. Two
    /// datasets are prediction-compatible iff their fingerprints match.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("schema serialises");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Optional ingestion-time pinning of feature kinds, category order and
/// class order. Columns not listed are inferred as usual.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
pub struct SchemaHint {
    #[serde(default)]
    pub features: Vec<FeatureSchema>,
    #[serde(default)]
    pub classes: Option<Vec<String>>,
}

impl SchemaHint {
    pub fn from_json(reader: impl Read) -> Result<Self, DatasetError> {
        serde_json::from_reader(reader)
            .map_err(|e| DatasetError::Invalid(format!("schema hint: {e}")))
    }

    fn feature(&self, name: &str) -> Option<&FeatureSchema> {
        self.features.iter().find(|f| f.name == name)
    }
}

/// One predictor column. Categorical values are indices into the feature's
/// category list.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Continuous(Vec<f64>),
    Categorical(Vec<u32>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Continuous(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// How a schema-pinned parse treats the decision column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionColumn {
    /// The decision column must be present and every label must be a known
    /// class (training / evaluation data).
    Required,
    /// The decision column may be absent; if present its values are ignored
    /// (prediction data).
    Ignored,
}

/// A set of row indices into an [`InformationSystem`]. Bootstrap bags are
/// multisets: indices may repeat and every count-based statistic honours
/// the multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSubset {
    indices: Vec<usize>,
}

impl ObjectSubset {
    /// All rows `0..n` once each.
    pub fn full(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
        }
    }

    pub fn from_indices(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// The immutable, validated dataset every layer trains on and predicts
/// against. Columns are stored column-major; after construction the system
/// is never mutated, so any number of training workers may read it
/// concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationSystem {
    schema: DataSchema,
    columns: Vec<Column>,
    decision: Vec<usize>,
    fingerprint: String,
}

impl InformationSystem {
    /// Validates all structural invariants and builds the system.
    pub fn new(
        schema: DataSchema,
        columns: Vec<Column>,
        decision: Vec<usize>,
    ) -> Result<Self, DatasetError> {
        let invalid = |msg: String| Err(DatasetError::Invalid(msg));
        if schema.classes.len() < 2 {
            return Err(DatasetError::TooFewClasses {
                found: schema.classes.len(),
            });
        }
        if columns.len() != schema.features.len() {
            return invalid(format!(
                "{} columns for {} feature schemas",
                columns.len(),
                schema.features.len()
            ));
        }
        let mut names: Vec<&str> = schema.features.iter().map(|f| f.name.as_str()).collect();
        names.push(&schema.decision);
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return invalid("column names are not unique".into());
        }
        let mut classes = schema.classes.clone();
        classes.sort_unstable();
        if classes.windows(2).any(|w| w[0] == w[1]) {
            return invalid("class labels are not unique".into());
        }
        let n = decision.len();
        for (feature, column) in schema.features.iter().zip(&columns) {
            if column.len() != n {
                return invalid(format!(
                    "column '{}' has {} values for {} objects",
                    feature.name,
                    column.len(),
                    n
                ));
            }
            match (&feature.kind, column) {
                (FeatureKind::Continuous, Column::Continuous(values)) => {
                    if values.iter().any(|v| !v.is_finite()) {
                        return invalid(format!("column '{}' has non-finite values", feature.name));
                    }
                }
                (FeatureKind::Categorical { categories }, Column::Categorical(values)) => {
                    let mut labels: Vec<&str> = categories.iter().map(String::as_str).collect();
                    labels.sort_unstable();
                    if labels.iter().any(|l| l.is_empty())
                        || labels.windows(2).any(|w| w[0] == w[1])
                    {
                        return invalid(format!(
                            "column '{}' has empty or duplicate category labels",
                            feature.name
                        ));
                    }
                    if values.iter().any(|&v| v as usize >= categories.len()) {
                        return invalid(format!(
                            "column '{}' has out-of-range category indices",
                            feature.name
                        ));
                    }
                }
                _ => {
                    return invalid(format!(
                        "column '{}' storage does not match its schema kind",
                        feature.name
                    ))
                }
            }
        }
        if decision.iter().any(|&d| d >= schema.classes.len()) {
            return invalid("decision index out of range".into());
        }
        let fingerprint = schema.fingerprint();
        Ok(Self {
            schema,
            columns,
            decision,
            fingerprint,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.decision.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn n_classes(&self) -> usize {
        self.schema.classes.len()
    }

    pub fn schema(&self) -> &DataSchema {
        &self.schema
    }

    pub fn features(&self) -> &[FeatureSchema] {
        &self.schema.features
    }

    pub fn feature(&self, index: usize) -> &FeatureSchema {
        &self.schema.features[index]
    }

    pub fn column(&self, index: usize) -> &Column {
        &self.columns[index]
    }

    pub fn classes(&self) -> &[String] {
        &self.schema.classes
    }

    pub fn decisions(&self) -> &[usize] {
        &self.decision
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Continuous value of `feature` at `row`.
    ///
    /// Panics if the feature is categorical; that indicates schema
    /// corruption, not recoverable input error.
    pub fn continuous_value(&self, feature: usize, row: usize) -> f64 {
        match &self.columns[feature] {
            Column::Continuous(values) => values[row],
            Column::Categorical(_) => {
                panic!("feature {feature} is categorical, expected continuous")
            }
        }
    }

    /// Category index of `feature` at `row`. Panics if the feature is
    /// continuous.
    pub fn categorical_value(&self, feature: usize, row: usize) -> u32 {
        match &self.columns[feature] {
            Column::Categorical(values) => values[row],
            Column::Continuous(_) => {
                panic!("feature {feature} is continuous, expected categorical")
            }
        }
    }

    /// Returns a copy with one feature column replaced; used by permutation
    /// importance. Panics on kind or length mismatch.
    pub(crate) fn with_column(&self, feature: usize, column: Column) -> Self {
        assert_eq!(column.len(), self.n_objects());
        let mut clone = self.clone();
        assert!(
            std::mem::discriminant(&clone.columns[feature]) == std::mem::discriminant(&column),
            "replacement column kind mismatch"
        );
        clone.columns[feature] = column;
        clone
    }

    /// Writes the system back out as CSV: predictor columns in schema
    /// order, decision column last. Continuous values use the shortest
    /// round-trip decimal form, so parsing the output reproduces the
    /// system exactly.
    pub fn write_csv(&self, sink: impl Write) -> Result<(), DatasetError> {
        let mut writer = csv::Writer::from_writer(sink);
        let mut header: Vec<&str> = self.features().iter().map(|f| f.name.as_str()).collect();
        header.push(&self.schema.decision);
        writer.write_record(&header)?;
        for row in 0..self.n_objects() {
            let mut record: Vec<String> = Vec::with_capacity(header.len());
            for (feature, column) in self.features().iter().zip(&self.columns) {
                match column {
                    Column::Continuous(values) => record.push(format!("{}", values[row])),
                    Column::Categorical(values) => {
                        let categories = feature.categories().expect("kind checked at build");
                        record.push(categories[values[row] as usize].clone());
                    }
                }
            }
            record.push(self.schema.classes[self.decision[row]].clone());
            writer.write_record(&record)?;
        }
        writer.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Empirical class frequencies over a (possibly multiset) subset.
pub fn class_distribution(
    is: &InformationSystem,
    subset: &ObjectSubset,
) -> Result<ClassDistribution, DatasetError> {
    if subset.is_empty() {
        return Err(DatasetError::EmptySubset);
    }
    let mut counts = vec![0usize; is.n_classes()];
    for &row in subset.indices() {
        counts[is.decisions()[row]] += 1;
    }
    Ok(ClassDistribution::from_counts(&counts, 0.0).expect("non-empty subset"))
}

struct RawTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_raw(reader: impl Read) -> Result<RawTable, DatasetError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = csv_reader.records();
    let header: Vec<String> = match records.next() {
        Some(record) => record?.iter().map(str::to_owned).collect(),
        None => {
            return Err(DatasetError::Invalid("input has no header row".into()));
        }
    };
    let mut seen: Vec<&str> = Vec::with_capacity(header.len());
    for name in &header {
        if seen.contains(&name.as_str()) {
            return Err(DatasetError::DuplicateColumn { name: name.clone() });
        }
        seen.push(name);
    }
    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let record = record?;
        let row: Vec<String> = record.iter().map(str::to_owned).collect();
        if row.len() != header.len() {
            return Err(DatasetError::RaggedRow {
                row: i + 2,
                expected: header.len(),
                found: row.len(),
            });
        }
        rows.push(row);
    }
    Ok(RawTable { header, rows })
}

fn parse_finite(value: &str) -> Option<f64> {
    value.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn check_cells(table: &RawTable, column: usize) -> Result<(), DatasetError> {
    for (i, row) in table.rows.iter().enumerate() {
        if row[column].is_empty() {
            return Err(DatasetError::EmptyCell {
                row: i + 2,
                column: table.header[column].clone(),
            });
        }
    }
    Ok(())
}

fn encode_categorical(
    table: &RawTable,
    column: usize,
    pinned: Option<&[String]>,
) -> Result<(Vec<String>, Vec<u32>), DatasetError> {
    let mut categories: Vec<String> = pinned.map(<[String]>::to_vec).unwrap_or_default();
    let mut values = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let cell = &row[column];
        match categories.iter().position(|c| c == cell) {
            Some(index) => values.push(index as u32),
            None if pinned.is_some() => {
                return Err(DatasetError::UnknownCategory {
                    column: table.header[column].clone(),
                    value: cell.clone(),
                });
            }
            None => {
                categories.push(cell.clone());
                values.push((categories.len() - 1) as u32);
            }
        }
    }
    Ok((categories, values))
}

fn encode_continuous(
    table: &RawTable,
    column: usize,
) -> Result<Vec<f64>, DatasetError> {
    let mut values = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        let cell = &row[column];
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(DatasetError::NonFinite {
                    row: i + 2,
                    column: table.header[column].clone(),
                    value: cell.clone(),
                });
            }
            Err(_) => {
                return Err(DatasetError::NotNumeric {
                    row: i + 2,
                    column: table.header[column].clone(),
                    value: cell.clone(),
                });
            }
        }
    }
    Ok(values)
}

/// Parses training CSV: first row is the header, `decision_column` names the
/// class column, every other column is a predictor. Without a hint a column
/// is continuous iff all of its values parse as finite reals; the decision
/// column is always categorical.
pub fn parse_csv(
    reader: impl Read,
    decision_column: &str,
    hint: Option<&SchemaHint>,
) -> Result<InformationSystem, DatasetError> {
    let table = read_raw(reader)?;
    let decision_index = table
        .header
        .iter()
        .position(|name| name == decision_column)
        .ok_or_else(|| DatasetError::MissingDecisionColumn {
            name: decision_column.to_owned(),
        })?;
    let predictor_indices: Vec<usize> =
        (0..table.header.len()).filter(|&i| i != decision_index).collect();
    if predictor_indices.is_empty() {
        return Err(DatasetError::NoPredictors);
    }
    if let Some(hint) = hint {
        for pinned in &hint.features {
            if !table.header.contains(&pinned.name) {
                return Err(DatasetError::MissingColumn {
                    name: pinned.name.clone(),
                });
            }
        }
    }

    let mut features = Vec::with_capacity(predictor_indices.len());
    let mut columns = Vec::with_capacity(predictor_indices.len());
    for &column in &predictor_indices {
        check_cells(&table, column)?;
        let name = table.header[column].clone();
        let pinned_kind = hint.and_then(|h| h.feature(&name)).map(|f| &f.kind);
        match pinned_kind {
            Some(FeatureKind::Continuous) => {
                columns.push(Column::Continuous(encode_continuous(&table, column)?));
                features.push(FeatureSchema::continuous(name));
            }
            Some(FeatureKind::Categorical { categories }) => {
                let (categories, values) =
                    encode_categorical(&table, column, Some(categories))?;
                columns.push(Column::Categorical(values));
                features.push(FeatureSchema::categorical(name, categories));
            }
            None => {
                let all_numeric = table
                    .rows
                    .iter()
                    .all(|row| parse_finite(&row[column]).is_some());
                if all_numeric {
                    columns.push(Column::Continuous(encode_continuous(&table, column)?));
                    features.push(FeatureSchema::continuous(name));
                } else {
                    let (categories, values) = encode_categorical(&table, column, None)?;
                    columns.push(Column::Categorical(values));
                    features.push(FeatureSchema::categorical(name, categories));
                }
            }
        }
    }

    check_cells(&table, decision_index)?;
    let pinned_classes = hint.and_then(|h| h.classes.as_deref());
    let (classes, decision) = match encode_categorical(&table, decision_index, pinned_classes) {
        Ok(ok) => ok,
        Err(DatasetError::UnknownCategory { value, .. }) => {
            return Err(DatasetError::UnknownClass { value });
        }
        Err(e) => return Err(e),
    };
    if classes.len() < 2 {
        return Err(DatasetError::TooFewClasses {
            found: classes.len(),
        });
    }
    let decision: Vec<usize> = decision.into_iter().map(|d| d as usize).collect();
    let schema = DataSchema {
        features,
        decision: decision_column.to_owned(),
        classes,
    };
    InformationSystem::new(schema, columns, decision)
}

/// Parses CSV against a pinned schema, matching columns by name. Every
/// schema feature must be present; unexpected extra columns are rejected so
/// that misaligned files fail loudly instead of predicting nonsense. Unknown
/// categorical values are errors. The decision column is handled per
/// [`DecisionColumn`]; in `Ignored` mode missing decisions are tolerated and
/// the returned system carries placeholder class indices.
pub fn parse_csv_with_schema(
    reader: impl Read,
    schema: &DataSchema,
    decision: DecisionColumn,
) -> Result<InformationSystem, DatasetError> {
    let table = read_raw(reader)?;
    let decision_index = table.header.iter().position(|name| *name == schema.decision);
    if decision == DecisionColumn::Required && decision_index.is_none() {
        return Err(DatasetError::MissingDecisionColumn {
            name: schema.decision.clone(),
        });
    }
    let mut feature_positions = Vec::with_capacity(schema.features.len());
    for feature in &schema.features {
        let position = table
            .header
            .iter()
            .position(|name| *name == feature.name)
            .ok_or_else(|| DatasetError::MissingColumn {
                name: feature.name.clone(),
            })?;
        feature_positions.push(position);
    }
    for (i, name) in table.header.iter().enumerate() {
        if Some(i) != decision_index && !feature_positions.contains(&i) {
            return Err(DatasetError::UnknownColumn { name: name.clone() });
        }
    }

    let mut columns = Vec::with_capacity(schema.features.len());
    for (feature, &position) in schema.features.iter().zip(&feature_positions) {
        check_cells(&table, position)?;
        match &feature.kind {
            FeatureKind::Continuous => {
                columns.push(Column::Continuous(encode_continuous(&table, position)?));
            }
            FeatureKind::Categorical { categories } => {
                let (_, values) = encode_categorical(&table, position, Some(categories))?;
                columns.push(Column::Categorical(values));
            }
        }
    }

    let n = table.rows.len();
    let decision_values = match (decision, decision_index) {
        (DecisionColumn::Required, Some(index)) => {
            check_cells(&table, index)?;
            let mut values = Vec::with_capacity(n);
            for row in &table.rows {
                let cell = &row[index];
                let class = schema
                    .classes
                    .iter()
                    .position(|c| c == cell)
                    .ok_or_else(|| DatasetError::UnknownClass { value: cell.clone() })?;
                values.push(class);
            }
            values
        }
        _ => vec![0; n],
    };

    InformationSystem::new(schema.clone(), columns, decision_values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, decision: &str) -> Result<InformationSystem, DatasetError> {
        parse_csv(text.as_bytes(), decision, None)
    }

    #[test]
    fn infers_mixed_schema() {
        let is = parse("a,b,cls\n1.5,red,yes\n2.0,blue,no\n", "cls").unwrap();
        assert_eq!(is.n_objects(), 2);
        assert_eq!(is.feature(0).kind, FeatureKind::Continuous);
        assert_eq!(
            is.feature(1).categories().unwrap(),
            &["red".to_owned(), "blue".to_owned()]
        );
        assert_eq!(is.classes(), &["yes".to_owned(), "no".to_owned()]);
        assert_eq!(is.continuous_value(0, 0), 1.5);
        assert_eq!(is.categorical_value(1, 1), 1);
        assert_eq!(is.decisions(), &[0, 1]);
    }

    #[test]
    fn decision_only_file_has_no_predictors() {
        let err = parse("cls\nyes\nno\n", "cls").unwrap_err();
        assert!(matches!(err, DatasetError::NoPredictors));
    }

    #[test]
    fn one_non_numeric_value_forces_categorical() {
        let is = parse("a,cls\n1,x\n2,y\nx,x\n", "cls").unwrap();
        assert_eq!(
            is.feature(0).categories().unwrap(),
            &["1".to_owned(), "2".to_owned(), "x".to_owned()]
        );
    }

    #[test]
    fn missing_decision_column_rejected() {
        let err = parse("a,b\n1,2\n", "cls").unwrap_err();
        assert!(matches!(err, DatasetError::MissingDecisionColumn { .. }));
    }

    #[test]
    fn ragged_row_rejected() {
        let err = parse("a,cls\n1,yes\n2\n", "cls").unwrap_err();
        assert!(matches!(
            err,
            DatasetError::RaggedRow {
                row: 3,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn empty_cell_rejected() {
        let err = parse("a,cls\n,yes\n2,no\n", "cls").unwrap_err();
        assert!(matches!(err, DatasetError::EmptyCell { row: 2, .. }));
    }

    #[test]
    fn single_class_rejected() {
        let err = parse("a,cls\n1,yes\n2,yes\n", "cls").unwrap_err();
        assert!(matches!(err, DatasetError::TooFewClasses { found: 1 }));
    }

    #[test]
    fn non_finite_words_fall_back_to_categorical_without_hint() {
        // "inf" parses as f64 infinity, so the finite check matters here.
        let is = parse("a,cls\n1,yes\ninf,no\n", "cls").unwrap();
        assert!(is.feature(0).kind.is_categorical());
    }

    #[test]
    fn pinned_continuous_rejects_non_finite() {
        let hint = SchemaHint {
            features: vec![FeatureSchema::continuous("a")],
            classes: None,
        };
        let err = parse_csv("a,cls\n1,yes\ninf,no\n".as_bytes(), "cls", Some(&hint)).unwrap_err();
        assert!(matches!(err, DatasetError::NonFinite { row: 3, .. }));
        let err = parse_csv("a,cls\n1,yes\nx,no\n".as_bytes(), "cls", Some(&hint)).unwrap_err();
        assert!(matches!(err, DatasetError::NotNumeric { .. }));
    }

    #[test]
    fn pinned_categories_reject_unknown_and_fix_order() {
        let hint = SchemaHint {
            features: vec![FeatureSchema::categorical(
                "b",
                vec!["blue".into(), "red".into()],
            )],
            classes: None,
        };
        let is = parse_csv("b,cls\nred,yes\nblue,no\n".as_bytes(), "cls", Some(&hint)).unwrap();
        assert_eq!(is.categorical_value(0, 0), 1);
        let err =
            parse_csv("b,cls\ngreen,yes\nblue,no\n".as_bytes(), "cls", Some(&hint)).unwrap_err();
        assert!(matches!(err, DatasetError::UnknownCategory { .. }));
    }

    #[test]
    fn pinned_classes_reject_unknown_label() {
        let hint = SchemaHint {
            features: vec![],
            classes: Some(vec!["no".into(), "yes".into()]),
        };
        let is = parse_csv("a,cls\n1,yes\n2,no\n".as_bytes(), "cls", Some(&hint)).unwrap();
        assert_eq!(is.decisions(), &[1, 0]);
        let err = parse_csv("a,cls\n1,maybe\n2,no\n".as_bytes(), "cls", Some(&hint)).unwrap_err();
        assert!(matches!(err, DatasetError::UnknownClass { .. }));
    }

    #[test]
    fn hint_for_absent_column_rejected() {
        let hint = SchemaHint {
            features: vec![FeatureSchema::continuous("zz")],
            classes: None,
        };
        let err = parse_csv("a,cls\n1,yes\n2,no\n".as_bytes(), "cls", Some(&hint)).unwrap_err();
        assert!(matches!(err, DatasetError::MissingColumn { .. }));
    }

    #[test]
    fn duplicate_header_rejected() {
        let err = parse("a,a,cls\n1,2,yes\n1,2,no\n", "cls").unwrap_err();
        assert!(matches!(err, DatasetError::DuplicateColumn { .. }));
    }

    #[test]
    fn round_trip_is_identical() {
        let text = "a,b,cls\n1.5,red,yes\n-2,blue,no\n0.25,red,yes\n";
        let original = parse(text, "cls").unwrap();
        let written = original.to_csv_string();
        let reparsed = parse(&written, "cls").unwrap();
        assert_eq!(original, reparsed);
    }

    #[test]
    fn round_trip_with_decision_in_middle_moves_it_last() {
        let original = parse("a,cls,b\n1.5,yes,red\n2.5,no,blue\n", "cls").unwrap();
        let reparsed = parse(&original.to_csv_string(), "cls").unwrap();
        assert_eq!(original, reparsed);
    }

    #[test]
    fn kind_inference_is_row_order_independent() {
        let forward = parse("a,b,cls\n1,red,yes\n2,blue,no\nx,red,yes\n", "cls").unwrap();
        let shuffled = parse("a,b,cls\nx,red,yes\n2,blue,no\n1,red,yes\n", "cls").unwrap();
        for (f, s) in forward.features().iter().zip(shuffled.features()) {
            assert_eq!(f.kind.is_categorical(), s.kind.is_categorical());
        }
    }

    #[test]
    fn class_distribution_examples() {
        let is = parse("a,cls\n1,p\n2,p\n3,q\n4,q\n", "cls").unwrap();
        let full = class_distribution(&is, &ObjectSubset::full(4)).unwrap();
        assert_eq!(full.probs(), &[0.5, 0.5]);

        let pure = class_distribution(&is, &ObjectSubset::from_indices(vec![0, 1])).unwrap();
        assert_eq!(pure.probs(), &[1.0, 0.0]);

        // Multiset counting: row 0 twice, row 2 once.
        let multi = class_distribution(&is, &ObjectSubset::from_indices(vec![0, 0, 2])).unwrap();
        assert_eq!(multi.probs(), &[2.0 / 3.0, 1.0 / 3.0]);

        let err = class_distribution(&is, &ObjectSubset::from_indices(vec![])).unwrap_err();
        assert!(matches!(err, DatasetError::EmptySubset));
    }

    #[test]
    fn schema_parse_required_decision() {
        let trained = parse("a,b,cls\n1.5,red,yes\n2.0,blue,no\n", "cls").unwrap();
        let is = parse_csv_with_schema(
            "b,a,cls\nblue,9.5,no\n".as_bytes(),
            trained.schema(),
            DecisionColumn::Required,
        )
        .unwrap();
        assert_eq!(is.fingerprint(), trained.fingerprint());
        assert_eq!(is.continuous_value(0, 0), 9.5);
        assert_eq!(is.categorical_value(1, 0), 1);
        assert_eq!(is.decisions(), &[1]);
    }

    #[test]
    fn schema_parse_ignored_decision_and_empty_data() {
        let trained = parse("a,b,cls\n1.5,red,yes\n2.0,blue,no\n", "cls").unwrap();
        let is = parse_csv_with_schema(
            "a,b\n3.5,red\n".as_bytes(),
            trained.schema(),
            DecisionColumn::Ignored,
        )
        .unwrap();
        assert_eq!(is.n_objects(), 1);
        let empty = parse_csv_with_schema(
            "a,b\n".as_bytes(),
            trained.schema(),
            DecisionColumn::Ignored,
        )
        .unwrap();
        assert_eq!(empty.n_objects(), 0);
    }

    #[test]
    fn schema_parse_rejects_unknown_and_missing_columns() {
        let trained = parse("a,b,cls\n1.5,red,yes\n2.0,blue,no\n", "cls").unwrap();
        let err = parse_csv_with_schema(
            "a,b,extra\n1.0,red,9\n".as_bytes(),
            trained.schema(),
            DecisionColumn::Ignored,
        )
        .unwrap_err();
        assert!(matches!(err, DatasetError::UnknownColumn { .. }));
        let err = parse_csv_with_schema(
            "a\n1.0\n".as_bytes(),
            trained.schema(),
            DecisionColumn::Ignored,
        )
        .unwrap_err();
        assert!(matches!(err, DatasetError::MissingColumn { .. }));
    }

    #[test]
    fn fingerprint_distinguishes_schemas() {
        let a = parse("a,cls\n1,yes\n2,no\n", "cls").unwrap();
        let b = parse("a,cls\nx,yes\n2,no\n", "cls").unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }
}
