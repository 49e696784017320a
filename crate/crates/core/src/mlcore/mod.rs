//! Native classifiers (KNN, CART, MLP, linear SVM), randomized k-fold
//! hyperparameter search under an accuracy or a total-time objective, and the
//! evaluation metrics used in the comparative report.

mod knn;
mod metrics;
pub mod mlp;
mod search;
mod standardize;
pub mod svm;
mod tree;

pub use knn::{KnnModel, Weighting};
pub use metrics::{accuracy, metric_accuracy_within, metric_total_time};
pub use search::{cv_evaluate, cv_search, cv_search_detailed, CvConfig, CvOutcome, CvScores, Objective, SearchSpace};
pub use standardize::{standardize_apply, standardize_fit, Standardizer};
pub use tree::{Criterion, Node, TreeModel};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::featgen::FeatureMatrix;
use crate::oracle::{label_best, TimingRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlError {
    #[error("training data has no rows")]
    EmptyClassSet,
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("expected {expected} feature columns, found {found}")]
    ColumnMismatch { expected: usize, found: usize },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("label {label} outside [0, {n_classes})")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("{folds} folds requested for {rows} rows")]
    FoldsTooLarge { folds: usize, rows: usize },
    #[error("invalid hyperparameters: {0}")]
    InvalidHyper(String),
    #[error("unknown model family `{0}`")]
    UnknownFamily(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "DT")]
    Dt,
    #[serde(rename = "KNN")]
    Knn,
    #[serde(rename = "MLP")]
    Mlp,
    #[serde(rename = "SVM")]
    Lsvm,
}

impl Family {
    /// Report column order.
    pub const ALL: [Family; 4] = [Family::Dt, Family::Knn, Family::Mlp, Family::Lsvm];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dt => "DT",
            Family::Knn => "KNN",
            Family::Mlp => "MLP",
            Family::Lsvm => "SVM",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = MlError;
    fn from_str(s: &str) -> Result<Self, MlError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DT" => Ok(Family::Dt),
            "KNN" => Ok(Family::Knn),
            "MLP" => Ok(Family::Mlp),
            "SVM" | "LSVM" => Ok(Family::Lsvm),
            other => Err(MlError::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    Knn { k: usize, weighting: Weighting },
    Dt { max_depth: Option<usize>, min_samples_split: usize, criterion: Criterion },
    Mlp { hidden: usize, learning_rate: f64, epochs: usize, l2: f64 },
    Lsvm { c: f64, epochs: usize, learning_rate: f64 },
}

impl ModelSpec {
    pub fn family(&self) -> Family {
        match self {
            ModelSpec::Knn { .. } => Family::Knn,
            ModelSpec::Dt { .. } => Family::Dt,
            ModelSpec::Mlp { .. } => Family::Mlp,
            ModelSpec::Lsvm { .. } => Family::Lsvm,
        }
    }

    pub fn validate(&self) -> Result<(), MlError> {
        let bad = |m: &str| Err(MlError::InvalidHyper(m.to_string()));
        match *self {
            ModelSpec::Knn { k, .. } if k == 0 => bad("k must be at least 1"),
            ModelSpec::Dt { min_samples_split, .. } if min_samples_split < 2 => bad("min_samples_split must be >= 2"),
            ModelSpec::Dt { max_depth: Some(0), .. } => bad("max_depth must be >= 1"),
            ModelSpec::Mlp { hidden, learning_rate, l2, .. }
                if hidden == 0 || !(learning_rate > 0.0) || !(l2 >= 0.0) =>
            {
                bad("MLP needs hidden >= 1, learning_rate > 0, l2 >= 0")
            }
            ModelSpec::Lsvm { c, learning_rate, .. } if !(c > 0.0) || !(learning_rate > 0.0) => {
                bad("SVM needs C > 0 and learning_rate > 0")
            }
            _ => Ok(()),
        }
    }

    /// Parses the `key=value` form written by `Display` for the given family.
    pub fn parse(family: Family, text: &str) -> Result<Self, MlError> {
        let kv: std::collections::HashMap<&str, &str> =
            text.split_whitespace().filter_map(|t| t.split_once('=')).collect();
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| MlError::InvalidHyper(format!("missing `{k}`")));
        let num = |k: &str| -> Result<f64, MlError> {
            get(k)?.parse::<f64>().map_err(|_| MlError::InvalidHyper(format!("bad `{k}`")))
        };
        let int = |k: &str| -> Result<usize, MlError> {
            get(k)?.parse::<usize>().map_err(|_| MlError::InvalidHyper(format!("bad `{k}`")))
        };
        let spec = match family {
            Family::Knn => ModelSpec::Knn {
                k: int("k")?,
                weighting: match get("weighting")? {
                    "uniform" => Weighting::Uniform,
                    "distance" => Weighting::InverseDistance,
                    w => return Err(MlError::InvalidHyper(format!("weighting `{w}`"))),
                },
            },
            Family::Dt => ModelSpec::Dt {
                max_depth: match get("max_depth")? {
                    "none" => None,
                    _ => Some(int("max_depth")?),
                },
                min_samples_split: int("min_samples_split")?,
                criterion: match get("criterion")? {
                    "gini" => Criterion::Gini,
                    "entropy" => Criterion::Entropy,
                    c => return Err(MlError::InvalidHyper(format!("criterion `{c}`"))),
                },
            },
            Family::Mlp => ModelSpec::Mlp {
                hidden: int("hidden")?,
                learning_rate: num("learning_rate")?,
                epochs: int("epochs")?,
                l2: num("l2")?,
            },
            Family::Lsvm => ModelSpec::Lsvm { c: num("C")?, epochs: int("epochs")?, learning_rate: num("learning_rate")? },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Knn { k, weighting } => {
                let w = match weighting {
                    Weighting::Uniform => "uniform",
                    Weighting::InverseDistance => "distance",
                };
                write!(f, "k={k} weighting={w}")
            }
            ModelSpec::Dt { max_depth, min_samples_split, criterion } => {
                let d = max_depth.map_or("none".to_string(), |d| d.to_string());
                let c = match criterion {
                    Criterion::Gini => "gini",
                    Criterion::Entropy => "entropy",
                };
                write!(f, "max_depth={d} min_samples_split={min_samples_split} criterion={c}")
            }
            ModelSpec::Mlp { hidden, learning_rate, epochs, l2 } => {
                write!(f, "hidden={hidden} learning_rate={learning_rate} epochs={epochs} l2={l2}")
            }
            ModelSpec::Lsvm { c, epochs, learning_rate } => {
                write!(f, "C={c} epochs={epochs} learning_rate={learning_rate}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FittedParams {
    Knn(KnnModel),
    Dt(TreeModel),
    Mlp(mlp::MlpParams),
    Lsvm(svm::SvmModel),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub n_classes: usize,
    pub standardizer: Standardizer,
    pub params: FittedParams,
}

fn check_features(x: &FeatureMatrix) -> Result<(), MlError> {
    for (i, r) in x.rows().enumerate() {
        if let Some(j) = r.iter().position(|v| !v.is_finite()) {
            return Err(MlError::NonFinite { row: i, col: j });
        }
    }
    Ok(())
}

/// Fits the standardizer on `x`, then the model on the standardized rows.
/// Deterministic for a given `seed`.
pub fn train(spec: &ModelSpec, x: &FeatureMatrix, y: &[usize], n_classes: usize, seed: u64) -> Result<TrainedModel, MlError> {
    spec.validate()?;
    if x.n_rows() == 0 || n_classes == 0 {
        return Err(MlError::EmptyClassSet);
    }
    if x.n_rows() != y.len() {
        return Err(MlError::LengthMismatch(format!("{} rows, {} labels", x.n_rows(), y.len())));
    }
    if let Some(&label) = y.iter().find(|&&l| l >= n_classes) {
        return Err(MlError::LabelOutOfRange { label, n_classes });
    }
    check_features(x)?;
    let standardizer = Standardizer::fit(x);
    let rows: Vec<Vec<f64>> = x.rows().map(|r| standardizer.apply_row(r)).collect();
    let params = match *spec {
        ModelSpec::Knn { k, weighting } => {
            FittedParams::Knn(KnnModel { k, weighting, x: rows, y: y.to_vec(), n_classes })
        }
        ModelSpec::Dt { max_depth, min_samples_split, criterion } => FittedParams::Dt(TreeModel::fit(
            &rows,
            y,
            n_classes,
            &tree::TreeParams { max_depth, min_samples_split, criterion },
        )),
        ModelSpec::Mlp { hidden, learning_rate, epochs, l2 } => FittedParams::Mlp(mlp::fit(
            &rows,
            y,
            n_classes,
            &mlp::MlpHyper { hidden, learning_rate, epochs, l2 },
            seed,
        )),
        ModelSpec::Lsvm { c, epochs, learning_rate } => {
            FittedParams::Lsvm(svm::SvmModel::fit(&rows, y, n_classes, &svm::SvmHyper { c, epochs, learning_rate }))
        }
    };
    Ok(TrainedModel { spec: spec.clone(), n_classes, standardizer, params })
}

impl TrainedModel {
    pub fn predict_row(&self, row: &[f64]) -> usize {
        let z = self.standardizer.apply_row(row);
        match &self.params {
            FittedParams::Knn(m) => m.predict_row(&z),
            FittedParams::Dt(m) => m.predict_row(&z),
            FittedParams::Mlp(m) => m.predict_row(&z),
            FittedParams::Lsvm(m) => m.predict_row(&z),
        }
    }
}

pub fn predict(m: &TrainedModel, x: &FeatureMatrix) -> Result<Vec<usize>, MlError> {
    if x.n_cols() != m.standardizer.n_features() && x.n_rows() > 0 {
        return Err(MlError::ColumnMismatch { expected: m.standardizer.n_features(), found: x.n_cols() });
    }
    check_features(x)?;
    Ok(x.rows().map(|r| m.predict_row(r)).collect())
}

/// Features, best-ordering labels and the timing records they came from.
#[derive(Clone, Debug)]
pub struct TrainingSet {
    pub x: FeatureMatrix,
    pub y: Vec<usize>,
    pub timings: Vec<TimingRecord>,
    pub n_classes: usize,
}

impl TrainingSet {
    pub fn new(x: FeatureMatrix, y: Vec<usize>, timings: Vec<TimingRecord>) -> Result<Self, MlError> {
        if x.n_rows() != y.len() || y.len() != timings.len() {
            return Err(MlError::LengthMismatch(format!(
                "{} feature rows, {} labels, {} timing records",
                x.n_rows(),
                y.len(),
                timings.len()
            )));
        }
        let n_classes = timings.first().map_or(0, |t| t.costs.len());
        for (i, (t, &l)) in timings.iter().zip(&y).enumerate() {
            if t.costs.len() != n_classes {
                return Err(MlError::LengthMismatch(format!("timing record {i} has {} costs", t.costs.len())));
            }
            if label_best(t) != l {
                return Err(MlError::LengthMismatch(format!("label {l} of row {i} is not the cheapest ordering")));
            }
        }
        Ok(TrainingSet { x, y, timings, n_classes })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}
