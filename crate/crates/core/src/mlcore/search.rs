//! Randomized hyperparameter search scored by k-fold cross-validation.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{predict, train, Criterion, Family, MlError, ModelSpec, TrainingSet, Weighting};
use crate::seeds::{derive_seed, stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Accuracy,
    Time,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Accuracy => "accuracy",
            Objective::Time => "time",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "accuracy" => Ok(Objective::Accuracy),
            "time" => Ok(Objective::Time),
            other => Err(format!("unknown CV objective `{other}` (accuracy|time)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    pub n_candidates: usize,
    pub objective: Objective,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig { folds: 5, n_candidates: 20, objective: Objective::Accuracy, seed: 0 }
    }
}

impl CvConfig {
    pub fn validate(&self, rows: usize) -> Result<(), MlError> {
        if self.folds < 2 {
            return Err(MlError::InvalidHyper("folds must be at least 2".into()));
        }
        if self.n_candidates == 0 {
            return Err(MlError::InvalidHyper("n_candidates must be at least 1".into()));
        }
        if self.folds > rows {
            return Err(MlError::FoldsTooLarge { folds: self.folds, rows });
        }
        Ok(())
    }
}

/// Inclusive integer ranges and inclusive log-uniform real ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchSpace {
    pub knn_k: (usize, usize),
    pub dt_max_depth: (usize, usize),
    pub dt_min_samples_split: (usize, usize),
    pub mlp_hidden: (usize, usize),
    pub mlp_learning_rate: (f64, f64),
    pub mlp_epochs: (usize, usize),
    pub mlp_l2: (f64, f64),
    pub svm_c: (f64, f64),
    pub svm_epochs: (usize, usize),
    pub svm_learning_rate: (f64, f64),
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            knn_k: (1, 30),
            dt_max_depth: (2, 20),
            dt_min_samples_split: (2, 10),
            mlp_hidden: (4, 64),
            mlp_learning_rate: (1e-4, 1e-1),
            mlp_epochs: (50, 400),
            mlp_l2: (1e-6, 1e-2),
            svm_c: (1e-3, 1e3),
            svm_epochs: (50, 400),
            svm_learning_rate: (1e-3, 1e-1),
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.random_range(lo.ln()..=hi.ln()).exp()
}

fn int(rng: &mut ChaCha8Rng, (lo, hi): (usize, usize)) -> usize {
    rng.random_range(lo..=hi)
}

fn parse_pair<T: std::str::FromStr>(v: &str) -> Option<(T, T)> {
    let (a, b) = v.split_once("..")?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl SearchSpace {
    /// Overrides one range from a `lo..hi` value. Returns false for an unknown
    /// key or a malformed or empty range.
    pub fn set(&mut self, key: &str, value: &str) -> bool {
        fn ints(slot: &mut (usize, usize), v: &str, min: usize) -> bool {
            match parse_pair::<usize>(v) {
                Some((a, b)) if a >= min && a <= b => {
                    *slot = (a, b);
                    true
                }
                _ => false,
            }
        }
        fn reals(slot: &mut (f64, f64), v: &str) -> bool {
            match parse_pair::<f64>(v) {
                Some((a, b)) if a > 0.0 && a <= b && b.is_finite() => {
                    *slot = (a, b);
                    true
                }
                _ => false,
            }
        }
        match key {
            "knn_k" => ints(&mut self.knn_k, value, 1),
            "dt_max_depth" => ints(&mut self.dt_max_depth, value, 1),
            "dt_min_samples_split" => ints(&mut self.dt_min_samples_split, value, 2),
            "mlp_hidden" => ints(&mut self.mlp_hidden, value, 1),
            "mlp_learning_rate" => reals(&mut self.mlp_learning_rate, value),
            "mlp_epochs" => ints(&mut self.mlp_epochs, value, 0),
            "mlp_l2" => reals(&mut self.mlp_l2, value),
            "svm_c" => reals(&mut self.svm_c, value),
            "svm_epochs" => ints(&mut self.svm_epochs, value, 0),
            "svm_learning_rate" => reals(&mut self.svm_learning_rate, value),
            _ => false,
        }
    }

    fn sample(&self, family: Family, rng: &mut ChaCha8Rng) -> ModelSpec {
        match family {
            Family::Knn => {
                let k = int(rng, self.knn_k);
                let weighting = if rng.random_bool(0.5) { Weighting::Uniform } else { Weighting::InverseDistance };
                ModelSpec::Knn { k, weighting }
            }
            Family::Dt => {
                let max_depth = Some(int(rng, self.dt_max_depth));
                let min_samples_split = int(rng, self.dt_min_samples_split);
                let criterion = if rng.random_bool(0.5) { Criterion::Gini } else { Criterion::Entropy };
                ModelSpec::Dt { max_depth, min_samples_split, criterion }
            }
            Family::Mlp => {
                let hidden = int(rng, self.mlp_hidden);
                let learning_rate = log_uniform(rng, self.mlp_learning_rate);
                let epochs = int(rng, self.mlp_epochs);
                let l2 = log_uniform(rng, self.mlp_l2);
                ModelSpec::Mlp { hidden, learning_rate, epochs, l2 }
            }
            Family::Lsvm => {
                let c = log_uniform(rng, self.svm_c);
                let epochs = int(rng, self.svm_epochs);
                let learning_rate = log_uniform(rng, self.svm_learning_rate);
                ModelSpec::Lsvm { c, epochs, learning_rate }
            }
        }
    }

    /// The candidate list depends on the seed and family only, never on the objective.
    pub fn candidates(&self, family: Family, n: usize, seed: u64) -> Vec<ModelSpec> {
        let mut rng = stream(seed, &format!("candidates-{family}"));
        (0..n).map(|_| self.sample(family, &mut rng)).collect()
    }
}

/// Fold index per row: seeded shuffle, then round-robin.
pub fn fold_assignment(rows: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows).collect();
    order.shuffle(&mut stream(seed, "folds"));
    let mut fold = vec![0; rows];
    for (pos, &row) in order.iter().enumerate() {
        fold[row] = pos % folds;
    }
    fold
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvScores {
    pub accuracy: f64,
    pub total_time: f64,
}

impl CvScores {
    fn better_than(&self, other: &CvScores, objective: Objective) -> bool {
        match objective {
            Objective::Accuracy => self.accuracy > other.accuracy,
            Objective::Time => self.total_time < other.total_time,
        }
    }

    pub fn score(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Accuracy => self.accuracy,
            Objective::Time => self.total_time,
        }
    }
}

/// Out-of-fold predictions for every row, then both scores over all rows.
pub fn cv_evaluate(spec: &ModelSpec, data: &TrainingSet, cfg: &CvConfig) -> Result<CvScores, MlError> {
    cfg.validate(data.len())?;
    let fold = fold_assignment(data.len(), cfg.folds, cfg.seed);
    let train_seed = derive_seed(cfg.seed, "train");
    let mut pred = vec![0usize; data.len()];
    for k in 0..cfg.folds {
        let (fit_rows, val_rows): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| fold[i] != k);
        let x_fit = data.x.select_rows(&fit_rows);
        let y_fit: Vec<usize> = fit_rows.iter().map(|&i| data.y[i]).collect();
        let model = train(spec, &x_fit, &y_fit, data.n_classes, train_seed)?;
        let out = predict(&model, &data.x.select_rows(&val_rows))?;
        for (&i, p) in val_rows.iter().zip(out) {
            pred[i] = p;
        }
    }
    let hits = pred.iter().zip(&data.y).filter(|(p, y)| p == y).count();
    let total_time = pred.iter().zip(&data.timings).map(|(&p, t)| t.costs[p]).sum();
    Ok(CvScores { accuracy: hits as f64 / data.len() as f64, total_time })
}

#[derive(Clone, Debug)]
pub struct CvOutcome {
    pub best: ModelSpec,
    pub best_index: usize,
    pub candidates: Vec<(ModelSpec, CvScores)>,
}

impl CvOutcome {
    pub fn best_scores(&self) -> CvScores {
        self.candidates[self.best_index].1
    }
}

/// Evaluates every candidate (in parallel) and keeps the best under
/// `cfg.objective`; the earliest candidate wins ties.
pub fn cv_search_detailed(
    family: Family,
    data: &TrainingSet,
    cfg: &CvConfig,
    space: &SearchSpace,
) -> Result<CvOutcome, MlError> {
    cfg.validate(data.len())?;
    let specs = space.candidates(family, cfg.n_candidates, cfg.seed);
    let scores: Vec<CvScores> =
        specs.par_iter().map(|s| cv_evaluate(s, data, cfg)).collect::<Result<_, _>>()?;
    let mut best_index = 0;
    for (i, s) in scores.iter().enumerate() {
        if s.better_than(&scores[best_index], cfg.objective) {
            best_index = i;
        }
    }
    Ok(CvOutcome {
        best: specs[best_index].clone(),
        best_index,
        candidates: specs.into_iter().zip(scores).collect(),
    })
}

pub fn cv_search(family: Family, data: &TrainingSet, cfg: &CvConfig) -> Result<ModelSpec, MlError> {
    Ok(cv_search_detailed(family, data, cfg, &SearchSpace::default())?.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featgen::FeatureMatrix;
    use crate::oracle::{label_best, TimingRecord};

    fn toy(n: usize) -> TrainingSet {
        let mut rows = Vec::new();
        let mut timings = Vec::new();
        for i in 0..n {
            let a = (i % 7) as f64;
            let b = ((i * 3) % 5) as f64;
            rows.push(vec![a, b, a * b]);
            let costs = vec![1.0 + a, 1.0 + b, 3.5, 1.0 + (a - b).abs()];
            timings.push(TimingRecord { problem_id: i, costs, timed_out: vec![false; 4] });
        }
        let y = timings.iter().map(label_best).collect();
        TrainingSet::new(FeatureMatrix::from_rows(rows), y, timings).unwrap()
    }

    #[test]
    fn folds_are_balanced_and_seeded() {
        let f = fold_assignment(23, 5, 9);
        for k in 0..5 {
            let c = f.iter().filter(|&&x| x == k).count();
            assert!(c == 4 || c == 5);
        }
        assert_eq!(f, fold_assignment(23, 5, 9));
        assert_ne!(f, fold_assignment(23, 5, 10));
    }

    #[test]
    fn candidate_list_ignores_objective() {
        let data = toy(40);
        let mut cfg = CvConfig { folds: 4, n_candidates: 6, objective: Objective::Accuracy, seed: 3 };
        let a = cv_search_detailed(Family::Knn, &data, &cfg, &SearchSpace::default()).unwrap();
        cfg.objective = Objective::Time;
        let t = cv_search_detailed(Family::Knn, &data, &cfg, &SearchSpace::default()).unwrap();
        let specs = |o: &CvOutcome| o.candidates.iter().map(|c| c.0.clone()).collect::<Vec<_>>();
        assert_eq!(specs(&a), specs(&t));
        assert!(t.best_scores().total_time <= a.best_scores().total_time);
        for (_, s) in &t.candidates {
            assert!(t.best_scores().total_time <= s.total_time);
        }
        for (_, s) in &a.candidates {
            assert!(a.best_scores().accuracy >= s.accuracy);
        }
    }

    #[test]
    fn single_candidate_is_returned() {
        let data = toy(20);
        for objective in [Objective::Accuracy, Objective::Time] {
            let cfg = CvConfig { folds: 2, n_candidates: 1, objective, seed: 11 };
            let only = SearchSpace::default().candidates(Family::Dt, 1, 11).remove(0);
            assert_eq!(cv_search(Family::Dt, &data, &cfg).unwrap(), only);
        }
    }

    #[test]
    fn too_many_folds() {
        let data = toy(3);
        let cfg = CvConfig { folds: 4, ..CvConfig::default() };
        assert_eq!(cv_search(Family::Knn, &data, &cfg).unwrap_err(), MlError::FoldsTooLarge { folds: 4, rows: 3 });
    }

    #[test]
    fn space_overrides() {
        let mut s = SearchSpace::default();
        assert!(s.set("knn_k", "3..3"));
        assert!(!s.set("knn_k", "0..3"));
        assert!(!s.set("mlp_l2", "1..0.5"));
        assert!(!s.set("nope", "1..2"));
        for c in s.candidates(Family::Knn, 10, 0) {
            assert!(matches!(c, ModelSpec::Knn { k: 3, .. }));
        }
    }
}
