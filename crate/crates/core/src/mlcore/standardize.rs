use serde::{Deserialize, Serialize};

use crate::featgen::FeatureMatrix;

/// Per-feature z-scoring fitted on training data. Columns with zero variance
/// on the fit data are mapped to 0 everywhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation; 1.0 for constant columns.
    pub std: Vec<f64>,
    pub constant: Vec<bool>,
}

impl Standardizer {
    pub fn fit(x: &FeatureMatrix) -> Self {
        assert!(x.n_rows() > 0, "cannot standardize an empty matrix");
        let n = x.n_rows() as f64;
        let d = x.n_cols();
        let mut mean = vec![0.0; d];
        for r in x.rows() {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for r in x.rows() {
            for ((s, v), m) in var.iter_mut().zip(r).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let mut std = Vec::with_capacity(d);
        let mut constant = Vec::with_capacity(d);
        for (j, s) in var.iter().enumerate() {
            let sd = (s / n).sqrt();
            let column_constant = x.rows().all(|r| r[j] == x.row(0)[j]);
            if column_constant || sd == 0.0 {
                std.push(1.0);
                constant.push(true);
            } else {
                std.push(sd);
                constant.push(false);
            }
        }
        Standardizer { mean, std, constant }
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, v)| if self.constant[j] { 0.0 } else { (v - self.mean[j]) / self.std[j] })
            .collect()
    }

    pub fn apply(&self, x: &FeatureMatrix) -> FeatureMatrix {
        FeatureMatrix::from_rows(x.rows().map(|r| self.apply_row(r)).collect())
    }
}

pub fn standardize_fit(x: &FeatureMatrix) -> Standardizer {
    Standardizer::fit(x)
}

pub fn standardize_apply(s: &Standardizer, x: &FeatureMatrix) -> FeatureMatrix {
    s.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn two_point_and_constant_columns() {
        let x = FeatureMatrix::from_rows(vec![vec![1.0, 5.0], vec![3.0, 5.0]]);
        let s = standardize_fit(&x);
        let z = standardize_apply(&s, &x);
        assert_eq!(z.column(0), vec![-1.0, 1.0]);
        assert_eq!(z.column(1), vec![0.0, 0.0]);
        assert!(s.std.iter().all(|&v| v > 0.0));
        let three = FeatureMatrix::from_rows(vec![vec![5.0], vec![5.0], vec![5.0]]);
        assert_eq!(standardize_apply(&standardize_fit(&three), &three).column(0), vec![0.0; 3]);
        // unseen values in a constant column still map to zero
        assert_eq!(s.apply_row(&[1.0, 99.0])[1], 0.0);
    }

    #[test]
    fn random_matrix_moments() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> =
            (0..100).map(|_| (0..10).map(|j| rng.random_range(-5.0..5.0) * (j + 1) as f64 + j as f64).collect()).collect();
        let x = FeatureMatrix::from_rows(rows);
        let z = standardize_apply(&standardize_fit(&x), &x);
        for j in 0..10 {
            let col = z.column(j);
            let mu = col.iter().sum::<f64>() / 100.0;
            let sd = (col.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / 100.0).sqrt();
            assert!(mu.abs() < 1e-12, "mean {mu}");
            assert!((sd - 1.0).abs() < 1e-12, "sd {sd}");
        }
    }
}
