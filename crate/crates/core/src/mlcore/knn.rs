use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weighting {
    Uniform,
    InverseDistance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub weighting: Weighting,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<usize>,
    pub n_classes: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl KnnModel {
    /// Euclidean neighbours; distance ties go to the lower training row, vote
    /// ties to the lower label. With inverse-distance weighting, exact matches
    /// (distance 0) outvote everything else.
    pub fn predict_row(&self, q: &[f64]) -> usize {
        let mut d: Vec<(f64, usize)> = self.x.iter().enumerate().map(|(i, r)| (sq_dist(r, q), i)).collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let nearest = &d[..self.k.min(d.len())];
        let mut votes = vec![0.0; self.n_classes];
        let exact = self.weighting == Weighting::InverseDistance && nearest.iter().any(|(dist, _)| *dist == 0.0);
        for &(dist, i) in nearest {
            let w = match self.weighting {
                Weighting::Uniform => 1.0,
                Weighting::InverseDistance if exact => f64::from(dist == 0.0),
                Weighting::InverseDistance => 1.0 / dist.sqrt(),
            };
            votes[self.y[i]] += w;
        }
        argmax_low(&votes)
    }
}

/// Index of the largest value, first one on ties.
pub(crate) fn argmax_low(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
