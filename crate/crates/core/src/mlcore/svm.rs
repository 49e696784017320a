//! One-vs-rest linear SVM trained by full-batch subgradient descent on
//! `1/(2 C n) |w|^2 + mean_i max(0, 1 - t_i (w.x_i + b))`, which is the usual
//! `|w|^2 / 2 + C sum hinge` objective divided by `C n`.

use serde::{Deserialize, Serialize};

use super::knn::argmax_low;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// One weight vector and bias per class.
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

pub struct SvmHyper {
    pub c: f64,
    pub epochs: usize,
    pub learning_rate: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Objective and (sub)gradient for one binary problem with targets `t_i = ±1`.
pub fn objective_and_grad(w: &[f64], b: f64, x: &[Vec<f64>], t: &[f64], c: f64) -> (f64, Vec<f64>, f64) {
    let n = x.len() as f64;
    let lambda = 1.0 / (c * n);
    let mut gw: Vec<f64> = w.iter().map(|wi| lambda * wi).collect();
    let mut gb = 0.0;
    let mut hinge = 0.0;
    for (xi, &ti) in x.iter().zip(t) {
        let margin = ti * (dot(w, xi) + b);
        if margin < 1.0 {
            hinge += 1.0 - margin;
            for (g, xv) in gw.iter_mut().zip(xi) {
                *g -= ti * xv / n;
            }
            gb -= ti / n;
        }
    }
    let obj = 0.5 * lambda * dot(w, w) + hinge / n;
    (obj, gw, gb)
}

impl SvmModel {
    /// Step size decays as `learning_rate / sqrt(1 + epoch)`.
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, hp: &SvmHyper) -> Self {
        let d = x[0].len();
        let mut ws = Vec::with_capacity(n_classes);
        let mut bs = Vec::with_capacity(n_classes);
        for class in 0..n_classes {
            let t: Vec<f64> = y.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
            let mut w = vec![0.0; d];
            let mut b = 0.0;
            for epoch in 0..hp.epochs {
                let (_, gw, gb) = objective_and_grad(&w, b, x, &t, hp.c);
                let eta = hp.learning_rate / ((1 + epoch) as f64).sqrt();
                w.iter_mut().zip(&gw).for_each(|(wi, g)| *wi -= eta * g);
                b -= eta * gb;
            }
            ws.push(w);
            bs.push(b);
        }
        SvmModel { w: ws, b: bs }
    }

    pub fn predict_row(&self, q: &[f64]) -> usize {
        let scores: Vec<f64> = self.w.iter().zip(&self.b).map(|(w, b)| dot(w, q) + b).collect();
        argmax_low(&scores)
    }
}
