//! One-hidden-layer perceptron: tanh hidden units, softmax output,
//! cross-entropy loss with L2 weight decay, mini-batch gradient descent.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::knn::argmax_low;

pub const BATCH_SIZE: usize = 32;

/// Row-major weights: `w1[h][d]`, `w2[c][h]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

impl MlpParams {
    /// Uniform in `±1/sqrt(fan_in)` for weights and biases alike.
    pub fn init(n_in: usize, hidden: usize, n_out: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut layer = |rows: usize, fan_in: usize| -> (Vec<Vec<f64>>, Vec<f64>) {
            let a = 1.0 / (fan_in.max(1) as f64).sqrt();
            let w = (0..rows).map(|_| (0..fan_in).map(|_| rng.random_range(-a..=a)).collect()).collect();
            let b = (0..rows).map(|_| rng.random_range(-a..=a)).collect();
            (w, b)
        };
        let (w1, b1) = layer(hidden, n_in);
        let (w2, b2) = layer(n_out, hidden);
        MlpParams { w1, b1, w2, b2 }
    }

    fn zeros_like(&self) -> Self {
        MlpParams {
            w1: self.w1.iter().map(|r| vec![0.0; r.len()]).collect(),
            b1: vec![0.0; self.b1.len()],
            w2: self.w2.iter().map(|r| vec![0.0; r.len()]).collect(),
            b2: vec![0.0; self.b2.len()],
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.w1.concat();
        v.extend(&self.b1);
        v.extend(self.w2.concat());
        v.extend(&self.b2);
        v
    }

    pub fn from_flat(&self, flat: &[f64]) -> Self {
        let mut it = flat.iter().copied();
        let mut take = |n: usize| -> Vec<f64> { it.by_ref().take(n).collect() };
        let w1 = self.w1.iter().map(|r| take(r.len())).collect();
        let b1 = take(self.b1.len());
        let w2 = self.w2.iter().map(|r| take(r.len())).collect();
        let b2 = take(self.b2.len());
        MlpParams { w1, b1, w2, b2 }
    }

    fn hidden(&self, x: &[f64]) -> Vec<f64> {
        self.w1.iter().zip(&self.b1).map(|(w, b)| (dot(w, x) + b).tanh()).collect()
    }

    fn probs(&self, a: &[f64]) -> Vec<f64> {
        let z: Vec<f64> = self.w2.iter().zip(&self.b2).map(|(w, b)| dot(w, a) + b).collect();
        softmax(&z)
    }

    pub fn predict_row(&self, x: &[f64]) -> usize {
        argmax_low(&self.probs(&self.hidden(x)))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Mean cross-entropy over `rows` plus `l2/2 * (|W1|^2 + |W2|^2)`, and its gradient.
pub fn loss_and_grad(p: &MlpParams, x: &[&[f64]], y: &[usize], l2: f64) -> (f64, MlpParams) {
    let n = x.len() as f64;
    let mut g = p.zeros_like();
    let mut loss = 0.0;
    for (xi, &yi) in x.iter().zip(y) {
        let a = p.hidden(xi);
        let prob = p.probs(&a);
        loss -= prob[yi].max(1e-300).ln();
        let dz2: Vec<f64> =
            prob.iter().enumerate().map(|(c, &pc)| (pc - f64::from(c == yi)) / n).collect();
        for (c, d) in dz2.iter().enumerate() {
            g.b2[c] += d;
            for (gw, av) in g.w2[c].iter_mut().zip(&a) {
                *gw += d * av;
            }
        }
        for (h, ah) in a.iter().enumerate() {
            let da: f64 = dz2.iter().zip(&p.w2).map(|(d, w)| d * w[h]).sum();
            let dz1 = da * (1.0 - ah * ah);
            g.b1[h] += dz1;
            for (gw, xv) in g.w1[h].iter_mut().zip(xi.iter()) {
                *gw += dz1 * xv;
            }
        }
    }
    loss /= n;
    let mut reg = 0.0;
    for (gw, w) in g.w1.iter_mut().flatten().zip(p.w1.iter().flatten()) {
        *gw += l2 * w;
        reg += w * w;
    }
    for (gw, w) in g.w2.iter_mut().flatten().zip(p.w2.iter().flatten()) {
        *gw += l2 * w;
        reg += w * w;
    }
    (loss + 0.5 * l2 * reg, g)
}

pub struct MlpHyper {
    pub hidden: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, hp: &MlpHyper, seed: u64) -> MlpParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = x[0].len();
    let mut p = MlpParams::init(d, hp.hidden, n_classes, &mut rng);
    let mut order: Vec<usize> = (0..x.len()).collect();
    for _ in 0..hp.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(BATCH_SIZE) {
            let bx: Vec<&[f64]> = batch.iter().map(|&i| x[i].as_slice()).collect();
            let by: Vec<usize> = batch.iter().map(|&i| y[i]).collect();
            let (_, g) = loss_and_grad(&p, &bx, &by, hp.l2);
            let step = |w: &mut f64, gw: f64| *w -= hp.learning_rate * gw;
            p.w1.iter_mut().flatten().zip(g.w1.iter().flatten()).for_each(|(w, gw)| step(w, *gw));
            p.b1.iter_mut().zip(&g.b1).for_each(|(w, gw)| step(w, *gw));
            p.w2.iter_mut().flatten().zip(g.w2.iter().flatten()).for_each(|(w, gw)| step(w, *gw));
            p.b2.iter_mut().zip(&g.b2).for_each(|(w, gw)| step(w, *gw));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = MlpParams::init(4, 3, 2, &mut rng);
        assert_eq!(p.from_flat(&p.to_flat()), p);
        assert_eq!(p.to_flat().len(), 4 * 3 + 3 + 3 * 2 + 2);
    }

    #[test]
    fn init_respects_fan_in_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = MlpParams::init(16, 9, 3, &mut rng);
        assert!(p.w1.iter().flatten().chain(&p.b1).all(|w| w.abs() <= 0.25));
        assert!(p.w2.iter().flatten().chain(&p.b2).all(|w| w.abs() <= 1.0 / 3.0));
    }

    #[test]
    fn learns_a_separable_problem() {
        let x: Vec<Vec<f64>> = (0..40).map(|i| vec![(i as f64 - 20.0) / 10.0, ((i * 7) % 5) as f64 / 5.0]).collect();
        let y: Vec<usize> = x.iter().map(|r| usize::from(r[0] > 0.0)).collect();
        let hp = MlpHyper { hidden: 8, learning_rate: 0.5, epochs: 300, l2: 0.0 };
        let p = fit(&x, &y, 2, &hp, 7);
        let correct = x.iter().zip(&y).filter(|(r, l)| p.predict_row(r) == **l).count();
        assert!(correct >= 38, "{correct}/40");
        assert_eq!(fit(&x, &y, 2, &hp, 7), p);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<Vec<f64>> = (0..5).map(|_| (0..4).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let rows: Vec<&[f64]> = x.iter().map(|r| r.as_slice()).collect();
        let y = [0, 2, 1, 2, 0];
        for _ in 0..5 {
            let p = MlpParams::init(4, 3, 3, &mut rng);
            let (_, g) = loss_and_grad(&p, &rows, &y, 0.01);
            let flat = p.to_flat();
            let h = 1e-5;
            for (i, gi) in g.to_flat().into_iter().enumerate() {
                let mut up = flat.clone();
                up[i] += h;
                let mut dn = flat.clone();
                dn[i] -= h;
                let fd = (loss_and_grad(&p.from_flat(&up), &rows, &y, 0.01).0
                    - loss_and_grad(&p.from_flat(&dn), &rows, &y, 0.01).0)
                    / (2.0 * h);
                let rel = (gi - fd).abs() / gi.abs().max(fd.abs()).max(1e-4);
                assert!(rel < 1e-5, "param {i}: analytic {gi}, numeric {fd}");
            }
        }
    }
}
