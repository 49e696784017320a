//! CART classification tree. Splits are searched exhaustively over every
//! feature at midpoints between consecutive distinct values.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    Gini,
    Entropy,
}

impl Criterion {
    fn impurity(self, counts: &[usize], n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let n = n as f64;
        match self {
            Criterion::Gini => 1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>(),
            Criterion::Entropy => -counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / n;
                    p * p.log2()
                })
                .sum::<f64>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf { label: usize },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub nodes: Vec<Node>,
}

pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub criterion: Criterion,
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
    params: &'a TreeParams,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in idx {
            c[self.y[i]] += 1;
        }
        c
    }

    /// Best (feature, threshold) by weighted child impurity; first found wins ties.
    fn best_split(&self, idx: &[usize]) -> Option<(usize, f64)> {
        let n = idx.len();
        let d = self.x[idx[0]].len();
        let total = self.counts(idx);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut order = idx.to_vec();
        for f in 0..d {
            order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]).then(a.cmp(&b)));
            let mut left = vec![0; self.n_classes];
            for pos in 0..n - 1 {
                left[self.y[order[pos]]] += 1;
                let lo = self.x[order[pos]][f];
                let hi = self.x[order[pos + 1]][f];
                if lo == hi {
                    continue;
                }
                let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
                let nl = pos + 1;
                let nr = n - nl;
                let score = (nl as f64 * self.params.criterion.impurity(&left, nl)
                    + nr as f64 * self.params.criterion.impurity(&right, nr))
                    / n as f64;
                if best.is_none_or(|(s, _, _)| score < s) {
                    let mut thr = lo + (hi - lo) / 2.0;
                    if thr >= hi {
                        thr = lo;
                    }
                    best = Some((score, f, thr));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let counts = self.counts(&idx);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = self.params.max_depth.is_some_and(|m| depth >= m);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { label: majority(&counts) });
        if pure || depth_capped || idx.len() < self.params.min_samples_split {
            return slot;
        }
        let Some((feature, threshold)) = self.best_split(&idx) else {
            return slot;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| self.x[i][feature] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[slot] = Node::Split { feature, threshold, left, right };
        slot
    }
}

impl TreeModel {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, params: &TreeParams) -> Self {
        assert!(!x.is_empty());
        let mut b = Builder { x, y, n_classes, params, nodes: Vec::new() };
        b.grow((0..x.len()).collect(), 0);
        TreeModel { nodes: b.nodes }
    }

    pub fn predict_row(&self, q: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { label } => return *label,
                Node::Split { feature, threshold, left, right } => {
                    at = if q[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn rec(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + rec(nodes, *left).max(rec(nodes, *right)),
            }
        }
        rec(&self.nodes, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(max_depth: Option<usize>, criterion: Criterion) -> TreeParams {
        TreeParams { max_depth, min_samples_split: 2, criterion }
    }

    #[test]
    fn xor_needs_zero_gain_splits() {
        let x = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let y = vec![0, 1, 1, 0];
        for c in [Criterion::Gini, Criterion::Entropy] {
            let t = TreeModel::fit(&x, &y, 2, &params(None, c));
            for (r, l) in x.iter().zip(&y) {
                assert_eq!(t.predict_row(r), *l);
            }
        }
    }

    #[test]
    fn depth_limit_and_min_split() {
        let x: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64]).collect();
        let y = vec![0, 1, 0, 1, 0, 1, 0, 1];
        let t = TreeModel::fit(&x, &y, 2, &params(Some(2), Criterion::Gini));
        assert!(t.depth() <= 2);
        let stump = TreeModel::fit(&x, &y, 2, &TreeParams { max_depth: None, min_samples_split: 9, criterion: Criterion::Gini });
        assert_eq!(stump.nodes.len(), 1);
        assert_eq!(stump.predict_row(&[3.0]), 0);
    }

    #[test]
    fn threshold_is_a_midpoint() {
        let x = vec![vec![1.0], vec![3.0]];
        let t = TreeModel::fit(&x, &[0, 1], 2, &params(None, Criterion::Gini));
        assert_eq!(t.nodes[0], Node::Split { feature: 0, threshold: 2.0, left: 1, right: 2 });
    }

    #[test]
    fn impurities() {
        assert_eq!(Criterion::Gini.impurity(&[2, 2], 4), 0.5);
        assert_eq!(Criterion::Entropy.impurity(&[2, 2], 4), 1.0);
        assert_eq!(Criterion::Entropy.impurity(&[4, 0], 4), 0.0);
    }
}
