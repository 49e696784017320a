//! CAD-style projection and the two classical ordering heuristics.
//!
//! Projection eliminates one variable at a time from a polynomial set using a
//! reduced (McCallum-style) operator: coefficients, discriminants, and pairwise
//! resultants. Every projected polynomial is made primitive and sign-normalized
//! before deduplication, so heuristic scores do not depend on coefficient scale.
//!
//! `sotd` scores an ordering by the sum of total degrees over all projection
//! levels, input level included. `brown` is a greedy choice from input degree
//! statistics only.

mod algebra;

pub use algebra::{determinant, discriminant, resultant, sylvester_matrix};

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::polysys::{enumerate_orderings, PolyError, PolySystem, Polynomial, VariableOrdering};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("resultant of a zero polynomial")]
    ZeroInput,
    #[error("both polynomials are constant in x{}", .0 + 1)]
    BothConstantIn(usize),
    #[error("degree {degree} in x{} is below 2", .var + 1)]
    DegreeTooLow { var: usize, degree: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Growth limits for projection; exceeding either aborts with [`Blowup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionCaps {
    pub max_polys: usize,
    pub max_tdeg: u32,
}

impl Default for ProjectionCaps {
    fn default() -> Self {
        ProjectionCaps { max_polys: 512, max_tdeg: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("projection blew up at level {level}: {reason}")]
pub struct Blowup {
    pub level: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSet {
    /// `levels[0]` is the normalized input; `levels[l]` eliminates `perm[l - 1]`.
    pub levels: Vec<Vec<Polynomial>>,
}

impl ProjectionSet {
    pub fn sum_of_total_degrees(&self) -> u64 {
        self.levels.iter().flatten().map(|p| p.total_degree() as u64).sum()
    }
}

/// Deduplicating accumulator for normalized projection factors.
struct FactorSet {
    seen: HashSet<Polynomial>,
    out: Vec<Polynomial>,
}

impl FactorSet {
    fn new() -> Self {
        FactorSet { seen: HashSet::new(), out: Vec::new() }
    }

    /// Drops zero and constants, makes primitive with positive leading coefficient.
    fn push(&mut self, p: &Polynomial) {
        if p.is_constant() {
            return;
        }
        let q = p.primitive_normalized();
        if self.seen.insert(q.clone()) {
            self.out.push(q);
        }
    }
}

fn check_caps(polys: &[Polynomial], level: usize, caps: &ProjectionCaps) -> Result<(), Blowup> {
    if polys.len() > caps.max_polys {
        return Err(Blowup { level, reason: format!("{} polynomials > {}", polys.len(), caps.max_polys) });
    }
    if let Some(p) = polys.iter().find(|p| p.total_degree() > caps.max_tdeg) {
        return Err(Blowup { level, reason: format!("total degree {} > {}", p.total_degree(), caps.max_tdeg) });
    }
    Ok(())
}

/// Normalizes an input list the same way projection outputs are normalized.
pub fn normalize_set(polys: &[Polynomial]) -> Vec<Polynomial> {
    let mut set = FactorSet::new();
    for p in polys {
        set.push(p);
    }
    set.out
}

fn project_inner(
    polys: &[Polynomial],
    v: usize,
    level: usize,
    caps: Option<&ProjectionCaps>,
) -> Result<Vec<Polynomial>, Blowup> {
    let mut set = FactorSet::new();
    let check = |set: &FactorSet| match caps {
        Some(c) => check_caps(&set.out, level, c),
        None => Ok(()),
    };
    for p in polys {
        for c in p.coefficients_in(v) {
            set.push(&c);
        }
        if p.degree_in(v) >= 2 {
            set.push(&discriminant(p, v).expect("degree checked; exact arithmetic"));
        }
        check(&set)?;
    }
    let movers: Vec<&Polynomial> = polys.iter().filter(|p| p.degree_in(v) >= 1).collect();
    for (i, p) in movers.iter().enumerate() {
        for q in &movers[i + 1..] {
            set.push(&resultant(p, q, v).expect("positive degree checked"));
            check(&set)?;
        }
    }
    Ok(set.out)
}

/// One projection step eliminating `x_v`.
pub fn project_once(polys: &[Polynomial], v: usize) -> Vec<Polynomial> {
    project_inner(polys, v, 0, None).expect("uncapped projection cannot blow up")
}

pub fn full_projection(
    s: &PolySystem,
    o: &VariableOrdering,
    caps: &ProjectionCaps,
) -> Result<ProjectionSet, Blowup> {
    assert_eq!(o.n_vars(), s.n_vars(), "ordering arity does not match system");
    let base = normalize_set(s.polys());
    check_caps(&base, 0, caps)?;
    let mut levels = vec![base];
    for (l, &v) in o.perm().iter().enumerate().take(s.n_vars() - 1) {
        let next = project_inner(&levels[l], v, l + 1, Some(caps))?;
        levels.push(next);
    }
    Ok(ProjectionSet { levels })
}

/// Sum of total degrees over the full projection set.
pub fn sotd_score(s: &PolySystem, o: &VariableOrdering, caps: &ProjectionCaps) -> Result<u64, Blowup> {
    full_projection(s, o, caps).map(|ps| ps.sum_of_total_degrees())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeuristicScore {
    /// `None` when every ordering blew up.
    Sotd(Option<u64>),
    /// Key of the first variable chosen: (degree, max term total degree, term count).
    Brown((u32, u32, usize)),
}

#[derive(Clone, Debug)]
pub struct HeuristicChoice {
    pub ordering: VariableOrdering,
    pub score: HeuristicScore,
    pub prediction_seconds: f64,
}

/// Exhaustive sotd search: minimum score, blowups worst, ties to lowest index.
pub fn sotd_choose(s: &PolySystem, caps: &ProjectionCaps) -> Result<HeuristicChoice, PolyError> {
    let start = Instant::now();
    let orderings = enumerate_orderings(s.n_vars())?;
    let scores: Vec<Option<u64>> = orderings.par_iter().map(|o| sotd_score(s, o, caps).ok()).collect();
    let best = scores
        .iter()
        .enumerate()
        .min_by_key(|(i, sc)| (sc.unwrap_or(u64::MAX), sc.is_none(), *i))
        .map(|(i, _)| i)
        .expect("at least one ordering");
    if scores[best].is_none() {
        log::warn!("sotd: every ordering exceeded the projection caps; defaulting to ordering 0");
    }
    Ok(HeuristicChoice {
        ordering: orderings[best].clone(),
        score: HeuristicScore::Sotd(scores[best]),
        prediction_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Brown's key for `v`, with term total degrees restricted to `remaining` variables.
pub fn brown_key(s: &PolySystem, v: usize, remaining: &[usize]) -> (u32, u32, usize) {
    let mut degree = 0;
    let mut max_tdeg = 0;
    let mut count = 0;
    for m in s.polys().iter().flat_map(|p| p.terms()) {
        let e = m.exponents[v];
        if e == 0 {
            continue;
        }
        degree = degree.max(e);
        max_tdeg = max_tdeg.max(remaining.iter().map(|&u| m.exponents[u]).sum());
        count += 1;
    }
    (degree, max_tdeg, count)
}

/// Greedy: eliminate next the remaining variable with the smallest
/// (degree, max term total degree, term count), ties to the lower index.
pub fn brown_choose(s: &PolySystem) -> HeuristicChoice {
    let start = Instant::now();
    let mut remaining: Vec<usize> = (0..s.n_vars()).collect();
    let mut perm = Vec::with_capacity(s.n_vars());
    let mut first_key = None;
    while !remaining.is_empty() {
        let (pos, key) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &v)| (pos, brown_key(s, v, &remaining)))
            .min_by_key(|&(pos, key)| (key, remaining[pos]))
            .expect("nonempty");
        first_key.get_or_insert(key);
        perm.push(remaining.remove(pos));
    }
    HeuristicChoice {
        ordering: VariableOrdering::from_perm(perm).expect("greedy output is a permutation"),
        score: HeuristicScore::Brown(first_key.expect("at least one variable")),
        prediction_seconds: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::parse_infix;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    fn sys(text: &str, n: usize) -> PolySystem {
        parse_infix(text, &names(n)).unwrap()
    }

    fn polys(text: &str, n: usize) -> Vec<Polynomial> {
        sys(text, n).polys().to_vec()
    }

    fn ord(perm: &[usize]) -> VariableOrdering {
        VariableOrdering::from_perm(perm.to_vec()).unwrap()
    }

    #[test]
    fn project_once_examples() {
        assert_eq!(project_once(&polys("x1^2 + x2", 2), 0), polys("x2", 2));
        assert!(project_once(&polys("x1 + 1", 1), 0).is_empty());
        let out = project_once(&polys("x1^2 - x2; x1 - x2", 2), 0);
        assert_eq!(out, polys("x2; x2^2 - x2", 2));
    }

    #[test]
    fn projection_levels() {
        let caps = ProjectionCaps::default();
        let uni = sys("x1^2 + 1", 1);
        let ps = full_projection(&uni, &ord(&[0]), &caps).unwrap();
        assert_eq!(ps.levels.len(), 1);
        assert_eq!(sotd_score(&uni, &ord(&[0]), &caps), Ok(2));

        let s = sys("x1^2 + x2", 2);
        let ps = full_projection(&s, &ord(&[0, 1]), &caps).unwrap();
        assert_eq!(ps.levels, vec![polys("x1^2 + x2", 2), polys("x2", 2)]);
        assert_eq!(sotd_score(&s, &ord(&[0, 1]), &caps), Ok(3));
        assert_eq!(sotd_score(&s, &ord(&[1, 0]), &caps), Ok(4));
    }

    #[test]
    fn caps_trigger_blowup() {
        let s = sys("x1 + x2; x1 - x2^2", 2);
        let tight = ProjectionCaps { max_polys: 1, max_tdeg: 100 };
        let err = full_projection(&s, &ord(&[0, 1]), &tight).unwrap_err();
        assert_eq!(err.level, 0);
        let low_deg = ProjectionCaps { max_polys: 100, max_tdeg: 1 };
        assert!(full_projection(&s, &ord(&[0, 1]), &low_deg).is_err());
    }

    #[test]
    fn sotd_choice() {
        let caps = ProjectionCaps::default();
        let c = sotd_choose(&sys("x1^2 + x2", 2), &caps).unwrap();
        assert_eq!(c.ordering.perm(), &[0, 1]);
        assert_eq!(c.score, HeuristicScore::Sotd(Some(3)));
        assert!(c.prediction_seconds >= 0.0);
        let tie = sotd_choose(&sys("x1 + x2", 2), &caps).unwrap();
        assert_eq!(tie.ordering.index(), 0);
        let none = sotd_choose(&sys("x1 + x2; x1 - x2", 2), &ProjectionCaps { max_polys: 1, max_tdeg: 9 }).unwrap();
        assert_eq!(none.ordering.index(), 0);
        assert_eq!(none.score, HeuristicScore::Sotd(None));
    }

    #[test]
    fn brown_choice() {
        assert_eq!(brown_choose(&sys("x1^2 + x2", 2)).ordering.perm(), &[1, 0]);
        assert_eq!(brown_choose(&sys("x1 + x2", 2)).ordering.perm(), &[0, 1]);
        let s = sys("x1*x2^2 + x1", 2);
        assert_eq!(brown_key(&s, 0, &[0, 1]), (1, 3, 2));
        assert_eq!(brown_key(&s, 1, &[0, 1]), (2, 3, 1));
        let c = brown_choose(&s);
        assert_eq!(c.ordering.perm(), &[0, 1]);
        assert_eq!(c.score, HeuristicScore::Brown((1, 3, 2)));
    }

    #[test]
    fn levels_drop_eliminated_variables() {
        let s = sys("x1^2*x3 + x2*x3 - 1; x1*x2 + x3^2; x2^2 - x1", 3);
        for o in enumerate_orderings(3).unwrap() {
            let ps = full_projection(&s, &o, &ProjectionCaps::default()).unwrap();
            for (l, level) in ps.levels.iter().enumerate() {
                for p in level {
                    for &v in &o.perm()[..l] {
                        assert!(!p.contains_var(v));
                    }
                }
            }
        }
    }
}
