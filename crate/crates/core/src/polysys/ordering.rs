use std::fmt;

use super::PolyError;

/// Largest variable count for which all `n!` orderings are enumerated by default.
pub const DEFAULT_ORDERING_CAP: usize = 6;

/// A variable ordering read as elimination order: `perm[0]` is projected first.
///
/// `index` is the 0-based position of `perm` in lexicographic order over all
/// permutations of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableOrdering {
    perm: Vec<usize>,
    index: usize,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl VariableOrdering {
    pub fn from_perm(perm: Vec<usize>) -> Result<Self, PolyError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(PolyError::InvalidOrdering(format!("{perm:?} is not a permutation")));
            }
        }
        // Lehmer code, weighted by factorials.
        let mut index = 0;
        for i in 0..n {
            let smaller_later = perm[i + 1..].iter().filter(|&&q| q < perm[i]).count();
            index += smaller_later * factorial(n - 1 - i);
        }
        Ok(VariableOrdering { perm, index })
    }

    pub fn from_index(n: usize, index: usize) -> Result<Self, PolyError> {
        if n == 0 || index >= factorial(n) {
            return Err(PolyError::InvalidOrdering(format!("index {index} out of range for {n} variables")));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut rest = index;
        let mut perm = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let f = factorial(i);
            perm.push(pool.remove(rest / f));
            rest %= f;
        }
        Ok(VariableOrdering { perm, index })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n_vars(&self) -> usize {
        self.perm.len()
    }
}

impl fmt::Display for VariableOrdering {
    /// Comma-separated elimination order, e.g. `2,0,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// All `n!` orderings in lexicographic order, with `index` equal to list position.
pub fn enumerate_orderings(n: usize) -> Result<Vec<VariableOrdering>, PolyError> {
    enumerate_orderings_capped(n, DEFAULT_ORDERING_CAP)
}

pub fn enumerate_orderings_capped(n: usize, cap: usize) -> Result<Vec<VariableOrdering>, PolyError> {
    if n > cap {
        return Err(PolyError::OrderingCap { n, cap });
    }
    if n == 0 {
        return Err(PolyError::InvalidOrdering("zero variables".into()));
    }
    let mut out = Vec::with_capacity(factorial(n));
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push(VariableOrdering { perm: perm.clone(), index: out.len() });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent generator: recursive "pick each remaining element in turn".
    fn brute_force(n: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, rest: &[usize], out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for i in 0..rest.len() {
                prefix.push(rest[i]);
                let mut r = rest.to_vec();
                r.remove(i);
                rec(prefix, &r, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &(0..n).collect::<Vec<_>>(), &mut out);
        out
    }

    #[test]
    fn small_cases() {
        let one = enumerate_orderings(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].perm(), &[0]);
        let three = enumerate_orderings(3).unwrap();
        assert_eq!(three.len(), 6);
        assert_eq!(three[0].perm(), &[0, 1, 2]);
        assert_eq!(three[5].perm(), &[2, 1, 0]);
    }

    #[test]
    fn matches_brute_force_and_round_trips() {
        for n in 1..=5 {
            let got = enumerate_orderings(n).unwrap();
            let want = brute_force(n);
            assert_eq!(got.len(), want.len());
            for (i, (o, w)) in got.iter().zip(&want).enumerate() {
                assert_eq!(o.perm(), w.as_slice());
                assert_eq!(o.index(), i);
                assert_eq!(VariableOrdering::from_perm(w.clone()).unwrap().index(), i);
                assert_eq!(VariableOrdering::from_index(n, i).unwrap().perm(), w.as_slice());
            }
        }
    }

    #[test]
    fn cap_and_invalid() {
        assert_eq!(enumerate_orderings(7), Err(PolyError::OrderingCap { n: 7, cap: 6 }));
        assert_eq!(enumerate_orderings_capped(7, 7).unwrap().len(), 5040);
        assert!(VariableOrdering::from_perm(vec![0, 0]).is_err());
        assert!(VariableOrdering::from_index(3, 6).is_err());
    }
}
