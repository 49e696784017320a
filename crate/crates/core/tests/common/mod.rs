#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use ordpick::polysys::Polynomial;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Up to `max_terms` terms with total degree at most `max_tdeg` and
/// coefficients in `-9..=9`. May return the zero polynomial.
pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_terms: usize, max_tdeg: u32) -> Polynomial {
    let terms = rng.random_range(1..=max_terms);
    let mut out = Vec::new();
    for _ in 0..terms {
        let e: Vec<u32> = loop {
            let e: Vec<u32> = (0..n).map(|_| rng.random_range(0..=max_tdeg)).collect();
            if e.iter().sum::<u32>() <= max_tdeg {
                break e;
            }
        };
        let c = rng.random_range(-9i64..=9);
        out.push((e, BigInt::from(c)));
    }
    Polynomial::from_terms(n, out)
}

/// Coefficients of `p` as a polynomial in `x_v`, highest power first, built
/// straight from the term list.
fn coeffs_desc(p: &Polynomial, v: usize) -> Vec<Polynomial> {
    let d = p.terms().iter().map(|m| m.exponents[v]).max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<(Vec<u32>, BigInt)>> = vec![Vec::new(); d + 1];
    for m in p.terms() {
        let mut e = m.exponents.clone();
        let k = e[v] as usize;
        e[v] = 0;
        buckets[d - k].push((e, m.coeff.clone()));
    }
    buckets.into_iter().map(|b| Polynomial::from_terms(p.n_vars(), b)).collect()
}

/// Determinant of the Sylvester matrix by Laplace expansion along rows,
/// memoized on the set of columns still free.
pub fn cofactor_resultant(p: &Polynomial, q: &Polynomial, v: usize) -> Polynomial {
    let n_vars = p.n_vars();
    let a = coeffs_desc(p, v);
    let b = coeffs_desc(q, v);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let zero = Polynomial::zero(n_vars);
    let mut rows = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for (k, c) in a.iter().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.iter().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    fn expand(rows: &[Vec<Polynomial>], r: usize, free: u32, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
        let n_vars = rows.first().map_or(1, |row| row[0].n_vars());
        if r == rows.len() {
            return Polynomial::constant(n_vars, 1);
        }
        if let Some(hit) = memo.get(&free) {
            return hit.clone();
        }
        let mut acc = Polynomial::zero(n_vars);
        let mut sign_pos = 0;
        for c in 0..rows.len() {
            if free & (1 << c) == 0 {
                continue;
            }
            if !rows[r][c].is_zero() {
                let minor = expand(rows, r + 1, free & !(1 << c), memo);
                let term = &rows[r][c] * &minor;
                acc = if sign_pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            sign_pos += 1;
        }
        memo.insert(free, acc.clone());
        acc
    }
    if size == 0 {
        return Polynomial::constant(n_vars, 1);
    }
    expand(&rows, 0, (1u32 << size) - 1, &mut HashMap::new())
}
