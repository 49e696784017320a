//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! Terms are kept in canonical form: exponent vectors are unique, coefficients
//! are nonzero, and terms are sorted lexicographically descending by exponent
//! vector (`x1` is the most significant variable). This is the order produced by
//! sympy's `Poly.terms()`, which the terms text format mirrors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::PolyError;

/// A single term `coeff * x1^e1 * ... * xn^en`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: BigInt,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// A normalized polynomial over `n_vars` variables. The zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n_vars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial { n_vars, terms: Vec::new() }
    }

    pub fn constant(n_vars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(n_vars, [(vec![0; n_vars], c.into())])
    }

    /// The polynomial `x_v` (0-based variable index).
    pub fn var(n_vars: usize, v: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[v] = 1;
        Self::from_terms(n_vars, [(e, BigInt::one())])
    }

    /// Builds a normalized polynomial: like terms merged, zero coefficients dropped,
    /// terms sorted. Panics if an exponent vector has the wrong length.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n_vars, "exponent vector arity mismatch");
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(n_vars, acc)
    }

    fn from_map(n_vars: usize, acc: BTreeMap<Vec<u32>, BigInt>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coeff)| Monomial { exponents, coeff })
            .collect();
        Polynomial { n_vars, terms }
    }

    fn to_map(&self) -> BTreeMap<Vec<u32>, BigInt> {
        self.terms.iter().map(|m| (m.exponents.clone(), m.coeff.clone())).collect()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|m| m.exponents.iter().all(|&e| e == 0))
    }

    /// Leading term under the canonical (lexicographic descending) order.
    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|m| m.exponents[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.iter().any(|m| m.exponents[v] > 0)
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n_vars);
        }
        Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|m| Monomial { exponents: m.exponents.clone(), coeff: &m.coeff * c })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::constant(self.n_vars, 1);
        for _ in 0..k {
            result = &result * self;
        }
        result
    }

    pub fn derivative(&self, v: usize) -> Polynomial {
        Polynomial::from_terms(
            self.n_vars,
            self.terms.iter().filter(|m| m.exponents[v] > 0).map(|m| {
                let mut e = m.exponents.clone();
                let k = e[v];
                e[v] -= 1;
                (e, &m.coeff * BigInt::from(k))
            }),
        )
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `x_v`;
    /// entry `i` multiplies `x_v^i`. Empty for the zero polynomial.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, BigInt)>> = vec![Vec::new(); d + 1];
        for m in &self.terms {
            let mut e = m.exponents.clone();
            let k = std::mem::replace(&mut e[v], 0) as usize;
            buckets[k].push((e, m.coeff.clone()));
        }
        buckets.into_iter().map(|b| Polynomial::from_terms(self.n_vars, b)).collect()
    }

    /// Nonnegative gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, m| g.gcd(&m.coeff))
    }

    /// Divides out the integer content and makes the leading coefficient positive.
    pub fn primitive_normalized(&self) -> Polynomial {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let c = match self.leading() {
            Some(m) if m.coeff.is_negative() => -c,
            _ => c,
        };
        Polynomial {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|m| Monomial { exponents: m.exponents.clone(), coeff: &m.coeff / &c })
                .collect(),
        }
    }

    /// Exact division `self / d` in the polynomial ring over the integers.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial, PolyError> {
        let lead = d.leading().ok_or(PolyError::DivisionByZero)?;
        if d.terms.len() == 1 && lead.exponents.iter().all(|&e| e == 0) {
            let mut terms = Vec::with_capacity(self.terms.len());
            for m in &self.terms {
                let (q, r) = m.coeff.div_rem(&lead.coeff);
                if !r.is_zero() {
                    return Err(PolyError::NonExactDivision);
                }
                terms.push(Monomial { exponents: m.exponents.clone(), coeff: q });
            }
            return Ok(Polynomial { n_vars: self.n_vars, terms });
        }
        let mut rem = self.to_map();
        let mut quot: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        while let Some((re, rc)) = rem.last_key_value() {
            if !re.iter().zip(&lead.exponents).all(|(a, b)| a >= b) {
                return Err(PolyError::NonExactDivision);
            }
            let (qc, r) = rc.div_rem(&lead.coeff);
            if !r.is_zero() {
                return Err(PolyError::NonExactDivision);
            }
            let qe: Vec<u32> = re.iter().zip(&lead.exponents).map(|(a, b)| a - b).collect();
            for m in &d.terms {
                let e: Vec<u32> = m.exponents.iter().zip(&qe).map(|(a, b)| a + b).collect();
                let slot = rem.entry(e.clone()).or_insert_with(BigInt::zero);
                *slot -= &m.coeff * &qc;
                if slot.is_zero() {
                    rem.remove(&e);
                }
            }
            quot.insert(qe, qc);
        }
        Ok(Polynomial::from_map(self.n_vars, quot))
    }
}

impl Polynomial {
    /// `self + sign * rhs` by merging the two sorted term lists.
    fn merge(&self, rhs: &Polynomial, negate: bool) -> Polynomial {
        debug_assert_eq!(self.n_vars, rhs.n_vars);
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let signed = |m: &Monomial| if negate { -&m.coeff } else { m.coeff.clone() };
        while i < self.terms.len() && j < rhs.terms.len() {
            let (a, b) = (&self.terms[i], &rhs.terms[j]);
            match a.exponents.cmp(&b.exponents) {
                std::cmp::Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    terms.push(Monomial { exponents: b.exponents.clone(), coeff: signed(b) });
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a.coeff - &b.coeff } else { &a.coeff + &b.coeff };
                    if !c.is_zero() {
                        terms.push(Monomial { exponents: a.exponents.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(rhs.terms[j..].iter().map(|m| Monomial { exponents: m.exponents.clone(), coeff: signed(m) }));
        Polynomial { n_vars: self.n_vars, terms }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.merge(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.n_vars, rhs.n_vars);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.n_vars);
        }
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let e: Vec<u32> = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += &a.coeff * &b.coeff;
            }
        }
        Polynomial::from_map(self.n_vars, acc)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for Polynomial {
    /// Human-readable infix form, e.g. `235*x1 + 42*x2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            let neg = m.coeff.is_negative();
            let mag = m.coeff.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { format!("x{}", v + 1) } else { format!("x{}^{}", v + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, terms: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn normalization_merges_and_sorts() {
        let q = p(2, &[(&[1, 0], 1), (&[0, 3], 2), (&[1, 0], 2), (&[0, 0], 0)]);
        let exps: Vec<_> = q.terms().iter().map(|m| m.exponents.clone()).collect();
        assert_eq!(exps, vec![vec![1, 0], vec![0, 3]]);
        assert_eq!(q.terms()[0].coeff, BigInt::from(3));
    }

    #[test]
    fn degrees() {
        let q = p(3, &[(&[2, 0, 1], 2), (&[0, 0, 0], -1)]);
        assert_eq!(q.degree_in(0), 2);
        assert_eq!(q.degree_in(1), 0);
        assert_eq!(q.total_degree(), 3);
        assert_eq!(Polynomial::zero(3).total_degree(), 0);
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = p(2, &[(&[1, 0], 1), (&[0, 1], -3), (&[0, 0], 2)]);
        let b = p(2, &[(&[2, 1], 5), (&[0, 0], -1)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        let off = &prod + &Polynomial::constant(2, 1);
        assert_eq!(off.exact_div(&a), Err(PolyError::NonExactDivision));
    }

    #[test]
    fn coefficients_and_derivative() {
        // x1^2*x2 + 3*x1 + x2
        let q = p(2, &[(&[2, 1], 1), (&[1, 0], 3), (&[0, 1], 1)]);
        let cs = q.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], Polynomial::var(2, 1));
        assert_eq!(cs[1], Polynomial::constant(2, 3));
        assert_eq!(cs[2], Polynomial::var(2, 1));
        assert_eq!(q.derivative(0), p(2, &[(&[1, 1], 2), (&[0, 0], 3)]));
    }

    #[test]
    fn primitive_normalization() {
        let q = p(1, &[(&[1], -4), (&[0], 6)]);
        assert_eq!(q.primitive_normalized(), p(1, &[(&[1], 2), (&[0], -3)]));
    }

    #[test]
    fn display() {
        let q = p(3, &[(&[1, 0, 0], 235), (&[0, 2, 0], 42)]);
        assert_eq!(q.to_string(), "235*x1 + 42*x2^2");
        assert_eq!(p(3, &[(&[2, 0, 1], 2), (&[0, 0, 0], -1)]).to_string(), "2*x1^2*x3 - 1");
    }
}
