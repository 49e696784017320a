//! Polynomial systems: the data model, the text formats they travel in,
//! variable orderings, and the random problem generator.

mod generate;
mod infix;
mod ordering;
mod poly;
mod terms;

pub use generate::{generate_random_dataset, GenConfig, ParamDist};
pub use infix::parse_infix;
pub use ordering::{enumerate_orderings, enumerate_orderings_capped, VariableOrdering, DEFAULT_ORDERING_CAP};
pub use poly::{Monomial, Polynomial};
pub use terms::{parse_problem, serialize_problem};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inconsistent arity at byte {pos}: expected {expected} exponents, found {found}")]
    Arity { pos: usize, expected: usize, found: usize },
    #[error("problem contains no polynomials")]
    EmptyProblem,
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("non-integer coefficient `{0}`")]
    NonIntegerCoefficient(String),
    #[error("{n} variables exceeds the ordering cap of {cap}")]
    OrderingCap { n: usize, cap: usize },
    #[error("invalid variable ordering: {0}")]
    InvalidOrdering(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NonExactDivision,
}

/// One problem instance: a list of polynomials over `x1..xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolySystem {
    n_vars: usize,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(n_vars: usize, polys: Vec<Polynomial>) -> Result<Self, PolyError> {
        if polys.is_empty() || n_vars == 0 {
            return Err(PolyError::EmptyProblem);
        }
        if let Some(bad) = polys.iter().find(|p| p.n_vars() != n_vars) {
            return Err(PolyError::Arity { pos: 0, expected: n_vars, found: bad.n_vars() });
        }
        Ok(PolySystem { n_vars, polys })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    /// Returns the system with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &num_bigint::BigInt) -> PolySystem {
        PolySystem { n_vars: self.n_vars, polys: self.polys.iter().map(|p| p.scale(c)).collect() }
    }

    /// Renames variables: variable `v` of `self` becomes variable `sigma[v]`.
    pub fn permuted(&self, sigma: &[usize]) -> PolySystem {
        assert_eq!(sigma.len(), self.n_vars);
        let polys = self
            .polys
            .iter()
            .map(|p| {
                Polynomial::from_terms(
                    self.n_vars,
                    p.terms().iter().map(|m| {
                        let mut e = vec![0; self.n_vars];
                        for (v, &x) in m.exponents.iter().enumerate() {
                            e[sigma[v]] = x;
                        }
                        (e, m.coeff.clone())
                    }),
                )
            })
            .collect();
        PolySystem { n_vars: self.n_vars, polys }
    }
}

pub fn degree_in(p: &Polynomial, v: usize) -> u32 {
    p.degree_in(v)
}

pub fn total_degree(p: &Polynomial) -> u32 {
    p.total_degree()
}
