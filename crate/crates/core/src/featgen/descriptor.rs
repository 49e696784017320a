use std::fmt;
use std::str::FromStr;

use super::FeatError;
use crate::polysys::PolySystem;

/// Optional elementwise map applied between aggregation steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pre {
    Identity,
    Sign,
}

/// Reduction over monomials (`_m`) or over polynomials (`_p`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Agg {
    Max,
    Sum,
    Av,
}

impl Pre {
    pub const ALL: [Pre; 2] = [Pre::Identity, Pre::Sign];

    fn apply(self, x: f64) -> f64 {
        match self {
            Pre::Identity => x,
            Pre::Sign => sign(x),
        }
    }
}

impl Agg {
    pub const ALL: [Agg; 3] = [Agg::Max, Agg::Sum, Agg::Av];

    fn name(self) -> &'static str {
        match self {
            Agg::Max => "max",
            Agg::Sum => "sum",
            Agg::Av => "av",
        }
    }

    fn from_name(s: &str) -> Option<Agg> {
        Agg::ALL.into_iter().find(|a| a.name() == s)
    }

    /// `xs` is never empty: every polynomial contributes at least one row.
    fn reduce(self, xs: &[f64]) -> f64 {
        match self {
            Agg::Max => xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Agg::Sum => xs.iter().sum(),
            Agg::Av => xs.iter().sum::<f64>() / xs.len() as f64,
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A degree feature `post(aggP_p(preP(aggM_m(preM(d_v)))))`, where `d_v` is the
/// exponent of variable `v` in each monomial of each polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureDescriptor {
    /// 0-based; printed 1-based as `d_1`, `d_2`, ...
    pub var: usize,
    pub pre_mono: Pre,
    pub agg_mono: Agg,
    pub pre_poly: Pre,
    pub agg_poly: Agg,
    pub post: Pre,
}

impl FeatureDescriptor {
    pub fn evaluate(&self, s: &PolySystem) -> f64 {
        let per_poly: Vec<f64> = s
            .polys()
            .iter()
            .map(|p| {
                let mono: Vec<f64> = if p.is_zero() {
                    vec![self.pre_mono.apply(0.0)]
                } else {
                    p.terms().iter().map(|m| self.pre_mono.apply(m.exponents[self.var] as f64)).collect()
                };
                self.pre_poly.apply(self.agg_mono.reduce(&mono))
            })
            .collect();
        self.post.apply(self.agg_poly.reduce(&per_poly))
    }

    /// Parses the canonical text form and checks the variable against `n_vars`.
    pub fn parse(text: &str, n_vars: usize) -> Result<Self, FeatError> {
        let d: FeatureDescriptor = text.parse()?;
        if d.var >= n_vars {
            return Err(FeatError::VariableOutOfRange { var: d.var + 1, n_vars });
        }
        Ok(d)
    }
}

pub fn evaluate_descriptor(d: &FeatureDescriptor, s: &PolySystem) -> f64 {
    d.evaluate(s)
}

pub fn parse_descriptor(text: &str, n_vars: usize) -> Result<FeatureDescriptor, FeatError> {
    FeatureDescriptor::parse(text, n_vars)
}

pub fn serialize_descriptor(d: &FeatureDescriptor) -> String {
    d.to_string()
}

impl fmt::Display for FeatureDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap_sign = |p: Pre, s: String| match p {
            Pre::Identity => s,
            Pre::Sign => format!("sign({s})"),
        };
        let mut s = wrap_sign(self.pre_mono, format!("d_{}", self.var + 1));
        s = wrap_sign(self.pre_poly, format!("{}_m({s})", self.agg_mono.name()));
        s = wrap_sign(self.post, format!("{}_p({s})", self.agg_poly.name()));
        f.write_str(&s)
    }
}

#[derive(Debug, PartialEq)]
enum Layer {
    Sign,
    Mono(Agg),
    Poly(Agg),
}

impl FromStr for FeatureDescriptor {
    type Err = FeatError;

    /// Parses without a variable-range check; see [`FeatureDescriptor::parse`].
    fn from_str(text: &str) -> Result<Self, FeatError> {
        let bad = || FeatError::Malformed(text.to_string());
        let mut layers = Vec::new();
        let mut rest = text.trim();
        let var = loop {
            if let Some(k) = rest.strip_prefix("d_") {
                if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                break k - 1;
            }
            let open = rest.find('(').ok_or_else(bad)?;
            let inner = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let layer = match &rest[..open] {
                "sign" => Layer::Sign,
                head => match head.split_once('_') {
                    Some((agg, "m")) => Layer::Mono(Agg::from_name(agg).ok_or_else(bad)?),
                    Some((agg, "p")) => Layer::Poly(Agg::from_name(agg).ok_or_else(bad)?),
                    _ => return Err(bad()),
                },
            };
            layers.push(layer);
            rest = inner;
        };

        // Expected outer-to-inner shape: [sign] agg_p [sign] agg_m [sign] d_K
        let mut it = layers.into_iter().peekable();
        let take_sign = |it: &mut std::iter::Peekable<std::vec::IntoIter<Layer>>| {
            if it.next_if_eq(&Layer::Sign).is_some() {
                Pre::Sign
            } else {
                Pre::Identity
            }
        };
        let post = take_sign(&mut it);
        let Some(Layer::Poly(agg_poly)) = it.next() else { return Err(bad()) };
        let pre_poly = take_sign(&mut it);
        let Some(Layer::Mono(agg_mono)) = it.next() else { return Err(bad()) };
        let pre_mono = take_sign(&mut it);
        if it.next().is_some() {
            return Err(bad());
        }
        Ok(FeatureDescriptor { var, pre_mono, agg_mono, pre_poly, agg_poly, post })
    }
}
