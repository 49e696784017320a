//! Random polynomial systems whose shape statistics (per-variable term degree,
//! coefficient magnitude, terms per polynomial, polynomials per system) follow
//! rounded truncated normal distributions.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{PolySystem, Polynomial};

/// Mean and spread of one integer-valued shape parameter, with an upper cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamDist {
    pub mean: f64,
    pub stddev: f64,
    pub cap: u32,
}

impl ParamDist {
    pub const fn new(mean: f64, stddev: f64, cap: u32) -> Self {
        ParamDist { mean, stddev, cap }
    }

    /// Rounded normal draw truncated to `[lo, cap]` by rejection; after 64
    /// rejected draws the rounded mean is clamped instead.
    fn draw(&self, lo: u32, rng: &mut ChaCha8Rng) -> u32 {
        let hi = self.cap.max(lo);
        let clamp = |x: f64| (x.round().max(lo as f64).min(hi as f64)) as u32;
        if self.stddev <= 0.0 {
            return clamp(self.mean);
        }
        let normal = Normal::new(self.mean, self.stddev).expect("finite stddev");
        for _ in 0..64 {
            let x = normal.sample(rng).round();
            if x >= lo as f64 && x <= hi as f64 {
                return x as u32;
            }
        }
        clamp(self.mean)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_vars: usize,
    /// Exponent of each variable in each term, drawn independently per variable.
    pub degree: ParamDist,
    /// Coefficient magnitude; the sign is a fair coin.
    pub coeff: ParamDist,
    pub terms: ParamDist,
    pub polys: ParamDist,
    pub seed: u64,
}

impl Default for GenConfig {
    /// Small three-variable systems: roughly one to three terms of low degree,
    /// one to three polynomials per problem.
    fn default() -> Self {
        GenConfig {
            n_vars: 3,
            degree: ParamDist::new(0.8, 0.9, 3),
            coeff: ParamDist::new(5.0, 8.0, 50),
            terms: ParamDist::new(2.5, 1.0, 4),
            polys: ParamDist::new(2.0, 0.8, 3),
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_vars == 0 {
            return Err("n_vars must be positive".into());
        }
        for (name, d) in [("degree", self.degree), ("coeff", self.coeff), ("terms", self.terms), ("polys", self.polys)] {
            if !(d.stddev >= 0.0 && d.stddev.is_finite() && d.mean.is_finite()) {
                return Err(format!("{name}: stddev must be finite and nonnegative"));
            }
            if d.cap < 1 {
                return Err(format!("{name}: cap must be at least 1"));
            }
        }
        Ok(())
    }
}

/// Draws `count` systems from one sequential RNG stream seeded by `cfg.seed`.
///
/// Within a polynomial, a term whose exponent vector repeats an earlier one is
/// redrawn up to 16 times and then dropped, so every polynomial keeps exactly
/// its distinct drawn terms and stays nonzero.
pub fn generate_random_dataset(cfg: &GenConfig, count: usize) -> Vec<PolySystem> {
    cfg.validate().expect("invalid generator config");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_vars;
    (0..count)
        .map(|_| {
            let n_polys = cfg.polys.draw(1, &mut rng);
            let polys = (0..n_polys)
                .map(|_| {
                    let n_terms = cfg.terms.draw(1, &mut rng);
                    let mut seen: HashSet<Vec<u32>> = HashSet::new();
                    let mut terms = Vec::new();
                    for _ in 0..n_terms {
                        let mut accepted = None;
                        for _ in 0..16 {
                            let e: Vec<u32> = (0..n).map(|_| cfg.degree.draw(0, &mut rng)).collect();
                            if seen.insert(e.clone()) {
                                accepted = Some(e);
                                break;
                            }
                        }
                        let mag = cfg.coeff.draw(1, &mut rng);
                        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
                        if let Some(e) = accepted {
                            terms.push((e, BigInt::from(sign * mag as i64)));
                        }
                    }
                    Polynomial::from_terms(n, terms)
                })
                .collect();
            PolySystem::new(n, polys).expect("at least one polynomial")
        })
        .collect()
}
