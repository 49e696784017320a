//! Cost measurement for every variable ordering of a problem.
//!
//! Two backends sit behind [`OracleConfig`]: an external command launched once
//! per ordering and timed by wall clock, and a deterministic surrogate whose
//! cost is `surrogate_unit * sotd score`. On timeout the timeout value itself
//! is recorded as the cost.

mod external;
mod io;

pub use external::external_run;
pub use io::{
    parse_labels, parse_timings_csv, per_problem_timing_text, write_labels, write_timings_csv, TIMINGS_CSV_HEADER,
};

use rayon::prelude::*;
use thiserror::Error;

use crate::polysys::{enumerate_orderings, PolyError, PolySystem, VariableOrdering};
use crate::projection::{sotd_score, ProjectionCaps};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid oracle configuration: {0}")]
    Config(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleKind {
    Surrogate,
    /// Whitespace-separated argv template with `{input}`, `{ordering}` and
    /// `{timeout}` placeholders. No shell is involved.
    External { command_template: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    pub kind: OracleKind,
    pub timeout_seconds: f64,
    pub caps: ProjectionCaps,
    pub surrogate_unit: f64,
    /// Concurrent child processes in external mode.
    pub max_parallel: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            kind: OracleKind::Surrogate,
            timeout_seconds: 300.0,
            caps: ProjectionCaps::default(),
            surrogate_unit: 1e-3,
            max_parallel: 1,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.timeout_seconds > 0.0 && self.timeout_seconds.is_finite()) {
            return Err(OracleError::Config("timeout must be a positive number of seconds".into()));
        }
        if !(self.surrogate_unit > 0.0 && self.surrogate_unit.is_finite()) {
            return Err(OracleError::Config("surrogate_unit must be positive".into()));
        }
        if self.max_parallel == 0 {
            return Err(OracleError::Config("max_parallel must be at least 1".into()));
        }
        if let OracleKind::External { command_template } = &self.kind {
            for ph in ["{input}", "{ordering}", "{timeout}"] {
                if !command_template.contains(ph) {
                    return Err(OracleError::Config(format!("command template lacks {ph}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TimeoutCause {
    Overrun,
    NonzeroExit(Option<i32>),
    Spawn(String),
    Blowup(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunOutcome {
    Completed(f64),
    Timeout(TimeoutCause),
}

/// Per-problem costs, one per ordering in enumeration order.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRecord {
    pub problem_id: usize,
    pub costs: Vec<f64>,
    pub timed_out: Vec<bool>,
}

impl TimingRecord {
    fn from_outcomes(problem_id: usize, outcomes: Vec<RunOutcome>, timeout: f64) -> Self {
        let mut costs = Vec::with_capacity(outcomes.len());
        let mut timed_out = Vec::with_capacity(outcomes.len());
        for (i, o) in outcomes.into_iter().enumerate() {
            match o {
                RunOutcome::Completed(c) => {
                    costs.push(c);
                    timed_out.push(false);
                }
                RunOutcome::Timeout(cause) => {
                    if !matches!(cause, TimeoutCause::Overrun | TimeoutCause::Blowup(_)) {
                        log::warn!("problem {problem_id}, ordering {i}: recorded as timeout ({cause:?})");
                    }
                    costs.push(timeout);
                    timed_out.push(true);
                }
            }
        }
        TimingRecord { problem_id, costs, timed_out }
    }

    pub fn min_cost(&self) -> f64 {
        self.costs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Smallest surrogate cost, in units, charged for a score of zero (a system
/// with no nonconstant polynomial), keeping every cost positive.
pub const SURROGATE_FLOOR: f64 = 1e-6;

pub fn surrogate_cost(p: &PolySystem, o: &VariableOrdering, cfg: &OracleConfig) -> RunOutcome {
    match sotd_score(p, o, &cfg.caps) {
        Ok(score) => {
            let cost = cfg.surrogate_unit * (score as f64).max(SURROGATE_FLOOR);
            if cost > cfg.timeout_seconds {
                RunOutcome::Timeout(TimeoutCause::Overrun)
            } else {
                RunOutcome::Completed(cost)
            }
        }
        Err(b) => RunOutcome::Timeout(TimeoutCause::Blowup(b.to_string())),
    }
}

pub fn measure_all_orderings(p: &PolySystem, id: usize, cfg: &OracleConfig) -> Result<TimingRecord, OracleError> {
    cfg.validate()?;
    let orderings = enumerate_orderings(p.n_vars())?;
    let outcomes: Vec<RunOutcome> = match &cfg.kind {
        OracleKind::Surrogate => orderings.par_iter().map(|o| surrogate_cost(p, o, cfg)).collect(),
        OracleKind::External { .. } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.max_parallel)
                .build()
                .map_err(|e| OracleError::Config(e.to_string()))?;
            pool.install(|| orderings.par_iter().map(|o| external_run(cfg, p, o)).collect())
        }
    };
    Ok(TimingRecord::from_outcomes(id, outcomes, cfg.timeout_seconds))
}

/// Index of the cheapest ordering, ties to the lowest index.
pub fn label_best(t: &TimingRecord) -> usize {
    assert!(!t.costs.is_empty(), "timing record without costs");
    if t.timed_out.iter().all(|&b| b) {
        log::warn!("problem {}: every ordering timed out; labelling ordering 0", t.problem_id);
    }
    let mut best = 0;
    for (i, &c) in t.costs.iter().enumerate() {
        if c < t.costs[best] {
            best = i;
        }
    }
    best
}
