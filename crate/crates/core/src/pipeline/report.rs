//! Comparative results: a fixed-width table plus a CSV twin.

use std::fmt::Write as _;

use rand::Rng;

use super::PipelineError;
use crate::mlcore::{metric_accuracy_within, metric_total_time};
use crate::oracle::TimingRecord;
use crate::seeds::stream;

pub const SOLVER_COLUMNS: [&str; 9] = ["DT", "KNN", "MLP", "SVM", "Brown", "sotd", "rand", "VB", "VW"];
pub const ROW_LABELS: [&str; 2] = ["Prediction time (s)", "Total time (s)"];
pub const REPORT_CSV_HEADER: &str = "solver,prediction_time_s,cad_time_s,total_time_s";

/// Uniform ordering index per problem from the `random-baseline` stream.
pub fn baseline_random(timings: &[TimingRecord], seed: u64) -> Vec<usize> {
    let mut rng = stream(seed, "random-baseline");
    timings.iter().map(|t| rng.random_range(0..t.costs.len())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Virtual {
    Best,
    Worst,
}

/// Per-problem argmin or argmax of the costs, ties to the lowest index.
pub fn baseline_virtual(timings: &[TimingRecord], kind: Virtual) -> Vec<usize> {
    timings
        .iter()
        .map(|t| {
            let mut pick = 0;
            for (i, &c) in t.costs.iter().enumerate() {
                let better = match kind {
                    Virtual::Best => c < t.costs[pick],
                    Virtual::Worst => c > t.costs[pick],
                };
                if better {
                    pick = i;
                }
            }
            pick
        })
        .collect()
}

/// One report column. `None` fields print as `n/a` (family not run).
#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult {
    pub name: String,
    pub prediction_seconds: Option<f64>,
    pub cad_seconds: Option<f64>,
    pub within: Vec<Option<f64>>,
}

impl SolverResult {
    pub fn total_seconds(&self) -> Option<f64> {
        Some(self.prediction_seconds? + self.cad_seconds?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparativeReport {
    pub n_problems: usize,
    pub within_x: Vec<f64>,
    pub solvers: Vec<SolverResult>,
}

/// Predictions (and prediction time) per column of [`SOLVER_COLUMNS`].
pub struct SolverInput {
    pub name: String,
    pub run: Option<(Vec<usize>, f64)>,
}

pub fn build_report(
    inputs: &[SolverInput],
    timings: &[TimingRecord],
    within_x: &[f64],
) -> Result<ComparativeReport, PipelineError> {
    let mut solvers = Vec::with_capacity(inputs.len());
    for s in inputs {
        let r = match &s.run {
            None => SolverResult {
                name: s.name.clone(),
                prediction_seconds: None,
                cad_seconds: None,
                within: vec![None; within_x.len()],
            },
            Some((pred, secs)) => {
                if pred.len() != timings.len() {
                    return Err(PipelineError::Stage {
                        stage: super::StageId::S2e,
                        msg: format!("{}: {} predictions for {} test problems", s.name, pred.len(), timings.len()),
                    });
                }
                if let Some((i, &p)) = pred.iter().enumerate().find(|(i, &p)| p >= timings[*i].costs.len()) {
                    return Err(PipelineError::Stage {
                        stage: super::StageId::S2e,
                        msg: format!("{}: ordering {p} out of range for problem {i}", s.name),
                    });
                }
                SolverResult {
                    name: s.name.clone(),
                    prediction_seconds: Some(*secs),
                    cad_seconds: Some(metric_total_time(pred, timings, 0.0)),
                    within: within_x.iter().map(|&x| Some(metric_accuracy_within(pred, timings, x))).collect(),
                }
            }
        };
        solvers.push(r);
    }
    Ok(ComparativeReport { n_problems: timings.len(), within_x: within_x.to_vec(), solvers })
}

fn cell(v: Option<f64>) -> String {
    match v {
        None => "n/a".into(),
        Some(x) if x == 0.0 => "0".into(),
        Some(x) if x.abs() < 1e-2 => format!("{x:.3e}"),
        Some(x) => format!("{x:.3}"),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or("n/a".into(), |x| format!("{x}"))
}

fn within_header(x: f64) -> String {
    format!("within_{x}")
}

impl ComparativeReport {
    pub fn solver(&self, name: &str) -> Option<&SolverResult> {
        self.solvers.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let label_w = ROW_LABELS.iter().map(|l| l.len()).max().unwrap_or(0) + 2;
        let col_w = 12;
        let mut out = String::new();
        writeln!(out, "Comparative results on {} test problems", self.n_problems).unwrap();
        writeln!(out).unwrap();
        write!(out, "{:label_w$}", "").unwrap();
        for s in &self.solvers {
            write!(out, "{:>col_w$}", s.name).unwrap();
        }
        writeln!(out).unwrap();
        let rows: [(&str, fn(&SolverResult) -> Option<f64>); 2] =
            [(ROW_LABELS[0], |s| s.prediction_seconds), (ROW_LABELS[1], |s| s.total_seconds())];
        for (label, get) in rows {
            write!(out, "{label:label_w$}").unwrap();
            for s in &self.solvers {
                write!(out, "{:>col_w$}", cell(get(s))).unwrap();
            }
            writeln!(out).unwrap();
        }
        if !self.within_x.is_empty() {
            writeln!(out).unwrap();
            writeln!(out, "Fraction of problems solved within x% of the minimum cost").unwrap();
            for (k, x) in self.within_x.iter().enumerate() {
                write!(out, "{:label_w$}", format!("x = {x}%")).unwrap();
                for s in &self.solvers {
                    let c = s.within[k].map_or("n/a".to_string(), |v| format!("{v:.4}"));
                    write!(out, "{c:>col_w$}").unwrap();
                }
                writeln!(out).unwrap();
            }
        }
        out
    }

    /// `prediction_time_s` and `total_time_s` are wall-clock measurements;
    /// every other field is reproducible.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_CSV_HEADER);
        for &x in &self.within_x {
            write!(out, ",{}", within_header(x)).unwrap();
        }
        writeln!(out).unwrap();
        for s in &self.solvers {
            write!(
                out,
                "{},{},{},{}",
                s.name,
                opt(s.prediction_seconds),
                opt(s.cad_seconds),
                opt(s.total_seconds())
            )
            .unwrap();
            for w in &s.within {
                write!(out, ",{}", opt(*w)).unwrap();
            }
            writeln!(out).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str, n_problems: usize) -> Result<Self, PipelineError> {
        let malformed = |line: usize, msg: String| PipelineError::Malformed {
            file: "comparative_results csv".into(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, h)| h).unwrap_or("");
        let Some(rest) = header.strip_prefix(REPORT_CSV_HEADER) else {
            return Err(malformed(1, format!("expected header starting `{REPORT_CSV_HEADER}`")));
        };
        let mut within_x = Vec::new();
        for h in rest.split(',').filter(|h| !h.is_empty()) {
            let x = h
                .strip_prefix("within_")
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| malformed(1, format!("bad column `{h}`")))?;
            within_x.push(x);
        }
        let parse_opt = |line: usize, v: &str| -> Result<Option<f64>, PipelineError> {
            if v == "n/a" {
                return Ok(None);
            }
            v.parse().map(Some).map_err(|_| malformed(line, format!("bad number `{v}`")))
        };
        let mut solvers = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 + within_x.len() {
                return Err(malformed(i + 1, format!("expected {} fields", 4 + within_x.len())));
            }
            let within = f[4..].iter().map(|v| parse_opt(i + 1, v)).collect::<Result<_, _>>()?;
            solvers.push(SolverResult {
                name: f[0].to_string(),
                prediction_seconds: parse_opt(i + 1, f[1])?,
                cad_seconds: parse_opt(i + 1, f[2])?,
                within,
            });
        }
        Ok(ComparativeReport { n_problems, within_x, solvers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(costs: &[f64]) -> TimingRecord {
        TimingRecord { problem_id: 0, costs: costs.to_vec(), timed_out: vec![false; costs.len()] }
    }

    #[test]
    fn virtual_solvers() {
        let t = [rec(&[2.0, 5.0]), rec(&[3.0, 3.0, 3.0])];
        assert_eq!(baseline_virtual(&t, Virtual::Best), vec![0, 0]);
        assert_eq!(baseline_virtual(&t, Virtual::Worst), vec![1, 0]);
    }

    #[test]
    fn random_is_seeded_and_trivial_for_one_ordering() {
        let t: Vec<TimingRecord> = (0..50).map(|_| rec(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0])).collect();
        assert_eq!(baseline_random(&t, 4), baseline_random(&t, 4));
        assert_ne!(baseline_random(&t, 4), baseline_random(&t, 5));
        let one: Vec<TimingRecord> = (0..5).map(|_| rec(&[7.0])).collect();
        assert_eq!(baseline_random(&one, 4), vec![0; 5]);
    }

    #[test]
    fn csv_round_trip_and_table_shape() {
        let t = [rec(&[1.0, 1.05, 2.0]), rec(&[0.3, 0.1, 0.2])];
        let inputs: Vec<SolverInput> = SOLVER_COLUMNS
            .iter()
            .enumerate()
            .map(|(i, n)| SolverInput {
                name: n.to_string(),
                run: (i != 2).then(|| (vec![i % 3, (i + 1) % 3], 0.001 * i as f64)),
            })
            .collect();
        let r = build_report(&inputs, &t, &[0.0, 10.0]).unwrap();
        assert_eq!(ComparativeReport::from_csv(&r.to_csv(), 2).unwrap(), r);
        let text = r.to_text();
        let header: Vec<&str> = text.lines().nth(2).unwrap().split_whitespace().collect();
        assert_eq!(header, SOLVER_COLUMNS);
        assert!(text.contains("n/a"));
        let bad = [SolverInput { name: "DT".into(), run: Some((vec![0], 0.0)) }];
        assert!(build_report(&bad, &t, &[]).is_err());
    }
}
