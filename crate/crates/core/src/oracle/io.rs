use std::fmt::Write as _;

use super::{OracleError, TimingRecord};

pub const TIMINGS_CSV_HEADER: &str = "problem_id,ordering_index,cost_seconds,timed_out";

/// Rows sorted by `(problem_id, ordering_index)`, costs with 6 decimals.
pub fn write_timings_csv(records: &[TimingRecord]) -> String {
    let mut sorted: Vec<&TimingRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.problem_id);
    let mut out = String::new();
    writeln!(out, "{TIMINGS_CSV_HEADER}").unwrap();
    for r in sorted {
        for (i, (c, t)) in r.costs.iter().zip(&r.timed_out).enumerate() {
            writeln!(out, "{},{},{:.6},{}", r.problem_id, i, c, t).unwrap();
        }
    }
    out
}

pub fn parse_timings_csv(text: &str) -> Result<Vec<TimingRecord>, OracleError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TIMINGS_CSV_HEADER => {}
        _ => return Err(OracleError::Parse { line: 1, msg: format!("expected header `{TIMINGS_CSV_HEADER}`") }),
    }
    let mut records: Vec<TimingRecord> = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |msg: String| OracleError::Parse { line: line_no, msg };
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", f.len())));
        }
        let pid: usize = f[0].parse().map_err(|_| err(format!("bad problem_id `{}`", f[0])))?;
        let idx: usize = f[1].parse().map_err(|_| err(format!("bad ordering_index `{}`", f[1])))?;
        let cost: f64 = f[2].parse().map_err(|_| err(format!("bad cost `{}`", f[2])))?;
        let timed_out: bool = f[3].parse().map_err(|_| err(format!("bad timed_out `{}`", f[3])))?;
        match records.last_mut() {
            Some(r) if r.problem_id == pid => {
                if idx != r.costs.len() {
                    return Err(err(format!("ordering index {idx} out of sequence")));
                }
                r.costs.push(cost);
                r.timed_out.push(timed_out);
            }
            last => {
                if last.is_some_and(|r| r.problem_id > pid) {
                    return Err(err("rows not sorted by problem_id".into()));
                }
                if idx != 0 {
                    return Err(err(format!("problem {pid} starts at ordering index {idx}")));
                }
                records.push(TimingRecord { problem_id: pid, costs: vec![cost], timed_out: vec![timed_out] });
            }
        }
    }
    Ok(records)
}

/// Contents of the optional per-problem timing file.
pub fn per_problem_timing_text(r: &TimingRecord) -> String {
    let mut out = String::from("ordering_index cost_seconds timed_out\n");
    for (i, (c, t)) in r.costs.iter().zip(&r.timed_out).enumerate() {
        writeln!(out, "{i} {c:.6} {t}").unwrap();
    }
    out
}

/// One 0-based ordering index per line.
pub fn write_labels(labels: &[usize]) -> String {
    labels.iter().map(|l| format!("{l}\n")).collect()
}

pub fn parse_labels(text: &str) -> Result<Vec<usize>, OracleError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| OracleError::Parse { line: i + 1, msg: format!("bad label `{l}`") })
        })
        .collect()
}
