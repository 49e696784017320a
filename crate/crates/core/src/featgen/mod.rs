//! Degree-based features of polynomial systems.
//!
//! Each feature is a [`FeatureDescriptor`]: the exponent of one variable,
//! pushed through an optional sign, a reduction over the monomials of each
//! polynomial, another optional sign, a reduction over the polynomials, and a
//! final optional sign. Per variable that gives 2·3·2·3·2 = 72 descriptors.

mod descriptor;

pub use descriptor::{
    evaluate_descriptor, parse_descriptor, serialize_descriptor, Agg, FeatureDescriptor, Pre,
};

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::polysys::PolySystem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatError {
    #[error("malformed descriptor `{0}`")]
    Malformed(String),
    #[error("descriptor variable d_{var} out of range for {n_vars} variables")]
    VariableOutOfRange { var: usize, n_vars: usize },
    #[error("duplicate descriptor `{0}`")]
    Duplicate(String),
    #[error("arity mismatch: problem {problem} has {found} variables, expected {expected}")]
    ArityMismatch { problem: usize, expected: usize, found: usize },
    #[error("feature matrix has no rows")]
    EmptyMatrix,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Header line written at the top of descriptor files.
pub const DESCRIPTOR_FILE_HEADER: &str = "# ordpick degree-feature grammar v1: [sign] agg_p([sign] agg_m([sign] d_K)), agg in {max,sum,av}";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DescriptorSet {
    descriptors: Vec<FeatureDescriptor>,
}

impl DescriptorSet {
    pub fn new(descriptors: Vec<FeatureDescriptor>) -> Result<Self, FeatError> {
        let mut seen = std::collections::HashSet::new();
        for d in &descriptors {
            if !seen.insert(*d) {
                return Err(FeatError::Duplicate(d.to_string()));
            }
        }
        Ok(DescriptorSet { descriptors })
    }

    pub fn descriptors(&self) -> &[FeatureDescriptor] {
        &self.descriptors
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    /// One canonical descriptor per line, preceded by a `#` header.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{DESCRIPTOR_FILE_HEADER}").unwrap();
        for d in &self.descriptors {
            writeln!(out, "{d}").unwrap();
        }
        out
    }

    /// Reads a descriptor file; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str, n_vars: usize) -> Result<Self, FeatError> {
        let mut ds = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            ds.push(
                FeatureDescriptor::parse(t, n_vars)
                    .map_err(|e| FeatError::Parse { line: i + 1, msg: e.to_string() })?,
            );
        }
        Self::new(ds)
    }
}

/// Row-major problems × descriptors matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged feature rows");
        FeatureMatrix { n_rows: rows.len(), n_cols, values: rows.concat() }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.get(i, j)).collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> FeatureMatrix {
        FeatureMatrix::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect())
            .with_cols(self.n_cols)
    }

    pub fn select_columns(&self, cols: &[usize]) -> FeatureMatrix {
        FeatureMatrix::from_rows(self.rows().map(|r| cols.iter().map(|&j| r[j]).collect()).collect())
            .with_cols(cols.len())
    }

    fn with_cols(mut self, n_cols: usize) -> Self {
        if self.n_rows == 0 {
            self.n_cols = n_cols;
        }
        self
    }

    /// One row per line, space-separated shortest round-trip decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.rows() {
            let cells: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FeatError> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
            let row = row.map_err(|e| FeatError::Parse { line: i + 1, msg: e.to_string() })?;
            if let Some(first) = rows.first().map(Vec::len) {
                if first != row.len() {
                    return Err(FeatError::Parse {
                        line: i + 1,
                        msg: format!("expected {first} values, found {}", row.len()),
                    });
                }
            }
            rows.push(row);
        }
        Ok(FeatureMatrix::from_rows(rows))
    }
}

/// Every descriptor for `n_vars` variables, variable-major, then
/// `pre_mono, agg_mono, pre_poly, agg_poly, post` in nested order.
pub fn generate_raw_descriptors(n_vars: usize) -> DescriptorSet {
    let mut out = Vec::with_capacity(72 * n_vars);
    for var in 0..n_vars {
        for pre_mono in Pre::ALL {
            for agg_mono in Agg::ALL {
                for pre_poly in Pre::ALL {
                    for agg_poly in Agg::ALL {
                        for post in Pre::ALL {
                            out.push(FeatureDescriptor { var, pre_mono, agg_mono, pre_poly, agg_poly, post });
                        }
                    }
                }
            }
        }
    }
    DescriptorSet { descriptors: out }
}

/// Evaluates every descriptor on every problem. Rows are computed in parallel
/// and collected in input order.
pub fn evaluate_matrix(ds: &DescriptorSet, problems: &[PolySystem]) -> Result<FeatureMatrix, FeatError> {
    if let Some(first) = problems.first() {
        let n = first.n_vars();
        if let Some((i, p)) = problems.iter().enumerate().find(|(_, p)| p.n_vars() != n) {
            return Err(FeatError::ArityMismatch { problem: i, expected: n, found: p.n_vars() });
        }
        if let Some(d) = ds.descriptors.iter().find(|d| d.var >= n) {
            return Err(FeatError::VariableOutOfRange { var: d.var + 1, n_vars: n });
        }
    }
    let rows: Vec<Vec<f64>> =
        problems.par_iter().map(|p| ds.descriptors.iter().map(|d| d.evaluate(p)).collect()).collect();
    Ok(FeatureMatrix::from_rows(rows).with_cols(ds.len()))
}

/// Column indices surviving simplification: constant columns are dropped and,
/// among bitwise-identical columns, only the first is kept.
pub fn surviving_columns(m: &FeatureMatrix) -> Result<Vec<usize>, FeatError> {
    if m.n_rows() == 0 {
        return Err(FeatError::EmptyMatrix);
    }
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut keep = Vec::new();
    for j in 0..m.n_cols() {
        let bits: Vec<u64> = m.column(j).iter().map(|x| x.to_bits()).collect();
        if bits.iter().all(|&b| b == bits[0]) {
            continue;
        }
        if seen.insert(bits, j).is_none() {
            keep.push(j);
        }
    }
    Ok(keep)
}

pub fn simplify_descriptors(ds: &DescriptorSet, m: &FeatureMatrix) -> Result<DescriptorSet, FeatError> {
    assert_eq!(ds.len(), m.n_cols(), "matrix does not match descriptor set");
    let keep = surviving_columns(m)?;
    Ok(DescriptorSet { descriptors: keep.into_iter().map(|j| ds.descriptors[j]).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::{generate_random_dataset, parse_problem, GenConfig};

    #[test]
    fn raw_counts() {
        let three = generate_raw_descriptors(3);
        assert_eq!(three.len(), 216);
        assert!(DescriptorSet::new(three.descriptors.clone()).is_ok());
        let fig = FeatureDescriptor::parse("av_p(max_m(d_1))", 3).unwrap();
        assert_eq!(three.descriptors().iter().filter(|d| **d == fig).count(), 1);
        let one = generate_raw_descriptors(1);
        assert_eq!(one.len(), 72);
        assert!(one.descriptors().iter().all(|d| d.var == 0));
    }

    #[test]
    fn text_round_trip_over_all_generated() {
        let ds = generate_raw_descriptors(3);
        for d in ds.descriptors() {
            let t = serialize_descriptor(d);
            assert_eq!(parse_descriptor(&t, 3).unwrap(), *d);
        }
        let texts: std::collections::HashSet<String> = ds.descriptors().iter().map(|d| d.to_string()).collect();
        assert_eq!(texts.len(), 216);
        assert_eq!(DescriptorSet::from_text(&ds.to_text(), 3).unwrap(), ds);
    }

    #[test]
    fn simplification_rules() {
        let ds = generate_raw_descriptors(1);
        let ds = DescriptorSet { descriptors: ds.descriptors[..3].to_vec() };
        let m = FeatureMatrix::from_rows(vec![vec![1.0, 1.0, 3.0], vec![2.0, 2.0, 3.0]]);
        let out = simplify_descriptors(&ds, &m).unwrap();
        assert_eq!(out.descriptors(), &ds.descriptors[..1]);
        let empty = FeatureMatrix::from_rows(vec![]).with_cols(3);
        assert_eq!(simplify_descriptors(&ds, &empty), Err(FeatError::EmptyMatrix));
    }

    #[test]
    fn identical_problems_leave_nothing() {
        let p = parse_problem("[[((1,2,0),3),((0,0,1),1)]]").unwrap();
        let problems = vec![p.clone(), p.clone(), p];
        let ds = generate_raw_descriptors(3);
        let m = evaluate_matrix(&ds, &problems).unwrap();
        assert!(simplify_descriptors(&ds, &m).unwrap().is_empty());
    }

    #[test]
    fn matrix_shape_and_cells() {
        let problems = generate_random_dataset(&GenConfig { seed: 4, ..GenConfig::default() }, 12);
        let ds = generate_raw_descriptors(3);
        let m = evaluate_matrix(&ds, &problems[..1]).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (1, 216));
        let m = evaluate_matrix(&ds, &problems).unwrap();
        for (i, p) in problems.iter().enumerate() {
            for (j, d) in ds.descriptors().iter().enumerate() {
                assert_eq!(m.get(i, j).to_bits(), evaluate_descriptor(d, p).to_bits());
            }
        }
        let mut rev = problems.clone();
        rev.reverse();
        let mr = evaluate_matrix(&ds, &rev).unwrap();
        for i in 0..problems.len() {
            assert_eq!(m.row(i), mr.row(problems.len() - 1 - i));
        }
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let a = parse_problem("[[((1,0),1)]]").unwrap();
        let b = parse_problem("[[((1,0,0),1)]]").unwrap();
        let ds = generate_raw_descriptors(2);
        assert!(matches!(evaluate_matrix(&ds, &[a, b]), Err(FeatError::ArityMismatch { problem: 1, .. })));
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = FeatureMatrix::from_rows(vec![vec![1.5, 0.1 + 0.2, 2.0 / 3.0], vec![0.0, -1.0, 1e-300]]);
        let back = FeatureMatrix::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.to_text().lines().next().unwrap(), "1.5 0.30000000000000004 0.6666666666666666");
        assert!(matches!(FeatureMatrix::from_text("1 2\n3\n"), Err(FeatError::Parse { line: 2, .. })));
    }
}
