use std::path::Path;

use ordpick::featgen::{generate_raw_descriptors, FeatureDescriptor, FeatureMatrix};
use ordpick::mlcore::{self, Family, ModelSpec, TrainedModel};
use ordpick::oracle::{label_best, measure_all_orderings, OracleConfig};
use ordpick::pipeline::{self, PipelineConfig};
use ordpick::polysys::{
    enumerate_orderings, generate_random_dataset, parse_infix, parse_problem, serialize_problem, GenConfig,
    PolySystem, VariableOrdering,
};
use ordpick::projection::{self, brown_choose, sotd_choose, HeuristicScore, ProjectionCaps};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A polynomial system over integer coefficients.
#[pyclass(name = "System", module = "ordpick_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySystem {
    inner: PolySystem,
}

#[pymethods]
impl PySystem {
    /// Parses the terms format: `[[((e1,..,en),c),...],...]`.
    #[staticmethod]
    fn from_terms(text: &str) -> PyResult<Self> {
        Ok(PySystem { inner: parse_problem(text).map_err(value_err)? })
    }

    /// Parses `;`-separated infix polynomials over the given variable names.
    #[staticmethod]
    fn from_infix(text: &str, variables: Vec<String>) -> PyResult<Self> {
        Ok(PySystem { inner: parse_infix(text, &variables).map_err(value_err)? })
    }

    #[getter]
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn to_terms(&self) -> String {
        serialize_problem(&self.inner)
    }

    fn polys(&self) -> Vec<String> {
        self.inner.polys().iter().map(|p| p.to_string()).collect()
    }

    /// Sum of total degrees of the full projection set, `None` past the caps.
    #[pyo3(signature = (ordering, max_polys = 512, max_tdeg = 64))]
    fn sotd(&self, ordering: Vec<usize>, max_polys: usize, max_tdeg: u32) -> PyResult<Option<u64>> {
        let o = VariableOrdering::from_perm(ordering).map_err(value_err)?;
        if o.n_vars() != self.inner.n_vars() {
            return Err(value_err(format!("ordering has {} variables, system {}", o.n_vars(), self.inner.n_vars())));
        }
        let caps = ProjectionCaps { max_polys, max_tdeg };
        Ok(projection::sotd_score(&self.inner, &o, &caps).ok())
    }

    /// `(ordering index, permutation, score)` of the sotd heuristic.
    fn sotd_choose(&self) -> PyResult<(usize, Vec<usize>, Option<u64>)> {
        let c = sotd_choose(&self.inner, &ProjectionCaps::default()).map_err(value_err)?;
        let score = match c.score {
            HeuristicScore::Sotd(s) => s,
            HeuristicScore::Brown(_) => None,
        };
        Ok((c.ordering.index(), c.ordering.perm().to_vec(), score))
    }

    /// `(ordering index, permutation)` of Brown's greedy heuristic.
    fn brown_choose(&self) -> (usize, Vec<usize>) {
        let c = brown_choose(&self.inner);
        (c.ordering.index(), c.ordering.perm().to_vec())
    }

    /// Surrogate cost of every ordering, in enumeration order.
    #[pyo3(signature = (timeout = 300.0))]
    fn timings(&self, py: Python<'_>, timeout: f64) -> PyResult<Vec<f64>> {
        let cfg = OracleConfig { timeout_seconds: timeout, ..OracleConfig::default() };
        let s = self.inner.clone();
        let rec = py.detach(move || measure_all_orderings(&s, 0, &cfg)).map_err(value_err)?;
        Ok(rec.costs)
    }

    /// Index of the cheapest ordering under the surrogate oracle.
    fn label_best(&self, py: Python<'_>) -> PyResult<usize> {
        let s = self.inner.clone();
        let rec = py.detach(move || measure_all_orderings(&s, 0, &OracleConfig::default())).map_err(value_err)?;
        Ok(label_best(&rec))
    }

    fn features(&self, descriptors: Vec<String>) -> PyResult<Vec<f64>> {
        descriptors
            .iter()
            .map(|d| Ok(FeatureDescriptor::parse(d, self.inner.n_vars()).map_err(value_err)?.evaluate(&self.inner)))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("System({})", serialize_problem(&self.inner))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// A fitted classifier mapping feature rows to ordering labels.
#[pyclass(name = "Model", module = "ordpick_py", frozen)]
struct PyModel {
    inner: TrainedModel,
}

#[pymethods]
impl PyModel {
    /// `family` is one of DT, KNN, MLP, SVM; `spec` uses `key=value` pairs,
    /// e.g. `"k=3 weighting=uniform"`.
    #[staticmethod]
    #[pyo3(signature = (family, spec, x, y, n_classes, seed = 0))]
    fn train(family: &str, spec: &str, x: Vec<Vec<f64>>, y: Vec<usize>, n_classes: usize, seed: u64) -> PyResult<Self> {
        let family: Family = family.parse().map_err(value_err)?;
        let spec = ModelSpec::parse(family, spec).map_err(value_err)?;
        let inner = mlcore::train(&spec, &FeatureMatrix::from_rows(x), &y, n_classes, seed).map_err(value_err)?;
        Ok(PyModel { inner })
    }

    fn predict(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<usize>> {
        mlcore::predict(&self.inner, &FeatureMatrix::from_rows(x)).map_err(value_err)
    }

    #[getter]
    fn spec(&self) -> String {
        self.inner.spec.to_string()
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.spec.family().name()
    }
}

/// All permutations of `0..n` in enumeration (label) order.
#[pyfunction]
fn orderings(n: usize) -> PyResult<Vec<Vec<usize>>> {
    Ok(enumerate_orderings(n).map_err(value_err)?.iter().map(|o| o.perm().to_vec()).collect())
}

fn single_poly(text: &str, variables: &[String]) -> PyResult<ordpick::polysys::Polynomial> {
    let s = parse_infix(text, variables).map_err(value_err)?;
    match s.polys() {
        [p] => Ok(p.clone()),
        ps => Err(value_err(format!("expected one polynomial, found {}", ps.len()))),
    }
}

fn var_index(var: &str, variables: &[String]) -> PyResult<usize> {
    variables.iter().position(|v| v == var).ok_or_else(|| value_err(format!("unknown variable `{var}`")))
}

/// Resultant of two infix polynomials with respect to `var`. Variables in the
/// result print as `x1..xn` in the order given.
#[pyfunction]
fn resultant(p: &str, q: &str, var: &str, variables: Vec<String>) -> PyResult<String> {
    let v = var_index(var, &variables)?;
    let r = projection::resultant(&single_poly(p, &variables)?, &single_poly(q, &variables)?, v).map_err(value_err)?;
    Ok(r.to_string())
}

#[pyfunction]
fn discriminant(p: &str, var: &str, variables: Vec<String>) -> PyResult<String> {
    let v = var_index(var, &variables)?;
    Ok(projection::discriminant(&single_poly(p, &variables)?, v).map_err(value_err)?.to_string())
}

#[pyfunction]
fn raw_descriptors(n_vars: usize) -> Vec<String> {
    generate_raw_descriptors(n_vars).descriptors().iter().map(|d| d.to_string()).collect()
}

/// Random systems from the default generator.
#[pyfunction]
#[pyo3(signature = (count, seed = 0, n_vars = 3))]
fn generate(count: usize, seed: u64, n_vars: usize) -> PyResult<Vec<PySystem>> {
    let cfg = GenConfig { seed, n_vars, ..GenConfig::default() };
    cfg.validate().map_err(value_err)?;
    Ok(generate_random_dataset(&cfg, count).into_iter().map(|inner| PySystem { inner }).collect())
}

/// Runs the configured pipeline stages; returns the paths written.
#[pyfunction]
#[pyo3(signature = (config, stamp = None, out = None))]
fn run_pipeline(py: Python<'_>, config: &str, stamp: Option<String>, out: Option<String>) -> PyResult<Vec<String>> {
    let mut cfg = PipelineConfig::load(Path::new(config)).map_err(value_err)?;
    if stamp.is_some() {
        cfg.stamp = stamp;
    }
    if let Some(o) = out {
        cfg.out_dir = o.into();
    }
    let summary = py.detach(move || pipeline::run(&cfg)).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(summary.written.iter().map(|p| p.display().to_string()).collect())
}

#[pymodule]
fn ordpick_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(orderings, m)?)?;
    m.add_function(wrap_pyfunction!(resultant, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(raw_descriptors, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}
