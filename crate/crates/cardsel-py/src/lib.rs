//! Python bindings: cardinality and PB encodings, the reference solver,
//! minimization, size statistics and the verification suites.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cardsel::card::{encode_atmost, EncodeOptions, Method};
use cardsel::cnf::{parse_dimacs, CnfFormula, Lit, Var};
use cardsel::cnfp::{encode_cnfp, parse_cnfp, queens};
use cardsel::pb::{find_base, parse_opb, to_digits, MixedRadixBase};
use cardsel::solve::{minimize, DpllBackend, MinimizeConfig, MinimizeStatus, Problem, Strategy};
use cardsel::stats::stats_cell;
use cardsel::up::dpll_sat;
use cardsel::verify::{run, Suite, VerifyConfig};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn options(method: &str, lambda: f64, direct: bool) -> PyResult<EncodeOptions> {
    let method: Method = method.parse().map_err(value_err)?;
    Ok(EncodeOptions { method, lambda, direct_mixing: direct })
}

fn lit(code: i64) -> PyResult<Lit> {
    Lit::from_dimacs(code).ok_or_else(|| value_err(format!("invalid literal {code}")))
}

/// A CNF formula over variables `1..=num_vars`.
#[pyclass(name = "Formula", module = "pycardsel")]
pub struct PyFormula {
    inner: CnfFormula,
}

#[pymethods]
impl PyFormula {
    #[new]
    #[pyo3(signature = (num_vars = 0))]
    fn new(num_vars: Var) -> Self {
        PyFormula { inner: CnfFormula::with_vars(num_vars) }
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        parse_dimacs(text).map(|inner| PyFormula { inner }).map_err(value_err)
    }

    #[getter]
    fn num_vars(&self) -> Var {
        self.inner.num_vars()
    }

    #[getter]
    fn num_clauses(&self) -> usize {
        self.inner.num_clauses()
    }

    fn add_clause(&mut self, lits: Vec<i64>) -> PyResult<()> {
        let lits = lits.into_iter().map(lit).collect::<PyResult<Vec<_>>>()?;
        self.inner.reserve_vars(lits.iter().filter_map(|l| l.var()).max().unwrap_or(0));
        self.inner.add_clause(&lits);
        Ok(())
    }

    fn clauses(&self) -> Vec<Vec<i32>> {
        self.inner.clauses().iter().map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect()).collect()
    }

    fn to_dimacs(&self) -> String {
        self.inner.to_dimacs()
    }

    /// A model as signed literals, or `None` when unsatisfiable.
    #[pyo3(signature = (assumptions = Vec::new()))]
    fn solve(&self, assumptions: Vec<i64>) -> PyResult<Option<Vec<i32>>> {
        let assumptions = assumptions.into_iter().map(lit).collect::<PyResult<Vec<_>>>()?;
        Ok(dpll_sat(&self.inner, &assumptions).map(|m| {
            (1..=self.inner.num_vars()).map(|v| Lit::new(v, m[v as usize]).to_dimacs()).collect()
        }))
    }

    fn __repr__(&self) -> String {
        format!("Formula(num_vars={}, num_clauses={})", self.inner.num_vars(), self.inner.num_clauses())
    }
}

/// Encodes `sum(lits) <= k` into `formula`; returns the output literals.
#[pyfunction]
#[pyo3(signature = (formula, lits, k, method = "oe4", lambda_ = 5.0, direct = true))]
fn encode_at_most(
    formula: &mut PyFormula,
    lits: Vec<i64>,
    k: usize,
    method: &str,
    lambda_: f64,
    direct: bool,
) -> PyResult<Vec<i32>> {
    let lits = lits.into_iter().map(lit).collect::<PyResult<Vec<_>>>()?;
    formula.inner.reserve_vars(lits.iter().filter_map(|l| l.var()).max().unwrap_or(0));
    let opts = options(method, lambda_, direct)?;
    let enc = encode_atmost(&mut formula.inner, &lits, k, &opts).map_err(value_err)?;
    Ok(enc.output_lits.iter().map(|l| l.to_dimacs()).collect())
}

/// Encodes a CNF+ instance.
#[pyfunction]
#[pyo3(signature = (text, method = "oe4", lambda_ = 5.0, direct = true))]
fn encode_cnfp_text(text: &str, method: &str, lambda_: f64, direct: bool) -> PyResult<PyFormula> {
    let p = parse_cnfp(text).map_err(value_err)?;
    encode_cnfp(&p, &options(method, lambda_, direct)?).map(|inner| PyFormula { inner }).map_err(value_err)
}

/// Encodes the constraints of an OPB instance.
#[pyfunction]
#[pyo3(signature = (text, method = "oe4", lambda_ = 5.0, direct = true))]
fn encode_opb_text(text: &str, method: &str, lambda_: f64, direct: bool) -> PyResult<PyFormula> {
    let p = parse_opb(text).map_err(value_err)?;
    Problem::Pb(p).encode(&options(method, lambda_, direct)?).map(|inner| PyFormula { inner }).map_err(value_err)
}

/// Minimizes an OPB objective with the built-in solver. Returns
/// `(status, best, {name: value})` with status `optimal`, `infeasible` or
/// `unknown`.
#[pyfunction]
#[pyo3(signature = (text, strategy = "bin", q = 3, switch_gap = 96, method = "oe4"))]
fn minimize_opb(
    text: &str,
    strategy: &str,
    q: i64,
    switch_gap: i64,
    method: &str,
) -> PyResult<(String, Option<i64>, BTreeMap<String, bool>)> {
    let p = parse_opb(text).map_err(value_err)?;
    let strategy = match strategy {
        "seq" => Strategy::Sequential,
        "bin" => Strategy::Binary,
        other => return Err(value_err(format!("unknown strategy `{other}`"))),
    };
    let cfg = MinimizeConfig { strategy, q, switch_gap, ..MinimizeConfig::default() };
    let out = minimize(&p, &options(method, 5.0, true)?, &cfg, &mut DpllBackend).map_err(value_err)?;
    let status = match out.status {
        MinimizeStatus::Optimal => "optimal",
        MinimizeStatus::Infeasible => "infeasible",
        MinimizeStatus::Unknown => "unknown",
    };
    let witness = out
        .witness
        .map(|m| {
            (1..=p.var_names.len() as Var)
                .map(|v| (p.var_names.name(v).unwrap_or("?").to_string(), m[v as usize]))
                .collect()
        })
        .unwrap_or_default();
    Ok((status.to_string(), out.best, witness))
}

/// Size of the encoding of one `(method, n, k)` cell as a dict; `None`
/// values mark unsupported cells or columns.
#[pyfunction]
#[pyo3(signature = (method, n, k, lambda_ = None))]
fn size_stats(method: &str, n: usize, k: usize, lambda_: Option<f64>) -> PyResult<BTreeMap<String, Option<usize>>> {
    let m: Method = method.parse().map_err(value_err)?;
    let r = stats_cell(m, n, k, lambda_);
    Ok(BTreeMap::from([
        ("vars".into(), r.vars),
        ("clauses".into(), r.clauses),
        ("gates2".into(), r.gates2),
        ("gates3".into(), r.gates3),
        ("gates4".into(), r.gates4),
        ("combines".into(), r.combines),
    ]))
}

/// Optimal mixed-radix base for the coefficients, as a radix list.
#[pyfunction]
fn optimal_base(coeffs: Vec<u64>) -> Vec<u64> {
    find_base(&coeffs).radices().to_vec()
}

/// Digits of `value` in the base with the given radices.
#[pyfunction]
fn digits(value: u64, radices: Vec<u64>) -> PyResult<Vec<u64>> {
    if radices.iter().any(|&r| r < 2) {
        return Err(value_err("radices must be at least 2"));
    }
    Ok(to_digits(value, &MixedRadixBase::new(radices)))
}

/// n-Queens as CNF+ text.
#[pyfunction]
fn queens_cnfp(n: usize) -> PyResult<String> {
    if n == 0 {
        return Err(value_err("board size must be at least 1"));
    }
    Ok(queens(n).to_text())
}

/// Runs a verification suite; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite = "all"))]
fn verify(py: Python<'_>, suite: &str) -> PyResult<(bool, String)> {
    let suite: Suite = suite.parse().map_err(value_err)?;
    let report = py.detach(|| run(suite, &VerifyConfig::default()));
    Ok((report.passed(), report.render()))
}

/// Names of the supported encoding methods.
#[pyfunction]
fn methods() -> Vec<&'static str> {
    Method::ALL.iter().map(|m| m.name()).collect()
}

#[pymodule]
fn pycardsel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_function(wrap_pyfunction!(encode_at_most, m)?)?;
    m.add_function(wrap_pyfunction!(encode_cnfp_text, m)?)?;
    m.add_function(wrap_pyfunction!(encode_opb_text, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_opb, m)?)?;
    m.add_function(wrap_pyfunction!(size_stats, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_base, m)?)?;
    m.add_function(wrap_pyfunction!(digits, m)?)?;
    m.add_function(wrap_pyfunction!(queens_cnfp, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    Ok(())
}
