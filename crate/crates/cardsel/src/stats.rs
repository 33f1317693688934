//! Size statistics over a grid of `(method, n, k)` cells, as CSV.

use std::thread;

use thiserror::Error;

use crate::card::{encode_atmost, EncodeOptions, Method};
use crate::cnf::{CnfFormula, Lit, Var};
use crate::net::build::selection_network;

pub const CSV_HEADER: [&str; 9] = ["method", "n", "k", "vars", "clauses", "gates2", "gates3", "gates4", "combines"];

/// Largest order accepted in a grid.
const MAX_ORDER: usize = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("bad grid `{spec}`: {msg}")]
    Grid { spec: String, msg: String },
    #[error("csv: {0}")]
    Csv(String),
}

/// Values of `n` and `k`; cells are their cartesian product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
}

impl Grid {
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.ns.iter().flat_map(|&n| self.ks.iter().map(move |&k| (n, k))).collect()
    }
}

fn parse_items(spec: &str, items: &str) -> Result<Vec<usize>, StatsError> {
    let err = |msg: String| StatsError::Grid { spec: spec.to_string(), msg };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| err(format!("`{s}` is not a non-negative integer")));
    let mut out = Vec::new();
    for item in items.split(';').filter(|s| !s.trim().is_empty()) {
        let Some((a, rest)) = item.split_once("..") else {
            out.push(num(item)?);
            continue;
        };
        let (b, step) = match rest.split_once('/') {
            Some((b, step)) => (b, Some(step.trim())),
            None => (rest, None),
        };
        let (a, b) = (num(a)?, num(b)?);
        if a > b || b > MAX_ORDER {
            return Err(err(format!("range {a}..{b} is empty or exceeds {MAX_ORDER}")));
        }
        let mut v = a;
        match step {
            None | Some("x2") => {
                if a == 0 {
                    return Err(err("a geometric range cannot start at 0".into()));
                }
                while v <= b {
                    out.push(v);
                    v *= 2;
                }
            }
            Some(s) => {
                let (geometric, factor) = if let Some(f) = s.strip_prefix('x') {
                    (true, num(f)?)
                } else if let Some(d) = s.strip_prefix('+') {
                    (false, num(d)?)
                } else {
                    return Err(err(format!("step `{s}` must be `xF` or `+D`")));
                };
                if (geometric && (factor < 2 || a == 0)) || (!geometric && factor == 0) {
                    return Err(err(format!("step `{s}` does not advance")));
                }
                while v <= b {
                    out.push(v);
                    v = if geometric { v * factor } else { v + factor };
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(err("no values".into()));
    }
    Ok(out)
}

/// Parses `n=<items>,k=<items>`. Items are separated by `;`; each is a
/// value `A` or a range `A..B` that doubles by default, `A..B/xF`
/// multiplies by `F` and `A..B/+D` adds `D`.
pub fn parse_grid(spec: &str) -> Result<Grid, StatsError> {
    let err = |msg: &str| StatsError::Grid { spec: spec.to_string(), msg: msg.to_string() };
    let mut ns = None;
    let mut ks = None;
    for part in spec.split(',') {
        let (name, items) = part.split_once('=').ok_or_else(|| err("expected `n=…,k=…`"))?;
        let slot = match name.trim() {
            "n" => &mut ns,
            "k" => &mut ks,
            other => return Err(err(&format!("unknown axis `{other}`"))),
        };
        if slot.is_some() {
            return Err(err("axis given twice"));
        }
        *slot = Some(parse_items(spec, items)?);
    }
    Ok(Grid { ns: ns.ok_or_else(|| err("missing `n=`"))?, ks: ks.ok_or_else(|| err("missing `k=`"))? })
}

/// One CSV row; `None` fields print as `NA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsRow {
    pub method: Method,
    pub n: usize,
    pub k: usize,
    pub vars: Option<usize>,
    pub clauses: Option<usize>,
    pub gates2: Option<usize>,
    pub gates3: Option<usize>,
    pub gates4: Option<usize>,
    pub combines: Option<usize>,
}

/// Network methods report the standard encoding of the selection network
/// of order `(n, k)`; baselines report their full `≤ k − 1` encoding.
/// `lambda` enables direct mixing. Unsupported cells are all `None`.
pub fn stats_cell(method: Method, n: usize, k: usize, lambda: Option<f64>) -> StatsRow {
    let mut row = StatsRow {
        method,
        n,
        k,
        vars: None,
        clauses: None,
        gates2: None,
        gates3: None,
        gates4: None,
        combines: None,
    };
    if n == 0 || k == 0 || k > n {
        return row;
    }
    match method {
        Method::Network(sel) => {
            let Ok(net) = selection_network(sel, n, k, lambda) else { return row };
            let (v, c) = net.cnf_cost();
            let h = net.gate_histogram();
            row.vars = Some(v);
            row.clauses = Some(c);
            row.gates2 = Some(h.of_order(2));
            row.gates3 = Some(h.of_order(3));
            row.gates4 = Some(h.of_order(4));
            row.combines = Some(h.combines);
        }
        _ => {
            let mut f = CnfFormula::with_vars(n as Var);
            let lits: Vec<Lit> = (1..=n as Var).map(Lit::pos).collect();
            if encode_atmost(&mut f, &lits, k - 1, &EncodeOptions::with_method(method)).is_ok() {
                row.vars = Some(f.num_vars() as usize - n);
                row.clauses = Some(f.num_clauses());
            }
        }
    }
    row
}

/// All rows, method-major then in grid order. Cells are computed on worker
/// threads; the result does not depend on scheduling.
pub fn stats_rows(methods: &[Method], grid: &Grid, lambda: Option<f64>) -> Vec<StatsRow> {
    let jobs: Vec<(Method, usize, usize)> =
        methods.iter().flat_map(|&m| grid.cells().into_iter().map(move |(n, k)| (m, n, k))).collect();
    let workers = thread::available_parallelism().map_or(1, |p| p.get()).min(jobs.len().max(1));
    let chunk = jobs.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&(m, n, k)| stats_cell(m, n, k, lambda)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("stats worker panicked")).collect()
    })
}

/// CSV text with header `method,n,k,vars,clauses,gates2,gates3,gates4,combines`.
pub fn stats_report(methods: &[Method], grid: &Grid, lambda: Option<f64>) -> Result<String, StatsError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| StatsError::Csv(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let na = |v: Option<usize>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
    for r in stats_rows(methods, grid, lambda) {
        w.write_record([
            r.method.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            na(r.vars),
            na(r.clauses),
            na(r.gates2),
            na(r.gates3),
            na(r.gates4),
            na(r.combines),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| StatsError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
