//! SAT solver drivers, decision solving and objective minimization.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::card::{encode_atmost, EncodeError, EncodeOptions, EncodedConstraint};
use crate::cnf::{CnfFormula, Lit, Var};
use crate::cnfp::{encode_cnfp, CnfpProblem};
use crate::pb::encode::{encode_goal_bound, encode_pb_constraint};
use crate::pb::PbProblem;
use crate::up::dpll_sat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub wall_time: Duration,
    pub exit_code: Option<i32>,
}

/// Outcome of one solver call. A `Sat` model is indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverResult {
    pub status: SolveStatus,
    pub model: Option<Vec<bool>>,
    pub stats: SolverStats,
    pub diagnostic: Option<String>,
}

impl SolverResult {
    fn unknown(stats: SolverStats, why: impl Into<String>) -> SolverResult {
        SolverResult { status: SolveStatus::Unknown, model: None, stats, diagnostic: Some(why.into()) }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("cannot run solver `{cmd}`: {source}")]
    Spawn { cmd: String, source: std::io::Error },
    #[error("empty solver command")]
    EmptyCommand,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("problem has no objective")]
    NoObjective,
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A SAT oracle over a formula plus extra unit clauses.
pub trait SatBackend {
    fn solve(&mut self, formula: &CnfFormula, units: &[Lit]) -> Result<SolverResult, SolveError>;
}

/// Built-in DPLL; intended for small formulas.
#[derive(Clone, Copy, Debug, Default)]
pub struct DpllBackend;

impl SatBackend for DpllBackend {
    fn solve(&mut self, formula: &CnfFormula, units: &[Lit]) -> Result<SolverResult, SolveError> {
        let start = Instant::now();
        let model = dpll_sat(formula, units);
        let stats = SolverStats { wall_time: start.elapsed(), exit_code: None };
        Ok(SolverResult {
            status: if model.is_some() { SolveStatus::Sat } else { SolveStatus::Unsat },
            model,
            stats,
            diagnostic: None,
        })
    }
}

/// External solver invoked as `template` with `{cnf}` replaced by the path
/// of a temporary DIMACS file (appended when the placeholder is absent).
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub template: String,
    pub time_limit: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(template: impl Into<String>, time_limit: Option<Duration>) -> ExternalSolver {
        ExternalSolver { template: template.into(), time_limit }
    }
}

impl SatBackend for ExternalSolver {
    fn solve(&mut self, formula: &CnfFormula, units: &[Lit]) -> Result<SolverResult, SolveError> {
        run_external_solver(formula, units, &self.template, self.time_limit)
    }
}

/// DIMACS text of `formula` with `units` appended as unit clauses.
pub fn dimacs_with_units(formula: &CnfFormula, units: &[Lit]) -> String {
    let mut f = formula.clone();
    for &u in units {
        if let Some(v) = u.var() {
            f.reserve_vars(v);
        }
        let prev = f.set_guard(None);
        f.add_clause(&[u]);
        f.set_guard(prev);
    }
    f.to_dimacs()
}

/// Parses SAT-competition output: the status line and `v` value lines.
pub fn parse_solver_output(text: &str, num_vars: Var) -> (SolveStatus, Option<Vec<bool>>) {
    let mut status = SolveStatus::Unknown;
    let mut model = vec![false; num_vars as usize + 1];
    let mut saw_values = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => SolveStatus::Sat,
                "UNSATISFIABLE" => SolveStatus::Unsat,
                _ => SolveStatus::Unknown,
            };
        } else if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for tok in rest.split_whitespace() {
                let Ok(v) = tok.parse::<i64>() else { continue };
                let var = v.unsigned_abs() as usize;
                if v != 0 && var <= num_vars as usize {
                    model[var] = v > 0;
                    saw_values = true;
                }
            }
        }
    }
    let model = (status == SolveStatus::Sat && (saw_values || num_vars == 0)).then_some(model);
    (status, model)
}

fn split_command(template: &str, path: &str) -> Vec<String> {
    let mut args: Vec<String> = template.split_whitespace().map(|t| t.replace("{cnf}", path)).collect();
    if !template.contains("{cnf}") {
        args.push(path.to_string());
    }
    args
}

/// Writes the formula to a temporary file, runs the solver, parses and
/// revalidates its answer. Timeouts and unparseable output give `Unknown`.
pub fn run_external_solver(
    formula: &CnfFormula,
    units: &[Lit],
    template: &str,
    time_limit: Option<Duration>,
) -> Result<SolverResult, SolveError> {
    let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    file.write_all(dimacs_with_units(formula, units).as_bytes())?;
    file.flush()?;
    let path = file.path().to_string_lossy().into_owned();
    let args = split_command(template, &path);
    let (prog, rest) = args.split_first().ok_or(SolveError::EmptyCommand)?;
    let start = Instant::now();
    let mut child = Command::new(prog)
        .args(rest)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SolveError::Spawn { cmd: template.to_string(), source })?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let mut timed_out = false;
    let exit = loop {
        if let Some(status) = child.try_wait()? {
            break Some(status);
        }
        if time_limit.is_some_and(|t| start.elapsed() > t) {
            let _ = child.kill();
            let _ = child.wait();
            timed_out = true;
            break None;
        }
        thread::sleep(Duration::from_millis(5));
    };
    let output = reader.join().unwrap_or_default();
    let stats = SolverStats { wall_time: start.elapsed(), exit_code: exit.and_then(|s| s.code()) };
    if timed_out {
        return Ok(SolverResult::unknown(stats, "time limit reached"));
    }
    let (status, model) = parse_solver_output(&output, formula.num_vars());
    match status {
        SolveStatus::Unknown => Ok(SolverResult::unknown(stats, "no status line in solver output")),
        SolveStatus::Unsat => Ok(SolverResult { status, model: None, stats, diagnostic: None }),
        SolveStatus::Sat => {
            let Some(model) = model else {
                return Ok(SolverResult::unknown(stats, "SAT answer without value lines"));
            };
            if let Some(why) = validate(formula, units, &model) {
                return Ok(SolverResult::unknown(stats, why));
            }
            Ok(SolverResult { status, model: Some(model), stats, diagnostic: None })
        }
    }
}

fn validate(formula: &CnfFormula, units: &[Lit], model: &[bool]) -> Option<String> {
    if let Some(i) = formula.clauses().iter().position(|c| !c.eval(model)) {
        return Some(format!("model falsifies clause {}", i + 1));
    }
    if let Some(u) = units.iter().find(|u| !u.eval(model)) {
        return Some(format!("model falsifies unit {u}"));
    }
    None
}

/// A decision or optimization instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    Cnfp(CnfpProblem),
    Pb(PbProblem),
}

impl Problem {
    pub fn num_vars(&self) -> Var {
        match self {
            Problem::Cnfp(p) => p.num_vars,
            Problem::Pb(p) => p.var_names.len() as Var,
        }
    }

    /// Arithmetic check of all original constraints.
    pub fn holds(&self, model: &[bool]) -> bool {
        match self {
            Problem::Cnfp(p) => p.holds(model),
            Problem::Pb(p) => p.constraints.iter().all(|c| c.holds(model)),
        }
    }

    /// Encodes every constraint into one formula; the problem variables
    /// come first.
    pub fn encode(&self, opts: &EncodeOptions) -> Result<CnfFormula, EncodeError> {
        match self {
            Problem::Cnfp(p) => encode_cnfp(p, opts),
            Problem::Pb(p) => {
                let mut f = CnfFormula::with_vars(p.var_names.len() as Var);
                for c in &p.constraints {
                    encode_pb_constraint(&mut f, c, opts)?;
                }
                Ok(f)
            }
        }
    }
}

/// Solves the constraints (any objective is ignored) and checks a SAT
/// model against them.
pub fn solve_decision(
    problem: &Problem,
    opts: &EncodeOptions,
    backend: &mut dyn SatBackend,
) -> Result<SolverResult, SolveError> {
    let formula = problem.encode(opts)?;
    let mut res = backend.solve(&formula, &[])?;
    if res.status == SolveStatus::Sat {
        let model = res.model.as_ref().expect("SAT result carries a model");
        if !problem.holds(model) {
            return Ok(SolverResult::unknown(res.stats, "model violates the original constraints"));
        }
        res.model = Some(model[..=problem.num_vars() as usize].to_vec());
    }
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Binary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeConfig {
    pub strategy: Strategy,
    pub q: i64,
    pub switch_gap: i64,
    pub solver_cmd: Option<String>,
    pub time_limit: Option<Duration>,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        MinimizeConfig { strategy: Strategy::Binary, q: 3, switch_gap: 96, solver_cmd: None, time_limit: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimizeStatus {
    Optimal,
    Infeasible,
    /// A solver call gave no answer; bounds so far are reported.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizeOutcome {
    pub status: MinimizeStatus,
    /// Best objective value found.
    pub best: Option<i64>,
    /// Model of the best value over the problem variables.
    pub witness: Option<Vec<bool>>,
    /// Proven lower bound.
    pub lower: i64,
    /// Objective values of successive SAT answers.
    pub incumbents: Vec<i64>,
    pub calls: usize,
}

/// Binary-search bound `max(l + 1, ⌊(k(q−1) + l)/q⌋)`.
pub fn next_binary_bound(k: i64, l: i64, q: i64) -> i64 {
    (l + 1).max((k * (q - 1) + l).div_euclid(q))
}

fn objective_value(objective: &[(i64, Lit)], model: &[bool]) -> i64 {
    objective.iter().filter(|(_, l)| l.eval(model)).map(|&(a, _)| a).sum()
}

/// Unit-coefficient objective as `offset + Σ lits`.
fn unit_objective(objective: &[(i64, Lit)]) -> Option<(i64, Vec<Lit>)> {
    let mut offset = 0;
    let mut lits = Vec::new();
    for &(a, l) in objective {
        match a {
            1 => lits.push(l),
            -1 => {
                offset -= 1;
                lits.push(!l);
            }
            0 => {}
            _ => return None,
        }
    }
    Some((offset, lits))
}

/// Minimizes the objective of a PB problem. Binary steps assert a guarded
/// bound `f < mid` that is made permanent on SAT and disabled on UNSAT;
/// once the gap falls below `switch_gap` the search is sequential. For
/// unit-coefficient objectives the sequential phase strengthens a single
/// selection network with unit clauses.
pub fn minimize(
    problem: &PbProblem,
    opts: &EncodeOptions,
    cfg: &MinimizeConfig,
    backend: &mut dyn SatBackend,
) -> Result<MinimizeOutcome, SolveError> {
    if cfg.q < 2 || cfg.switch_gap < 1 {
        return Err(SolveError::Config("q must be at least 2 and switch gap at least 1".into()));
    }
    let objective = problem.objective.clone().ok_or(SolveError::NoObjective)?;
    let nv = problem.var_names.len();
    let wrapped = Problem::Pb(problem.clone());
    let mut formula = wrapped.encode(opts)?;
    let mut out = MinimizeOutcome {
        status: MinimizeStatus::Unknown,
        best: None,
        witness: None,
        lower: objective.iter().filter(|(a, _)| *a < 0).map(|&(a, _)| a).sum(),
        incumbents: Vec::new(),
        calls: 0,
    };
    let mut strengthen: Option<EncodedConstraint> = None;
    let mut units: Vec<Lit> = Vec::new();

    let accept = |res: &SolverResult, out: &mut MinimizeOutcome| -> Option<i64> {
        let model = res.model.as_ref()?;
        if !wrapped.holds(model) {
            return None;
        }
        let value = objective_value(&objective, model);
        out.best = Some(value);
        out.witness = Some(model[..=nv].to_vec());
        out.incumbents.push(value);
        Some(value)
    };

    out.calls += 1;
    let res = backend.solve(&formula, &units)?;
    match res.status {
        SolveStatus::Unsat => {
            out.status = MinimizeStatus::Infeasible;
            return Ok(out);
        }
        SolveStatus::Unknown => return Ok(out),
        SolveStatus::Sat => {}
    }
    let Some(mut k) = accept(&res, &mut out) else { return Ok(out) };

    loop {
        if k <= out.lower {
            out.status = MinimizeStatus::Optimal;
            return Ok(out);
        }
        if cfg.strategy == Strategy::Binary && k - out.lower >= cfg.switch_gap {
            let mid = next_binary_bound(k, out.lower, cfg.q);
            let flag = formula.fresh_lit();
            encode_goal_bound(&mut formula, &objective, mid, Some(flag), opts)?;
            out.calls += 1;
            let mut assumed = units.clone();
            assumed.push(flag);
            let res = backend.solve(&formula, &assumed)?;
            match res.status {
                SolveStatus::Sat => {
                    formula.add_clause(&[flag]);
                    let Some(v) = accept(&res, &mut out) else { return Ok(out) };
                    k = v;
                }
                SolveStatus::Unsat => {
                    formula.add_clause(&[!flag]);
                    out.lower = mid;
                }
                SolveStatus::Unknown => return Ok(out),
            }
            continue;
        }
        // Sequential step: require f ≤ k − 1.
        let mut strengthened = false;
        if let Some((offset, lits)) = unit_objective(&objective).filter(|(_, l)| !l.is_empty()) {
            let bound = (k - 1 - offset) as usize;
            match &strengthen {
                None => {
                    strengthen = Some(encode_atmost(&mut formula, &lits, bound, opts)?);
                    strengthened = true;
                }
                Some(enc) if bound < enc.output_lits.len() => {
                    units.push(!enc.output_lits[bound]);
                    strengthened = true;
                }
                Some(_) => {}
            }
        }
        if !strengthened {
            encode_goal_bound(&mut formula, &objective, k, None, opts)?;
        }
        out.calls += 1;
        let res = backend.solve(&formula, &units)?;
        match res.status {
            SolveStatus::Sat => {
                let Some(v) = accept(&res, &mut out) else { return Ok(out) };
                k = v;
            }
            SolveStatus::Unsat => {
                out.lower = k;
                out.status = MinimizeStatus::Optimal;
                return Ok(out);
            }
            SolveStatus::Unknown => return Ok(out),
        }
    }
}
