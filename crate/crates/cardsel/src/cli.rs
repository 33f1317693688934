//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::card::{EncodeOptions, Method};
use crate::cnf::{parse_dimacs, Lit, Var};
use crate::cnfp::{encode_cnfp, parse_cnfp, queens, CnfpProblem};
use crate::ledger::formula_ledger;
use crate::pb::{parse_opb, PbProblem};
use crate::solve::{
    minimize, solve_decision, DpllBackend, ExternalSolver, MinimizeConfig, MinimizeStatus, Problem, SatBackend,
    SolveStatus, Strategy,
};
use crate::stats::{parse_grid, stats_report};
use crate::up::dpll_sat;
use crate::verify::{run, size_checks, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ENCODE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_VERIFY: i32 = 10;

#[derive(Parser, Debug)]
#[command(name = "cardsel", version, about = "Cardinality and pseudo-Boolean constraints to CNF via selection networks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct EncodeArgs {
    /// Encoder: oe4, oe2, pairwise, pairwise-bitonic, pairwise-half-bitonic,
    /// fourwise, bitonic, sequential, totalizer, binomial.
    #[arg(long, default_value = "oe4")]
    method: Method,
    /// Weight of variables against clauses in the direct-mixing rule.
    #[arg(long, default_value_t = 5.0)]
    lambda: f64,
    /// Disable direct mixing.
    #[arg(long)]
    no_direct: bool,
}

impl EncodeArgs {
    fn options(&self) -> EncodeOptions {
        EncodeOptions { method: self.method, lambda: self.lambda, direct_mixing: !self.no_direct }
    }
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Solver command; `{cnf}` is replaced by the DIMACS path (appended when
    /// absent). `builtin` uses the internal DPLL.
    #[arg(long)]
    solver: String,
    /// Per-call time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum StrategyArg {
    Seq,
    Bin,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Encode a CNF+ file (clauses plus cardinality lines) to DIMACS.
    Encode {
        input: PathBuf,
        #[command(flatten)]
        enc: EncodeArgs,
        /// Output file (stdout when omitted).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Encode the constraints of an OPB file to DIMACS.
    Pbencode {
        input: PathBuf,
        #[command(flatten)]
        enc: EncodeArgs,
        /// Output file (stdout when omitted).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Decide a CNF+, DIMACS or OPB instance.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        enc: EncodeArgs,
    },
    /// Minimize the objective of an OPB instance.
    Optimize {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        enc: EncodeArgs,
        #[arg(long, value_enum, default_value = "bin")]
        strategy: StrategyArg,
        /// Binary-search split parameter.
        #[arg(long, default_value_t = 3)]
        q: i64,
        /// Gap below which binary search switches to sequential steps.
        #[arg(long = "switch", default_value_t = 96)]
        switch_gap: i64,
    },
    /// Size statistics over a grid of (n, k) cells as CSV.
    Stats {
        /// Comma-separated methods, or `all`.
        #[arg(long)]
        methods: String,
        /// Grid such as `n=64..256,k=4..16`.
        #[arg(long)]
        grid: String,
        /// Output file (stdout when omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Enable direct mixing with this weight.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run verification suites.
    Verify {
        /// Suite: zero-one, ac, equisat, sizes or all.
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Generate demo instances.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Reference DPLL solver printing SAT-competition output.
    #[command(hide = true)]
    Dpll { input: PathBuf },
    /// Write the formula ledger.
    #[command(hide = true)]
    Ledger {
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// n-Queens as a CNF+ instance.
    Queens {
        n: usize,
        /// Output file (stdout when omitted).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| fail(EXIT_USAGE, format!("cannot write output: {e}"))),
    }
}

fn has_header(text: &str, header: &str) -> bool {
    text.lines().map(str::trim).any(|l| l.split_whitespace().take(2).eq(header.split_whitespace()))
}

/// Reads a CNF+ file, a plain DIMACS file or an OPB file, by content.
fn load_problem(path: &Path) -> Result<Problem, Failure> {
    let text = read(path)?;
    let parse_err = |e: String| fail(EXIT_PARSE, format!("{}: {e}", path.display()));
    if has_header(&text, "p cnf+") {
        return parse_cnfp(&text).map(Problem::Cnfp).map_err(|e| parse_err(e.to_string()));
    }
    if has_header(&text, "p cnf") {
        let f = parse_dimacs(&text).map_err(|e| parse_err(e.to_string()))?;
        let clauses = f.clauses().iter().map(|c| c.lits().to_vec()).collect();
        return Ok(Problem::Cnfp(CnfpProblem { num_vars: f.num_vars(), clauses, card_lines: Vec::new() }));
    }
    parse_opb(&text).map(Problem::Pb).map_err(|e| parse_err(e.to_string()))
}

fn backend(args: &SolverArgs) -> Result<Box<dyn SatBackend>, Failure> {
    if args.solver.trim() == "builtin" {
        return Ok(Box::new(DpllBackend));
    }
    let limit = match args.time_limit {
        Some(t) if t.is_finite() && t > 0.0 => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(fail(EXIT_USAGE, format!("time limit must be positive, got {t}"))),
        None => None,
    };
    Ok(Box::new(ExternalSolver::new(args.solver.clone(), limit)))
}

fn value_line(problem: &Problem, model: &[bool]) -> String {
    let mut s = String::from("v");
    for v in 1..=problem.num_vars() {
        let on = model[v as usize];
        match problem {
            Problem::Pb(p) => {
                let name = p.var_names.name(v).unwrap_or("?");
                s.push_str(&format!(" {}{name}", if on { "" } else { "-" }));
            }
            Problem::Cnfp(_) => s.push_str(&format!(" {}", Lit::new(v, on).to_dimacs())),
        }
    }
    if matches!(problem, Problem::Cnfp(_)) {
        s.push_str(" 0");
    }
    s
}

fn encode_options(enc: &EncodeArgs) -> Result<EncodeOptions, Failure> {
    if !(enc.lambda.is_finite() && enc.lambda > 0.0) {
        return Err(fail(EXIT_USAGE, format!("lambda must be positive, got {}", enc.lambda)));
    }
    Ok(enc.options())
}

fn pb_problem(problem: Problem, path: &Path) -> Result<PbProblem, Failure> {
    match problem {
        Problem::Pb(p) => Ok(p),
        Problem::Cnfp(_) => Err(fail(EXIT_PARSE, format!("{}: optimization needs an OPB file with `min:`", path.display()))),
    }
}

fn execute(cmd: Cmd, out: &mut dyn Write) -> Result<i32, Failure> {
    let w = |out: &mut dyn Write, s: String| {
        writeln!(out, "{s}").map_err(|e| fail(EXIT_USAGE, format!("cannot write output: {e}")))
    };
    match cmd {
        Cmd::Encode { input, enc, output } => {
            let opts = encode_options(&enc)?;
            let text = read(&input)?;
            let p = parse_cnfp(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", input.display())))?;
            let f = encode_cnfp(&p, &opts).map_err(|e| fail(EXIT_ENCODE, e.to_string()))?;
            emit(&output, &f.to_dimacs(), out)?;
        }
        Cmd::Pbencode { input, enc, output } => {
            let opts = encode_options(&enc)?;
            let text = read(&input)?;
            let p = parse_opb(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", input.display())))?;
            let f = Problem::Pb(p).encode(&opts).map_err(|e| fail(EXIT_ENCODE, e.to_string()))?;
            emit(&output, &f.to_dimacs(), out)?;
        }
        Cmd::Solve { input, solver, enc } => {
            let opts = encode_options(&enc)?;
            let problem = load_problem(&input)?;
            let mut b = backend(&solver)?;
            let res = solve_decision(&problem, &opts, b.as_mut()).map_err(|e| match e {
                crate::solve::SolveError::Encode(e) => fail(EXIT_ENCODE, e.to_string()),
                e => fail(EXIT_SOLVER, e.to_string()),
            })?;
            match res.status {
                SolveStatus::Sat => {
                    w(out, "s SATISFIABLE".into())?;
                    w(out, value_line(&problem, res.model.as_deref().expect("SAT carries a model")))?;
                }
                SolveStatus::Unsat => w(out, "s UNSATISFIABLE".into())?,
                SolveStatus::Unknown => {
                    w(out, "s UNKNOWN".into())?;
                    let why = res.diagnostic.unwrap_or_else(|| "no answer".into());
                    return Err(fail(EXIT_SOLVER, format!("solver gave no answer: {why}")));
                }
            }
        }
        Cmd::Optimize { input, solver, enc, strategy, q, switch_gap } => {
            let opts = encode_options(&enc)?;
            let problem = pb_problem(load_problem(&input)?, &input)?;
            if problem.objective.is_none() {
                return Err(fail(EXIT_PARSE, format!("{}: no `min:` objective", input.display())));
            }
            let strategy = match strategy {
                StrategyArg::Seq => Strategy::Sequential,
                StrategyArg::Bin => Strategy::Binary,
            };
            let cfg = MinimizeConfig { strategy, q, switch_gap, ..MinimizeConfig::default() };
            let mut b = backend(&solver)?;
            let res = minimize(&problem, &opts, &cfg, b.as_mut()).map_err(|e| match e {
                crate::solve::SolveError::Encode(e) => fail(EXIT_ENCODE, e.to_string()),
                crate::solve::SolveError::Config(m) => fail(EXIT_USAGE, m),
                e => fail(EXIT_SOLVER, e.to_string()),
            })?;
            for v in &res.incumbents {
                w(out, format!("o {v}"))?;
            }
            let wrapped = Problem::Pb(problem);
            match res.status {
                MinimizeStatus::Optimal => {
                    w(out, "s OPTIMUM FOUND".into())?;
                    w(out, value_line(&wrapped, res.witness.as_deref().expect("optimum has a witness")))?;
                }
                MinimizeStatus::Infeasible => w(out, "s UNSATISFIABLE".into())?,
                MinimizeStatus::Unknown => {
                    w(out, "s UNKNOWN".into())?;
                    if let Some(m) = res.witness.as_deref() {
                        w(out, value_line(&wrapped, m))?;
                    }
                    return Err(fail(EXIT_SOLVER, "solver gave no answer before optimality was proven"));
                }
            }
        }
        Cmd::Stats { methods, grid, csv, lambda } => {
            let methods: Vec<Method> = if methods.trim() == "all" {
                Method::ALL.to_vec()
            } else {
                methods.split(',').map(str::parse).collect::<Result<_, String>>().map_err(|e| fail(EXIT_USAGE, e))?
            };
            if lambda.is_some_and(|l| !(l.is_finite() && l > 0.0)) {
                return Err(fail(EXIT_USAGE, "lambda must be positive"));
            }
            let grid = parse_grid(&grid).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            let text = stats_report(&methods, &grid, lambda).map_err(|e| fail(EXIT_ENCODE, e.to_string()))?;
            emit(&csv, &text, out)?;
        }
        Cmd::Verify { suite } => {
            let report = run(suite, &VerifyConfig::default());
            out.write_all(report.render().as_bytes()).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            if !report.passed() {
                let failed = report.checks.iter().filter(|c| !c.passed()).count();
                return Err(fail(EXIT_VERIFY, format!("{failed} verification check(s) failed")));
            }
        }
        Cmd::Demo { which: Demo::Queens { n, output } } => {
            if n == 0 {
                return Err(fail(EXIT_USAGE, "board size must be at least 1"));
            }
            emit(&output, &queens(n).to_text(), out)?;
        }
        Cmd::Dpll { input } => {
            let text = read(&input)?;
            let f = parse_dimacs(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", input.display())))?;
            match dpll_sat(&f, &[]) {
                Some(model) => {
                    w(out, "s SATISFIABLE".into())?;
                    let vals: Vec<String> =
                        (1..=f.num_vars()).map(|v: Var| Lit::new(v, model[v as usize]).to_dimacs().to_string()).collect();
                    w(out, format!("v {} 0", vals.join(" ")))?;
                }
                None => w(out, "s UNSATISFIABLE".into())?,
            }
        }
        Cmd::Ledger { output } => emit(&output, &formula_ledger(&size_checks()), out)?,
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Errors are reported on `err` as one line starting with `error:`.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid usage");
                    let line = if first.starts_with("error:") { first.to_string() } else { format!("error: {first}") };
                    let _ = writeln!(err, "{line}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.cmd, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg.lines().next().unwrap_or(""));
            f.code
        }
    }
}

/// [`run_cli_with`] on the process's standard streams.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_cli_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["cardsel"];
        argv.extend_from_slice(args);
        let code = run_cli_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error:") && err.lines().count() == 1);
        let (code, _, _) = run_args(&["stats", "--methods", "nope", "--grid", "n=4,k=2"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_parse_error() {
        let (code, _, err) = run_args(&["encode", "/nonexistent/x.cnfp"]);
        assert_eq!(code, EXIT_PARSE);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn demo_to_stdout() {
        let (code, out, _) = run_args(&["demo", "queens", "4"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("p cnf+ 16 "));
    }
}
