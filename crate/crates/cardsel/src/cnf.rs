//! Variables, literals, clauses and CNF formula assembly with DIMACS output.

use std::fmt;
use std::io::{self, Write};
use std::ops::Not;

use thiserror::Error;

/// Positive variable index; 0 is never used.
pub type Var = u32;

const CONST_CODE: i32 = i32::MAX;

/// A literal over a variable, or one of the two constants.
///
/// Encoded as a signed integer so that negation is arithmetic negation for
/// both variables and constants (`TRUE == !FALSE`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub const TRUE: Lit = Lit(CONST_CODE);
    pub const FALSE: Lit = Lit(-CONST_CODE);

    /// Literal of `var` with the given polarity.
    pub fn new(var: Var, positive: bool) -> Lit {
        assert!(var >= 1 && (var as i64) < CONST_CODE as i64, "variable index out of range");
        if positive {
            Lit(var as i32)
        } else {
            Lit(-(var as i32))
        }
    }

    pub fn pos(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn neg(var: Var) -> Lit {
        Lit::new(var, false)
    }

    pub fn constant(value: bool) -> Lit {
        if value {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }

    /// Parses a signed DIMACS integer; 0 is rejected.
    pub fn from_dimacs(code: i64) -> Option<Lit> {
        if code == 0 || code.unsigned_abs() >= CONST_CODE as u64 {
            None
        } else {
            Some(Lit(code as i32))
        }
    }

    /// Signed DIMACS integer. Panics on constants.
    pub fn to_dimacs(self) -> i32 {
        assert!(!self.is_const(), "constants have no DIMACS form");
        self.0
    }

    pub fn is_const(self) -> bool {
        self.0 == CONST_CODE || self.0 == -CONST_CODE
    }

    pub fn const_value(self) -> Option<bool> {
        match self.0 {
            CONST_CODE => Some(true),
            x if x == -CONST_CODE => Some(false),
            _ => None,
        }
    }

    /// Underlying variable, `None` for constants.
    pub fn var(self) -> Option<Var> {
        if self.is_const() {
            None
        } else {
            Some(self.0.unsigned_abs())
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Dense index `2*var + sign` for occurrence tables. Panics on constants.
    pub fn code(self) -> usize {
        let v = self.var().expect("constant literal has no code") as usize;
        2 * v + usize::from(self.0 < 0)
    }

    /// Value under a total model indexed by variable.
    pub fn eval(self, model: &[bool]) -> bool {
        match self.const_value() {
            Some(b) => b,
            None => model[self.var().unwrap() as usize] == self.is_positive(),
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.const_value() {
            Some(true) => write!(f, "T"),
            Some(false) => write!(f, "F"),
            None => write!(f, "{}", self.0),
        }
    }
}

/// A simplified clause: no constants, no duplicates, not tautological.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Simplifies raw literals; `None` when the clause is satisfied outright.
    pub fn simplify(lits: &[Lit]) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match l.const_value() {
                Some(true) => return None,
                Some(false) => continue,
                None => {
                    if out.contains(&!l) {
                        return None;
                    }
                    if !out.contains(&l) {
                        out.push(l);
                    }
                }
            }
        }
        Some(Clause(out))
    }

    pub fn eval(&self, model: &[bool]) -> bool {
        self.0.iter().any(|l| l.eval(model))
    }
}

/// A CNF formula under construction.
#[derive(Clone, Debug)]
pub struct CnfFormula {
    next_var: Var,
    clauses: Vec<Clause>,
    trivially_unsat: bool,
    guard: Option<Lit>,
}

impl Default for CnfFormula {
    fn default() -> Self {
        CnfFormula::new()
    }
}

impl CnfFormula {
    pub fn new() -> CnfFormula {
        CnfFormula { next_var: 1, clauses: Vec::new(), trivially_unsat: false, guard: None }
    }

    /// Formula whose variables `1..=num_vars` are already reserved.
    pub fn with_vars(num_vars: Var) -> CnfFormula {
        CnfFormula { next_var: num_vars + 1, ..CnfFormula::new() }
    }

    pub fn next_var(&self) -> Var {
        self.next_var
    }

    pub fn num_vars(&self) -> Var {
        self.next_var - 1
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_trivially_unsat(&self) -> bool {
        self.trivially_unsat
    }

    pub fn fresh_var(&mut self) -> Var {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    pub fn fresh_lit(&mut self) -> Lit {
        Lit::pos(self.fresh_var())
    }

    /// Reserves variables up to `var` inclusive.
    pub fn reserve_vars(&mut self, var: Var) {
        if var >= self.next_var {
            self.next_var = var + 1;
        }
    }

    /// Sets a guard literal `g`: every later clause gets `¬g` disjoined.
    /// Returns the previous guard.
    pub fn set_guard(&mut self, guard: Option<Lit>) -> Option<Lit> {
        std::mem::replace(&mut self.guard, guard)
    }

    pub fn guard(&self) -> Option<Lit> {
        self.guard
    }

    /// Adds a clause after constant simplification.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        let simplified = match self.guard {
            Some(g) => {
                let mut v = lits.to_vec();
                v.push(!g);
                Clause::simplify(&v)
            }
            None => Clause::simplify(lits),
        };
        if let Some(c) = simplified {
            for l in c.lits() {
                debug_assert!(l.var().unwrap() < self.next_var, "clause uses unallocated variable");
            }
            if c.is_empty() {
                self.trivially_unsat = true;
            }
            self.clauses.push(c);
        }
    }

    /// Evaluates the formula under a total model indexed by variable.
    pub fn eval(&self, model: &[bool]) -> bool {
        !self.trivially_unsat && self.clauses.iter().all(|c| c.eval(model))
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        if self.trivially_unsat {
            return write!(out, "p cnf {} 2\n1 0\n-1 0\n", self.num_vars().max(1));
        }
        writeln!(out, "p cnf {} {}", self.num_vars(), self.clauses.len())?;
        let mut line = String::new();
        for c in &self.clauses {
            line.clear();
            for l in c.lits() {
                line.push_str(&l.to_dimacs().to_string());
                line.push(' ');
            }
            line.push('0');
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// DIMACS parse failure with its 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct DimacsError {
    pub line: usize,
    pub msg: String,
}

/// Parses DIMACS CNF text. Clauses are added through [`CnfFormula::add_clause`].
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut formula: Option<CnfFormula> = None;
    let mut pending: Vec<Lit> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let err = |msg: String| DimacsError { line: line_no, msg };
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err("expected `p cnf <vars> <clauses>`".into()));
            }
            let vars: Var = parts[2].parse().map_err(|_| err("bad variable count".into()))?;
            parts[3].parse::<usize>().map_err(|_| err("bad clause count".into()))?;
            formula = Some(CnfFormula::with_vars(vars));
            continue;
        }
        let f = formula.as_mut().ok_or_else(|| err("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
            if v == 0 {
                f.add_clause(&pending);
                pending.clear();
            } else {
                let lit = Lit::from_dimacs(v).ok_or_else(|| err(format!("bad literal `{tok}`")))?;
                f.reserve_vars(lit.var().unwrap());
                pending.push(lit);
            }
        }
    }
    let mut f = formula.ok_or(DimacsError { line: 0, msg: "missing header".into() })?;
    if !pending.is_empty() {
        f.add_clause(&pending);
    }
    Ok(f)
}
