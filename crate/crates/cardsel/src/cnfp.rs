//! CNF with cardinality lines (`p cnf+`) and the n-Queens demo generator.

use std::fmt::Write as _;

use thiserror::Error;

use crate::card::{encode_card, CardConstraint, EncodeError, EncodeOptions, Relation};
use crate::cnf::{CnfFormula, Lit, Var};

/// Clauses plus cardinality constraints over variables `1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfpProblem {
    pub num_vars: Var,
    pub clauses: Vec<Vec<Lit>>,
    pub card_lines: Vec<CardConstraint>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct CnfpError {
    pub line: usize,
    pub msg: String,
}

impl CnfpProblem {
    /// Arithmetic check of every clause and cardinality line.
    pub fn holds(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(model))) && self.card_lines.iter().all(|c| c.holds(model))
    }

    /// Writes the problem back in `p cnf+` syntax.
    pub fn to_text(&self) -> String {
        let mut s = format!("p cnf+ {} {}\n", self.num_vars, self.clauses.len() + self.card_lines.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{} ", l.to_dimacs()).unwrap();
            }
            s.push_str("0\n");
        }
        for c in &self.card_lines {
            for l in &c.lits {
                write!(s, "{} ", l.to_dimacs()).unwrap();
            }
            writeln!(s, "{} {}", c.rel, c.k).unwrap();
        }
        s
    }
}

/// Parses `p cnf+ <vars> <lines>` followed by clause lines ending in `0`
/// and cardinality lines ending in `<= k` or `>= k`. Lines starting with
/// `c` are comments.
pub fn parse_cnfp(text: &str) -> Result<CnfpProblem, CnfpError> {
    let mut problem: Option<(CnfpProblem, usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        let err = |msg: String| CnfpError { line: line_no, msg };
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "p" {
            if problem.is_some() {
                return Err(err("duplicate header".into()));
            }
            if toks.len() != 4 || toks[1] != "cnf+" {
                return Err(err("expected `p cnf+ <vars> <lines>`".into()));
            }
            let vars: Var = toks[2].parse().map_err(|_| err(format!("bad variable count `{}`", toks[2])))?;
            let lines: usize = toks[3].parse().map_err(|_| err(format!("bad line count `{}`", toks[3])))?;
            problem = Some((CnfpProblem { num_vars: vars, ..CnfpProblem::default() }, lines, line_no));
            continue;
        }
        let (p, _, _) = problem.as_mut().ok_or_else(|| err("content before `p cnf+` header".into()))?;
        let lit = |tok: &str| -> Result<Lit, CnfpError> {
            let v: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
            if v == 0 || v.unsigned_abs() > p.num_vars as u64 {
                return Err(err(format!("literal {v} out of range 1..={}", p.num_vars)));
            }
            Ok(Lit::from_dimacs(v).unwrap())
        };
        let n = toks.len();
        if toks[n - 1] == "0" {
            let lits = toks[..n - 1].iter().map(|t| lit(t)).collect::<Result<Vec<_>, _>>()?;
            p.clauses.push(lits);
        } else if n >= 2 && (toks[n - 2] == "<=" || toks[n - 2] == ">=") {
            let rel = if toks[n - 2] == "<=" { Relation::Le } else { Relation::Ge };
            let k: i64 = toks[n - 1].parse().map_err(|_| err(format!("bad bound `{}`", toks[n - 1])))?;
            let lits = toks[..n - 2].iter().map(|t| lit(t)).collect::<Result<Vec<_>, _>>()?;
            p.card_lines.push(CardConstraint { lits, rel, k });
        } else {
            return Err(err("line must end with `0`, `<= k` or `>= k`".into()));
        }
    }
    let (p, lines, header) = problem.ok_or(CnfpError { line: 1, msg: "missing `p cnf+` header".into() })?;
    let got = p.clauses.len() + p.card_lines.len();
    if got != lines {
        return Err(CnfpError { line: header, msg: format!("header declares {lines} lines, found {got}") });
    }
    Ok(p)
}

/// Encodes clauses and cardinality lines into one formula whose first
/// `num_vars` variables are the problem variables.
pub fn encode_cnfp(p: &CnfpProblem, opts: &EncodeOptions) -> Result<CnfFormula, EncodeError> {
    let mut f = CnfFormula::with_vars(p.num_vars);
    for c in &p.clauses {
        f.add_clause(c);
    }
    for c in &p.card_lines {
        encode_card(&mut f, c, opts)?;
    }
    Ok(f)
}

/// n-Queens: exactly one queen per rank and file, at most one per diagonal.
/// Square `(r, c)` is variable `r·n + c + 1`.
pub fn queens(n: usize) -> CnfpProblem {
    let var = |r: usize, c: usize| Lit::pos((r * n + c + 1) as Var);
    let mut card_lines = Vec::new();
    let mut exactly_one = |lits: Vec<Lit>| {
        card_lines.push(CardConstraint::new(lits.clone(), Relation::Le, 1));
        card_lines.push(CardConstraint::new(lits, Relation::Ge, 1));
    };
    for r in 0..n {
        exactly_one((0..n).map(|c| var(r, c)).collect());
    }
    for c in 0..n {
        exactly_one((0..n).map(|r| var(r, c)).collect());
    }
    let mut diagonals: Vec<Vec<Lit>> = Vec::new();
    for d in 0..(2 * n).saturating_sub(1) {
        diagonals.push((0..n).filter(|&r| d >= r && d - r < n).map(|r| var(r, d - r)).collect());
        diagonals.push((0..n).filter(|&r| r + n > d && r + n - 1 - d < n).map(|r| var(r, r + n - 1 - d)).collect());
    }
    for diag in diagonals.into_iter().filter(|d| d.len() >= 2) {
        card_lines.push(CardConstraint::new(diag, Relation::Le, 1));
    }
    CnfpProblem { num_vars: (n * n) as Var, clauses: Vec::new(), card_lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::Method;

    #[test]
    fn grammar_examples() {
        let p = parse_cnfp("p cnf+ 5 2\n1 -2 0\n1 2 3 4 5 <= 2\n").unwrap();
        assert_eq!(p.clauses, vec![vec![Lit::pos(1), Lit::neg(2)]]);
        assert_eq!(p.card_lines[0].rel, Relation::Le);
        assert_eq!(p.card_lines[0].k, 2);
        let p = parse_cnfp("p cnf+ 3 1\n1 2 3 >= 1\n").unwrap();
        assert_eq!(p.card_lines[0].rel, Relation::Ge);
        let e = parse_cnfp("p cnf+ 3 2\n1 2 0\n1 2 3 < 1\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn duplicates_preserved_and_round_trip() {
        let p = parse_cnfp("p cnf+ 2 1\n1 1 2 <= 1\n").unwrap();
        assert_eq!(p.card_lines[0].lits.len(), 3);
        assert_eq!(parse_cnfp(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn four_queens_clause_count() {
        let p = queens(4);
        let f = encode_cnfp(&p, &EncodeOptions::with_method(Method::Binomial)).unwrap();
        assert_eq!(f.num_clauses(), 84);
    }
}
