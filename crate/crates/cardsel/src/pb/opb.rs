//! OPB subset parser.

use std::collections::HashMap;

use thiserror::Error;

use crate::card::Relation;
use crate::cnf::{Lit, Var};
use crate::pb::PbConstraint;

/// Bidirectional table between variable names and indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl VarNames {
    /// Index of `name`, allocating the next variable on first use.
    pub fn intern(&mut self, name: &str) -> Var {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        self.names.push(name.to_string());
        let v = self.names.len() as Var;
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, var: Var) -> Option<&str> {
        self.names.get((var as usize).checked_sub(1)?).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Parsed OPB file. Variables `1..=var_names.len()` are the named ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PbProblem {
    pub constraints: Vec<PbConstraint>,
    /// Terms of the `min:` objective.
    pub objective: Option<Vec<(i64, Lit)>>,
    pub var_names: VarNames,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct OpbError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('*') {
            continue;
        }
        let mut start: Option<usize> = None;
        for (i, c) in line.char_indices() {
            if c.is_whitespace() || c == ';' {
                if let Some(s) = start.take() {
                    out.push(Token { text: &line[s..i], line: li + 1, col: s + 1 });
                }
                if c == ';' {
                    out.push(Token { text: &line[i..i + 1], line: li + 1, col: i + 1 });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push(Token { text: &line[s..], line: li + 1, col: s + 1 });
        }
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '[' | ']' | '.'))
}

fn parse_int(tok: &Token<'_>) -> Result<Option<i64>, OpbError> {
    let t = tok.text;
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(None);
    }
    t.parse::<i64>().map(Some).map_err(|_| OpbError {
        line: tok.line,
        col: tok.col,
        msg: format!("integer `{t}` exceeds 63-bit magnitude"),
    })
}

fn relation(s: &str) -> Option<Relation> {
    match s {
        ">=" => Some(Relation::Ge),
        "<=" => Some(Relation::Le),
        "=" => Some(Relation::Eq),
        _ => None,
    }
}

/// Parses the OPB subset: `* …` comments, an optional `min:` objective and
/// linear constraints `(<int> <var>)+ (>=|<=|=) <int> ;`. A `~` prefix
/// negates a variable. Variables are numbered in order of first appearance.
pub fn parse_opb(text: &str) -> Result<PbProblem, OpbError> {
    let tokens = tokenize(text);
    let mut problem = PbProblem::default();
    let mut i = 0;
    let end_pos = || {
        let line = text.lines().count().max(1);
        OpbError { line, col: text.lines().last().map_or(1, |l| l.len() + 1), msg: String::new() }
    };
    while i < tokens.len() {
        let first = &tokens[i];
        let is_objective = first.text == "min:";
        if is_objective {
            if problem.objective.is_some() || !problem.constraints.is_empty() {
                return Err(OpbError { line: first.line, col: first.col, msg: "`min:` must be the first statement".into() });
            }
            i += 1;
        }
        let mut terms: Vec<(i64, Lit)> = Vec::new();
        let mut rel = None;
        loop {
            let Some(tok) = tokens.get(i) else {
                return Err(OpbError { msg: "missing `;` at end of statement".into(), ..end_pos() });
            };
            if tok.text == ";" {
                break;
            }
            if let Some(r) = relation(tok.text) {
                if is_objective {
                    return Err(OpbError { line: tok.line, col: tok.col, msg: "relation in objective".into() });
                }
                rel = Some((r, tok.clone()));
                i += 1;
                break;
            }
            let coeff = parse_int(tok)?.ok_or_else(|| OpbError {
                line: tok.line,
                col: tok.col,
                msg: format!("expected coefficient or relation, found `{}`", tok.text),
            })?;
            i += 1;
            let Some(var_tok) = tokens.get(i) else {
                return Err(OpbError { msg: "missing variable after coefficient".into(), ..end_pos() });
            };
            let (negated, name) = match var_tok.text.strip_prefix('~') {
                Some(rest) => (true, rest),
                None => (false, var_tok.text),
            };
            if !is_identifier(name) {
                return Err(OpbError {
                    line: var_tok.line,
                    col: var_tok.col,
                    msg: format!("expected variable name, found `{}`", var_tok.text),
                });
            }
            i += 1;
            if let Some(next) = tokens.get(i) {
                let nname = next.text.strip_prefix('~').unwrap_or(next.text);
                if relation(next.text).is_none() && next.text != ";" && is_identifier(nname) {
                    return Err(OpbError {
                        line: next.line,
                        col: next.col,
                        msg: "nonlinear terms are not supported".into(),
                    });
                }
            }
            let var = problem.var_names.intern(name);
            terms.push((coeff, Lit::new(var, !negated)));
        }
        if is_objective {
            problem.objective = Some(terms);
            i += 1;
            continue;
        }
        let Some((rel, rel_tok)) = rel else {
            let tok = &tokens[i];
            return Err(OpbError { line: tok.line, col: tok.col, msg: "constraint without relation".into() });
        };
        if terms.is_empty() {
            return Err(OpbError { line: rel_tok.line, col: rel_tok.col, msg: "constraint without terms".into() });
        }
        let Some(rhs_tok) = tokens.get(i) else {
            return Err(OpbError { msg: "missing right-hand side".into(), ..end_pos() });
        };
        let k = parse_int(rhs_tok)?.ok_or_else(|| OpbError {
            line: rhs_tok.line,
            col: rhs_tok.col,
            msg: format!("expected integer right-hand side, found `{}`", rhs_tok.text),
        })?;
        i += 1;
        match tokens.get(i) {
            Some(t) if t.text == ";" => i += 1,
            Some(t) => {
                return Err(OpbError { line: t.line, col: t.col, msg: format!("expected `;`, found `{}`", t.text) })
            }
            None => return Err(OpbError { msg: "missing `;` at end of statement".into(), ..end_pos() }),
        }
        problem.constraints.push(PbConstraint { terms, rel, k });
    }
    Ok(problem)
}
