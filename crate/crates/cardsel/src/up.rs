//! Unit propagation, a small DPLL oracle and the arc-consistency harness.

use thiserror::Error;

use crate::card::EncodedConstraint;
use crate::cnf::{CnfFormula, Lit, Var};

/// Why a literal is on the trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Decision,
    /// Forced by the clause with this index.
    Propagated(usize),
}

/// Partial assignment with its trail.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<i8>,
    trail: Vec<(Lit, Reason)>,
}

impl Assignment {
    pub fn new(num_vars: Var) -> Assignment {
        Assignment { values: vec![0; num_vars as usize + 1], trail: Vec::new() }
    }

    /// Value of a literal, `None` when unassigned.
    pub fn value(&self, lit: Lit) -> Option<bool> {
        if let Some(b) = lit.const_value() {
            return Some(b);
        }
        let v = lit.var().unwrap() as usize;
        match self.values.get(v).copied().unwrap_or(0) {
            0 => None,
            s => Some((s > 0) == lit.is_positive()),
        }
    }

    pub fn trail(&self) -> &[(Lit, Reason)] {
        &self.trail
    }

    pub fn num_assigned(&self) -> usize {
        self.trail.len()
    }

    /// Total model indexed by variable; unassigned variables read as false.
    pub fn to_model(&self) -> Vec<bool> {
        self.values.iter().map(|&s| s > 0).collect()
    }

    fn set(&mut self, lit: Lit, reason: Reason) {
        let v = lit.var().unwrap() as usize;
        if v >= self.values.len() {
            self.values.resize(v + 1, 0);
        }
        debug_assert_eq!(self.values[v], 0, "variable assigned twice");
        self.values[v] = if lit.is_positive() { 1 } else { -1 };
        self.trail.push((lit, reason));
    }

    fn truncate(&mut self, len: usize) {
        for (lit, _) in self.trail.drain(len..) {
            self.values[lit.var().unwrap() as usize] = 0;
        }
    }
}

/// Immutable clause list with occurrence lists; shareable between checks.
#[derive(Clone, Debug)]
pub struct ClauseIndex {
    num_vars: Var,
    clauses: Vec<Vec<Lit>>,
    occurs: Vec<Vec<usize>>,
}

impl ClauseIndex {
    pub fn new(formula: &CnfFormula) -> ClauseIndex {
        let clauses = formula.clauses().iter().map(|c| c.lits().to_vec()).collect();
        ClauseIndex::from_clauses(formula.num_vars(), clauses)
    }

    pub fn from_clauses(num_vars: Var, clauses: Vec<Vec<Lit>>) -> ClauseIndex {
        let mut occurs = vec![Vec::new(); 2 * num_vars as usize + 2];
        for (i, c) in clauses.iter().enumerate() {
            for l in c {
                occurs[l.code()].push(i);
            }
        }
        ClauseIndex { num_vars, clauses, occurs }
    }

    pub fn num_vars(&self) -> Var {
        self.num_vars
    }

    pub fn clause(&self, i: usize) -> &[Lit] {
        &self.clauses[i]
    }
}

/// Incremental unit propagation over a [`ClauseIndex`].
#[derive(Clone, Debug)]
pub struct Propagator<'a> {
    index: &'a ClauseIndex,
    assign: Assignment,
    qhead: usize,
    conflict: Option<Conflict>,
    root_conflict: Option<Conflict>,
}

/// A falsified clause, or `None` when a literal was assumed against its
/// current value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub clause: Option<usize>,
}

impl<'a> Propagator<'a> {
    /// Scans the clause list, enqueues units and propagates to fixpoint.
    pub fn new(index: &'a ClauseIndex) -> Propagator<'a> {
        let mut p = Propagator {
            index,
            assign: Assignment::new(index.num_vars),
            qhead: 0,
            conflict: None,
            root_conflict: None,
        };
        for (i, c) in index.clauses.iter().enumerate() {
            if c.is_empty() {
                p.conflict = Some(Conflict { clause: Some(i) });
                break;
            }
            if c.len() == 1 {
                match p.assign.value(c[0]) {
                    Some(true) => {}
                    Some(false) => {
                        p.conflict = Some(Conflict { clause: Some(i) });
                        break;
                    }
                    None => p.assign.set(c[0], Reason::Propagated(i)),
                }
            }
        }
        if p.conflict.is_none() {
            p.propagate();
        }
        p.root_conflict = p.conflict;
        p
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assign
    }

    pub fn value(&self, lit: Lit) -> Option<bool> {
        self.assign.value(lit)
    }

    pub fn conflict(&self) -> Option<Conflict> {
        self.conflict
    }

    /// Trail length, usable with [`Propagator::backtrack`].
    pub fn checkpoint(&self) -> usize {
        self.assign.trail.len()
    }

    /// Undoes every assignment made after `checkpoint`.
    pub fn backtrack(&mut self, checkpoint: usize) {
        if self.root_conflict.is_some() {
            return;
        }
        self.assign.truncate(checkpoint);
        self.qhead = self.qhead.min(checkpoint);
        self.conflict = None;
    }

    /// Assigns `lit` as a decision and propagates; returns `false` on conflict.
    pub fn assume(&mut self, lit: Lit) -> bool {
        if self.conflict.is_some() {
            return false;
        }
        match self.assign.value(lit) {
            Some(true) => true,
            Some(false) => {
                self.conflict = Some(Conflict { clause: None });
                false
            }
            None => {
                self.assign.set(lit, Reason::Decision);
                self.propagate()
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while self.qhead < self.assign.trail.len() {
            let lit = self.assign.trail[self.qhead].0;
            self.qhead += 1;
            for &ci in &self.index.occurs[(!lit).code()] {
                let clause = &self.index.clauses[ci];
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &l in clause {
                    match self.assign.value(l) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match open {
                    0 => {
                        self.conflict = Some(Conflict { clause: Some(ci) });
                        return false;
                    }
                    1 => self.assign.set(unassigned.unwrap(), Reason::Propagated(ci)),
                    _ => {}
                }
            }
        }
        true
    }
}

/// Outcome of [`unit_propagate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpStatus {
    Fixpoint,
    Conflict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpResult {
    pub status: UpStatus,
    pub assignment: Assignment,
    pub conflict_clause: Option<Vec<Lit>>,
    /// Number of seed literals applied when the conflict arose; 0 means the
    /// clause set conflicts on its own.
    pub step: usize,
}

/// Propagates the clause set, then each seed literal in order.
pub fn unit_propagate(formula: &CnfFormula, seed: &[Lit]) -> UpResult {
    let index = ClauseIndex::new(formula);
    let mut p = Propagator::new(&index);
    let mut step = 0;
    if p.conflict().is_none() {
        for &l in seed {
            step += 1;
            if !p.assume(l) {
                break;
            }
        }
    }
    let conflict = p.conflict();
    UpResult {
        status: if conflict.is_some() { UpStatus::Conflict } else { UpStatus::Fixpoint },
        conflict_clause: conflict.and_then(|c| c.clause).map(|i| index.clause(i).to_vec()),
        assignment: p.assign,
        step: if conflict.is_some() { step } else { 0 },
    }
}

/// DPLL over an index: lowest unassigned variable first, true before false,
/// chronological backtracking. Returns a total model indexed by variable.
pub fn dpll_indexed(index: &ClauseIndex, assumptions: &[Lit]) -> Option<Vec<bool>> {
    let mut p = Propagator::new(index);
    if p.conflict().is_some() {
        return None;
    }
    for &a in assumptions {
        if !p.assume(a) {
            return None;
        }
    }
    let n = index.num_vars;
    // (variable, checkpoint before it, false branch already tried)
    let mut stack: Vec<(Var, usize, bool)> = Vec::new();
    let mut cursor: Var = 1;
    loop {
        while cursor <= n && p.value(Lit::pos(cursor)).is_some() {
            cursor += 1;
        }
        if cursor > n {
            return Some(p.assign.to_model());
        }
        let v = cursor;
        let cp = p.checkpoint();
        stack.push((v, cp, false));
        if p.assume(Lit::pos(v)) {
            continue;
        }
        // Backtrack to the latest decision whose false branch is untried.
        loop {
            let (v, cp, tried) = stack.pop()?;
            p.backtrack(cp);
            cursor = v;
            if tried {
                continue;
            }
            stack.push((v, cp, true));
            if p.assume(Lit::neg(v)) {
                break;
            }
        }
    }
}

/// Satisfiability of `formula` under `assumptions`.
pub fn dpll_sat(formula: &CnfFormula, assumptions: &[Lit]) -> Option<Vec<bool>> {
    if formula.is_trivially_unsat() {
        return None;
    }
    dpll_indexed(&ClauseIndex::new(formula), assumptions)
}

/// Number of distinct models projected onto `vars`, enumerated with
/// blocking clauses. Stops at `limit`.
pub fn count_models(formula: &CnfFormula, vars: &[Var], limit: usize) -> usize {
    if formula.is_trivially_unsat() {
        return 0;
    }
    let mut clauses: Vec<Vec<Lit>> = formula.clauses().iter().map(|c| c.lits().to_vec()).collect();
    let mut count = 0;
    while count < limit {
        let index = ClauseIndex::from_clauses(formula.num_vars(), clauses.clone());
        match dpll_indexed(&index, &[]) {
            None => break,
            Some(model) => {
                count += 1;
                clauses.push(vars.iter().map(|&v| Lit::new(v, !model[v as usize])).collect());
            }
        }
    }
    count
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("scenario has {got} inputs, expected k = {k}")]
    ScenarioSize { got: usize, k: usize },
    #[error("scenario index {0} out of range")]
    ScenarioIndex(usize),
    #[error("forward propagation depth {i} exceeds k + 1 = {max}")]
    Depth { i: usize, max: usize },
}

/// Outcome of an arc-consistency scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcReport {
    /// Conflict while seeding the `k` scenario inputs (0 = before any).
    pub seed_conflict: Option<usize>,
    /// Inputs outside the scenario not propagated to false.
    pub unforced: Vec<usize>,
    /// Each extra input that did not produce a conflict.
    pub no_conflict_on_extra: Vec<usize>,
}

impl AcReport {
    pub fn passed(&self) -> bool {
        self.seed_conflict.is_none() && self.unforced.is_empty() && self.no_conflict_on_extra.is_empty()
    }
}

/// Sets the scenario inputs true one at a time, requires every other input
/// to be forced false, then asserts each other input in turn and requires
/// a conflict.
pub fn check_arc_consistency(
    formula: &CnfFormula,
    enc: &EncodedConstraint,
    scenario: &[usize],
) -> Result<AcReport, CheckError> {
    check_arc_consistency_indexed(&ClauseIndex::new(formula), enc, scenario)
}

/// [`check_arc_consistency`] over a prebuilt index.
pub fn check_arc_consistency_indexed(
    index: &ClauseIndex,
    enc: &EncodedConstraint,
    scenario: &[usize],
) -> Result<AcReport, CheckError> {
    if scenario.len() != enc.k {
        return Err(CheckError::ScenarioSize { got: scenario.len(), k: enc.k });
    }
    if let Some(&bad) = scenario.iter().find(|&&i| i >= enc.inputs.len()) {
        return Err(CheckError::ScenarioIndex(bad));
    }
    let mut report = AcReport { seed_conflict: None, unforced: Vec::new(), no_conflict_on_extra: Vec::new() };
    let mut p = Propagator::new(index);
    if p.conflict().is_some() {
        report.seed_conflict = Some(0);
        return Ok(report);
    }
    for (step, &i) in scenario.iter().enumerate() {
        if !p.assume(enc.inputs[i]) {
            report.seed_conflict = Some(step + 1);
            return Ok(report);
        }
    }
    let cp = p.checkpoint();
    for (j, &lit) in enc.inputs.iter().enumerate() {
        if scenario.contains(&j) {
            continue;
        }
        if p.value(lit) != Some(false) {
            report.unforced.push(j);
        }
        if p.assume(lit) {
            report.no_conflict_on_extra.push(j);
        }
        p.backtrack(cp);
    }
    Ok(report)
}

/// Outcome of a forward-propagation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardReport {
    pub conflict: bool,
    /// Outputs among `y_1..y_i` not set true.
    pub unset_outputs: Vec<usize>,
}

/// Sets the given inputs true and checks that `y_1..y_i` are true, where
/// `i` is the number of inputs. For `i = k + 1` a conflict is expected
/// instead, and `conflict` reports whether it occurred.
pub fn check_forward_prop(
    index: &ClauseIndex,
    enc: &EncodedConstraint,
    inputs: &[usize],
) -> Result<ForwardReport, CheckError> {
    let i = inputs.len();
    if i > enc.k + 1 {
        return Err(CheckError::Depth { i, max: enc.k + 1 });
    }
    if let Some(&bad) = inputs.iter().find(|&&j| j >= enc.inputs.len()) {
        return Err(CheckError::ScenarioIndex(bad));
    }
    let mut p = Propagator::new(index);
    let mut conflict = p.conflict().is_some();
    for &j in inputs {
        if conflict {
            break;
        }
        conflict = !p.assume(enc.inputs[j]);
    }
    let unset_outputs = if conflict {
        Vec::new()
    } else {
        (0..i.min(enc.output_lits.len())).filter(|&o| p.value(enc.output_lits[o]) != Some(true)).collect()
    };
    Ok(ForwardReport { conflict, unset_outputs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::{encode_atmost, EncodeOptions};

    fn formula(n: Var, clauses: &[&[i64]]) -> CnfFormula {
        let mut f = CnfFormula::with_vars(n);
        for c in clauses {
            let lits: Vec<Lit> = c.iter().map(|&d| Lit::from_dimacs(d).unwrap()).collect();
            f.add_clause(&lits);
        }
        f
    }

    #[test]
    fn unit_chain() {
        let f = formula(3, &[&[-1, 2], &[-2, 3]]);
        let r = unit_propagate(&f, &[Lit::pos(1)]);
        assert_eq!(r.status, UpStatus::Fixpoint);
        assert_eq!(r.assignment.value(Lit::pos(3)), Some(true));
        let trail: Vec<Lit> = r.assignment.trail().iter().map(|t| t.0).collect();
        assert_eq!(trail, vec![Lit::pos(1), Lit::pos(2), Lit::pos(3)]);
    }

    #[test]
    fn unit_clause_from_empty() {
        let r = unit_propagate(&formula(1, &[&[1]]), &[]);
        assert_eq!(r.assignment.value(Lit::pos(1)), Some(true));
    }

    #[test]
    fn contradiction_at_step_zero() {
        let r = unit_propagate(&formula(1, &[&[1], &[-1]]), &[]);
        assert_eq!(r.status, UpStatus::Conflict);
        assert_eq!(r.step, 0);
        assert_eq!(r.conflict_clause, Some(vec![Lit::neg(1)]));
    }

    #[test]
    fn dpll_examples() {
        let m = dpll_sat(&formula(2, &[&[1, 2], &[-1]]), &[]).unwrap();
        assert!(!m[1] && m[2]);
        assert!(dpll_sat(&formula(1, &[&[1], &[-1]]), &[]).is_none());
    }

    #[test]
    fn dpll_on_encoding() {
        let mut f = CnfFormula::with_vars(3);
        let x: Vec<Lit> = (1..=3).map(Lit::pos).collect();
        encode_atmost(&mut f, &x, 1, &EncodeOptions::default()).unwrap();
        assert!(dpll_sat(&f, &[x[0], x[1]]).is_none());
        assert!(dpll_sat(&f, &[x[0]]).is_some());
    }

    #[test]
    fn model_count() {
        let f = formula(2, &[&[1, 2]]);
        assert_eq!(count_models(&f, &[1, 2], 10), 3);
    }
}
