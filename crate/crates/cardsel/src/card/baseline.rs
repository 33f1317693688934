//! Baseline at-most-k encoders: sequential counter, totalizer, binomial.

use itertools::Itertools;

use crate::cnf::{CnfFormula, Lit};

/// Sequential counter; returns the register literals `s_{n-1,1..k}`.
/// Requires `1 <= k < n`.
pub fn sequential(formula: &mut CnfFormula, lits: &[Lit], k: usize) -> Vec<Lit> {
    let n = lits.len();
    assert!(k >= 1 && k < n, "sequential counter needs 1 <= k < n");
    let s: Vec<Vec<Lit>> = (0..n - 1).map(|_| (0..k).map(|_| formula.fresh_lit()).collect()).collect();
    formula.add_clause(&[!lits[0], s[0][0]]);
    for &v in &s[0][1..k] {
        formula.add_clause(&[!v]);
    }
    for i in 1..n - 1 {
        formula.add_clause(&[!lits[i], s[i][0]]);
        formula.add_clause(&[!s[i - 1][0], s[i][0]]);
        for j in 1..k {
            formula.add_clause(&[!lits[i], !s[i - 1][j - 1], s[i][j]]);
            formula.add_clause(&[!s[i - 1][j], s[i][j]]);
        }
        formula.add_clause(&[!lits[i], !s[i - 1][k - 1]]);
    }
    formula.add_clause(&[!lits[n - 1], !s[n - 2][k - 1]]);
    s[n - 2].clone()
}

/// Child sizes of a totalizer node over `m` leaves.
pub fn totalizer_split(m: usize) -> (usize, usize) {
    (m / 2, m - m / 2)
}

fn totalizer_node(formula: &mut CnfFormula, lits: &[Lit], cap: usize) -> Vec<Lit> {
    let m = lits.len();
    if m == 1 {
        return vec![lits[0]];
    }
    let (l, _) = totalizer_split(m);
    let a = totalizer_node(formula, &lits[..l], cap);
    let b = totalizer_node(formula, &lits[l..], cap);
    let width = m.min(cap);
    let out: Vec<Lit> = (0..width).map(|_| formula.fresh_lit()).collect();
    for alpha in 0..=a.len() {
        for beta in 0..=b.len() {
            let sigma = alpha + beta;
            if sigma == 0 || sigma > width {
                continue;
            }
            let mut clause = Vec::with_capacity(3);
            if alpha > 0 {
                clause.push(!a[alpha - 1]);
            }
            if beta > 0 {
                clause.push(!b[beta - 1]);
            }
            clause.push(out[sigma - 1]);
            formula.add_clause(&clause);
        }
    }
    out
}

/// Totalizer counting up to `k + 1`, with the root output `k + 1` negated.
/// Requires `1 <= k < n`.
pub fn totalizer(formula: &mut CnfFormula, lits: &[Lit], k: usize) -> Vec<Lit> {
    assert!(k >= 1 && k < lits.len(), "totalizer needs 1 <= k < n");
    let out = totalizer_node(formula, lits, k + 1);
    formula.add_clause(&[!out[k]]);
    out
}

/// One clause per `(k+1)`-subset forbidding all of it.
pub fn binomial(formula: &mut CnfFormula, lits: &[Lit], k: usize) {
    for subset in lits.iter().combinations(k + 1) {
        let c: Vec<Lit> = subset.into_iter().map(|&l| !l).collect();
        formula.add_clause(&c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(n: u32) -> (CnfFormula, Vec<Lit>) {
        (CnfFormula::with_vars(n), (1..=n).map(Lit::pos).collect())
    }

    #[test]
    fn sequential_count() {
        let (mut f, x) = inputs(4);
        sequential(&mut f, &x, 2);
        assert_eq!(f.num_clauses(), 13);
        assert_eq!(f.num_vars(), 4 + 6);
    }

    #[test]
    fn binomial_count() {
        let (mut f, x) = inputs(4);
        binomial(&mut f, &x, 1);
        assert_eq!((f.num_clauses(), f.num_vars()), (6, 4));
    }

    #[test]
    fn totalizer_tree_shape() {
        assert_eq!(totalizer_split(5), (2, 3));
        assert_eq!(totalizer_split(3), (1, 2));
    }
}
