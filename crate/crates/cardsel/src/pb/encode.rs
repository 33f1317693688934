//! Pseudo-Boolean normalization and the mixed-radix sorter-chain encoding.

use std::collections::HashMap;

use crate::card::emit::{emit_network, Polarity};
use crate::card::{encode_atmost, EncodeError, EncodeOptions, Method, Relation};
use crate::cnf::{CnfFormula, Lit, Var};
use crate::net::build::{oe4_merge_wires, Planner};
use crate::net::ir::{NetBuilder, Network, Wire};
use crate::pb::base::{find_base, to_digits, MixedRadixBase};
use crate::pb::PbConstraint;

/// `Σ a_i · l_i ≥ k` with positive coefficients, distinct variables and
/// `1 <= k <= Σ a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeConstraint {
    pub terms: Vec<(u64, Lit)>,
    pub k: u64,
}

impl GeConstraint {
    pub fn holds(&self, model: &[bool]) -> bool {
        let lhs: u64 = self.terms.iter().filter(|(_, l)| l.eval(model)).map(|&(a, _)| a).sum();
        lhs >= self.k
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.terms.iter().map(|&(a, _)| a).collect()
    }
}

/// A normalized part of a PB constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizedPb {
    True,
    False,
    Ge(GeConstraint),
}

fn overflow(what: &str) -> EncodeError {
    EncodeError::Overflow(format!("{what} exceeds 63-bit magnitude"))
}

/// `Σ terms ≥ k` over signed coefficients into ≥-form.
fn normalize_ge(terms: &[(i128, Lit)], k: i128) -> Result<NormalizedPb, EncodeError> {
    let mut k = k;
    let mut order: Vec<Var> = Vec::new();
    let mut coeff: HashMap<Var, i128> = HashMap::new();
    for &(a, l) in terms {
        match l.const_value() {
            Some(true) => k -= a,
            Some(false) => {}
            None => {
                let v = l.var().unwrap();
                let e = coeff.entry(v).or_insert_with(|| {
                    order.push(v);
                    0
                });
                if l.is_positive() {
                    *e += a;
                } else {
                    // a·¬v = a − a·v
                    *e -= a;
                    k -= a;
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut sum: i128 = 0;
    for v in order {
        let c = coeff[&v];
        if c == 0 {
            continue;
        }
        let (a, lit) = if c > 0 { (c, Lit::pos(v)) } else { (-c, Lit::neg(v)) };
        if c < 0 {
            k += a;
        }
        if a > i64::MAX as i128 {
            return Err(overflow("coefficient"));
        }
        sum += a;
        out.push((a as u64, lit));
    }
    if sum > i64::MAX as i128 {
        return Err(overflow("coefficient sum"));
    }
    Ok(if k <= 0 {
        NormalizedPb::True
    } else if sum < k {
        NormalizedPb::False
    } else {
        NormalizedPb::Ge(GeConstraint { terms: out, k: k as u64 })
    })
}

/// Rewrites a constraint into ≥-form parts: `≤` negates all literals, a
/// negative coefficient `(a, l)` becomes `(−a, ¬l)` with `k += −a`, zero
/// coefficients vanish and `=` yields two parts.
pub fn normalize_pb(c: &PbConstraint) -> Result<Vec<NormalizedPb>, EncodeError> {
    let pos: Vec<(i128, Lit)> = c.terms.iter().map(|&(a, l)| (a as i128, l)).collect();
    let neg: Vec<(i128, Lit)> = c.terms.iter().map(|&(a, l)| (-(a as i128), l)).collect();
    let k = c.k as i128;
    match c.rel {
        Relation::Ge => Ok(vec![normalize_ge(&pos, k)?]),
        Relation::Gt => Ok(vec![normalize_ge(&pos, k + 1)?]),
        Relation::Le => Ok(vec![normalize_ge(&neg, -k)?]),
        Relation::Lt => Ok(vec![normalize_ge(&neg, -k + 1)?]),
        Relation::Eq => Ok(vec![normalize_ge(&pos, k)?, normalize_ge(&neg, -k)?]),
    }
}

/// `(const_add, k')` with `k' = k + const_add` the least multiple of the top
/// weight not below `k`.
pub fn simplify_rhs(k: u64, base: &MixedRadixBase) -> (u64, u64) {
    let w = base.top_weight();
    let add = (w - k % w) % w;
    (add, k + add)
}

/// Decomposition of a ≥-constraint over a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitPlan {
    pub base: MixedRadixBase,
    pub const_add: u64,
    pub k_prime: u64,
    /// Per weight position: literals with their digit multiplicity; the
    /// injected constant appears as `Lit::TRUE`.
    pub positions: Vec<Vec<(Lit, u64)>>,
}

impl DigitPlan {
    pub fn new(c: &GeConstraint, base: MixedRadixBase) -> DigitPlan {
        let (const_add, k_prime) = simplify_rhs(c.k, &base);
        let mut positions = vec![Vec::new(); base.len() + 1];
        for &(a, l) in &c.terms {
            for (i, d) in to_digits(a, &base).into_iter().enumerate() {
                if d > 0 {
                    positions[i].push((l, d));
                }
            }
        }
        for (i, d) in to_digits(const_add, &base).into_iter().enumerate() {
            if d > 0 {
                positions[i].push((Lit::TRUE, d));
            }
        }
        DigitPlan { base, const_add, k_prime, positions }
    }

    /// Required count at the top position.
    pub fn top_need(&self) -> u64 {
        self.k_prime / self.base.top_weight()
    }

    /// `Σ_i w_i · Σ multiplicities at i`.
    pub fn weighted_total(&self) -> u64 {
        self.positions
            .iter()
            .zip(self.base.weights())
            .map(|(p, &w)| w * p.iter().map(|&(_, d)| d).sum::<u64>())
            .sum()
    }
}

/// Network realizing a plan; outputs are the top position's unary count.
#[derive(Clone, Debug)]
pub struct PbNetwork {
    pub net: Network,
    /// Constraint literal of each network input.
    pub inputs: Vec<Lit>,
    /// Count the top position must reach; may exceed the outputs available,
    /// in which case the constraint is unsatisfiable.
    pub top_need: usize,
}

fn usize_of(v: u64) -> Result<usize, EncodeError> {
    usize::try_from(v).map_err(|_| overflow("multiplicity"))
}

/// Builds the sorter chain. With `truncate`, each position selects only
/// the outputs that carries and the final assertion can use; otherwise
/// every position computes its full count.
pub fn build_pb_network(plan: &DigitPlan, opts: &EncodeOptions, truncate: bool) -> Result<PbNetwork, EncodeError> {
    let Method::Network(sel) = opts.method else {
        return Err(EncodeError::Unsupported(format!("method {} cannot encode PB constraints", opts.method)));
    };
    let radices = plan.base.radices();
    let m = radices.len();

    let mut inputs = Vec::new();
    let mut digit_wires: Vec<Vec<Wire>> = Vec::with_capacity(m + 1);
    let mut input_total = 0usize;
    for pos in &plan.positions {
        let mut ws = Vec::new();
        for &(l, d) in pos {
            let d = usize_of(d)?;
            input_total = input_total.checked_add(d).filter(|&t| t <= 1 << 24).ok_or_else(|| {
                EncodeError::Unsupported("digit multiplicities too large for a sorter chain".into())
            })?;
            for _ in 0..d {
                if l.const_value() == Some(true) {
                    ws.push(Wire::Const(true));
                } else {
                    ws.push(Wire::Input(inputs.len()));
                    inputs.push(l);
                }
            }
        }
        digit_wires.push(ws);
    }

    // Counts reachable at each position, bottom-up.
    let mut totals = vec![0usize; m + 1];
    let mut carries_avail = vec![0usize; m + 1];
    for i in 0..=m {
        totals[i] = digit_wires[i].len() + carries_avail[i];
        if i < m {
            carries_avail[i + 1] = totals[i] / radices[i] as usize;
        }
    }
    let top_need = usize_of(plan.top_need())?;
    // Outputs needed at each position, top-down.
    let mut need = totals.clone();
    let mut carries = carries_avail.clone();
    if truncate {
        need[m] = top_need.min(totals[m]);
        for i in (0..m).rev() {
            carries[i + 1] = carries_avail[i + 1].min(need[i + 1]);
            need[i] = carries[i + 1] * radices[i] as usize;
        }
    }

    let mut b = NetBuilder::new(inputs.len());
    let mut planner = Planner::new(sel, opts.mixing());
    let mut carry_in: Vec<Wire> = Vec::new();
    let mut top = Vec::new();
    for i in 0..=m {
        let want = need[i];
        let merged: Vec<Wire> = if want == 0 {
            Vec::new()
        } else {
            let d = &digit_wires[i];
            let kd = want.min(d.len());
            let sorted: Vec<Wire> = planner.select(&mut b, d, kd).into_iter().take(kd).collect();
            let mut cols = vec![sorted, carry_in.clone()];
            cols.sort_by_key(|c| std::cmp::Reverse(c.len()));
            let out = oe4_merge_wires(&mut b, &cols, want);
            out.into_iter().take(want).collect()
        };
        debug_assert_eq!(merged.len(), want);
        if i < m {
            let r = radices[i] as usize;
            carry_in = (1..=carries[i + 1]).map(|q| merged[q * r - 1]).collect();
        } else {
            top = merged;
        }
    }
    let k = top.len();
    Ok(PbNetwork { net: b.finish_partial(top, k), inputs, top_need })
}

/// Result of encoding one ≥-constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedPb {
    pub plan: DigitPlan,
    /// Unary count literals of the top position.
    pub top_outputs: Vec<Lit>,
}

/// Encodes a ≥-constraint. Unit coefficients reduce to the cardinality
/// encoder on negated literals; otherwise the base is searched when not
/// given.
pub fn encode_pb(
    formula: &mut CnfFormula,
    c: &GeConstraint,
    base: Option<MixedRadixBase>,
    opts: &EncodeOptions,
) -> Result<EncodedPb, EncodeError> {
    let base = base.unwrap_or_else(|| find_base(&c.coeffs()));
    let plan = DigitPlan::new(c, base);
    if c.terms.iter().all(|&(a, _)| a == 1) && plan.const_add == 0 && plan.base.is_empty() {
        let neg: Vec<Lit> = c.terms.iter().map(|&(_, l)| !l).collect();
        let enc = encode_atmost(formula, &neg, neg.len() - c.k as usize, opts)?;
        return Ok(EncodedPb { plan, top_outputs: enc.output_lits });
    }
    let pbn = build_pb_network(&plan, &EncodeOptions { method: network_method(opts.method), ..*opts }, true)?;
    let top_outputs = emit_network(formula, &pbn.net, &pbn.inputs, Polarity::Down, pbn.top_need);
    if pbn.top_need > top_outputs.len() {
        formula.add_clause(&[]);
    } else {
        formula.add_clause(&[top_outputs[pbn.top_need - 1]]);
    }
    Ok(EncodedPb { plan, top_outputs })
}

/// Network method used for PB positions; baselines fall back to oe4.
fn network_method(m: Method) -> Method {
    match m {
        Method::Network(_) => m,
        _ => EncodeOptions::default().method,
    }
}

/// Encodes every part of a PB constraint; unsatisfiable parts add the empty
/// clause.
pub fn encode_pb_constraint(
    formula: &mut CnfFormula,
    c: &PbConstraint,
    opts: &EncodeOptions,
) -> Result<Vec<EncodedPb>, EncodeError> {
    let mut out = Vec::new();
    for part in normalize_pb(c)? {
        match part {
            NormalizedPb::True => {}
            NormalizedPb::False => formula.add_clause(&[]),
            NormalizedPb::Ge(ge) => out.push(encode_pb(formula, &ge, None, opts)?),
        }
    }
    Ok(out)
}

/// Encodes `objective ≤ bound − 1`, with every clause disjoined with
/// `¬flag` when a flag is given.
pub fn encode_goal_bound(
    formula: &mut CnfFormula,
    objective: &[(i64, Lit)],
    bound: i64,
    flag: Option<Lit>,
    opts: &EncodeOptions,
) -> Result<(), EncodeError> {
    let c = PbConstraint { terms: objective.to_vec(), rel: Relation::Le, k: bound.checked_sub(1).ok_or_else(|| overflow("bound"))? };
    let prev = formula.set_guard(flag);
    let res = encode_pb_constraint(formula, &c, opts);
    formula.set_guard(prev);
    res.map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ge(terms: &[(u64, u32)], k: u64) -> GeConstraint {
        GeConstraint { terms: terms.iter().map(|&(a, v)| (a, Lit::pos(v))).collect(), k }
    }

    #[test]
    fn normalization_examples() {
        let c = PbConstraint { terms: vec![(1, Lit::pos(1)), (-1, Lit::pos(2))], rel: Relation::Le, k: 0 };
        assert_eq!(
            normalize_pb(&c).unwrap(),
            vec![NormalizedPb::Ge(GeConstraint { terms: vec![(1, Lit::neg(1)), (1, Lit::pos(2))], k: 1 })]
        );
        let c = PbConstraint {
            terms: vec![(2, Lit::pos(1)), (3, Lit::pos(2)), (5, Lit::pos(3))],
            rel: Relation::Le,
            k: 6,
        };
        assert_eq!(
            normalize_pb(&c).unwrap(),
            vec![NormalizedPb::Ge(GeConstraint {
                terms: vec![(2, Lit::neg(1)), (3, Lit::neg(2)), (5, Lit::neg(3))],
                k: 4
            })]
        );
    }

    #[test]
    fn repeated_variables_merge() {
        let c = PbConstraint { terms: vec![(2, Lit::pos(1)), (3, Lit::neg(1)), (1, Lit::pos(2))], rel: Relation::Ge, k: 1 };
        // 2x + 3¬x is at least 2 under every assignment.
        assert_eq!(normalize_pb(&c).unwrap(), vec![NormalizedPb::True]);
    }

    #[test]
    fn rhs_simplification() {
        let base = MixedRadixBase::new(vec![2, 2]);
        assert_eq!(simplify_rhs(9, &base), (3, 12));
        assert_eq!(simplify_rhs(8, &base), (0, 8));
        let plan = DigitPlan::new(&ge(&[(5, 1), (7, 2)], 9), base);
        assert_eq!(plan.top_need(), 3);
        assert_eq!(plan.weighted_total(), 5 + 7 + 3);
    }

    #[test]
    fn decomposition_positions() {
        let c = ge(&[(2, 1), (2, 2), (2, 3), (2, 4), (5, 5), (18, 6)], 18);
        let plan = DigitPlan::new(&c, MixedRadixBase::new(vec![2, 3, 3]));
        assert_eq!(plan.base.weights(), &[1, 2, 6, 18]);
        let lits = |i: usize| -> Vec<(Lit, u64)> {
            plan.positions[i].iter().copied().filter(|(l, _)| !l.is_const()).collect()
        };
        assert_eq!(lits(0), vec![(Lit::pos(5), 1)]);
        assert_eq!(
            lits(1),
            vec![(Lit::pos(1), 1), (Lit::pos(2), 1), (Lit::pos(3), 1), (Lit::pos(4), 1), (Lit::pos(5), 2)]
        );
        assert!(lits(2).is_empty());
        assert_eq!(lits(3), vec![(Lit::pos(6), 1)]);
    }
}
