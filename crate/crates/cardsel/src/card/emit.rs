//! Clause emission for networks: selector clause sets, fused combine
//! clauses, constant flow and on-demand residue outputs.

use itertools::Itertools;

use crate::cnf::{CnfFormula, Lit};
use crate::net::ir::{combine_passthrough, combine_static, GateKind, Network, Wire};

/// Direction of the implications emitted for each gate.
///
/// `Up` clauses propagate ones forward (inputs imply outputs) and are the
/// standard encoding of `≤` constraints. `Down` clauses propagate zeros
/// (outputs imply inputs) and make asserting an output true sound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Up,
    Down,
}

/// Emits `net` over `inputs` and returns literals for its first `need`
/// outputs.
pub fn emit_network(
    formula: &mut CnfFormula,
    net: &Network,
    inputs: &[Lit],
    polarity: Polarity,
    need: usize,
) -> Vec<Lit> {
    assert_eq!(inputs.len(), net.num_inputs(), "one literal per network input");
    let need = need.min(net.outputs().len());
    let gates = net.gates();
    let mut demand: Vec<usize> = gates
        .iter()
        .map(|g| match g.kind {
            GateKind::Selector { m, .. } => m,
            GateKind::CombinePair { .. } => 0,
        })
        .collect();
    let mut wanted: Vec<[bool; 2]> = vec![[false; 2]; gates.len()];
    let consumed = gates.iter().flat_map(|g| g.inputs.iter()).chain(net.outputs()[..need].iter());
    for w in consumed {
        if let Wire::Gate { gate, pos } = *w {
            demand[gate] = demand[gate].max(pos + 1);
            if pos < 2 {
                wanted[gate][pos] = true;
            }
        }
    }

    let mut lits: Vec<Vec<Lit>> = Vec::with_capacity(gates.len());
    let resolve = |lits: &Vec<Vec<Lit>>, w: Wire| match w {
        Wire::Input(i) => inputs[i],
        Wire::Const(b) => Lit::constant(b),
        Wire::Gate { gate, pos } => lits[gate][pos],
    };
    for (g, gate) in gates.iter().enumerate() {
        let ins: Vec<Lit> = gate.inputs.iter().map(|&w| resolve(&lits, w)).collect();
        let out = match gate.kind {
            GateKind::Selector { .. } => emit_selector(formula, &ins, demand[g], polarity),
            GateKind::CombinePair { outputs } => {
                let arr: [Lit; 6] = ins.try_into().expect("combine pair has six inputs");
                emit_combine(formula, &arr, &wanted[g][..outputs], polarity)
            }
        };
        lits.push(out);
    }
    net.outputs()[..need].iter().map(|&w| resolve(&lits, w)).collect()
}

/// Emits the selector clause set for output positions `1..=demand`.
///
/// Up: `x_{i1} ∧ … ∧ x_{ip} ⇒ y_p`. Down: `y_p ⇒` some input among any
/// `n − p + 1`. Constant inputs are counted and removed first, so forced
/// outputs become constants and allocate no variable.
pub fn emit_selector(formula: &mut CnfFormula, ins: &[Lit], demand: usize, polarity: Polarity) -> Vec<Lit> {
    let t = ins.iter().filter(|l| l.const_value() == Some(true)).count();
    let free: Vec<Lit> = ins.iter().copied().filter(|l| !l.is_const()).collect();
    let r = free.len();
    let mut out = Vec::with_capacity(demand);
    for p in 1..=demand {
        if p <= t {
            out.push(Lit::TRUE);
            continue;
        }
        if p > t + r {
            out.push(Lit::FALSE);
            continue;
        }
        let y = formula.fresh_lit();
        let q = p - t;
        match polarity {
            Polarity::Up => {
                for subset in free.iter().combinations(q) {
                    let mut c: Vec<Lit> = subset.into_iter().map(|&l| !l).collect();
                    c.push(y);
                    formula.add_clause(&c);
                }
            }
            Polarity::Down => {
                for subset in free.iter().combinations(r - q + 1) {
                    let mut c: Vec<Lit> = subset.into_iter().copied().collect();
                    c.push(!y);
                    formula.add_clause(&c);
                }
            }
        }
        out.push(y);
    }
    out
}

/// Emits one fused combine pair; inputs `[y(i-2), y(i-1), y(i), x(i), x(i+1), x(i+2)]`.
/// Only the positions flagged in `wanted` get clauses; the others are
/// returned as `Lit::FALSE` placeholders.
pub fn emit_combine(formula: &mut CnfFormula, ins: &[Lit; 6], wanted: &[bool], polarity: Polarity) -> Vec<Lit> {
    let st = ins.map(|l| l.const_value());
    let folded = combine_static(&st);
    let pass = combine_passthrough(&st);
    let [ym2, ym1, y0, x0, x1, x2] = *ins;
    let mut out = Vec::with_capacity(wanted.len());
    for (pos, &want) in wanted.iter().enumerate() {
        if let Some(b) = folded[pos] {
            out.push(Lit::constant(b));
            continue;
        }
        if let Some(j) = pass[pos] {
            out.push(ins[j]);
            continue;
        }
        if !want {
            out.push(Lit::FALSE);
            continue;
        }
        let o = formula.fresh_lit();
        match (pos, polarity) {
            (0, Polarity::Up) => {
                formula.add_clause(&[!ym1, !x0, o]);
                formula.add_clause(&[!ym2, !x1, o]);
            }
            (0, Polarity::Down) => {
                formula.add_clause(&[!o, x0]);
                formula.add_clause(&[!o, ym2]);
                formula.add_clause(&[!o, ym1, x1]);
            }
            (_, Polarity::Up) => {
                formula.add_clause(&[!y0, o]);
                formula.add_clause(&[!x2, o]);
                formula.add_clause(&[!ym1, !x1, o]);
            }
            (_, Polarity::Down) => {
                formula.add_clause(&[!o, ym1, x2]);
                formula.add_clause(&[!o, y0, x1]);
            }
        }
        out.push(o);
    }
    out
}

/// `(V, C)` of emitting `net` on fresh inputs with its first `k` outputs
/// demanded; `V` excludes the input variables.
pub fn cost(net: &Network, polarity: Polarity) -> (usize, usize) {
    let n = net.num_inputs();
    let mut f = CnfFormula::with_vars(n as u32);
    let inputs: Vec<Lit> = (1..=n as u32).map(Lit::pos).collect();
    emit_network(&mut f, net, &inputs, polarity, net.k());
    (f.num_vars() as usize - n, f.num_clauses())
}
