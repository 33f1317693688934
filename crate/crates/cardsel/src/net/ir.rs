//! Network representation: wires, selector and combine-pair gates, 0-1
//! evaluation and gate statistics.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::seq::BitSeq;

/// Source of a value inside a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wire {
    /// Network input slot (0-based).
    Input(usize),
    /// Constant 0 or 1; never allocates a CNF variable.
    Const(bool),
    /// Output position `pos` (0-based) of gate `gate`.
    Gate { gate: usize, pos: usize },
}

/// Gate kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// `m`-selector of order `n`. It exposes `n` positional outputs holding
    /// its inputs in non-increasing order; positions `1..=m` are the
    /// selector's guaranteed outputs, later positions are encoded only when
    /// something consumes them.
    Selector { n: usize, m: usize },
    /// Fused pair of the two-column combine step. Inputs are
    /// `[y(i-2), y(i-1), y(i), x(i), x(i+1), x(i+2)]`; outputs are
    /// `[x''(i), y''(i)]`, or only `[x''(i)]` for the odd edge position.
    CombinePair { outputs: usize },
}

impl GateKind {
    pub fn num_outputs(&self) -> usize {
        match *self {
            GateKind::Selector { n, .. } => n,
            GateKind::CombinePair { outputs } => outputs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<Wire>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("input length {got} does not match network order {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    Domain(String),
}

/// A generalized selection network: gates in topological order plus the
/// designated output sequence (a permutation of all inputs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    num_inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    k: usize,
}

/// Gate counts by selector order and output count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateHistogram {
    pub selectors: BTreeMap<(usize, usize), usize>,
    pub combines: usize,
}

impl GateHistogram {
    /// Selector gates of order `n`, any output count.
    pub fn of_order(&self, n: usize) -> usize {
        self.selectors.iter().filter(|((o, _), _)| *o == n).map(|(_, c)| c).sum()
    }

    pub fn total(&self) -> usize {
        self.selectors.values().sum::<usize>() + self.combines
    }
}

impl Network {
    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    /// Number of leading outputs the network guarantees to be top sorted.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// Evaluates all outputs on a 0-1 input.
    pub fn eval(&self, input: &[bool]) -> Result<BitSeq, NetError> {
        if input.len() != self.num_inputs {
            return Err(NetError::LengthMismatch { expected: self.num_inputs, got: input.len() });
        }
        let mut values: Vec<Vec<bool>> = Vec::with_capacity(self.gates.len());
        let read = |values: &Vec<Vec<bool>>, w: Wire| match w {
            Wire::Input(i) => input[i],
            Wire::Const(b) => b,
            Wire::Gate { gate, pos } => values[gate][pos],
        };
        for g in &self.gates {
            let ins: Vec<bool> = g.inputs.iter().map(|&w| read(&values, w)).collect();
            values.push(eval_gate(g.kind, &ins));
        }
        Ok(self.outputs.iter().map(|&w| read(&values, w)).collect())
    }

    /// The first `k` outputs.
    pub fn eval_selected(&self, input: &[bool]) -> Result<BitSeq, NetError> {
        let mut out = self.eval(input)?;
        out.truncate(self.k);
        Ok(out)
    }

    pub fn gate_histogram(&self) -> GateHistogram {
        let mut h = GateHistogram::default();
        for g in &self.gates {
            match g.kind {
                GateKind::Selector { n, m } => *h.selectors.entry((n, m)).or_default() += 1,
                GateKind::CombinePair { .. } => h.combines += 1,
            }
        }
        h
    }

    /// Exact `(V, C)` of the up-polarity standard encoding before the output
    /// assertion; `V` excludes input variables.
    pub fn cnf_cost(&self) -> (usize, usize) {
        crate::card::emit::cost(self, crate::card::emit::Polarity::Up)
    }
}

/// Semantics of one gate on 0-1 values.
pub fn eval_gate(kind: GateKind, ins: &[bool]) -> Vec<bool> {
    match kind {
        GateKind::Selector { n, .. } => {
            let t = ins.iter().filter(|&&b| b).count();
            (0..n).map(|p| p < t).collect()
        }
        GateKind::CombinePair { outputs } => {
            let [ym2, ym1, y0, x0, x1, x2] = [ins[0], ins[1], ins[2], ins[3], ins[4], ins[5]];
            let xo = (x1 || ym1) && x0 && ym2;
            let yo = x2 || y0 || (x1 && ym1);
            if outputs == 2 {
                vec![xo, yo]
            } else {
                vec![xo]
            }
        }
    }
}

/// Three-valued evaluation of the combine outputs used for constant folding:
/// `x'' = (y(i-1) ∧ x(i)) ∨ (y(i-2) ∧ x(i+1))`,
/// `y'' = y(i) ∨ x(i+2) ∨ (y(i-1) ∧ x(i+1))`.
pub fn combine_static(ins: &[Option<bool>; 6]) -> [Option<bool>; 2] {
    fn and(a: Option<bool>, b: Option<bool>) -> Option<bool> {
        match (a, b) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        }
    }
    fn or(a: Option<bool>, b: Option<bool>) -> Option<bool> {
        match (a, b) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        }
    }
    let [ym2, ym1, y0, x0, x1, x2] = *ins;
    let xo = or(and(ym1, x0), and(ym2, x1));
    let yo = or(or(y0, x2), and(ym1, x1));
    [xo, yo]
}

/// For each combine output that is not constant, the index of an input it
/// equals under every completion of the unknown inputs.
pub fn combine_passthrough(ins: &[Option<bool>; 6]) -> [Option<usize>; 2] {
    let free: Vec<usize> = (0..6).filter(|&i| ins[i].is_none()).collect();
    let mut out = [None, None];
    for (pos, slot) in out.iter_mut().enumerate() {
        *slot = free.iter().copied().find(|&j| {
            (0..1u32 << free.len()).all(|m| {
                let mut v = [false; 6];
                for i in 0..6 {
                    v[i] = ins[i].unwrap_or(false);
                }
                for (bit, &f) in free.iter().enumerate() {
                    v[f] = (m >> bit) & 1 == 1;
                }
                eval_gate(GateKind::CombinePair { outputs: 2 }, &v)[pos] == v[j]
            })
        });
        if combine_static(ins)[pos].is_some() {
            *slot = None;
        }
    }
    out
}

/// Incremental network construction with static constant tracking.
#[derive(Clone, Debug)]
pub struct NetBuilder {
    num_inputs: usize,
    gates: Vec<Gate>,
    statics: Vec<Vec<Option<bool>>>,
}

impl NetBuilder {
    pub fn new(num_inputs: usize) -> NetBuilder {
        NetBuilder { num_inputs, gates: Vec::new(), statics: Vec::new() }
    }

    pub fn inputs(&self) -> Vec<Wire> {
        (0..self.num_inputs).map(Wire::Input).collect()
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    /// Value of a wire when it is fixed regardless of the network input.
    pub fn static_value(&self, w: Wire) -> Option<bool> {
        match w {
            Wire::Input(_) => None,
            Wire::Const(b) => Some(b),
            Wire::Gate { gate, pos } => self.statics[gate][pos],
        }
    }

    /// Adds an `m`-selector over `inputs` and returns all `n` positional
    /// outputs. Selectors with at most one non-constant input are folded
    /// into wiring.
    pub fn selector(&mut self, inputs: &[Wire], m: usize) -> Vec<Wire> {
        let n = inputs.len();
        assert!(m >= 1 && m <= n, "selector needs 1 <= m <= n");
        let statics: Vec<Option<bool>> = inputs.iter().map(|&w| self.static_value(w)).collect();
        let t = statics.iter().filter(|s| **s == Some(true)).count();
        let f = statics.iter().filter(|s| **s == Some(false)).count();
        if n - t - f <= 1 {
            let mut out = vec![Wire::Const(true); t];
            out.extend(inputs.iter().zip(&statics).filter(|(_, s)| s.is_none()).map(|(w, _)| *w));
            out.extend(std::iter::repeat_n(Wire::Const(false), f));
            return out;
        }
        let id = self.gates.len();
        self.gates.push(Gate { kind: GateKind::Selector { n, m }, inputs: inputs.to_vec() });
        self.statics.push(
            (0..n)
                .map(|p| {
                    if p < t {
                        Some(true)
                    } else if p >= n - f {
                        Some(false)
                    } else {
                        None
                    }
                })
                .collect(),
        );
        (0..n).map(|pos| Wire::Gate { gate: id, pos }).collect()
    }

    /// A comparator; returns `(max, min)`.
    pub fn sort2(&mut self, a: Wire, b: Wire) -> (Wire, Wire) {
        let out = self.selector(&[a, b], 2);
        (out[0], out[1])
    }

    /// Adds a fused combine pair. Outputs that are statically constant or
    /// always equal to one input are returned as that wire; no gate is added
    /// when every output folds.
    pub fn combine_pair(&mut self, inputs: [Wire; 6], outputs: usize) -> Vec<Wire> {
        assert!(outputs == 1 || outputs == 2);
        let st = inputs.map(|w| self.static_value(w));
        let folded = combine_static(&st);
        let pass = combine_passthrough(&st);
        let fixed: Vec<Option<Wire>> = (0..outputs)
            .map(|pos| match (folded[pos], pass[pos]) {
                (Some(b), _) => Some(Wire::Const(b)),
                (None, Some(j)) => Some(inputs[j]),
                (None, None) => None,
            })
            .collect();
        if fixed.iter().all(Option::is_some) {
            return fixed.into_iter().flatten().collect();
        }
        let id = self.gates.len();
        self.gates.push(Gate { kind: GateKind::CombinePair { outputs }, inputs: inputs.to_vec() });
        self.statics.push(folded[..outputs].to_vec());
        fixed
            .into_iter()
            .enumerate()
            .map(|(pos, f)| f.unwrap_or(Wire::Gate { gate: id, pos }))
            .collect()
    }

    pub fn finish(self, outputs: Vec<Wire>, k: usize) -> Network {
        assert_eq!(outputs.len(), self.num_inputs, "outputs must be a permutation of the inputs");
        Network { num_inputs: self.num_inputs, gates: self.gates, outputs, k: k.min(self.num_inputs) }
    }

    /// Network whose outputs need not cover every input (fragments).
    pub fn finish_partial(self, outputs: Vec<Wire>, k: usize) -> Network {
        let k = k.min(outputs.len());
        Network { num_inputs: self.num_inputs, gates: self.gates, outputs, k }
    }
}
