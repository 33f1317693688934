//! Cardinality constraints: normalization to `≤` form and CNF encoding via
//! selection networks or baseline encoders.

pub mod baseline;
pub mod emit;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit};
use crate::net::build::{selection_network, PwVariant, SelMethod};
use crate::net::ir::NetError;
use emit::{emit_network, Polarity};

/// Comparison operator of a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        })
    }
}

/// `Σ lits  rel  k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardConstraint {
    pub lits: Vec<Lit>,
    pub rel: Relation,
    pub k: i64,
}

impl CardConstraint {
    pub fn new(lits: Vec<Lit>, rel: Relation, k: i64) -> CardConstraint {
        CardConstraint { lits, rel, k }
    }

    /// Arithmetic check under a total model.
    pub fn holds(&self, model: &[bool]) -> bool {
        let count = self.lits.iter().filter(|l| l.eval(model)).count() as i64;
        match self.rel {
            Relation::Lt => count < self.k,
            Relation::Le => count <= self.k,
            Relation::Eq => count == self.k,
            Relation::Ge => count >= self.k,
            Relation::Gt => count > self.k,
        }
    }
}

/// Encoder family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Network(SelMethod),
    Sequential,
    Totalizer,
    Binomial,
}

impl Method {
    /// Every supported method, network methods first.
    pub const ALL: [Method; 10] = [
        Method::Network(SelMethod::Oe4),
        Method::Network(SelMethod::Oe2),
        Method::Network(SelMethod::Pairwise(PwVariant::Classic)),
        Method::Network(SelMethod::Pairwise(PwVariant::Bitonic)),
        Method::Network(SelMethod::Pairwise(PwVariant::HalfBitonic)),
        Method::Network(SelMethod::Fourwise),
        Method::Network(SelMethod::BitonicSel),
        Method::Sequential,
        Method::Totalizer,
        Method::Binomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Network(SelMethod::Oe4) => "oe4",
            Method::Network(SelMethod::Oe2) => "oe2",
            Method::Network(SelMethod::Pairwise(PwVariant::Classic)) => "pairwise",
            Method::Network(SelMethod::Pairwise(PwVariant::Bitonic)) => "pairwise-bitonic",
            Method::Network(SelMethod::Pairwise(PwVariant::HalfBitonic)) => "pairwise-half-bitonic",
            Method::Network(SelMethod::Fourwise) => "fourwise",
            Method::Network(SelMethod::BitonicSel) => "bitonic",
            Method::Sequential => "sequential",
            Method::Totalizer => "totalizer",
            Method::Binomial => "binomial",
        }
    }

    pub fn is_network(self) -> bool {
        matches!(self, Method::Network(_))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        let alias = match norm.as_str() {
            "pairwise-classic" | "pw" => "pairwise",
            "pairwise-half" | "pairwise-hbit" => "pairwise-half-bitonic",
            "bitonic-sel" => "bitonic",
            "4wise" | "mw" => "fourwise",
            other => other,
        };
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == alias)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Encoder configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncodeOptions {
    pub method: Method,
    /// Weight of variables against clauses in the direct-mixing rule.
    pub lambda: f64,
    pub direct_mixing: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions { method: Method::Network(SelMethod::Oe4), lambda: 5.0, direct_mixing: true }
    }
}

impl EncodeOptions {
    pub fn with_method(method: Method) -> EncodeOptions {
        EncodeOptions { method, ..EncodeOptions::default() }
    }

    /// Mixing weight passed to the planner, `None` when mixing is off.
    pub fn mixing(&self) -> Option<f64> {
        self.direct_mixing.then_some(self.lambda)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EncodeError {
    #[error("bound k = {k} must satisfy 0 <= k < n = {n}")]
    Bound { n: usize, k: i64 },
    #[error("lambda must be positive, got {0}")]
    Lambda(f64),
    #[error(transparent)]
    Network(#[from] NetError),
    #[error("coefficient overflow: {0}")]
    Overflow(String),
    #[error("{0}")]
    Unsupported(String),
}

/// A `≤`-form constraint produced by normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    AtMost { lits: Vec<Lit>, k: usize },
    /// The constraint cannot be satisfied.
    Unsat,
}

/// Rewrites any relation into `≤` constraints. Always-true parts are
/// omitted, so an empty result means the constraint is trivially true.
pub fn normalize_card(c: &CardConstraint) -> Vec<Normalized> {
    let n = c.lits.len() as i64;
    let neg: Vec<Lit> = c.lits.iter().map(|&l| !l).collect();
    let parts: Vec<(Vec<Lit>, i64)> = match c.rel {
        Relation::Le => vec![(c.lits.clone(), c.k)],
        Relation::Lt => vec![(c.lits.clone(), c.k - 1)],
        Relation::Ge => vec![(neg, n - c.k)],
        Relation::Gt => vec![(neg, n - c.k - 1)],
        Relation::Eq => vec![(c.lits.clone(), c.k), (neg, n - c.k)],
    };
    let mut out = Vec::new();
    for (lits, mut k) in parts {
        let mut free = Vec::with_capacity(lits.len());
        for l in lits {
            match l.const_value() {
                Some(true) => k -= 1,
                Some(false) => {}
                None => free.push(l),
            }
        }
        if k < 0 {
            out.push(Normalized::Unsat);
        } else if (k as usize) < free.len() {
            out.push(Normalized::AtMost { lits: free, k: k as usize });
        }
    }
    out
}

/// Result of encoding one `≤ k` constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedConstraint {
    /// Constraint literal fed to each network input, in order.
    pub inputs: Vec<Lit>,
    /// Output literals `y_1, y_2, …` (network methods: `k + 1` of them, the
    /// last asserted false). Empty for `k = 0` and the binomial encoder.
    pub output_lits: Vec<Lit>,
    pub k: usize,
}

/// Standard encoding of `Σ lits ≤ k` with `0 <= k < n`.
pub fn encode_atmost(
    formula: &mut CnfFormula,
    lits: &[Lit],
    k: usize,
    opts: &EncodeOptions,
) -> Result<EncodedConstraint, EncodeError> {
    let n = lits.len();
    if k >= n {
        return Err(EncodeError::Bound { n, k: k as i64 });
    }
    if opts.lambda.is_nan() || opts.lambda <= 0.0 {
        return Err(EncodeError::Lambda(opts.lambda));
    }
    let mut output_lits = Vec::new();
    if k == 0 {
        for &l in lits {
            formula.add_clause(&[!l]);
        }
    } else {
        match opts.method {
            Method::Network(sel) => {
                let net = selection_network(sel, n, k + 1, opts.mixing())?;
                output_lits = emit_network(formula, &net, lits, Polarity::Up, k + 1);
                formula.add_clause(&[!output_lits[k]]);
            }
            Method::Sequential => output_lits = baseline::sequential(formula, lits, k),
            Method::Totalizer => output_lits = baseline::totalizer(formula, lits, k),
            Method::Binomial => baseline::binomial(formula, lits, k),
        }
    }
    Ok(EncodedConstraint { inputs: lits.to_vec(), output_lits, k })
}

/// Encodes any cardinality constraint; unsatisfiable parts add the empty
/// clause.
pub fn encode_card(
    formula: &mut CnfFormula,
    c: &CardConstraint,
    opts: &EncodeOptions,
) -> Result<Vec<EncodedConstraint>, EncodeError> {
    let mut out = Vec::new();
    for part in normalize_card(c) {
        match part {
            Normalized::Unsat => formula.add_clause(&[]),
            Normalized::AtMost { lits, k } => out.push(encode_atmost(formula, &lits, k, opts)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Lit {
        Lit::pos(i)
    }

    #[test]
    fn normalize_examples() {
        let ge = CardConstraint::new(vec![x(1), x(2), x(3)], Relation::Ge, 2);
        assert_eq!(normalize_card(&ge), vec![Normalized::AtMost { lits: vec![!x(1), !x(2), !x(3)], k: 1 }]);
        let eq = CardConstraint::new(vec![x(1), x(2)], Relation::Eq, 1);
        assert_eq!(
            normalize_card(&eq),
            vec![
                Normalized::AtMost { lits: vec![x(1), x(2)], k: 1 },
                Normalized::AtMost { lits: vec![!x(1), !x(2)], k: 1 }
            ]
        );
        let lt = CardConstraint::new(vec![x(1), x(2)], Relation::Lt, 1);
        assert_eq!(normalize_card(&lt), vec![Normalized::AtMost { lits: vec![x(1), x(2)], k: 0 }]);
        let imp = CardConstraint::new(vec![x(1), x(2)], Relation::Ge, 3);
        assert_eq!(normalize_card(&imp), vec![Normalized::Unsat]);
        let triv = CardConstraint::new(vec![x(1), x(2)], Relation::Le, 2);
        assert!(normalize_card(&triv).is_empty());
    }

    #[test]
    fn direct_three_inputs() {
        let mut f = CnfFormula::with_vars(3);
        let enc = encode_atmost(&mut f, &[x(1), x(2), x(3)], 1, &EncodeOptions::default()).unwrap();
        assert_eq!((f.num_vars() - 3, f.num_clauses()), (2, 7));
        assert_eq!(enc.output_lits.len(), 2);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }
}
