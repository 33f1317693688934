//! Pseudo-Boolean constraints: OPB input, mixed-radix bases and encoding.

pub mod base;
pub mod encode;
pub mod opb;

use crate::card::Relation;
use crate::cnf::Lit;

/// `Σ a_i · l_i  rel  k` with signed coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbConstraint {
    pub terms: Vec<(i64, Lit)>,
    pub rel: Relation,
    pub k: i64,
}

impl PbConstraint {
    /// Left-hand side under a total model.
    pub fn lhs(&self, model: &[bool]) -> i128 {
        self.terms.iter().filter(|(_, l)| l.eval(model)).map(|&(a, _)| a as i128).sum()
    }

    pub fn holds(&self, model: &[bool]) -> bool {
        let lhs = self.lhs(model);
        let k = self.k as i128;
        match self.rel {
            Relation::Lt => lhs < k,
            Relation::Le => lhs <= k,
            Relation::Eq => lhs == k,
            Relation::Ge => lhs >= k,
            Relation::Gt => lhs > k,
        }
    }
}

pub use base::{find_base, to_digits, value_of, MixedRadixBase};
pub use encode::{encode_goal_bound, encode_pb, encode_pb_constraint, normalize_pb, simplify_rhs, DigitPlan, GeConstraint, NormalizedPb};
pub use opb::{parse_opb, OpbError, PbProblem, VarNames};
