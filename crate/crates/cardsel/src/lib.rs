//! Cardinality and pseudo-Boolean constraints compiled to CNF through
//! generalized selection networks.

pub mod card;
pub mod cnf;
pub mod cnfp;
pub mod formulas;
pub mod net;
pub mod pb;
pub mod seq;
pub mod solve;
pub mod up;
pub mod verify;
pub mod cli;
pub mod ledger;
pub mod stats;

#[cfg(doctest)]
#[doc = include_str!("../../../docs/encoders.md")]
pub struct EncoderGuide;
