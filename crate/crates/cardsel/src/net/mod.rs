//! Comparator-network intermediate representation and constructions.

pub mod build;
pub mod ir;
