//! Test support for the tgc crates: corpus loading, shrinkable generators for
//! well-formed formulas and declarations, and single-step derivation mutations.

pub mod corpus;
pub mod decls;
pub mod gen;
pub mod mutate;
