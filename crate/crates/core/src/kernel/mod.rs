//! The single built-in logic: many-sorted classical first-order logic with
//! equality, and the trusted derivation checker.

mod check;
mod derivation;
mod signature;
mod subst;
mod syntax;
mod wf;

pub use check::{check_all_steps, check_derivation, open_context, wf_open_formula, wf_open_term, KernelError};
pub use derivation::{AxiomSource, Derivation, DerivationRef, Param, ParamKind, Rule, Sequent, Step};
pub use signature::{FuncDecl, Signature, SignatureError, SymbolKind};
pub use subst::{
    alpha_eq, free_var_names, free_vars, fresh_name, instantiate, is_closed, substitute, substitute_term, Subst,
};
pub use syntax::{Connective, Formula, Quantifier, Term, Var};
pub use wf::{wf_formula, wf_term, Context, Position, WfError};


/// Identifier of the only logic this crate implements.
pub const MSFOL: &str = "MSFOL";
