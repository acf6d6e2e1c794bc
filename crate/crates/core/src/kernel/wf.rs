//! Well-formedness (sort checking) of terms and formulas against a signature.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::signature::Signature;
use super::syntax::{Formula, Term};

/// Variable name to sort.
pub type Context = BTreeMap<String, String>;

/// Child-index path from the root of the checked expression to a subterm.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position(pub Vec<usize>);

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WfError {
    #[error("unknown symbol `{symbol}` at {position}")]
    UnknownSymbol { symbol: String, position: Position },
    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: Position },
    #[error("unknown sort `{sort}` at {position}")]
    UnknownSort { sort: String, position: Position },
    #[error("`{symbol}` expects {expected} argument(s), found {found} at {position}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        position: Position,
    },
    #[error("expected sort `{expected}`, found `{found}` at {position}")]
    SortMismatch {
        expected: String,
        found: String,
        position: Position,
    },
    #[error("equation sides have sorts `{left}` and `{right}` at {position}")]
    EqSortMismatch {
        left: String,
        right: String,
        position: Position,
    },
}

impl WfError {
    pub fn position(&self) -> &Position {
        match self {
            WfError::UnknownSymbol { position, .. }
            | WfError::UnknownVariable { position, .. }
            | WfError::UnknownSort { position, .. }
            | WfError::ArityMismatch { position, .. }
            | WfError::SortMismatch { position, .. }
            | WfError::EqSortMismatch { position, .. } => position,
        }
    }
}

struct Scope<'a> {
    base: &'a Context,
    bound: Vec<(&'a str, &'a str)>,
}

impl<'a> Scope<'a> {
    fn lookup(&self, name: &str) -> Option<&str> {
        self.bound
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| *s)
            .or_else(|| self.base.get(name).map(String::as_str))
    }
}

fn term_sort<'a>(
    sig: &Signature,
    scope: &Scope<'a>,
    t: &'a Term,
    pos: &mut Vec<usize>,
) -> Result<String, WfError> {
    match t {
        Term::Var(v) => match scope.lookup(&v.name) {
            None => Err(WfError::UnknownVariable {
                name: v.name.clone(),
                position: Position(pos.clone()),
            }),
            Some(s) if s != v.sort => Err(WfError::SortMismatch {
                expected: s.to_string(),
                found: v.sort.clone(),
                position: Position(pos.clone()),
            }),
            Some(s) => Ok(s.to_string()),
        },
        Term::App(name, args) => {
            let decl = sig.function(name).ok_or_else(|| WfError::UnknownSymbol {
                symbol: name.clone(),
                position: Position(pos.clone()),
            })?;
            check_args(sig, scope, name, &decl.args, args, pos)?;
            Ok(decl.result.clone())
        }
    }
}

fn check_args<'a>(
    sig: &Signature,
    scope: &Scope<'a>,
    name: &str,
    expected: &[String],
    args: &'a [Term],
    pos: &mut Vec<usize>,
) -> Result<(), WfError> {
    if expected.len() != args.len() {
        return Err(WfError::ArityMismatch {
            symbol: name.to_string(),
            expected: expected.len(),
            found: args.len(),
            position: Position(pos.clone()),
        });
    }
    for (i, (want, arg)) in expected.iter().zip(args).enumerate() {
        pos.push(i);
        let got = term_sort(sig, scope, arg, pos)?;
        if &got != want {
            return Err(WfError::SortMismatch {
                expected: want.clone(),
                found: got,
                position: Position(pos.clone()),
            });
        }
        pos.pop();
    }
    Ok(())
}

/// Sort of `t` under `ctx`.
pub fn wf_term(sig: &Signature, ctx: &Context, t: &Term) -> Result<String, WfError> {
    let scope = Scope {
        base: ctx,
        bound: Vec::new(),
    };
    term_sort(sig, &scope, t, &mut Vec::new())
}

fn check_formula<'a>(
    sig: &Signature,
    scope: &mut Scope<'a>,
    f: &'a Formula,
    pos: &mut Vec<usize>,
) -> Result<(), WfError> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Pred(name, args) => {
            let arity = sig.predicate(name).ok_or_else(|| WfError::UnknownSymbol {
                symbol: name.clone(),
                position: Position(pos.clone()),
            })?;
            check_args(sig, scope, name, arity, args, pos)
        }
        Formula::Eq(a, b) => {
            pos.push(0);
            let left = term_sort(sig, scope, a, pos)?;
            pos.pop();
            pos.push(1);
            let right = term_sort(sig, scope, b, pos)?;
            pos.pop();
            if left != right {
                return Err(WfError::EqSortMismatch {
                    left,
                    right,
                    position: Position(pos.clone()),
                });
            }
            Ok(())
        }
        Formula::Not(a) => {
            pos.push(0);
            check_formula(sig, scope, a, pos)?;
            pos.pop();
            Ok(())
        }
        Formula::Binary(_, a, b) => {
            pos.push(0);
            check_formula(sig, scope, a, pos)?;
            pos.pop();
            pos.push(1);
            check_formula(sig, scope, b, pos)?;
            pos.pop();
            Ok(())
        }
        Formula::Quant(_, v, body) => {
            if !sig.has_sort(&v.sort) {
                return Err(WfError::UnknownSort {
                    sort: v.sort.clone(),
                    position: Position(pos.clone()),
                });
            }
            scope.bound.push((&v.name, &v.sort));
            pos.push(0);
            let r = check_formula(sig, scope, body, pos);
            pos.pop();
            scope.bound.pop();
            r
        }
    }
}

/// Succeeds iff every atomic part of `f` is well-formed; binders shadow `ctx`.
pub fn wf_formula(sig: &Signature, ctx: &Context, f: &Formula) -> Result<(), WfError> {
    let mut scope = Scope {
        base: ctx,
        bound: Vec::new(),
    };
    check_formula(sig, &mut scope, f, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::syntax::Var;

    fn monoid() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("M").unwrap();
        sig.add_function("e", vec![], "M").unwrap();
        sig.add_function("op", vec!["M".into(), "M".into()], "M").unwrap();
        sig
    }

    fn e() -> Term {
        Term::constant("e")
    }

    #[test]
    fn op_e_e_has_sort_m() {
        let t = Term::app("op", vec![e(), e()]);
        assert_eq!(wf_term(&monoid(), &Context::new(), &t).unwrap(), "M");
    }

    #[test]
    fn variable_lookup() {
        let ctx = Context::from([("x".to_string(), "M".to_string())]);
        assert_eq!(wf_term(&Signature::new(), &ctx, &Term::var("x", "M")).unwrap(), "M");
    }

    #[test]
    fn unary_op_is_arity_mismatch() {
        let t = Term::app("op", vec![e()]);
        assert!(matches!(
            wf_term(&monoid(), &Context::new(), &t),
            Err(WfError::ArityMismatch { expected: 2, found: 1, .. })
        ));
    }

    #[test]
    fn unknown_symbol_reports_position() {
        let t = Term::app("op", vec![e(), Term::constant("zero")]);
        let err = wf_term(&monoid(), &Context::new(), &t).unwrap_err();
        assert_eq!(
            err,
            WfError::UnknownSymbol {
                symbol: "zero".into(),
                position: Position(vec![1])
            }
        );
    }

    #[test]
    fn left_identity_axiom_is_well_formed() {
        let x = Term::var("x", "M");
        let f = Formula::forall(
            Var::new("x", "M"),
            Formula::eq(Term::app("op", vec![e(), x.clone()]), x),
        );
        wf_formula(&monoid(), &Context::new(), &f).unwrap();
        wf_formula(&monoid(), &Context::new(), &Formula::True).unwrap();
    }

    #[test]
    fn free_variable_without_context() {
        let f = Formula::eq(Term::app("op", vec![e(), e()]), Term::var("x", "M"));
        assert!(matches!(
            wf_formula(&monoid(), &Context::new(), &f),
            Err(WfError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn binder_shadows_outer_sort() {
        let mut sig = monoid();
        sig.add_sort("N").unwrap();
        let ctx = Context::from([("x".to_string(), "N".to_string())]);
        let x = Term::var("x", "M");
        let f = Formula::forall(Var::new("x", "M"), Formula::eq(x.clone(), x));
        wf_formula(&sig, &ctx, &f).unwrap();
    }

    #[test]
    fn equation_sorts_must_agree() {
        let mut sig = monoid();
        sig.add_sort("N").unwrap();
        sig.add_function("z", vec![], "N").unwrap();
        let f = Formula::eq(e(), Term::constant("z"));
        assert!(matches!(
            wf_formula(&sig, &Context::new(), &f),
            Err(WfError::EqSortMismatch { .. })
        ));
    }
}
