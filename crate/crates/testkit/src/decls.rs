//! Random declaration modules for printer round trips: a theory with a
//! random signature and axioms, an assumed theorem, and an explicit
//! endomorphism mapping every symbol to itself.

use std::sync::Arc;

use proptest::prelude::*;
use tgc_core::frontend::*;
use tgc_core::kernel::{Formula, Signature, Term, Var};

use crate::gen::{formula_shape, Builder, FormulaShape};

#[derive(Clone, Debug)]
pub struct SigShape {
    pub sorts: usize,
    /// (argument sort picks, result sort pick)
    pub funcs: Vec<(Vec<u8>, u8)>,
    pub preds: Vec<Vec<u8>>,
}

pub fn sig_shape() -> impl Strategy<Value = SigShape> {
    (
        1usize..=3,
        prop::collection::vec((prop::collection::vec(any::<u8>(), 1..=2), any::<u8>()), 0..=3),
        prop::collection::vec(prop::collection::vec(any::<u8>(), 0..=2), 0..=2),
    )
        .prop_map(|(sorts, funcs, preds)| SigShape { sorts, funcs, preds })
}

#[derive(Clone, Debug)]
pub struct ModuleShape {
    pub sig: SigShape,
    pub axioms: Vec<FormulaShape>,
    pub theorem: FormulaShape,
    pub reason: String,
}

pub fn module_shape() -> impl Strategy<Value = ModuleShape> {
    (
        sig_shape(),
        prop::collection::vec(formula_shape(), 0..=3),
        formula_shape(),
        "[a-z \"\\\\]{0,12}",
    )
        .prop_map(|(sig, axioms, theorem, reason)| ModuleShape {
            sig,
            axioms,
            theorem,
            reason,
        })
}

fn span() -> SourceSpan {
    SourceSpan::new(Arc::from("<generated>"), Pos::new(1, 1), Pos::new(1, 2))
}

fn ident(name: impl Into<String>) -> Ident {
    Ident {
        name: name.into(),
        span: span(),
    }
}

fn spanned(formula: Formula) -> SpannedFormula {
    SpannedFormula { formula, span: span() }
}

/// Symbol lists of a signature shape: one constant per sort, then the
/// random functions and predicates.
struct Symbols {
    sorts: Vec<String>,
    funcs: Vec<(String, Vec<String>, String)>,
    preds: Vec<(String, Vec<String>)>,
}

fn symbols(s: &SigShape) -> Symbols {
    let sorts: Vec<String> = (0..s.sorts).map(|i| format!("S{i}")).collect();
    let pick = |i: &u8| sorts[*i as usize % sorts.len()].clone();
    let mut funcs: Vec<(String, Vec<String>, String)> = sorts
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("c{i}"), Vec::new(), s.clone()))
        .collect();
    for (i, (args, res)) in s.funcs.iter().enumerate() {
        funcs.push((format!("f{i}"), args.iter().map(pick).collect(), pick(res)));
    }
    let preds = s
        .preds
        .iter()
        .enumerate()
        .map(|(i, args)| (format!("q{i}"), args.iter().map(pick).collect()))
        .collect();
    Symbols { sorts, funcs, preds }
}

fn signature(sy: &Symbols) -> Signature {
    let mut sig = Signature::new();
    for s in &sy.sorts {
        sig.add_sort(s.clone()).unwrap();
    }
    for (n, args, res) in &sy.funcs {
        sig.add_function(n.clone(), args.clone(), res.clone()).unwrap();
    }
    for (n, args) in &sy.preds {
        sig.add_predicate(n.clone(), args.clone()).unwrap();
    }
    sig
}

fn params(n: usize) -> Vec<Ident> {
    (1..=n).map(|i| ident(format!("a{i}"))).collect()
}

fn param_terms(n: usize) -> Vec<Term> {
    (1..=n).map(|i| Term::Var(Var::new(format!("a{i}"), ""))).collect()
}

/// Three declarations named after `tag`.
pub fn module(tag: usize, shape: &ModuleShape) -> Ast {
    let sy = symbols(&shape.sig);
    let sig = signature(&sy);
    let b = Builder::new(&sig);
    let theory = format!("T{tag}");

    let mut items: Vec<TheoryItem> = sy.sorts.iter().map(|s| TheoryItem::Sort(ident(s))).collect();
    for (n, args, res) in &sy.funcs {
        items.push(TheoryItem::Func {
            name: ident(n),
            args: args.iter().map(ident).collect(),
            result: ident(res),
        });
    }
    for (n, args) in &sy.preds {
        items.push(TheoryItem::Pred {
            name: ident(n),
            args: args.iter().map(ident).collect(),
        });
    }
    for (i, ax) in shape.axioms.iter().enumerate() {
        items.push(TheoryItem::Axiom {
            name: ident(format!("ax{i}")),
            formula: spanned(b.formula(ax)),
        });
    }
    let th = TheoryDecl {
        name: ident(&theory),
        extends: Vec::new(),
        items,
        span: span(),
    };

    let thm = TheoremDecl {
        name: ident(format!("thm{tag}")),
        theory: ident(&theory),
        formula: spanned(b.formula(&shape.theorem)),
        source: TheoremSource::Assumed(shape.reason.clone()),
        span: span(),
    };

    let mut mitems: Vec<MorphismItem> = sy
        .sorts
        .iter()
        .map(|s| MorphismItem::Sort {
            from: ident(s),
            to: ident(s),
        })
        .collect();
    for (n, args, _) in &sy.funcs {
        mitems.push(MorphismItem::Func {
            name: ident(n),
            params: params(args.len()),
            body: Term::app(n.clone(), param_terms(args.len())),
            span: span(),
        });
    }
    for (n, args) in &sy.preds {
        mitems.push(MorphismItem::Pred {
            name: ident(n),
            params: params(args.len()),
            body: spanned(Formula::pred(n.clone(), param_terms(args.len()))),
        });
    }
    let m = MorphismDecl {
        name: ident(format!("Endo{tag}")),
        source: ident(&theory),
        target: ident(&theory),
        assumed: false,
        items: mitems,
        span: span(),
    };
    Ast {
        decls: vec![Decl::Theory(th), Decl::Theorem(thm), Decl::Morphism(m)],
    }
}
