//! Shape-driven generators. A shape is a signature-independent random tree;
//! `Builder` reads it against a signature and a variable scope and always
//! produces a closed, well-formed formula. Shrinking a shape shrinks the
//! formula.

use proptest::prelude::*;
use tgc_core::kernel::{Connective, Formula, Quantifier, Signature, Term, Var};

#[derive(Clone, Debug)]
pub struct TermShape {
    pub pick: u8,
    pub args: Vec<TermShape>,
}

#[derive(Clone, Debug)]
pub enum FormulaShape {
    Top,
    Bot,
    Eq(u8, TermShape, TermShape),
    Pred(u8, Vec<TermShape>),
    Not(Box<FormulaShape>),
    Bin(Connective, Box<FormulaShape>, Box<FormulaShape>),
    Quant(Quantifier, u8, u8, Box<FormulaShape>),
}

pub const VAR_NAMES: &[&str] = &["x", "y", "z", "w"];

pub fn term_shape() -> impl Strategy<Value = TermShape> {
    let leaf = any::<u8>().prop_map(|pick| TermShape { pick, args: Vec::new() });
    leaf.prop_recursive(3, 16, 3, |inner| {
        (any::<u8>(), prop::collection::vec(inner, 0..3)).prop_map(|(pick, args)| TermShape { pick, args })
    })
}

fn connective() -> impl Strategy<Value = Connective> {
    prop_oneof![
        Just(Connective::And),
        Just(Connective::Or),
        Just(Connective::Implies),
        Just(Connective::Iff)
    ]
}

fn quantifier() -> impl Strategy<Value = Quantifier> {
    prop_oneof![Just(Quantifier::Forall), Just(Quantifier::Exists)]
}

pub fn formula_shape() -> impl Strategy<Value = FormulaShape> {
    let leaf = prop_oneof![
        1 => Just(FormulaShape::Top),
        1 => Just(FormulaShape::Bot),
        4 => (any::<u8>(), term_shape(), term_shape()).prop_map(|(s, a, b)| FormulaShape::Eq(s, a, b)),
        2 => (any::<u8>(), prop::collection::vec(term_shape(), 0..3)).prop_map(|(p, a)| FormulaShape::Pred(p, a)),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            1 => inner.clone().prop_map(|f| FormulaShape::Not(Box::new(f))),
            3 => (connective(), inner.clone(), inner.clone())
                .prop_map(|(c, a, b)| FormulaShape::Bin(c, Box::new(a), Box::new(b))),
            3 => (quantifier(), any::<u8>(), any::<u8>(), inner)
                .prop_map(|(q, n, s, f)| FormulaShape::Quant(q, n, s, Box::new(f))),
        ]
    })
}

pub struct Builder<'a> {
    sig: &'a Signature,
    sorts: Vec<String>,
}

const TERM_FUEL: usize = 4;

impl<'a> Builder<'a> {
    /// Every sort of `sig` must have a closed term.
    pub fn new(sig: &'a Signature) -> Self {
        Builder {
            sig,
            sorts: sig.sorts().cloned().collect(),
        }
    }

    fn pick<'s>(&self, xs: &'s [String], i: u8) -> &'s String {
        &xs[i as usize % xs.len()]
    }

    /// Visible variables of `sort`: innermost binder wins per name.
    fn visible(scope: &[Var], sort: &str) -> Vec<Var> {
        let mut seen = Vec::<&str>::new();
        let mut out = Vec::new();
        for v in scope.iter().rev() {
            if seen.contains(&v.name.as_str()) {
                continue;
            }
            seen.push(&v.name);
            if v.sort == sort {
                out.push(v.clone());
            }
        }
        out
    }

    pub fn term(&self, shape: &TermShape, sort: &str, scope: &[Var]) -> Term {
        self.term_fuel(shape, sort, scope, TERM_FUEL)
    }

    fn term_fuel(&self, shape: &TermShape, sort: &str, scope: &[Var], fuel: usize) -> Term {
        let vars = Self::visible(scope, sort);
        let funcs: Vec<(&String, &Vec<String>)> = self
            .sig
            .functions()
            .filter(|(_, d)| d.result == sort && (fuel > 0 || d.args.is_empty()))
            .map(|(n, d)| (n, &d.args))
            .collect();
        let n = vars.len() + funcs.len();
        if n == 0 {
            // Out of fuel with no leaf: fall back to any producer.
            let (name, args) = self
                .sig
                .functions()
                .find(|(_, d)| d.result == sort)
                .expect("every sort has a closed term");
            let leaf = TermShape { pick: 0, args: Vec::new() };
            let args = args.args.iter().map(|s| self.term_fuel(&leaf, s, scope, 0)).collect();
            return Term::app(name.clone(), args);
        }
        let i = shape.pick as usize % n;
        if i < vars.len() {
            return Term::Var(vars[i].clone());
        }
        let (name, arg_sorts) = funcs[i - vars.len()];
        let leaf = TermShape { pick: shape.pick / 3, args: Vec::new() };
        let args = arg_sorts
            .iter()
            .enumerate()
            .map(|(k, s)| self.term_fuel(shape.args.get(k).unwrap_or(&leaf), s, scope, fuel.saturating_sub(1)))
            .collect();
        Term::app(name.clone(), args)
    }

    pub fn formula(&self, shape: &FormulaShape) -> Formula {
        self.formula_in(shape, &mut Vec::new())
    }

    /// A formula whose free variables are among `free`.
    pub fn open_formula(&self, shape: &FormulaShape, free: &[Var]) -> Formula {
        self.formula_in(shape, &mut free.to_vec())
    }

    fn formula_in(&self, shape: &FormulaShape, scope: &mut Vec<Var>) -> Formula {
        match shape {
            FormulaShape::Top => Formula::True,
            FormulaShape::Bot => Formula::False,
            FormulaShape::Eq(s, a, b) => {
                let sort = self.pick(&self.sorts, *s).clone();
                Formula::eq(self.term(a, &sort, scope), self.term(b, &sort, scope))
            }
            FormulaShape::Pred(p, args) => {
                let preds: Vec<(&String, &Vec<String>)> = self.sig.predicates().collect();
                if preds.is_empty() {
                    let sort = self.pick(&self.sorts, *p).clone();
                    let leaf = TermShape { pick: *p, args: Vec::new() };
                    let a = args.first().unwrap_or(&leaf);
                    let b = args.get(1).unwrap_or(&leaf);
                    return Formula::eq(self.term(a, &sort, scope), self.term(b, &sort, scope));
                }
                let (name, arg_sorts) = preds[*p as usize % preds.len()];
                let leaf = TermShape { pick: *p, args: Vec::new() };
                let terms = arg_sorts
                    .iter()
                    .enumerate()
                    .map(|(k, s)| self.term(args.get(k).unwrap_or(&leaf), s, scope))
                    .collect();
                Formula::pred(name.clone(), terms)
            }
            FormulaShape::Not(f) => Formula::not(self.formula_in(f, scope)),
            FormulaShape::Bin(c, a, b) => Formula::Binary(
                *c,
                Box::new(self.formula_in(a, scope)),
                Box::new(self.formula_in(b, scope)),
            ),
            FormulaShape::Quant(q, n, s, body) => {
                let v = Var::new(VAR_NAMES[*n as usize % VAR_NAMES.len()], self.pick(&self.sorts, *s).clone());
                scope.push(v.clone());
                let body = self.formula_in(body, scope);
                scope.pop();
                Formula::Quant(*q, v, Box::new(body))
            }
        }
    }
}

/// Closed well-formed formulas over `sig`.
pub fn closed_formula(sig: Signature) -> impl Strategy<Value = Formula> {
    formula_shape().prop_map(move |s| Builder::new(&sig).formula(&s))
}

/// Closed terms of `sort` over `sig`.
pub fn closed_term(sig: Signature, sort: String) -> impl Strategy<Value = Term> {
    term_shape().prop_map(move |s| Builder::new(&sig).term(&s, &sort, &[]))
}

/// Terms over `vars` (plus the signature's symbols).
pub fn open_term(sig: Signature, sort: String, vars: Vec<Var>) -> impl Strategy<Value = Term> {
    term_shape().prop_map(move |s| Builder::new(&sig).term(&s, &sort, &vars))
}
