//! Terms and formulas of many-sorted first-order logic with equality.

use std::collections::BTreeSet;
use std::fmt;

/// A sorted variable. Two variables are the same variable iff name and sort agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: sort.into(),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// All variables occurring in the term.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::And, Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::Or, Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::Implies, Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Binary(Connective::Iff, Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, v, Box::new(body))
    }

    /// Nested universal closure over `vars`, outermost first.
    pub fn forall_all(vars: impl IntoIterator<Item = Var>, body: Formula) -> Self {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn binary_parts(&self, c: Connective) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Binary(k, a, b) if *k == c => Some((a, b)),
            _ => None,
        }
    }

    pub fn quant_parts(&self, q: Quantifier) -> Option<(&Var, &Formula)> {
        match self {
            Formula::Quant(k, v, body) if *k == q => Some((v, body)),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Pred(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::Binary(_, a, b) => 1 + a.size() + b.size(),
            Formula::Quant(_, _, body) => 1 + body.size(),
        }
    }
}

// Printing. Binding strength, loosest first: quantifiers, <->, ->, \/, /\, ~, atoms.
// `->` and `<->` associate to the right, `/\` and `\/` to the left.

pub(crate) const PREC_QUANT: u8 = 0;
pub(crate) const PREC_NOT: u8 = 5;
pub(crate) const PREC_ATOM: u8 = 6;

pub(crate) fn connective_prec(c: Connective) -> u8 {
    match c {
        Connective::Iff => 1,
        Connective::Implies => 2,
        Connective::Or => 3,
        Connective::And => 4,
    }
}

/// Context precedences for the left and right operand of a binary connective.
pub(crate) fn operand_precs(c: Connective) -> (u8, u8) {
    let p = connective_prec(c);
    match c {
        Connective::Implies | Connective::Iff => (p + 1, p),
        Connective::And | Connective::Or => (p, p + 1),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::App(name, args) if args.is_empty() => f.write_str(name),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Formula {
    fn prec(&self) -> u8 {
        match self {
            Formula::Quant(..) => PREC_QUANT,
            Formula::Binary(c, ..) => connective_prec(*c),
            Formula::Not(_) => PREC_NOT,
            _ => PREC_ATOM,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let parens = self.prec() < ctx;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Pred(name, args) if args.is_empty() => f.write_str(name)?,
            Formula::Pred(name, args) => write!(f, "{}", Term::App(name.clone(), args.clone()))?,
            Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, PREC_NOT)?;
            }
            Formula::Binary(c, a, b) => {
                let (l, r) = operand_precs(*c);
                a.fmt_prec(f, l)?;
                write!(f, " {} ", c.symbol())?;
                b.fmt_prec(f, r)?;
            }
            Formula::Quant(q, v, body) => {
                write!(f, "{} {}", q.keyword(), v)?;
                let mut body = &**body;
                while let Some((inner, rest)) = body.quant_parts(*q) {
                    write!(f, ", {inner}")?;
                    body = rest;
                }
                f.write_str(". ")?;
                body.fmt_prec(f, PREC_QUANT)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, PREC_QUANT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(name: &str) -> Term {
        Term::var(name, "M")
    }

    #[test]
    fn display_groups_binders_and_parenthesizes() {
        let inner = Formula::forall(
            Var::new("x", "M"),
            Formula::eq(Term::app("op", vec![m("u"), m("x")]), m("x")),
        );
        let f = Formula::forall(
            Var::new("u", "M"),
            Formula::implies(inner, Formula::eq(m("u"), Term::constant("e"))),
        );
        assert_eq!(
            f.to_string(),
            "forall u:M. (forall x:M. op(u,x) = x) -> u = e"
        );
        let g = Formula::forall_all(
            [Var::new("x", "M"), Var::new("y", "M")],
            Formula::eq(m("x"), m("y")),
        );
        assert_eq!(g.to_string(), "forall x:M, y:M. x = y");
    }

    #[test]
    fn display_associativity() {
        let p = || Formula::pred("p", vec![]);
        let q = || Formula::pred("q", vec![]);
        let right = Formula::implies(p(), Formula::implies(q(), p()));
        assert_eq!(right.to_string(), "p -> q -> p");
        let left = Formula::implies(Formula::implies(p(), q()), p());
        assert_eq!(left.to_string(), "(p -> q) -> p");
        let conj = Formula::and(Formula::and(p(), q()), Formula::not(Formula::or(p(), q())));
        assert_eq!(conj.to_string(), "p /\\ q /\\ ~(p \\/ q)");
    }
}
