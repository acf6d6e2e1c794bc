//! Free variables, capture-avoiding substitution and alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{Formula, Term, Var};

/// Simultaneous substitution, keyed by variable name.
pub type Subst = BTreeMap<String, Term>;

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<Var>) {
    let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<Var>| {
        for v in t.vars() {
            if !bound.contains(&v.name) {
                out.insert(v);
            }
        }
    };
    match f {
        Formula::True | Formula::False => {}
        Formula::Pred(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
        Formula::Eq(a, b) => {
            add_term(a, bound, out);
            add_term(b, bound, out);
        }
        Formula::Not(a) => collect_free(a, bound, out),
        Formula::Binary(_, a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Quant(_, v, body) => {
            bound.push(v.name.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

/// Variables with at least one free occurrence in `f`.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

pub fn free_var_names(f: &Formula) -> BTreeSet<String> {
    free_vars(f).into_iter().map(|v| v.name).collect()
}

pub fn is_closed(f: &Formula) -> bool {
    free_vars(f).is_empty()
}

/// `base_1`, `base_2`, ... : the first candidate not in `avoid`. An existing
/// numeric suffix on `base` is stripped first so renaming never stacks suffixes.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = match base.rsplit_once('_') {
        Some((stem, digits))
            if !stem.is_empty() && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) =>
        {
            stem
        }
        _ => base,
    };
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded candidate supply")
}

pub fn substitute_term(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(v) => s.get(&v.name).cloned().unwrap_or_else(|| t.clone()),
        Term::App(name, args) => Term::App(
            name.clone(),
            args.iter().map(|a| substitute_term(a, s)).collect(),
        ),
    }
}

/// Capture-avoiding simultaneous substitution.
pub fn substitute(f: &Formula, s: &Subst) -> Formula {
    if s.is_empty() {
        return f.clone();
    }
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Pred(name, args) => Formula::Pred(
            name.clone(),
            args.iter().map(|a| substitute_term(a, s)).collect(),
        ),
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, s), substitute_term(b, s)),
        Formula::Not(a) => Formula::Not(Box::new(substitute(a, s))),
        Formula::Binary(c, a, b) => {
            Formula::Binary(*c, Box::new(substitute(a, s)), Box::new(substitute(b, s)))
        }
        Formula::Quant(q, v, body) => {
            let body_free = free_var_names(body);
            let mut inner: Subst = s
                .iter()
                .filter(|(k, _)| **k != v.name && body_free.contains(*k))
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect();
            if inner.is_empty() {
                return f.clone();
            }
            let range: BTreeSet<String> = inner
                .values()
                .flat_map(|t| t.vars().into_iter().map(|v| v.name))
                .collect();
            if range.contains(&v.name) {
                let mut avoid = range;
                avoid.extend(body_free);
                avoid.extend(inner.keys().cloned());
                let renamed = Var::new(fresh_name(&v.name, &avoid), v.sort.clone());
                inner.insert(v.name.clone(), Term::Var(renamed.clone()));
                Formula::Quant(*q, renamed, Box::new(substitute(body, &inner)))
            } else {
                Formula::Quant(*q, v.clone(), Box::new(substitute(body, &inner)))
            }
        }
    }
}

/// `f[var := t]`.
pub fn instantiate(f: &Formula, var: &str, t: &Term) -> Formula {
    substitute(f, &Subst::from([(var.to_string(), t.clone())]))
}

type Env<'a> = Vec<(&'a Var, &'a Var)>;

fn alpha_term(a: &Term, b: &Term, env: &Env<'_>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let i = env.iter().rposition(|(l, _)| l.name == x.name);
            let j = env.iter().rposition(|(_, r)| r.name == y.name);
            match (i, j) {
                (Some(i), Some(j)) => i == j && x.sort == y.sort,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        _ => false,
    }
}

fn alpha_formula<'a>(a: &'a Formula, b: &'a Formula, env: &mut Env<'a>) -> bool {
    match (a, b) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => alpha_term(a1, b1, env) && alpha_term(a2, b2, env),
        (Formula::Not(x), Formula::Not(y)) => alpha_formula(x, y, env),
        (Formula::Binary(c, a1, a2), Formula::Binary(d, b1, b2)) => {
            c == d && alpha_formula(a1, b1, env) && alpha_formula(a2, b2, env)
        }
        (Formula::Quant(q, v, x), Formula::Quant(r, w, y)) => {
            if q != r || v.sort != w.sort {
                return false;
            }
            env.push((v, w));
            let ok = alpha_formula(x, y, env);
            env.pop();
            ok
        }
        _ => false,
    }
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha_formula(a, b, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: &str) -> Term {
        Term::var(n, "M")
    }
    fn op(a: Term, b: Term) -> Term {
        Term::app("op", vec![a, b])
    }
    fn e() -> Term {
        Term::constant("e")
    }

    #[test]
    fn substitution_renames_captured_binder() {
        // (forall y:M. op(x,y) = y)[x := y]
        let f = Formula::forall(Var::new("y", "M"), Formula::eq(op(m("x"), m("y")), m("y")));
        let got = instantiate(&f, "x", &m("y"));
        let want = Formula::forall(
            Var::new("y_1", "M"),
            Formula::eq(op(m("y"), m("y_1")), m("y_1")),
        );
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "forall y_1:M. op(y,y_1) = y_1");
    }

    #[test]
    fn empty_substitution_is_identity() {
        let f = Formula::forall(Var::new("y", "M"), Formula::eq(op(m("x"), m("y")), m("y")));
        assert_eq!(substitute(&f, &Subst::new()), f);
    }

    #[test]
    fn substitution_without_binders() {
        let f = Formula::eq(op(m("x"), e()), m("x"));
        assert_eq!(instantiate(&f, "x", &e()), Formula::eq(op(e(), e()), e()));
    }

    #[test]
    fn bound_variable_is_not_substituted() {
        let f = Formula::forall(Var::new("x", "M"), Formula::eq(m("x"), m("x")));
        assert_eq!(instantiate(&f, "x", &e()), f);
    }

    #[test]
    fn fresh_names_skip_taken_and_strip_suffix() {
        let avoid: BTreeSet<String> = ["y_1".to_string(), "y_2".to_string()].into();
        assert_eq!(fresh_name("y", &avoid), "y_3");
        assert_eq!(fresh_name("y_1", &avoid), "y_3");
        assert_eq!(fresh_name("y_", &BTreeSet::new()), "y__1");
    }

    #[test]
    fn alpha_equivalence_examples() {
        let idl = |n: &str| Formula::forall(Var::new(n, "M"), Formula::eq(op(e(), m(n)), m(n)));
        let idr = Formula::forall(Var::new("x", "M"), Formula::eq(op(m("x"), e()), m("x")));
        assert!(alpha_eq(&idl("x"), &idl("y")));
        assert!(!alpha_eq(&idl("x"), &idr));
        assert!(alpha_eq(&idr, &idr));
    }

    #[test]
    fn alpha_distinguishes_free_from_bound() {
        let a = Formula::forall(Var::new("x", "M"), Formula::eq(m("x"), m("y")));
        let b = Formula::forall(Var::new("y", "M"), Formula::eq(m("y"), m("y")));
        assert!(!alpha_eq(&a, &b));
    }

    #[test]
    fn free_variable_sets() {
        let f = Formula::forall(Var::new("x", "M"), Formula::eq(op(m("x"), m("y")), m("y")));
        assert_eq!(free_vars(&f), BTreeSet::from([Var::new("y", "M")]));
        let closed = Formula::forall(Var::new("x", "M"), Formula::eq(op(e(), m("x")), m("x")));
        assert!(free_vars(&closed).is_empty());
        let open = Formula::eq(op(m("x"), m("y")), m("z"));
        assert_eq!(
            free_vars(&open),
            BTreeSet::from([Var::new("x", "M"), Var::new("y", "M"), Var::new("z", "M")])
        );
    }
}
