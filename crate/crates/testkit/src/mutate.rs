//! Single-step mutations of derivations. Each mutation changes exactly one
//! step; a sound checker must reject every one of them.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use tgc_core::kernel::{free_vars, Derivation, Formula, Param, Quantifier, Rule, Signature, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MutationKind {
    RuleRename,
    PremisePermutation,
    ParamAlteration,
    EigenvariableViolation,
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationKind::RuleRename => "rule rename",
            MutationKind::PremisePermutation => "premise permutation",
            MutationKind::ParamAlteration => "parameter alteration",
            MutationKind::EigenvariableViolation => "eigenvariable violation",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub kind: MutationKind,
    pub step: String,
    pub derivation: Derivation,
}

const FRESH: &str = "mut_v";

/// Another rule with the same arity and parameter kind, if any.
fn sibling(r: Rule) -> Option<Rule> {
    Rule::ALL
        .iter()
        .copied()
        .find(|&o| o != r && o.arity() == r.arity() && o.param_kind() == r.param_kind())
}

fn term_sort(sig: &Signature, t: &Term) -> Option<String> {
    match t {
        Term::Var(v) => Some(v.sort.clone()),
        Term::App(f, _) => sig.function(f).map(|d| d.result.clone()),
    }
}

fn altered_param(p: &Param, sig: &Signature, axioms: &IndexMap<String, Formula>) -> Option<Param> {
    match p {
        Param::Name(n) => {
            let current = axioms.get(n)?;
            axioms
                .iter()
                .find(|(m, f)| *m != n && *f != current)
                .map(|(m, _)| Param::Name(m.clone()))
        }
        Param::Term(Term::Var(v)) if v.name != FRESH => Some(Param::Term(Term::var(FRESH, v.sort.clone()))),
        Param::Term(t) => term_sort(sig, t).map(|s| Param::Term(Term::var(FRESH, s))),
        Param::Motive(v, body) => Some(Param::Motive(v.clone(), Formula::not(body.clone()))),
    }
}

/// All single-step mutations of `d` the operators apply to.
pub fn mutations(d: &Derivation, sig: &Signature, axioms: &IndexMap<String, Formula>) -> Vec<Mutation> {
    let mut out = Vec::new();
    let mut push = |kind, i: usize, derivation: Derivation| {
        out.push(Mutation {
            kind,
            step: d.steps[i].label.clone(),
            derivation,
        })
    };
    for (i, step) in d.steps.iter().enumerate() {
        if let Some(r) = sibling(step.rule) {
            let mut m = d.clone();
            m.steps[i].rule = r;
            push(MutationKind::RuleRename, i, m);
        }
        if step.premises.len() >= 2 && step.premises[0] != step.premises[1] {
            let mut m = d.clone();
            m.steps[i].premises.swap(0, 1);
            push(MutationKind::PremisePermutation, i, m);
        }
        if let Some(p) = step.param.as_ref().and_then(|p| altered_param(p, sig, axioms)) {
            let mut m = d.clone();
            m.steps[i].param = Some(p);
            push(MutationKind::ParamAlteration, i, m);
        }
        if let Some(m) = eigenvariable_violation(d, i) {
            push(MutationKind::EigenvariableViolation, i, m);
        }
    }
    out
}

/// Generalizes over a variable while the hypothesis mentioning it is still
/// open: `forall-intro` is pointed past the `impl-intro` that discharged it.
fn eigenvariable_violation(d: &Derivation, i: usize) -> Option<Derivation> {
    let step = &d.steps[i];
    if step.rule != Rule::ForallIntro {
        return None;
    }
    let Some(Param::Term(Term::Var(v))) = &step.param else {
        return None;
    };
    let discharge = d.step(step.premises.first()?)?;
    if discharge.rule != Rule::ImplIntro {
        return None;
    }
    let Formula::Binary(_, hyp, _) = &discharge.conclusion else {
        return None;
    };
    if !free_vars(hyp).contains(v) {
        return None;
    }
    let inner = d.step(discharge.premises.first()?)?;
    let mut m = d.clone();
    let s = &mut m.steps[i];
    s.premises = vec![inner.label.clone()];
    s.hyps = None;
    s.conclusion = Formula::Quant(Quantifier::Forall, v.clone(), Box::new(inner.conclusion.clone()));
    Some(m)
}

/// Distinct mutation kinds in `ms`.
pub fn kinds(ms: &[Mutation]) -> BTreeSet<MutationKind> {
    ms.iter().map(|m| m.kind).collect()
}

