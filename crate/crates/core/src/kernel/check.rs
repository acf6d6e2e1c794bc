//! The trusted derivation checker.
//!
//! `check_derivation` is a pure verifier: every step names its rule, its
//! premises and any parameter, and claims a conclusion. The checker recomputes
//! what the rule yields and compares. There is no search.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::derivation::{AxiomSource, Derivation, Param, ParamKind, Rule, Sequent, Step};
use super::signature::Signature;
use super::subst::{alpha_eq, free_var_names, instantiate};
use super::syntax::{Connective, Formula, Quantifier, Term, Var};
use super::wf::{wf_formula, wf_term, Context, Position, WfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("derivation `{0}` has no steps")]
    EmptyDerivation(String),
    #[error("step `{step}`: {reason}")]
    BadRuleApplication { step: String, reason: String },
    #[error("step `{step}`: eigenvariable `{var}` {reason}")]
    EigenvariableViolation {
        step: String,
        var: String,
        reason: String,
    },
    #[error("step `{step}`: unknown axiom `{name}`")]
    UnknownAxiom { step: String, name: String },
    #[error("step `{step}`: ill-formed formula: {source}")]
    IllFormedFormula {
        step: String,
        #[source]
        source: WfError,
    },
}

impl KernelError {
    pub fn step(&self) -> Option<&str> {
        match self {
            KernelError::EmptyDerivation(_) => None,
            KernelError::BadRuleApplication { step, .. }
            | KernelError::EigenvariableViolation { step, .. }
            | KernelError::UnknownAxiom { step, .. }
            | KernelError::IllFormedFormula { step, .. } => Some(step),
        }
    }
}

/// Context assigning each free variable its annotated sort. A name used at two
/// sorts is reported as a sort mismatch.
pub fn open_context<'a>(vars: impl IntoIterator<Item = &'a Var>, sig: &Signature) -> Result<Context, WfError> {
    let mut ctx = Context::new();
    for v in vars {
        if !sig.has_sort(&v.sort) {
            return Err(WfError::UnknownSort {
                sort: v.sort.clone(),
                position: Position::default(),
            });
        }
        if let Some(prev) = ctx.insert(v.name.clone(), v.sort.clone()) {
            if prev != v.sort {
                return Err(WfError::SortMismatch {
                    expected: prev,
                    found: v.sort.clone(),
                    position: Position::default(),
                });
            }
        }
    }
    Ok(ctx)
}

/// Well-formedness of a formula whose free variables carry their own sorts.
pub fn wf_open_formula(sig: &Signature, f: &Formula) -> Result<(), WfError> {
    let free = super::subst::free_vars(f);
    let ctx = open_context(&free, sig)?;
    wf_formula(sig, &ctx, f)
}

pub fn wf_open_term(sig: &Signature, t: &Term) -> Result<String, WfError> {
    let vars = t.vars();
    let ctx = open_context(&vars, sig)?;
    wf_term(sig, &ctx, t)
}

fn contains(hyps: &[Formula], f: &Formula) -> bool {
    hyps.iter().any(|h| alpha_eq(h, f))
}

fn union(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut out = a.to_vec();
    for f in b {
        if !contains(&out, f) {
            out.push(f.clone());
        }
    }
    out
}

fn discharge(hyps: &[Formula], f: &Formula) -> Vec<Formula> {
    hyps.iter().filter(|h| !alpha_eq(h, f)).cloned().collect()
}

fn dedup(hyps: &[Formula]) -> Vec<Formula> {
    union(&[], hyps)
}

fn same_set(a: &[Formula], b: &[Formula]) -> bool {
    a.iter().all(|f| contains(b, f)) && b.iter().all(|f| contains(a, f))
}

struct StepCheck<'a> {
    sig: &'a Signature,
    step: &'a Step,
}

impl<'a> StepCheck<'a> {
    fn bad(&self, reason: impl Into<String>) -> KernelError {
        KernelError::BadRuleApplication {
            step: self.step.label.clone(),
            reason: reason.into(),
        }
    }

    fn eigen(&self, var: &Var, reason: impl Into<String>) -> KernelError {
        KernelError::EigenvariableViolation {
            step: self.step.label.clone(),
            var: var.name.clone(),
            reason: reason.into(),
        }
    }

    fn claim(&self) -> &'a Formula {
        &self.step.conclusion
    }

    fn expect_claim(&self, want: &Formula) -> Result<(), KernelError> {
        if alpha_eq(self.claim(), want) {
            Ok(())
        } else {
            Err(self.bad(format!(
                "rule {} yields `{}`, but the step claims `{}`",
                self.step.rule,
                want,
                self.claim()
            )))
        }
    }

    fn claim_binary(&self, c: Connective) -> Result<(&'a Formula, &'a Formula), KernelError> {
        self.claim()
            .binary_parts(c)
            .ok_or_else(|| self.bad(format!("conclusion must be a `{}` formula", c.symbol())))
    }

    fn premise_binary<'p>(
        &self,
        idx: usize,
        s: &'p Sequent,
        c: Connective,
    ) -> Result<(&'p Formula, &'p Formula), KernelError> {
        s.conclusion.binary_parts(c).ok_or_else(|| {
            self.bad(format!(
                "premise {} must conclude a `{}` formula, found `{}`",
                idx + 1,
                c.symbol(),
                s.conclusion
            ))
        })
    }

    fn premise_quant<'p>(&self, idx: usize, s: &'p Sequent, q: Quantifier) -> Result<(&'p Var, &'p Formula), KernelError> {
        s.conclusion.quant_parts(q).ok_or_else(|| {
            self.bad(format!(
                "premise {} must conclude a `{}` formula, found `{}`",
                idx + 1,
                q.keyword(),
                s.conclusion
            ))
        })
    }

    fn premise_is_false(&self, idx: usize, s: &Sequent) -> Result<(), KernelError> {
        if s.conclusion == Formula::False {
            Ok(())
        } else {
            Err(self.bad(format!("premise {} must conclude `false`, found `{}`", idx + 1, s.conclusion)))
        }
    }

    fn term_param(&self) -> Result<&'a Term, KernelError> {
        match &self.step.param {
            Some(Param::Term(t)) => Ok(t),
            _ => Err(self.bad("expects a term parameter")),
        }
    }

    fn var_param(&self) -> Result<&'a Var, KernelError> {
        match &self.step.param {
            Some(Param::Term(Term::Var(v))) => Ok(v),
            _ => Err(self.bad("expects an eigenvariable parameter")),
        }
    }

    fn term_sort(&self, t: &Term) -> Result<String, KernelError> {
        wf_open_term(self.sig, t).map_err(|source| KernelError::IllFormedFormula {
            step: self.step.label.clone(),
            source,
        })
    }

    fn check_param_shape(&self) -> Result<(), KernelError> {
        let ok = matches!(
            (self.step.rule.param_kind(), &self.step.param),
            (ParamKind::None, None)
                | (ParamKind::Name, Some(Param::Name(_)))
                | (ParamKind::Term, Some(Param::Term(_)))
                | (ParamKind::Variable, Some(Param::Term(Term::Var(_))))
                | (ParamKind::Motive, Some(Param::Motive(..)))
        );
        if ok {
            Ok(())
        } else {
            Err(self.bad(format!("wrong parameter for rule {}", self.step.rule)))
        }
    }

    fn run(&self, axioms: &dyn AxiomSource, p: &[&Sequent]) -> Result<Sequent, KernelError> {
        let rule = self.step.rule;
        if p.len() != rule.arity() {
            return Err(self.bad(format!(
                "rule {rule} takes {} premise(s), got {}",
                rule.arity(),
                p.len()
            )));
        }
        self.check_param_shape()?;
        let claim = self.claim();
        let seq = |hyps: Vec<Formula>| Sequent {
            hyps,
            conclusion: claim.clone(),
        };
        match rule {
            Rule::Hypothesis => Ok(seq(vec![claim.clone()])),
            Rule::Axiom => {
                let Some(Param::Name(name)) = &self.step.param else {
                    unreachable!("checked by check_param_shape")
                };
                let ax = axioms.axiom(name).ok_or_else(|| KernelError::UnknownAxiom {
                    step: self.step.label.clone(),
                    name: name.clone(),
                })?;
                self.expect_claim(ax)?;
                Ok(seq(vec![]))
            }
            Rule::TruthIntro => {
                self.expect_claim(&Formula::True)?;
                Ok(seq(vec![]))
            }
            Rule::FalsityElim => {
                self.premise_is_false(0, p[0])?;
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::AndIntro => {
                self.expect_claim(&Formula::and(p[0].conclusion.clone(), p[1].conclusion.clone()))?;
                Ok(seq(union(&p[0].hyps, &p[1].hyps)))
            }
            Rule::AndElimLeft | Rule::AndElimRight => {
                let (a, b) = self.premise_binary(0, p[0], Connective::And)?;
                self.expect_claim(if rule == Rule::AndElimLeft { a } else { b })?;
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::OrIntroLeft | Rule::OrIntroRight => {
                let (a, b) = self.claim_binary(Connective::Or)?;
                let kept = if rule == Rule::OrIntroLeft { a } else { b };
                if !alpha_eq(kept, &p[0].conclusion) {
                    return Err(self.bad(format!(
                        "disjunct `{kept}` does not match premise `{}`",
                        p[0].conclusion
                    )));
                }
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::OrElim => {
                let (a, b) = self.premise_binary(0, p[0], Connective::Or)?;
                for (i, s) in p[1..].iter().enumerate() {
                    if !alpha_eq(&s.conclusion, claim) {
                        return Err(self.bad(format!(
                            "case premise {} concludes `{}`, not the claimed `{claim}`",
                            i + 2,
                            s.conclusion
                        )));
                    }
                }
                let hyps = union(
                    &union(&p[0].hyps, &discharge(&p[1].hyps, a)),
                    &discharge(&p[2].hyps, b),
                );
                Ok(seq(hyps))
            }
            Rule::ImplIntro => {
                let (a, b) = self.claim_binary(Connective::Implies)?;
                if !alpha_eq(b, &p[0].conclusion) {
                    return Err(self.bad(format!(
                        "consequent `{b}` does not match premise `{}`",
                        p[0].conclusion
                    )));
                }
                Ok(seq(discharge(&p[0].hyps, a)))
            }
            Rule::ImplElim => {
                // A negation ~A acts as A -> false.
                let (a, b) = match &p[0].conclusion {
                    Formula::Not(a) => (&**a, &Formula::False),
                    _ => self.premise_binary(0, p[0], Connective::Implies)?,
                };
                if !alpha_eq(a, &p[1].conclusion) {
                    return Err(self.bad(format!(
                        "antecedent `{a}` does not match premise 2 `{}`",
                        p[1].conclusion
                    )));
                }
                self.expect_claim(b)?;
                Ok(seq(union(&p[0].hyps, &p[1].hyps)))
            }
            Rule::IffIntro => {
                let (a, b) = self.claim_binary(Connective::Iff)?;
                self.expect_premise(0, p[0], &Formula::implies(a.clone(), b.clone()))?;
                self.expect_premise(1, p[1], &Formula::implies(b.clone(), a.clone()))?;
                Ok(seq(union(&p[0].hyps, &p[1].hyps)))
            }
            Rule::IffElimLeft | Rule::IffElimRight => {
                let (a, b) = self.premise_binary(0, p[0], Connective::Iff)?;
                let want = if rule == Rule::IffElimLeft {
                    Formula::implies(a.clone(), b.clone())
                } else {
                    Formula::implies(b.clone(), a.clone())
                };
                self.expect_claim(&want)?;
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::NegIntro => {
                self.premise_is_false(0, p[0])?;
                let Formula::Not(a) = claim else {
                    return Err(self.bad("conclusion must be a negation"));
                };
                Ok(seq(discharge(&p[0].hyps, a)))
            }
            Rule::ClassicalContradiction => {
                self.premise_is_false(0, p[0])?;
                Ok(seq(discharge(&p[0].hyps, &Formula::not(claim.clone()))))
            }
            Rule::ForallIntro => {
                let eigen = self.var_param()?;
                let (x, body) = claim
                    .quant_parts(Quantifier::Forall)
                    .ok_or_else(|| self.bad("conclusion must be a `forall` formula"))?;
                if eigen.sort != x.sort {
                    return Err(self.eigen(eigen, format!("has sort `{}`, binder has `{}`", eigen.sort, x.sort)));
                }
                self.expect_premise(0, p[0], &instantiate(body, &x.name, &Term::Var(eigen.clone())))?;
                if p[0].hyps.iter().any(|h| free_var_names(h).contains(&eigen.name)) {
                    return Err(self.eigen(eigen, "occurs free in an open hypothesis"));
                }
                if free_var_names(claim).contains(&eigen.name) {
                    return Err(self.eigen(eigen, "occurs free in the conclusion"));
                }
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::ForallElim => {
                let t = self.term_param()?;
                let (x, body) = self.premise_quant(0, p[0], Quantifier::Forall)?;
                let sort = self.term_sort(t)?;
                if sort != x.sort {
                    return Err(self.bad(format!("term `{t}` has sort `{sort}`, binder expects `{}`", x.sort)));
                }
                self.expect_claim(&instantiate(body, &x.name, t))?;
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::ExistsIntro => {
                let t = self.term_param()?;
                let (x, body) = claim
                    .quant_parts(Quantifier::Exists)
                    .ok_or_else(|| self.bad("conclusion must be an `exists` formula"))?;
                let sort = self.term_sort(t)?;
                if sort != x.sort {
                    return Err(self.bad(format!("witness `{t}` has sort `{sort}`, binder expects `{}`", x.sort)));
                }
                self.expect_premise(0, p[0], &instantiate(body, &x.name, t))?;
                Ok(seq(p[0].hyps.clone()))
            }
            Rule::ExistsElim => {
                let eigen = self.var_param()?;
                let (x, body) = self.premise_quant(0, p[0], Quantifier::Exists)?;
                if eigen.sort != x.sort {
                    return Err(self.eigen(eigen, format!("has sort `{}`, binder has `{}`", eigen.sort, x.sort)));
                }
                if !alpha_eq(&p[1].conclusion, claim) {
                    return Err(self.bad(format!(
                        "premise 2 concludes `{}`, not the claimed `{claim}`",
                        p[1].conclusion
                    )));
                }
                let opened = instantiate(body, &x.name, &Term::Var(eigen.clone()));
                let rest = discharge(&p[1].hyps, &opened);
                let occurs = |f: &Formula| free_var_names(f).contains(&eigen.name);
                if occurs(claim) {
                    return Err(self.eigen(eigen, "occurs free in the conclusion"));
                }
                if occurs(&p[0].conclusion) {
                    return Err(self.eigen(eigen, "occurs free in the existential premise"));
                }
                if p[0].hyps.iter().chain(&rest).any(occurs) {
                    return Err(self.eigen(eigen, "occurs free in an open hypothesis"));
                }
                Ok(seq(union(&p[0].hyps, &rest)))
            }
            Rule::EqRefl => match claim {
                Formula::Eq(a, b) if a == b => Ok(seq(vec![])),
                _ => Err(self.bad("conclusion must have the form `t = t`")),
            },
            Rule::EqSubst => {
                let Some(Param::Motive(z, motive)) = &self.step.param else {
                    unreachable!("checked by check_param_shape")
                };
                let Formula::Eq(lhs, rhs) = &p[0].conclusion else {
                    return Err(self.bad(format!("premise 1 must be an equation, found `{}`", p[0].conclusion)));
                };
                let sort = self.term_sort(lhs)?;
                if sort != z.sort {
                    return Err(self.bad(format!("marker `{z}` does not match equation sort `{sort}`")));
                }
                self.expect_premise(1, p[1], &instantiate(motive, &z.name, lhs))?;
                self.expect_claim(&instantiate(motive, &z.name, rhs))?;
                Ok(seq(union(&p[0].hyps, &p[1].hyps)))
            }
        }
    }

    fn expect_premise(&self, idx: usize, s: &Sequent, want: &Formula) -> Result<(), KernelError> {
        if alpha_eq(&s.conclusion, want) {
            Ok(())
        } else {
            Err(self.bad(format!(
                "premise {} must conclude `{want}`, found `{}`",
                idx + 1,
                s.conclusion
            )))
        }
    }
}

fn wf_step(sig: &Signature, step: &Step) -> Result<(), KernelError> {
    let ill = |source| KernelError::IllFormedFormula {
        step: step.label.clone(),
        source,
    };
    wf_open_formula(sig, &step.conclusion).map_err(ill)?;
    for h in step.hyps.iter().flatten() {
        wf_open_formula(sig, h).map_err(ill)?;
    }
    if let Some(Param::Motive(z, body)) = &step.param {
        wf_open_formula(sig, &Formula::forall(z.clone(), body.clone())).map_err(ill)?;
    }
    Ok(())
}

/// Checks every step of `d` and returns the root sequent. The hypothesis list
/// of the result holds the undischarged hypotheses.
pub fn check_derivation(
    sig: &Signature,
    axioms: &dyn AxiomSource,
    d: &Derivation,
) -> Result<Sequent, KernelError> {
    check_all_steps(sig, axioms, d).map(|mut all| {
        let root = &d.steps.last().expect("non-empty").label;
        all.remove(root).expect("root checked")
    })
}

/// Checks `d` and returns the sequent of every step by label.
pub fn check_all_steps(
    sig: &Signature,
    axioms: &dyn AxiomSource,
    d: &Derivation,
) -> Result<BTreeMap<String, Sequent>, KernelError> {
    if d.steps.is_empty() {
        return Err(KernelError::EmptyDerivation(d.name.clone()));
    }
    let mut done: HashMap<&str, Sequent> = HashMap::new();
    for step in &d.steps {
        if done.contains_key(step.label.as_str()) {
            return Err(KernelError::BadRuleApplication {
                step: step.label.clone(),
                reason: "duplicate step label".into(),
            });
        }
        wf_step(sig, step)?;
        let mut premises = Vec::with_capacity(step.premises.len());
        for label in &step.premises {
            let s = done.get(label.as_str()).ok_or_else(|| KernelError::BadRuleApplication {
                step: step.label.clone(),
                reason: format!("premise `{label}` is not an earlier step"),
            })?;
            premises.push(s);
        }
        let check = StepCheck { sig, step };
        let mut sequent = check.run(axioms, &premises)?;
        sequent.hyps = dedup(&sequent.hyps);
        if let Some(claimed) = &step.hyps {
            if !same_set(claimed, &sequent.hyps) {
                return Err(check.bad(format!(
                    "claimed hypotheses do not match the computed ones ({})",
                    sequent
                )));
            }
        }
        done.insert(&step.label, sequent);
    }
    Ok(done.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}
