//! Cross checks between results in a theory graph.
//!
//! A structural check compares two proofs: their rule skeletons must coincide
//! and their conclusions must agree under a bijective symbol correspondence.
//! A semantic check asks whether a statement follows from the image of another
//! statement along a morphism path.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::graph::{GraphError, TheoryGraph};
use crate::kernel::{
    alpha_eq, check_derivation, is_closed, wf_formula, Context, Derivation, Formula, Rule, SymbolKind, Term, Var,
};
use crate::theory::Theory;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofRef {
    pub theory: String,
    pub derivation: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralCheck {
    pub id: String,
    pub proof1: ProofRef,
    pub proof2: ProofRef,
    /// Declared symbol pairs (sorts, functions or predicates), left to right.
    pub correspondence: Vec<(String, String)>,
}

/// A formula in a theory, optionally known by an axiom or theorem name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub theory: String,
    pub label: Option<String>,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticCheck {
    pub id: String,
    pub a1: Statement,
    pub a2: Statement,
    /// Morphism ids forming a path from `a1.theory` to `a2.theory`.
    pub via: Vec<String>,
    /// Derivation of `a2` in the target that may cite the image of `a1` as
    /// the pseudo-axiom `via:A1` (or `via:<label>`).
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    Structural(StructuralCheck),
    Semantic(SemanticCheck),
}

impl CrossCheck {
    pub fn id(&self) -> &str {
        match self {
            CrossCheck::Structural(c) => &c.id,
            CrossCheck::Semantic(c) => &c.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CrossCheck::Structural(_) => "structural",
            CrossCheck::Semantic(_) => "semantic",
        }
    }
}

pub type CheckSet = IndexMap<String, CrossCheck>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("ill-formed check: {0}")]
    IllFormedCheck(String),
}

impl From<GraphError> for CheckError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownDerivation(d) => CheckError::UnknownDerivation(d),
            GraphError::UnknownMorphism(m) => CheckError::UnknownMorphism(m),
            GraphError::UnknownTheory(t) => CheckError::UnknownTheory(t),
            other => CheckError::IllFormedCheck(other.to_string()),
        }
    }
}

/// Rule tree of a derivation with formulas and parameters erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub rule: Rule,
    pub children: Vec<Skeleton>,
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule.name())?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn skeleton_of(d: &Derivation, idx: usize) -> Skeleton {
    let step = &d.steps[idx];
    let children = step
        .premises
        .iter()
        .filter_map(|p| d.steps[..idx].iter().rposition(|s| &s.label == p))
        .map(|i| skeleton_of(d, i))
        .collect();
    Skeleton {
        rule: step.rule,
        children,
    }
}

/// Skeleton rooted at the last step; `None` for an empty derivation.
pub fn skeleton(d: &Derivation) -> Option<Skeleton> {
    (!d.steps.is_empty()).then(|| skeleton_of(d, d.steps.len() - 1))
}

/// First position (child-index path) where two skeletons differ.
pub fn skeleton_divergence(a: &Skeleton, b: &Skeleton) -> Option<Vec<usize>> {
    if a.rule != b.rule || a.children.len() != b.children.len() {
        return Some(Vec::new());
    }
    a.children
        .iter()
        .zip(&b.children)
        .enumerate()
        .find_map(|(i, (x, y))| {
            skeleton_divergence(x, y).map(|mut p| {
                p.insert(0, i);
                p
            })
        })
}

fn skeleton_at<'a>(s: &'a Skeleton, path: &[usize]) -> Option<&'a Skeleton> {
    path.iter().try_fold(s, |node, &i| node.children.get(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Success,
    Failure(String),
    Pending(String),
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Success => "success",
            CheckStatus::Failure(_) => "failure",
            CheckStatus::Pending(_) => "pending",
        }
    }
}

/// Where a failure was detected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    /// Child-index path in the skeletons; empty is the root.
    Skeleton(Vec<usize>),
    /// The offending (sub)formula or formula pair.
    Formula(String),
    /// A derivation step.
    Step { derivation: String, step: String },
    /// A name that could not be resolved.
    Reference(String),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Skeleton(path) if path.is_empty() => f.write_str("skeleton root"),
            Locus::Skeleton(path) => {
                let parts: Vec<String> = path.iter().map(usize::to_string).collect();
                write!(f, "skeleton node root.{}", parts.join("."))
            }
            Locus::Formula(s) => write!(f, "formula {s}"),
            Locus::Step { derivation, step } => write!(f, "step {derivation}/{step}"),
            Locus::Reference(r) => write!(f, "reference `{r}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: String,
    pub kind: &'static str,
    pub status: CheckStatus,
    pub details: String,
    pub locus: Option<Locus>,
    /// Assumed or partially verified content the outcome depends on.
    pub assumptions: Vec<String>,
}

impl CheckOutcome {
    fn new(id: &str, kind: &'static str, status: CheckStatus, details: impl Into<String>) -> Self {
        CheckOutcome {
            id: id.to_string(),
            kind,
            status,
            details: details.into(),
            locus: None,
            assumptions: Vec::new(),
        }
    }

    fn at(mut self, locus: Locus) -> Self {
        self.locus = Some(locus);
        self
    }
}

#[derive(Default)]
struct Bijection {
    fwd: BTreeMap<String, String>,
    bwd: BTreeMap<String, String>,
}

impl Bijection {
    fn bind(&mut self, a: &str, b: &str) -> bool {
        match (self.fwd.get(a), self.bwd.get(b)) {
            (Some(x), Some(y)) => x == b && y == a,
            (None, None) => {
                self.fwd.insert(a.to_string(), b.to_string());
                self.bwd.insert(b.to_string(), a.to_string());
                true
            }
            _ => false,
        }
    }
}

#[derive(Default)]
struct SymbolMatch {
    sorts: Bijection,
    funcs: Bijection,
    preds: Bijection,
}

type MatchEnv<'a> = Vec<(&'a Var, &'a Var)>;

impl SymbolMatch {
    fn terms(&mut self, a: &Term, b: &Term, env: &MatchEnv<'_>) -> Result<(), String> {
        let fail = || Err(format!("`{a}` vs `{b}`"));
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let i = env.iter().rposition(|(l, _)| l.name == x.name);
                let j = env.iter().rposition(|(_, r)| r.name == y.name);
                let ok = match (i, j) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x.name == y.name && self.sorts.bind(&x.sort, &y.sort),
                    _ => false,
                };
                if ok {
                    Ok(())
                } else {
                    fail()
                }
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if xs.len() != ys.len() || !self.funcs.bind(f, g) {
                    return fail();
                }
                xs.iter().zip(ys).try_for_each(|(x, y)| self.terms(x, y, env))
            }
            _ => fail(),
        }
    }

    fn formulas<'a>(&mut self, a: &'a Formula, b: &'a Formula, env: &mut MatchEnv<'a>) -> Result<(), String> {
        let fail = || Err(format!("`{a}` vs `{b}`"));
        match (a, b) {
            (Formula::True, Formula::True) | (Formula::False, Formula::False) => Ok(()),
            (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
                if xs.len() != ys.len() || !self.preds.bind(p, q) {
                    return fail();
                }
                xs.iter().zip(ys).try_for_each(|(x, y)| self.terms(x, y, env))
            }
            (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
                self.terms(a1, b1, env)?;
                self.terms(a2, b2, env)
            }
            (Formula::Not(x), Formula::Not(y)) => self.formulas(x, y, env),
            (Formula::Binary(c, a1, a2), Formula::Binary(d, b1, b2)) if c == d => {
                self.formulas(a1, b1, env)?;
                self.formulas(a2, b2, env)
            }
            (Formula::Quant(q, v, x), Formula::Quant(r, w, y)) if q == r => {
                if !self.sorts.bind(&v.sort, &w.sort) {
                    return fail();
                }
                env.push((v, w));
                let r = self.formulas(x, y, env);
                env.pop();
                r
            }
            _ => fail(),
        }
    }
}

fn seed_correspondence(
    pairs: &[(String, String)],
    left: &Theory,
    right: &Theory,
) -> Result<SymbolMatch, CheckError> {
    let mut m = SymbolMatch::default();
    for (a, b) in pairs {
        let ka = left.signature.kind_of(a);
        let kb = right.signature.kind_of(b);
        let table = match (ka, kb) {
            (Some(SymbolKind::Sort), Some(SymbolKind::Sort)) => &mut m.sorts,
            (Some(SymbolKind::Function), Some(SymbolKind::Function)) => &mut m.funcs,
            (Some(SymbolKind::Predicate), Some(SymbolKind::Predicate)) => &mut m.preds,
            _ => {
                return Err(CheckError::IllFormedCheck(format!(
                    "`{a} -> {b}` does not pair symbols of the same kind in `{}` and `{}`",
                    left.id, right.id
                )))
            }
        };
        if !table.bind(a, b) {
            return Err(CheckError::IllFormedCheck(format!(
                "`{a} -> {b}` makes the correspondence non-bijective"
            )));
        }
    }
    Ok(m)
}

fn resolve_proof<'g>(g: &'g TheoryGraph, r: &ProofRef) -> Result<(&'g Theory, &'g Derivation), CheckError> {
    let stored = g.derivation(&r.derivation)?;
    if stored.theory != r.theory {
        return Err(CheckError::IllFormedCheck(format!(
            "derivation `{}` belongs to `{}`, not `{}`",
            r.derivation, stored.theory, r.theory
        )));
    }
    Ok((g.theory(&r.theory)?, &stored.derivation))
}

/// Runs a structural (proof-similarity) check.
pub fn structural_run(c: &StructuralCheck, g: &TheoryGraph) -> Result<CheckOutcome, CheckError> {
    const KIND: &str = "structural";
    let (t1, d1) = resolve_proof(g, &c.proof1)?;
    let (t2, d2) = resolve_proof(g, &c.proof2)?;
    let mut conclusions = Vec::new();
    for (t, d) in [(t1, d1), (t2, d2)] {
        match check_derivation(&t.signature, &t.axioms, d) {
            Ok(seq) => conclusions.push(seq.conclusion),
            Err(e) => {
                let locus = Locus::Step {
                    derivation: d.name.clone(),
                    step: e.step().unwrap_or_default().to_string(),
                };
                let reason = format!("`{}` does not check in `{}`: {e}", d.name, t.id);
                return Ok(CheckOutcome::new(&c.id, KIND, CheckStatus::Failure(reason.clone()), reason).at(locus));
            }
        }
    }
    let (Some(s1), Some(s2)) = (skeleton(d1), skeleton(d2)) else {
        unreachable!("checked derivations are non-empty")
    };
    if let Some(path) = skeleton_divergence(&s1, &s2) {
        let describe = |s: &Skeleton| skeleton_at(s, &path).map(|n| n.to_string()).unwrap_or_default();
        let reason = format!(
            "skeletons diverge at {}: `{}` vs `{}`",
            Locus::Skeleton(path.clone()),
            describe(&s1),
            describe(&s2)
        );
        return Ok(CheckOutcome::new(&c.id, KIND, CheckStatus::Failure(reason.clone()), reason).at(Locus::Skeleton(path)));
    }
    let mut matcher = seed_correspondence(&c.correspondence, t1, t2)?;
    match matcher.formulas(&conclusions[0], &conclusions[1], &mut Vec::new()) {
        Ok(()) => Ok(CheckOutcome::new(
            &c.id,
            KIND,
            CheckStatus::Success,
            format!("identical skeleton `{s1}`; conclusions correspond"),
        )),
        Err(atom) => {
            let reason = format!("conclusions do not correspond: {atom}");
            Ok(CheckOutcome::new(&c.id, KIND, CheckStatus::Failure(reason.clone()), reason).at(Locus::Formula(atom)))
        }
    }
}

fn check_statement(g: &TheoryGraph, s: &Statement, role: &str) -> Result<(), CheckError> {
    let t = g.theory(&s.theory)?;
    if !is_closed(&s.formula) {
        return Err(CheckError::IllFormedCheck(format!("{role} `{}` is not closed", s.formula)));
    }
    wf_formula(&t.signature, &Context::new(), &s.formula)
        .map_err(|e| CheckError::IllFormedCheck(format!("{role} is ill-formed in `{}`: {e}", t.id)))
}

/// Runs a semantic (expected-consequence) check.
pub fn semantic_run(c: &SemanticCheck, g: &TheoryGraph) -> Result<CheckOutcome, CheckError> {
    const KIND: &str = "semantic";
    check_statement(g, &c.a1, "A1")?;
    check_statement(g, &c.a2, "A2")?;
    let path = g.path(&c.via)?;
    if path.source() != c.a1.theory || path.target() != c.a2.theory {
        return Err(CheckError::IllFormedCheck(format!(
            "path {path} runs from `{}` to `{}`, not from `{}` to `{}`",
            path.source(),
            path.target(),
            c.a1.theory,
            c.a2.theory
        )));
    }
    let mut assumptions = Vec::new();
    if let Some(open) = match path.composite().verify() {
        crate::morphism::VerificationStatus::Verified => None,
        crate::morphism::VerificationStatus::PartiallyVerified(open) => Some(open),
    } {
        assumptions.push(format!("path {path} has open obligations: {}", open.join(", ")));
    }
    if let Some(label) = &c.a1.label {
        if let Some(thm) = g.theory(&c.a1.theory)?.theorems.get(label) {
            if thm.provenance.is_flagged() {
                assumptions.push(format!("`{label}` is {}", thm.provenance));
            }
        }
    }
    let image = path
        .composite()
        .translate_formula(&c.a1.formula)
        .map_err(|e| CheckError::IllFormedCheck(e.to_string()))?;
    let mut outcome = if alpha_eq(&image, &c.a2.formula) {
        CheckOutcome::new(
            &c.id,
            KIND,
            CheckStatus::Success,
            format!("image along {path} is alpha-equal to A2"),
        )
    } else if let Some(w) = &c.witness {
        witness_outcome(c, g, w, &image)?
    } else {
        let reason = format!("A2 differs from the image `{image}` and no witness derivation is given");
        CheckOutcome::new(&c.id, KIND, CheckStatus::Pending(reason.clone()), reason)
    };
    outcome.assumptions = assumptions;
    Ok(outcome)
}

fn witness_outcome(c: &SemanticCheck, g: &TheoryGraph, witness: &str, image: &Formula) -> Result<CheckOutcome, CheckError> {
    const KIND: &str = "semantic";
    let stored = g.derivation(witness)?;
    if stored.theory != c.a2.theory {
        return Err(CheckError::IllFormedCheck(format!(
            "witness `{witness}` belongs to `{}`, not `{}`",
            stored.theory, c.a2.theory
        )));
    }
    let t2 = g.theory(&c.a2.theory)?;
    let mut pseudo: BTreeMap<String, Formula> = BTreeMap::new();
    pseudo.insert("via:A1".into(), image.clone());
    if let Some(label) = &c.a1.label {
        pseudo.insert(format!("via:{label}"), image.clone());
    }
    let d = &stored.derivation;
    let fail = |reason: String, locus: Locus| {
        CheckOutcome::new(&c.id, KIND, CheckStatus::Failure(reason.clone()), reason).at(locus)
    };
    Ok(match check_derivation(&t2.signature, &(&t2.axioms, &pseudo), d) {
        Err(e) => fail(
            format!("witness `{witness}` does not check: {e}"),
            Locus::Step {
                derivation: witness.to_string(),
                step: e.step().unwrap_or_default().to_string(),
            },
        ),
        Ok(seq) if !seq.hyps.is_empty() => fail(
            format!("witness `{witness}` leaves open hypotheses: {seq}"),
            Locus::Formula(seq.to_string()),
        ),
        Ok(seq) if !alpha_eq(&seq.conclusion, &c.a2.formula) => fail(
            format!("witness `{witness}` concludes `{}`, not A2", seq.conclusion),
            Locus::Formula(seq.conclusion.to_string()),
        ),
        Ok(_) => CheckOutcome::new(
            &c.id,
            KIND,
            CheckStatus::Success,
            format!("witness `{witness}` derives A2 from the image of A1"),
        ),
    })
}

pub fn run(c: &CrossCheck, g: &TheoryGraph) -> Result<CheckOutcome, CheckError> {
    match c {
        CrossCheck::Structural(s) => structural_run(s, g),
        CrossCheck::Semantic(s) => semantic_run(s, g),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    /// Sorted by check id.
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    fn count(&self, f: impl Fn(&CheckStatus) -> bool) -> usize {
        self.outcomes.iter().filter(|o| f(&o.status)).count()
    }

    pub fn successes(&self) -> usize {
        self.count(|s| matches!(s, CheckStatus::Success))
    }

    pub fn failures(&self) -> usize {
        self.count(|s| matches!(s, CheckStatus::Failure(_)))
    }

    pub fn pending(&self) -> usize {
        self.count(|s| matches!(s, CheckStatus::Pending(_)))
    }

    pub fn get(&self, id: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.id == id)
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

/// Runs every check against one snapshot. Errors become failures.
pub fn run_all<'c>(g: &TheoryGraph, checks: impl IntoIterator<Item = &'c CrossCheck>) -> CheckReport {
    let mut outcomes: Vec<CheckOutcome> = checks
        .into_iter()
        .map(|c| {
            run(c, g).unwrap_or_else(|e| {
                let locus = match &e {
                    CheckError::UnknownDerivation(n) | CheckError::UnknownMorphism(n) | CheckError::UnknownTheory(n) => {
                        Locus::Reference(n.clone())
                    }
                    CheckError::IllFormedCheck(_) => Locus::Reference(c.id().to_string()),
                };
                CheckOutcome::new(c.id(), c.kind(), CheckStatus::Failure(e.to_string()), e.to_string()).at(locus)
            })
        })
        .collect();
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));
    CheckReport { outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Formula, Step};

    fn leaf(rule: Rule) -> Skeleton {
        Skeleton { rule, children: vec![] }
    }

    #[test]
    fn skeleton_follows_premise_labels() {
        let d = Derivation::new(
            "d",
            vec![
                Step::new("a", Rule::TruthIntro, &[], Formula::True),
                Step::new("b", Rule::TruthIntro, &[], Formula::True),
                Step::new("c", Rule::AndIntro, &["b", "a"], Formula::and(Formula::True, Formula::True)),
            ],
        );
        let s = skeleton(&d).unwrap();
        assert_eq!(s.to_string(), "and-intro(truth-intro, truth-intro)");
        assert!(skeleton(&Derivation::new("e", vec![])).is_none());
    }

    #[test]
    fn divergence_points_at_the_first_differing_node() {
        let a = Skeleton {
            rule: Rule::AndIntro,
            children: vec![leaf(Rule::TruthIntro), leaf(Rule::Hypothesis)],
        };
        let mut b = a.clone();
        assert_eq!(skeleton_divergence(&a, &b), None);
        b.children[1] = leaf(Rule::Axiom);
        assert_eq!(skeleton_divergence(&a, &b), Some(vec![1]));
        assert_eq!(skeleton_at(&b, &[1]), Some(&leaf(Rule::Axiom)));
        assert_eq!(skeleton_divergence(&a, &leaf(Rule::AndIntro)), Some(vec![]));
    }
}
