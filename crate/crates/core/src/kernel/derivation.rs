//! Explicit natural-deduction derivations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use indexmap::IndexMap;

use super::subst::alpha_eq;
use super::syntax::{Formula, Term, Var};

macro_rules! rules {
    ($($variant:ident => $name:literal, $arity:literal;)*) => {
        /// The fixed inference rule set.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Rule {
            $($variant,)*
        }

        impl Rule {
            pub const ALL: &'static [Rule] = &[$(Rule::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Rule::$variant => $name,)*
                }
            }

            /// Number of premises the rule consumes.
            pub fn arity(self) -> usize {
                match self {
                    $(Rule::$variant => $arity,)*
                }
            }
        }

        impl FromStr for Rule {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(Rule::$variant),)*
                    other => Err(format!("unknown rule `{other}`")),
                }
            }
        }
    };
}

rules! {
    Hypothesis => "hypothesis", 0;
    Axiom => "axiom", 0;
    TruthIntro => "truth-intro", 0;
    FalsityElim => "falsity-elim", 1;
    AndIntro => "and-intro", 2;
    AndElimLeft => "and-elim-left", 1;
    AndElimRight => "and-elim-right", 1;
    OrIntroLeft => "or-intro-left", 1;
    OrIntroRight => "or-intro-right", 1;
    OrElim => "or-elim", 3;
    ImplIntro => "impl-intro", 1;
    ImplElim => "impl-elim", 2;
    IffIntro => "iff-intro", 2;
    IffElimLeft => "iff-elim-left", 1;
    IffElimRight => "iff-elim-right", 1;
    NegIntro => "neg-intro", 1;
    ClassicalContradiction => "classical-contradiction", 1;
    ForallIntro => "forall-intro", 1;
    ForallElim => "forall-elim", 1;
    ExistsIntro => "exists-intro", 1;
    ExistsElim => "exists-elim", 2;
    EqRefl => "eq-refl", 0;
    EqSubst => "eq-subst", 2;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    None,
    /// An axiom name.
    Name,
    /// An instantiating or witness term.
    Term,
    /// An eigenvariable.
    Variable,
    /// A formula with one marked variable, used by `eq-subst`.
    Motive,
}

impl Rule {
    pub fn param_kind(self) -> ParamKind {
        match self {
            Rule::Axiom => ParamKind::Name,
            Rule::ForallElim | Rule::ExistsIntro => ParamKind::Term,
            Rule::ForallIntro | Rule::ExistsElim => ParamKind::Variable,
            Rule::EqSubst => ParamKind::Motive,
            _ => ParamKind::None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Name(String),
    Term(Term),
    /// `z:S. body` marks the replaced positions by occurrences of `z`.
    Motive(Var, Formula),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Name(n) => f.write_str(n),
            Param::Term(t) => write!(f, "{t}"),
            Param::Motive(v, body) => write!(f, "{v}. {body}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub label: String,
    pub rule: Rule,
    /// Labels of earlier steps, in the order the rule expects.
    pub premises: Vec<String>,
    pub param: Option<Param>,
    /// Claimed hypotheses; when absent only the conclusion is claimed.
    pub hyps: Option<Vec<Formula>>,
    pub conclusion: Formula,
}

impl Step {
    pub fn new(label: impl Into<String>, rule: Rule, premises: &[&str], conclusion: Formula) -> Self {
        Step {
            label: label.into(),
            rule,
            premises: premises.iter().map(|p| p.to_string()).collect(),
            param: None,
            hyps: None,
            conclusion,
        }
    }

    pub fn with_param(mut self, param: Param) -> Self {
        self.param = Some(param);
        self
    }

    pub fn with_hyps(mut self, hyps: Vec<Formula>) -> Self {
        self.hyps = Some(hyps);
        self
    }
}

/// A derivation is a list of steps; premises point backwards and the last
/// step is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub name: String,
    pub steps: Vec<Step>,
}

pub type DerivationRef = Arc<Derivation>;

impl Derivation {
    pub fn new(name: impl Into<String>, steps: Vec<Step>) -> Self {
        Derivation {
            name: name.into(),
            steps,
        }
    }

    pub fn root(&self) -> Option<&Step> {
        self.steps.last()
    }

    pub fn step(&self, label: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.label == label)
    }

    /// Axiom leaves as (axiom name, claimed formula).
    pub fn axiom_leaves(&self) -> Vec<(&str, &Formula)> {
        self.steps
            .iter()
            .filter(|s| s.rule == Rule::Axiom)
            .filter_map(|s| match &s.param {
                Some(Param::Name(n)) => Some((n.as_str(), &s.conclusion)),
                _ => None,
            })
            .collect()
    }

    /// Replaces every axiom leaf whose name `resolve` maps to a derivation by
    /// that derivation's steps (recursively). Inlined labels are prefixed with
    /// the replaced leaf's label. Resolved derivations must conclude the leaf's
    /// formula from no hypotheses for the result to check.
    pub fn inline_axioms(
        &self,
        name: impl Into<String>,
        resolve: &dyn Fn(&str) -> Option<DerivationRef>,
    ) -> Derivation {
        let mut steps = Vec::new();
        self.inline_into("", resolve, &mut steps, &mut Vec::new());
        Derivation::new(name, steps)
    }

    fn inline_into(
        &self,
        prefix: &str,
        resolve: &dyn Fn(&str) -> Option<DerivationRef>,
        out: &mut Vec<Step>,
        active: &mut Vec<String>,
    ) -> Option<String> {
        let mut renamed: HashMap<&str, String> = HashMap::new();
        let mut last = None;
        for step in &self.steps {
            let label = format!("{prefix}{}", step.label);
            let inlined = match (&step.rule, &step.param) {
                (Rule::Axiom, Some(Param::Name(n))) if !active.contains(n) => resolve(n).map(|d| (n, d)),
                _ => None,
            };
            let new_label = if let Some((n, d)) = inlined {
                active.push(n.clone());
                let root = d.inline_into(&format!("{label}/"), resolve, out, active);
                active.pop();
                root.unwrap_or(label)
            } else {
                let mut s = step.clone();
                s.label = label.clone();
                s.premises = s
                    .premises
                    .iter()
                    .map(|p| renamed.get(p.as_str()).cloned().unwrap_or_else(|| format!("{prefix}{p}")))
                    .collect();
                out.push(s);
                label
            };
            renamed.insert(&step.label, new_label.clone());
            last = Some(new_label);
        }
        last
    }

    /// Structural equality up to alpha-equivalence of every formula.
    pub fn alpha_eq(&self, other: &Derivation) -> bool {
        self.name == other.name
            && self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|(a, b)| {
                a.label == b.label
                    && a.rule == b.rule
                    && a.premises == b.premises
                    && param_alpha_eq(a.param.as_ref(), b.param.as_ref())
                    && match (&a.hyps, &b.hyps) {
                        (None, None) => true,
                        (Some(x), Some(y)) => {
                            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| alpha_eq(p, q))
                        }
                        _ => false,
                    }
                    && alpha_eq(&a.conclusion, &b.conclusion)
            })
    }
}

fn param_alpha_eq(a: Option<&Param>, b: Option<&Param>) -> bool {
    match (a, b) {
        (Some(Param::Motive(v, f)), Some(Param::Motive(w, g))) => {
            alpha_eq(&Formula::forall(v.clone(), f.clone()), &Formula::forall(w.clone(), g.clone()))
        }
        (a, b) => a == b,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub hyps: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn is_closed_theorem(&self) -> bool {
        self.hyps.is_empty()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.hyps.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

/// Named formulas a derivation's axiom leaves may cite.
pub trait AxiomSource {
    fn axiom(&self, name: &str) -> Option<&Formula>;
}

impl AxiomSource for IndexMap<String, Formula> {
    fn axiom(&self, name: &str) -> Option<&Formula> {
        self.get(name)
    }
}

impl AxiomSource for BTreeMap<String, Formula> {
    fn axiom(&self, name: &str) -> Option<&Formula> {
        self.get(name)
    }
}

impl<T: AxiomSource + ?Sized> AxiomSource for &T {
    fn axiom(&self, name: &str) -> Option<&Formula> {
        (**self).axiom(name)
    }
}

/// Looks in the first source, then the second.
impl<A: AxiomSource, B: AxiomSource> AxiomSource for (A, B) {
    fn axiom(&self, name: &str) -> Option<&Formula> {
        self.0.axiom(name).or_else(|| self.1.axiom(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), *r);
        }
        assert!("modus-ponens".parse::<Rule>().is_err());
    }

    #[test]
    fn inline_replaces_leaf_by_root() {
        let p = Formula::pred("p", vec![]);
        let lemma = Derivation::new(
            "lemma",
            vec![
                Step::new("t", Rule::TruthIntro, &[], Formula::True),
                Step::new("i", Rule::ImplIntro, &["t"], Formula::implies(p.clone(), Formula::True)),
            ],
        );
        let main = Derivation::new(
            "main",
            vec![
                Step::new("a", Rule::Axiom, &[], Formula::implies(p.clone(), Formula::True))
                    .with_param(Param::Name("step:lemma".into())),
                Step::new("h", Rule::Hypothesis, &[], p.clone()),
                Step::new("m", Rule::ImplElim, &["a", "h"], Formula::True),
            ],
        );
        let lemma = Arc::new(lemma);
        let out = main.inline_axioms("joined", &|n| (n == "step:lemma").then(|| lemma.clone()));
        let labels: Vec<&str> = out.steps.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["a/t", "a/i", "h", "m"]);
        assert_eq!(out.steps[3].premises, ["a/i", "h"]);
    }
}
