//! Axiomatic theories: a logic, a signature and named axioms, plus theorems
//! recorded with their provenance.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::kernel::{
    alpha_eq, check_derivation, is_closed, wf_formula, Context, DerivationRef, Formula, KernelError, Signature,
    WfError, MSFOL,
};

/// Where a theorem comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Kernel-checked derivation from this theory's axioms.
    Derived(DerivationRef),
    /// Image of a theorem of another theory along a morphism path. `partial`
    /// marks transport along a path that was not fully verified.
    Transported {
        source_theory: String,
        source_theorem: String,
        path: Vec<String>,
        partial: bool,
    },
    /// Accepted without proof.
    Assumed(String),
}

impl Provenance {
    /// Assumed content and partially verified transports are flagged in reports.
    pub fn is_flagged(&self) -> bool {
        matches!(
            self,
            Provenance::Assumed(_) | Provenance::Transported { partial: true, .. }
        )
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Derived(d) => write!(f, "derived by {}", d.name),
            Provenance::Transported {
                source_theory,
                source_theorem,
                path,
                partial,
            } => {
                write!(f, "transported from {source_theory}.{source_theorem} via {}", path.join(", "))?;
                if *partial {
                    f.write_str(" (partially verified path)")?;
                }
                Ok(())
            }
            Provenance::Assumed(reason) => write!(f, "assumed: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem {
    pub formula: Formula,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("theory `{0}` already exists")]
    DuplicateTheoryId(String),
    #[error("`{0}` is already an axiom or theorem name in this theory")]
    DuplicateName(String),
    #[error("formula `{name}` is ill-formed: {source}")]
    IllFormedFormula {
        name: String,
        #[source]
        source: WfError,
    },
    #[error("formula `{0}` has free variables")]
    OpenFormula(String),
    #[error("derivation `{derivation}` does not establish `{name}`: {reason}")]
    DerivationMismatch {
        name: String,
        derivation: String,
        reason: String,
    },
    #[error("derivation `{derivation}` fails to check: {source}")]
    Kernel {
        derivation: String,
        #[source]
        source: KernelError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub id: String,
    pub logic: String,
    pub signature: Signature,
    pub axioms: IndexMap<String, Formula>,
    pub theorems: IndexMap<String, Theorem>,
}

impl Theory {
    pub fn new(id: impl Into<String>, signature: Signature) -> Self {
        Theory {
            id: id.into(),
            logic: MSFOL.to_string(),
            signature,
            axioms: IndexMap::new(),
            theorems: IndexMap::new(),
        }
    }

    fn check_closed_wf(&self, name: &str, f: &Formula) -> Result<(), TheoryError> {
        if !is_closed(f) {
            return Err(TheoryError::OpenFormula(name.to_string()));
        }
        wf_formula(&self.signature, &Context::new(), f).map_err(|source| TheoryError::IllFormedFormula {
            name: name.to_string(),
            source,
        })
    }

    fn check_fresh(&self, name: &str) -> Result<(), TheoryError> {
        if self.axioms.contains_key(name) || self.theorems.contains_key(name) {
            Err(TheoryError::DuplicateName(name.to_string()))
        } else {
            Ok(())
        }
    }

    pub fn add_axiom(&self, name: impl Into<String>, f: Formula) -> Result<Theory, TheoryError> {
        let name = name.into();
        self.check_closed_wf(&name, &f)?;
        self.check_fresh(&name)?;
        let mut out = self.clone();
        out.axioms.insert(name, f);
        Ok(out)
    }

    /// Re-runs the kernel on a `Derived` provenance and checks it concludes `f`
    /// from no hypotheses.
    pub fn check_provenance(&self, name: &str, f: &Formula, p: &Provenance) -> Result<(), TheoryError> {
        let Provenance::Derived(d) = p else {
            return Ok(());
        };
        let seq = check_derivation(&self.signature, &self.axioms, d).map_err(|source| TheoryError::Kernel {
            derivation: d.name.clone(),
            source,
        })?;
        let mismatch = |reason: String| TheoryError::DerivationMismatch {
            name: name.to_string(),
            derivation: d.name.clone(),
            reason,
        };
        if !seq.hyps.is_empty() {
            return Err(mismatch(format!("open hypotheses remain: {seq}")));
        }
        if !alpha_eq(&seq.conclusion, f) {
            return Err(mismatch(format!("it concludes `{}`", seq.conclusion)));
        }
        Ok(())
    }

    pub fn add_theorem(&self, name: impl Into<String>, f: Formula, p: Provenance) -> Result<Theory, TheoryError> {
        let name = name.into();
        self.check_closed_wf(&name, &f)?;
        self.check_provenance(&name, &f, &p)?;
        self.check_fresh(&name)?;
        let mut out = self.clone();
        out.theorems.insert(
            name,
            Theorem {
                formula: f,
                provenance: p,
            },
        );
        Ok(out)
    }

    /// Name of an axiom or theorem alpha-equal to `f`, if any.
    pub fn find_statement(&self, f: &Formula) -> Option<&str> {
        self.axioms
            .iter()
            .find(|(_, a)| alpha_eq(a, f))
            .map(|(n, _)| n.as_str())
            .or_else(|| {
                self.theorems
                    .iter()
                    .find(|(_, t)| alpha_eq(&t.formula, f))
                    .map(|(n, _)| n.as_str())
            })
    }

    pub fn find_theorem(&self, f: &Formula) -> Option<&str> {
        self.theorems
            .iter()
            .find(|(_, t)| alpha_eq(&t.formula, f))
            .map(|(n, _)| n.as_str())
    }

    /// An axiom or theorem by name.
    pub fn statement(&self, name: &str) -> Option<&Formula> {
        self.axioms
            .get(name)
            .or_else(|| self.theorems.get(name).map(|t| &t.formula))
    }

    /// True iff `other` keeps everything in `self` (same logic, signature
    /// contained, axioms and theorems present by name with equal content).
    pub fn is_prefix_of(&self, other: &Theory) -> bool {
        self.id == other.id
            && self.logic == other.logic
            && self.signature.is_subsignature_of(&other.signature)
            && self.axioms.iter().all(|(n, f)| other.axioms.get(n) == Some(f))
            && self.theorems.iter().all(|(n, t)| other.theorems.get(n) == Some(t))
    }
}

/// `sup` extends `sub`: its signature contains `sub`'s and every axiom of
/// `sub` has an alpha-equal axiom in `sup`.
pub fn extends(sub: &Theory, sup: &Theory) -> bool {
    sub.logic == sup.logic
        && sub.signature.is_subsignature_of(&sup.signature)
        && sub
            .axioms
            .values()
            .all(|a| sup.axioms.values().any(|b| alpha_eq(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Derivation, Param, Rule, Step, Term, Var};
    use std::sync::Arc;

    fn monoid_sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("M").unwrap();
        sig.add_function("e", vec![], "M").unwrap();
        sig.add_function("op", vec!["M".into(), "M".into()], "M").unwrap();
        sig
    }

    fn m(n: &str) -> Term {
        Term::var(n, "M")
    }
    fn op(a: Term, b: Term) -> Term {
        Term::app("op", vec![a, b])
    }
    fn e() -> Term {
        Term::constant("e")
    }

    fn assoc() -> Formula {
        Formula::forall_all(
            [Var::new("x", "M"), Var::new("y", "M"), Var::new("z", "M")],
            Formula::eq(op(op(m("x"), m("y")), m("z")), op(m("x"), op(m("y"), m("z")))),
        )
    }

    fn idl() -> Formula {
        Formula::forall(Var::new("x", "M"), Formula::eq(op(e(), m("x")), m("x")))
    }

    #[test]
    fn empty_theories_are_legal() {
        let t = Theory::new("Empty", Signature::new());
        assert!(t.axioms.is_empty() && t.theorems.is_empty());
        assert_eq!(t.logic, MSFOL);
    }

    #[test]
    fn axioms_must_be_closed_and_fresh() {
        let t = Theory::new("Monoid", monoid_sig()).add_axiom("assoc", assoc()).unwrap();
        assert_eq!(t.axioms.len(), 1);
        let open = Formula::eq(op(e(), m("x")), m("x"));
        assert_eq!(t.add_axiom("bad", open), Err(TheoryError::OpenFormula("bad".into())));
        assert_eq!(
            t.add_axiom("assoc", idl()),
            Err(TheoryError::DuplicateName("assoc".into()))
        );
    }

    #[test]
    fn derived_theorem_must_match_its_derivation() {
        let t = Theory::new("Monoid", monoid_sig()).add_axiom("idl", idl()).unwrap();
        let inst = Formula::eq(op(e(), e()), e());
        let d = Arc::new(Derivation::new(
            "d",
            vec![
                Step::new("a", Rule::Axiom, &[], idl()).with_param(Param::Name("idl".into())),
                Step::new("b", Rule::ForallElim, &["a"], inst.clone()).with_param(Param::Term(e())),
            ],
        ));
        let ok = t.add_theorem("ee", inst, Provenance::Derived(d.clone())).unwrap();
        assert!(ok.theorems.contains_key("ee"));
        let other = Formula::eq(e(), e());
        assert!(matches!(
            t.add_theorem("other", other, Provenance::Derived(d)),
            Err(TheoryError::DerivationMismatch { .. })
        ));
    }

    #[test]
    fn assumed_theorems_are_flagged() {
        let t = Theory::new("Monoid", monoid_sig());
        let t = t
            .add_theorem("conj", Formula::eq(e(), e()), Provenance::Assumed("pending".into()))
            .unwrap();
        assert!(t.theorems["conj"].provenance.is_flagged());
    }

    #[test]
    fn extension_is_reflexive_and_directional() {
        let monoid = Theory::new("Monoid", monoid_sig())
            .add_axiom("assoc", assoc())
            .unwrap();
        let comm = Formula::forall_all(
            [Var::new("a", "M"), Var::new("b", "M")],
            Formula::eq(op(m("a"), m("b")), op(m("b"), m("a"))),
        );
        let cm = Theory::new("CommMonoid", monoid_sig())
            .add_axiom("assoc2", assoc())
            .unwrap()
            .add_axiom("comm", comm)
            .unwrap();
        assert!(extends(&monoid, &cm));
        assert!(extends(&monoid, &monoid));
        assert!(!extends(&cm, &monoid));
    }
}
