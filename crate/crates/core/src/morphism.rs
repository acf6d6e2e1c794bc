//! Theory morphisms: symbol-to-expression assignments, their homomorphic
//! extension to terms and formulas, proof obligations, and composition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{
    alpha_eq, check_derivation, substitute, substitute_term, wf_formula, wf_term, Context, DerivationRef,
    Formula, KernelError, Subst, Term, Var,
};
use crate::theory::{extends, Theory};

/// Image of a function symbol: a target term over the parameter variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncImage {
    pub params: Vec<Var>,
    pub body: Term,
}

/// Image of a predicate symbol: a target formula over the parameter variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredImage {
    pub params: Vec<Var>,
    pub body: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub sort_map: BTreeMap<String, String>,
    pub func_map: BTreeMap<String, FuncImage>,
    pub pred_map: BTreeMap<String, PredImage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("source symbol `{0}` has no image")]
    UnmappedSymbol(String),
    #[error("ill-typed image for `{symbol}`: {reason}")]
    IllTypedAssignment { symbol: String, reason: String },
    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),
    #[error("no obligation for axiom `{0}`")]
    NoSuchObligation(String),
    #[error("target theory has no axiom `{0}`")]
    NoSuchAxiom(String),
    #[error("target axiom `{axiom}` is not alpha-equal to `{translated}`")]
    AxiomNotAlphaEqual { axiom: String, translated: Formula },
    #[error("derivation `{derivation}` does not prove `{translated}`: {reason}")]
    DerivationMismatch {
        derivation: String,
        translated: Formula,
        reason: String,
    },
    #[error("derivation `{derivation}` fails to check: {source}")]
    Kernel {
        derivation: String,
        #[source]
        source: KernelError,
    },
}

fn ill_typed(symbol: &str, reason: impl Into<String>) -> MorphismError {
    MorphismError::IllTypedAssignment {
        symbol: symbol.to_string(),
        reason: reason.into(),
    }
}

fn canonical_params(params: &[Var]) -> Subst {
    params
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.clone(), Term::var(format!("#{i}"), p.sort.clone())))
        .collect()
}

impl FuncImage {
    pub fn alpha_eq(&self, other: &FuncImage) -> bool {
        self.params.len() == other.params.len()
            && self.params.iter().zip(&other.params).all(|(a, b)| a.sort == b.sort)
            && substitute_term(&self.body, &canonical_params(&self.params))
                == substitute_term(&other.body, &canonical_params(&other.params))
    }
}

impl PredImage {
    pub fn alpha_eq(&self, other: &PredImage) -> bool {
        self.params.len() == other.params.len()
            && self.params.iter().zip(&other.params).all(|(a, b)| a.sort == b.sort)
            && alpha_eq(
                &substitute(&self.body, &canonical_params(&self.params)),
                &substitute(&other.body, &canonical_params(&other.params)),
            )
    }
}

impl Assignment {
    /// The identity assignment on `theory`'s signature.
    pub fn identity(theory: &Theory) -> Self {
        let sig = &theory.signature;
        let params = |sorts: &[String]| -> Vec<Var> {
            sorts
                .iter()
                .enumerate()
                .map(|(i, s)| Var::new(format!("p{}", i + 1), s.clone()))
                .collect()
        };
        let var_terms = |ps: &[Var]| ps.iter().cloned().map(Term::Var).collect::<Vec<_>>();
        Assignment {
            sort_map: sig.sorts().map(|s| (s.clone(), s.clone())).collect(),
            func_map: sig
                .functions()
                .map(|(f, decl)| {
                    let ps = params(&decl.args);
                    let body = Term::app(f.clone(), var_terms(&ps));
                    (f.clone(), FuncImage { params: ps, body })
                })
                .collect(),
            pred_map: sig
                .predicates()
                .map(|(p, args)| {
                    let ps = params(args);
                    let body = Formula::pred(p.clone(), var_terms(&ps));
                    (p.clone(), PredImage { params: ps, body })
                })
                .collect(),
        }
    }

    pub fn map_sort(&self, sort: &str) -> Result<&String, MorphismError> {
        self.sort_map
            .get(sort)
            .ok_or_else(|| MorphismError::UnmappedSymbol(sort.to_string()))
    }

    fn map_var(&self, v: &Var) -> Result<Var, MorphismError> {
        Ok(Var::new(v.name.clone(), self.map_sort(&v.sort)?.clone()))
    }

    fn bind_params(&self, params: &[Var], args: &[Term], symbol: &str) -> Result<Subst, MorphismError> {
        if params.len() != args.len() {
            return Err(ill_typed(symbol, "argument count differs from the image's parameters"));
        }
        params
            .iter()
            .zip(args)
            .map(|(p, a)| Ok((p.name.clone(), self.translate_term(a)?)))
            .collect()
    }

    /// Homomorphic extension of the assignment to terms.
    pub fn translate_term(&self, t: &Term) -> Result<Term, MorphismError> {
        match t {
            Term::Var(v) => Ok(Term::Var(self.map_var(v)?)),
            Term::App(f, args) => {
                let image = self
                    .func_map
                    .get(f)
                    .ok_or_else(|| MorphismError::UnmappedSymbol(f.clone()))?;
                let s = self.bind_params(&image.params, args, f)?;
                Ok(substitute_term(&image.body, &s))
            }
        }
    }

    /// Homomorphic extension of the assignment to formulas.
    pub fn translate_formula(&self, f: &Formula) -> Result<Formula, MorphismError> {
        Ok(match f {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Pred(p, args) => {
                let image = self
                    .pred_map
                    .get(p)
                    .ok_or_else(|| MorphismError::UnmappedSymbol(p.clone()))?;
                let s = self.bind_params(&image.params, args, p)?;
                substitute(&image.body, &s)
            }
            Formula::Eq(a, b) => Formula::Eq(self.translate_term(a)?, self.translate_term(b)?),
            Formula::Not(a) => Formula::not(self.translate_formula(a)?),
            Formula::Binary(c, a, b) => Formula::Binary(
                *c,
                Box::new(self.translate_formula(a)?),
                Box::new(self.translate_formula(b)?),
            ),
            Formula::Quant(q, v, body) => {
                Formula::Quant(*q, self.map_var(v)?, Box::new(self.translate_formula(body)?))
            }
        })
    }

    fn check_params(&self, symbol: &str, params: &[Var], src_args: &[String]) -> Result<Context, MorphismError> {
        if params.len() != src_args.len() {
            return Err(ill_typed(
                symbol,
                format!("expects {} parameter(s), image has {}", src_args.len(), params.len()),
            ));
        }
        let mut ctx = Context::new();
        for (p, s) in params.iter().zip(src_args) {
            let want = self.map_sort(s)?;
            if &p.sort != want {
                return Err(ill_typed(
                    symbol,
                    format!("parameter `{}` has sort `{}`, expected `{want}`", p.name, p.sort),
                ));
            }
            if ctx.insert(p.name.clone(), p.sort.clone()).is_some() {
                return Err(ill_typed(symbol, format!("parameter `{}` repeated", p.name)));
            }
        }
        Ok(ctx)
    }

    /// Totality on `src` and sort-correctness of every image in `tgt`.
    pub fn check(&self, src: &Theory, tgt: &Theory) -> Result<(), MorphismError> {
        let (ssig, tsig) = (&src.signature, &tgt.signature);
        for s in ssig.sorts() {
            let image = self.map_sort(s)?;
            if !tsig.has_sort(image) {
                return Err(ill_typed(s, format!("target has no sort `{image}`")));
            }
        }
        for (f, decl) in ssig.functions() {
            let image = self
                .func_map
                .get(f)
                .ok_or_else(|| MorphismError::UnmappedSymbol(f.clone()))?;
            let ctx = self.check_params(f, &image.params, &decl.args)?;
            let sort = wf_term(tsig, &ctx, &image.body).map_err(|e| ill_typed(f, e.to_string()))?;
            let want = self.map_sort(&decl.result)?;
            if &sort != want {
                return Err(ill_typed(f, format!("image has sort `{sort}`, expected `{want}`")));
            }
        }
        for (p, args) in ssig.predicates() {
            let image = self
                .pred_map
                .get(p)
                .ok_or_else(|| MorphismError::UnmappedSymbol(p.clone()))?;
            let ctx = self.check_params(p, &image.params, args)?;
            wf_formula(tsig, &ctx, &image.body).map_err(|e| ill_typed(p, e.to_string()))?;
        }
        let known = |n: &String| ssig.kind_of(n).is_some();
        if let Some(extra) = self
            .sort_map
            .keys()
            .find(|s| !ssig.has_sort(s))
            .or_else(|| self.func_map.keys().find(|f| !known(f)))
            .or_else(|| self.pred_map.keys().find(|p| !known(p)))
        {
            return Err(ill_typed(extra, "not a symbol of the source theory"));
        }
        Ok(())
    }

    /// Sorts map to themselves and every symbol maps to itself applied to its
    /// parameters in order.
    pub fn is_identity(&self) -> bool {
        let params_in_order = |params: &[Var], args: &[Term]| {
            params.len() == args.len()
                && params
                    .iter()
                    .zip(args)
                    .all(|(p, a)| matches!(a, Term::Var(v) if v.name == p.name))
        };
        self.sort_map.iter().all(|(a, b)| a == b)
            && self.func_map.iter().all(|(f, img)| {
                matches!(&img.body, Term::App(g, args) if g == f && params_in_order(&img.params, args))
            })
            && self.pred_map.iter().all(|(p, img)| {
                matches!(&img.body, Formula::Pred(q, args) if q == p && params_in_order(&img.params, args))
            })
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &Assignment) -> Result<Assignment, MorphismError> {
        let map_params =
            |ps: &[Var]| -> Result<Vec<Var>, MorphismError> { ps.iter().map(|p| next.map_var(p)).collect() };
        Ok(Assignment {
            sort_map: self
                .sort_map
                .iter()
                .map(|(s, t)| Ok((s.clone(), next.map_sort(t)?.clone())))
                .collect::<Result<_, MorphismError>>()?,
            func_map: self
                .func_map
                .iter()
                .map(|(f, img)| {
                    Ok((
                        f.clone(),
                        FuncImage {
                            params: map_params(&img.params)?,
                            body: next.translate_term(&img.body)?,
                        },
                    ))
                })
                .collect::<Result<_, MorphismError>>()?,
            pred_map: self
                .pred_map
                .iter()
                .map(|(p, img)| {
                    Ok((
                        p.clone(),
                        PredImage {
                            params: map_params(&img.params)?,
                            body: next.translate_formula(&img.body)?,
                        },
                    ))
                })
                .collect::<Result<_, MorphismError>>()?,
        })
    }

    /// Pointwise alpha-equality of images, parameter names disregarded.
    pub fn alpha_eq(&self, other: &Assignment) -> bool {
        self.sort_map == other.sort_map
            && self.func_map.len() == other.func_map.len()
            && self
                .func_map
                .iter()
                .all(|(f, img)| other.func_map.get(f).is_some_and(|o| img.alpha_eq(o)))
            && self.pred_map.len() == other.pred_map.len()
            && self
                .pred_map
                .iter()
                .all(|(p, img)| other.pred_map.get(p).is_some_and(|o| img.alpha_eq(o)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObligationStatus {
    Proved(DerivationRef),
    ByAxiom(String),
    /// Discharged because both components of a composite are verified.
    ByComposition,
    Assumed(String),
    Pending,
}

impl ObligationStatus {
    pub fn is_discharged(&self) -> bool {
        matches!(
            self,
            ObligationStatus::Proved(_) | ObligationStatus::ByAxiom(_) | ObligationStatus::ByComposition
        )
    }
}

impl fmt::Display for ObligationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObligationStatus::Proved(d) => write!(f, "proved by {}", d.name),
            ObligationStatus::ByAxiom(a) => write!(f, "by axiom {a}"),
            ObligationStatus::ByComposition => f.write_str("proved by composition"),
            ObligationStatus::Assumed(r) => write!(f, "assumed: {r}"),
            ObligationStatus::Pending => f.write_str("pending"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub axiom_name: String,
    pub translated: Formula,
    pub status: ObligationStatus,
}

/// How to discharge an obligation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discharge {
    Proved(DerivationRef),
    ByAxiom(String),
    Assumed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerificationStatus {
    Verified,
    /// Names of the obligations that are assumed or pending.
    PartiallyVerified(Vec<String>),
}

impl VerificationStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, VerificationStatus::Verified)
    }
}

impl fmt::Display for VerificationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationStatus::Verified => f.write_str("verified"),
            VerificationStatus::PartiallyVerified(open) => {
                write!(f, "partially verified (open: {})", open.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub source: String,
    pub target: String,
    pub assignment: Assignment,
    pub obligations: Vec<Obligation>,
}

/// One obligation per source axiom, in declaration order. A target axiom
/// alpha-equal to the translation discharges it up front.
pub fn generate_obligations(
    assignment: &Assignment,
    src: &Theory,
    tgt: &Theory,
) -> Result<Vec<Obligation>, MorphismError> {
    src.axioms
        .iter()
        .map(|(name, ax)| {
            let translated = assignment.translate_formula(ax)?;
            let status = match tgt.axioms.iter().find(|(_, b)| alpha_eq(b, &translated)) {
                Some((hit, _)) => ObligationStatus::ByAxiom(hit.clone()),
                None => ObligationStatus::Pending,
            };
            Ok(Obligation {
                axiom_name: name.clone(),
                translated,
                status,
            })
        })
        .collect()
}

/// Validates `method` against `tgt` and returns the updated obligation.
pub fn discharge(o: &Obligation, method: Discharge, tgt: &Theory) -> Result<Obligation, MorphismError> {
    let status = match method {
        Discharge::Assumed(reason) => ObligationStatus::Assumed(reason),
        Discharge::ByAxiom(name) => {
            let ax = tgt
                .axioms
                .get(&name)
                .ok_or_else(|| MorphismError::NoSuchAxiom(name.clone()))?;
            if !alpha_eq(ax, &o.translated) {
                return Err(MorphismError::AxiomNotAlphaEqual {
                    axiom: name,
                    translated: o.translated.clone(),
                });
            }
            ObligationStatus::ByAxiom(name)
        }
        Discharge::Proved(d) => {
            let seq = check_derivation(&tgt.signature, &tgt.axioms, &d).map_err(|source| MorphismError::Kernel {
                derivation: d.name.clone(),
                source,
            })?;
            let mismatch = |reason: String| MorphismError::DerivationMismatch {
                derivation: d.name.clone(),
                translated: o.translated.clone(),
                reason,
            };
            if !seq.hyps.is_empty() {
                return Err(mismatch(format!("open hypotheses remain: {seq}")));
            }
            if !alpha_eq(&seq.conclusion, &o.translated) {
                return Err(mismatch(format!("it concludes `{}`", seq.conclusion)));
            }
            ObligationStatus::Proved(d)
        }
    };
    Ok(Obligation {
        status,
        ..o.clone()
    })
}

impl Morphism {
    /// Checks the assignment and generates obligations.
    pub fn new(
        id: impl Into<String>,
        src: &Theory,
        tgt: &Theory,
        assignment: Assignment,
    ) -> Result<Morphism, MorphismError> {
        if src.logic != tgt.logic {
            return Err(MorphismError::TheoryMismatch(format!(
                "logic `{}` differs from `{}`",
                src.logic, tgt.logic
            )));
        }
        assignment.check(src, tgt)?;
        let obligations = generate_obligations(&assignment, src, tgt)?;
        Ok(Morphism {
            id: id.into(),
            source: src.id.clone(),
            target: tgt.id.clone(),
            assignment,
            obligations,
        })
    }

    /// The identity morphism on `t`.
    pub fn identity(t: &Theory) -> Morphism {
        Morphism::new(format!("id_{}", t.id), t, t, Assignment::identity(t)).expect("identity is well-typed")
    }

    pub fn translate_term(&self, t: &Term) -> Result<Term, MorphismError> {
        self.assignment.translate_term(t)
    }

    pub fn translate_formula(&self, f: &Formula) -> Result<Formula, MorphismError> {
        self.assignment.translate_formula(f)
    }

    pub fn obligation(&self, axiom: &str) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.axiom_name == axiom)
    }

    pub fn discharge(&self, axiom: &str, method: Discharge, tgt: &Theory) -> Result<Morphism, MorphismError> {
        if tgt.id != self.target {
            return Err(MorphismError::TheoryMismatch(format!(
                "`{}` is not the target `{}`",
                tgt.id, self.target
            )));
        }
        let idx = self
            .obligations
            .iter()
            .position(|o| o.axiom_name == axiom)
            .ok_or_else(|| MorphismError::NoSuchObligation(axiom.to_string()))?;
        let updated = discharge(&self.obligations[idx], method, tgt)?;
        let mut out = self.clone();
        out.obligations[idx] = updated;
        Ok(out)
    }

    pub fn verify(&self) -> VerificationStatus {
        let open: Vec<String> = self
            .obligations
            .iter()
            .filter(|o| !o.status.is_discharged())
            .map(|o| o.axiom_name.clone())
            .collect();
        if open.is_empty() {
            VerificationStatus::Verified
        } else {
            VerificationStatus::PartiallyVerified(open)
        }
    }

    pub fn is_inclusion(&self, src: &Theory, tgt: &Theory) -> bool {
        src.id == self.source && tgt.id == self.target && extends(src, tgt) && self.assignment.is_identity()
    }
}

/// `first` followed by `second`.
pub fn compose(first: &Morphism, second: &Morphism) -> Result<Morphism, MorphismError> {
    if first.target != second.source {
        return Err(MorphismError::TheoryMismatch(format!(
            "`{}` ends at `{}` but `{}` starts at `{}`",
            first.id, first.target, second.id, second.source
        )));
    }
    let assignment = first.assignment.compose(&second.assignment)?;
    let both_verified = first.verify().is_verified() && second.verify().is_verified();
    let obligations = first
        .obligations
        .iter()
        .map(|o| {
            Ok(Obligation {
                axiom_name: o.axiom_name.clone(),
                translated: second.translate_formula(&o.translated)?,
                status: if both_verified {
                    ObligationStatus::ByComposition
                } else {
                    ObligationStatus::Pending
                },
            })
        })
        .collect::<Result<_, MorphismError>>()?;
    Ok(Morphism {
        id: format!("{};{}", first.id, second.id),
        source: first.source.clone(),
        target: second.target.clone(),
        assignment,
        obligations,
    })
}

/// Symbols of the source signature that an assignment leaves unmapped.
pub fn unmapped_symbols(assignment: &Assignment, src: &Theory) -> BTreeSet<String> {
    let sig = &src.signature;
    sig.sorts()
        .filter(|s| !assignment.sort_map.contains_key(*s))
        .chain(sig.functions().map(|(f, _)| f).filter(|f| !assignment.func_map.contains_key(*f)))
        .chain(sig.predicates().map(|(p, _)| p).filter(|p| !assignment.pred_map.contains_key(*p)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Signature, Term};

    fn pointed() -> Theory {
        let mut sig = Signature::new();
        sig.add_sort("P").unwrap();
        sig.add_function("pt", vec![], "P").unwrap();
        sig.add_predicate("good", vec!["P".into()]).unwrap();
        Theory::new("Pointed", sig)
            .add_axiom("good_pt", Formula::pred("good", vec![Term::constant("pt")]))
            .unwrap()
    }

    fn nat() -> Theory {
        let mut sig = Signature::new();
        sig.add_sort("N").unwrap();
        sig.add_sort("B").unwrap();
        sig.add_function("z", vec![], "N").unwrap();
        sig.add_function("b", vec![], "B").unwrap();
        sig.add_function("s", vec!["N".into()], "N").unwrap();
        sig.add_predicate("even", vec!["N".into()]).unwrap();
        Theory::new("Nat", sig)
            .add_axiom("even_z", Formula::pred("even", vec![Term::constant("z")]))
            .unwrap()
    }

    fn assignment(point: Term) -> Assignment {
        let x = Var::new("x", "N");
        Assignment {
            sort_map: BTreeMap::from([("P".into(), "N".into())]),
            func_map: BTreeMap::from([("pt".into(), FuncImage { params: vec![], body: point })]),
            pred_map: BTreeMap::from([(
                "good".into(),
                PredImage {
                    params: vec![x.clone()],
                    body: Formula::pred("even", vec![Term::Var(x)]),
                },
            )]),
        }
    }

    fn ss_z() -> Term {
        Term::app("s", vec![Term::app("s", vec![Term::constant("z")])])
    }

    #[test]
    fn matching_target_axiom_discharges_up_front() {
        let m = Morphism::new("M", &pointed(), &nat(), assignment(Term::constant("z"))).unwrap();
        assert_eq!(m.obligations[0].status, ObligationStatus::ByAxiom("even_z".into()));
        assert!(m.verify().is_verified());
    }

    #[test]
    fn other_axioms_stay_pending_until_discharged() {
        let m = Morphism::new("M", &pointed(), &nat(), assignment(ss_z())).unwrap();
        assert_eq!(m.obligations[0].translated, Formula::pred("even", vec![ss_z()]));
        assert_eq!(m.verify(), VerificationStatus::PartiallyVerified(vec!["good_pt".into()]));
        assert!(matches!(
            m.discharge("good_pt", Discharge::ByAxiom("even_z".into()), &nat()),
            Err(MorphismError::AxiomNotAlphaEqual { .. })
        ));
        assert!(matches!(
            m.discharge("nope", Discharge::Assumed("later".into()), &nat()),
            Err(MorphismError::NoSuchObligation(_))
        ));
        let assumed = m.discharge("good_pt", Discharge::Assumed("later".into()), &nat()).unwrap();
        assert!(!assumed.verify().is_verified());
    }

    #[test]
    fn ill_typed_and_missing_images_are_rejected() {
        let err = Morphism::new("M", &pointed(), &nat(), assignment(Term::constant("b"))).unwrap_err();
        assert!(matches!(err, MorphismError::IllTypedAssignment { .. }), "{err}");
        let mut a = assignment(Term::constant("z"));
        a.pred_map.clear();
        assert_eq!(unmapped_symbols(&a, &pointed()), BTreeSet::from(["good".to_string()]));
        assert_eq!(
            Morphism::new("M", &pointed(), &nat(), a).unwrap_err(),
            MorphismError::UnmappedSymbol("good".into())
        );
    }

    #[test]
    fn images_with_binders_do_not_capture() {
        let (x, y) = (Var::new("x", "N"), Var::new("y", "N"));
        let mut a = assignment(Term::constant("z"));
        a.pred_map.insert(
            "good".into(),
            PredImage {
                params: vec![x.clone()],
                body: Formula::exists(y.clone(), Formula::eq(Term::Var(x), Term::app("s", vec![Term::Var(y.clone())]))),
            },
        );
        let py = Var::new("y", "P");
        let f = Formula::forall(py.clone(), Formula::pred("good", vec![Term::Var(py)]));
        let got = a.translate_formula(&f).unwrap();
        let (u, v) = (Var::new("u", "N"), Var::new("v", "N"));
        let want = Formula::forall(
            u.clone(),
            Formula::exists(v.clone(), Formula::eq(Term::Var(u), Term::app("s", vec![Term::Var(v)]))),
        );
        assert!(alpha_eq(&got, &want), "{got}");
    }

    #[test]
    fn identity_composes_to_itself() {
        let p = pointed();
        let id = Morphism::identity(&p);
        assert!(id.assignment.is_identity());
        assert!(id.verify().is_verified());
        let twice = compose(&id, &id).unwrap();
        assert!(twice.assignment.alpha_eq(&id.assignment));
    }
}
