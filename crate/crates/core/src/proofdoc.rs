//! Flexiformal proof documents: an argument mixing informal steps with
//! kernel-checked derivations, attached to a theorem of a home theory.
//!
//! Formal steps may cite earlier steps as the pseudo-axiom `step:<label>`.
//! Citations that cannot be backed by an established step become gaps; they
//! are admitted as assumptions so the rest of the step still gets checked.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::crosscheck::{run_all, CheckReport, CheckSet};
use crate::graph::{GraphError, TheoryGraph};
use crate::kernel::{alpha_eq, check_derivation, is_closed, wf_formula, Context, DerivationRef, Formula};
use crate::theory::{Provenance, Theory, TheoryError};

pub const STEP_PREFIX: &str = "step:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocStep {
    Informal {
        label: String,
        text: String,
        claim: Option<Formula>,
    },
    Formal {
        label: String,
        derivation: String,
    },
}

impl DocStep {
    pub fn label(&self) -> &str {
        match self {
            DocStep::Informal { label, .. } | DocStep::Formal { label, .. } => label,
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, DocStep::Formal { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofDoc {
    pub id: String,
    pub home: String,
    pub thm_name: String,
    pub thm: Formula,
    pub arg: Vec<DocStep>,
    /// Ids of attached cross checks.
    pub cc: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub formal: usize,
    pub total: usize,
}

impl Coverage {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.formal as f64 / self.total as f64
        }
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.formal, self.total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThmStatus {
    /// Closed by the named formal step.
    Established { by: String },
    Flexiformal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    /// Index into the argument; the argument length for the theorem itself.
    pub step_index: usize,
    pub formula: Option<Formula>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Informal,
    /// The derivation checks; `established` is false when it rests on gaps.
    Checked { conclusion: Formula, established: bool },
    Rejected { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DocReport {
    pub doc: String,
    pub thm_status: ThmStatus,
    pub coverage: Coverage,
    pub gaps: Vec<Gap>,
    pub steps: Vec<StepResult>,
    pub cc_report: CheckReport,
    /// Assumed content that attached checks rely on.
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("theorem statement of `{doc}` is ill-formed: {reason}")]
    IllFormedTheorem { doc: String, reason: String },
    #[error("claim of step `{label}` is ill-formed: {reason}")]
    IllFormedClaim { label: String, reason: String },
    #[error("step label `{0}` is used twice")]
    DuplicateLabel(String),
    #[error("unknown cross check `{0}`")]
    UnknownCheck(String),
    #[error("`{0}` is not established")]
    NotEstablished(String),
    #[error("`{doc}` relies on assumed content: {}", flags.join("; "))]
    AssumedContent { doc: String, flags: Vec<String> },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

fn wf_closed(home: &Theory, f: &Formula) -> Result<(), String> {
    if !is_closed(f) {
        return Err(format!("`{f}` has free variables"));
    }
    wf_formula(&home.signature, &Context::new(), f).map_err(|e| e.to_string())
}

struct Analysis {
    report: DocReport,
    /// Derivations backing established steps, by step label.
    proofs: BTreeMap<String, DerivationRef>,
}

fn push_gap(gaps: &mut Vec<Gap>, gap: Gap) {
    let dup = gaps.iter().any(|g| {
        g.step_index == gap.step_index
            && match (&g.formula, &gap.formula) {
                (Some(a), Some(b)) => alpha_eq(a, b),
                (None, None) => true,
                _ => false,
            }
    });
    if !dup {
        gaps.push(gap);
    }
}

fn analyse(doc: &ProofDoc, g: &TheoryGraph, checks: &CheckSet) -> Result<Analysis, DocError> {
    let home = g.theory(&doc.home)?;
    wf_closed(home, &doc.thm).map_err(|reason| DocError::IllFormedTheorem {
        doc: doc.id.clone(),
        reason,
    })?;
    let mut seen = BTreeMap::new();
    for (i, s) in doc.arg.iter().enumerate() {
        if seen.insert(s.label(), i).is_some() {
            return Err(DocError::DuplicateLabel(s.label().to_string()));
        }
        if let DocStep::Informal { claim: Some(c), label, .. } = s {
            wf_closed(home, c).map_err(|reason| DocError::IllFormedClaim {
                label: label.clone(),
                reason,
            })?;
        }
    }
    let attached: Vec<_> = doc
        .cc
        .iter()
        .map(|id| checks.get(id).ok_or_else(|| DocError::UnknownCheck(id.clone())))
        .collect::<Result<_, _>>()?;

    let mut gaps = Vec::new();
    let mut steps = Vec::with_capacity(doc.arg.len());
    let mut proofs: BTreeMap<String, DerivationRef> = BTreeMap::new();
    // Claims available to later steps: label -> (index, formula).
    let mut claims: BTreeMap<&str, (usize, &Formula)> = BTreeMap::new();
    let mut last_formal: Option<(usize, bool, Option<Formula>)> = None;

    for (i, step) in doc.arg.iter().enumerate() {
        match step {
            DocStep::Informal { label, claim, .. } => {
                if let Some(c) = claim {
                    claims.insert(label, (i, c));
                }
                steps.push(StepResult::Informal);
            }
            DocStep::Formal { label, derivation } => {
                let result = check_formal(doc, g, home, i, derivation, &claims, &proofs, &mut gaps);
                match &result {
                    StepResult::Checked {
                        conclusion,
                        established,
                    } => {
                        last_formal = Some((i, *established, Some(conclusion.clone())));
                        if *established {
                            let d = g.derivation(derivation)?.derivation.clone();
                            proofs.insert(label.clone(), d.clone());
                            for (l, (_, c)) in &claims {
                                if alpha_eq(c, conclusion) && !proofs.contains_key(*l) {
                                    proofs.insert(l.to_string(), d.clone());
                                }
                            }
                        }
                    }
                    StepResult::Rejected { reason } => {
                        last_formal = Some((i, false, None));
                        push_gap(
                            &mut gaps,
                            Gap {
                                step_index: i,
                                formula: None,
                                reason: reason.clone(),
                            },
                        );
                    }
                    StepResult::Informal => unreachable!(),
                }
                steps.push(result);
            }
        }
    }

    let thm_status = match &last_formal {
        Some((i, true, Some(c))) if alpha_eq(c, &doc.thm) => ThmStatus::Established {
            by: doc.arg[*i].label().to_string(),
        },
        _ => ThmStatus::Flexiformal,
    };
    if thm_status == ThmStatus::Flexiformal {
        for (i, step) in doc.arg.iter().enumerate() {
            if let DocStep::Informal {
                label, claim: Some(c), ..
            } = step
            {
                if !proofs.contains_key(label) {
                    push_gap(
                        &mut gaps,
                        Gap {
                            step_index: i,
                            formula: Some(c.clone()),
                            reason: format!("informal claim `{label}` has no formal derivation"),
                        },
                    );
                }
            }
        }
        let thm_named = gaps
            .iter()
            .any(|g| g.formula.as_ref().is_some_and(|f| alpha_eq(f, &doc.thm)));
        if !thm_named {
            push_gap(
                &mut gaps,
                Gap {
                    step_index: doc.arg.len(),
                    formula: Some(doc.thm.clone()),
                    reason: format!("`{}` is not closed by a formal step", doc.thm_name),
                },
            );
        }
    }
    gaps.sort_by_key(|g| g.step_index);

    let formal = doc.arg.iter().filter(|s| s.is_formal()).count();
    let cc_report = run_all(g, attached.iter().copied());
    let mut flags: Vec<String> = cc_report
        .outcomes
        .iter()
        .flat_map(|o| o.assumptions.iter().map(move |a| format!("{}: {a}", o.id)))
        .collect();
    flags.dedup();

    Ok(Analysis {
        report: DocReport {
            doc: doc.id.clone(),
            thm_status,
            coverage: Coverage {
                formal,
                total: doc.arg.len(),
            },
            gaps,
            steps,
            cc_report,
            flags,
        },
        proofs,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_formal(
    doc: &ProofDoc,
    g: &TheoryGraph,
    home: &Theory,
    index: usize,
    derivation: &str,
    claims: &BTreeMap<&str, (usize, &Formula)>,
    proofs: &BTreeMap<String, DerivationRef>,
    gaps: &mut Vec<Gap>,
) -> StepResult {
    let stored = match g.derivation(derivation) {
        Ok(s) => s,
        Err(e) => return StepResult::Rejected { reason: e.to_string() },
    };
    if stored.theory != doc.home {
        return StepResult::Rejected {
            reason: format!(
                "derivation `{derivation}` belongs to `{}`, not the home theory `{}`",
                stored.theory, doc.home
            ),
        };
    }
    let d = &stored.derivation;
    let mut pseudo: BTreeMap<String, Formula> = BTreeMap::new();
    let mut established = true;
    for (name, leaf) in d.axiom_leaves() {
        let Some(label) = name.strip_prefix(STEP_PREFIX) else {
            continue;
        };
        let (gap_index, reason) = match claims.get(label) {
            Some((i, c)) if alpha_eq(c, leaf) => {
                if proofs.contains_key(label) {
                    pseudo.insert(name.to_string(), leaf.clone());
                    continue;
                }
                (*i, format!("cites informal claim `{label}`"))
            }
            Some((i, _)) => (*i, format!("cites `{label}` with a formula it does not claim")),
            None => match proofs.get(label) {
                Some(p) if stored_conclusion_matches(p, leaf) => {
                    pseudo.insert(name.to_string(), leaf.clone());
                    continue;
                }
                _ => (index, format!("cites unknown or unestablished step `{label}`")),
            },
        };
        established = false;
        pseudo.insert(name.to_string(), leaf.clone());
        push_gap(
            gaps,
            Gap {
                step_index: gap_index,
                formula: Some(leaf.clone()),
                reason,
            },
        );
    }
    match check_derivation(&home.signature, &(&home.axioms, &pseudo), d) {
        Err(e) => StepResult::Rejected {
            reason: format!("derivation `{derivation}` does not check: {e}"),
        },
        Ok(seq) if !seq.hyps.is_empty() => StepResult::Rejected {
            reason: format!("derivation `{derivation}` leaves open hypotheses: {seq}"),
        },
        Ok(seq) => StepResult::Checked {
            conclusion: seq.conclusion,
            established,
        },
    }
}

fn stored_conclusion_matches(d: &DerivationRef, f: &Formula) -> bool {
    d.root().is_some_and(|r| alpha_eq(&r.conclusion, f))
}

/// Checks a document against its home theory and runs its attached checks.
pub fn check_doc(doc: &ProofDoc, g: &TheoryGraph, checks: &CheckSet) -> Result<DocReport, DocError> {
    analyse(doc, g, checks).map(|a| a.report)
}

/// Adds the established theorem to the home theory with a `Derived`
/// provenance whose derivation inlines every cited step. Promoting an already
/// present theorem returns the home theory unchanged.
pub fn promote(doc: &ProofDoc, g: &TheoryGraph, checks: &CheckSet) -> Result<Theory, DocError> {
    let Analysis { report, proofs } = analyse(doc, g, checks)?;
    let ThmStatus::Established { by } = &report.thm_status else {
        return Err(DocError::NotEstablished(doc.thm_name.clone()));
    };
    if !report.flags.is_empty() {
        return Err(DocError::AssumedContent {
            doc: doc.id.clone(),
            flags: report.flags,
        });
    }
    let home = g.theory(&doc.home)?;
    if let Some(existing) = home.theorems.get(&doc.thm_name) {
        if alpha_eq(&existing.formula, &doc.thm) {
            return Ok(home.clone());
        }
    }
    let closing = proofs[by].clone();
    let cites_steps = closing
        .axiom_leaves()
        .iter()
        .any(|(n, _)| n.starts_with(STEP_PREFIX));
    let derivation = if cites_steps {
        let resolve = |name: &str| name.strip_prefix(STEP_PREFIX).and_then(|l| proofs.get(l).cloned());
        Arc::new(closing.inline_axioms(closing.name.clone(), &resolve))
    } else {
        closing
    };
    Ok(home.add_theorem(doc.thm_name.clone(), doc.thm.clone(), Provenance::Derived(derivation))?)
}
