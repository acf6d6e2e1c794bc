//! Elaboration of parsed declarations into a theory graph, proof documents
//! and cross checks.
//!
//! Names are collected first, then bodies are processed in dependency order:
//! theories, theorem statements, derivations, morphisms, cross checks, proof
//! documents, transported theorems.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use indexmap::IndexMap;

use crate::crosscheck::{CheckSet, CrossCheck, ProofRef, SemanticCheck, Statement, StructuralCheck};
use crate::graph::{GraphError, TheoryGraph, TransportOptions, TransportOutcome};
use crate::kernel::{
    alpha_eq, check_derivation, is_closed, wf_formula, Context, Derivation, Formula, KernelError, Param, Signature,
    SignatureError, Step, Term, Var, WfError,
};
use crate::morphism::{unmapped_symbols, Assignment, Discharge, FuncImage, Morphism, MorphismError, PredImage};
use crate::proofdoc::{check_doc, promote, DocError, DocStep, ProofDoc, ThmStatus, STEP_PREFIX};
use crate::theory::{Provenance, Theory, TheoryError};

use super::ast::*;
use super::diag::{codes, Diagnostic, SourceSpan};

/// Everything a run elaborates to.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Library {
    pub graph: TheoryGraph,
    /// Declared theorems still without proof, keyed by (theory, name).
    pub statements: IndexMap<(String, String), Formula>,
    pub docs: IndexMap<String, ProofDoc>,
    pub checks: CheckSet,
    /// Morphisms declared `assumed`; their open obligations are accepted.
    pub assumed_morphisms: BTreeSet<String>,
}

struct Elab {
    lib: Library,
    diags: Vec<Diagnostic>,
    /// Every validated theorem declaration, by (theory, name).
    declared: BTreeMap<(String, String), Formula>,
}

fn pseudo_axiom(name: &str) -> bool {
    name.starts_with(STEP_PREFIX) || name.starts_with("via:")
}

fn wf_code(e: &WfError) -> &'static str {
    match e {
        WfError::UnknownSort { .. } => codes::UNKNOWN_SORT,
        _ => codes::ILL_FORMED,
    }
}

fn fill_term(t: &Term, sorts: &BTreeMap<&str, &str>) -> Term {
    match t {
        Term::Var(v) if v.sort.is_empty() => {
            Term::var(v.name.clone(), sorts.get(v.name.as_str()).copied().unwrap_or_default())
        }
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| fill_term(a, sorts)).collect()),
    }
}

fn fill_formula(f: &Formula, sorts: &BTreeMap<&str, &str>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|a| fill_term(a, sorts)).collect()),
        Formula::Eq(a, b) => Formula::Eq(fill_term(a, sorts), fill_term(b, sorts)),
        Formula::Not(a) => Formula::not(fill_formula(a, sorts)),
        Formula::Binary(c, a, b) => {
            Formula::Binary(*c, Box::new(fill_formula(a, sorts)), Box::new(fill_formula(b, sorts)))
        }
        Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(fill_formula(body, sorts))),
    }
}

impl Elab {
    fn push(&mut self, d: Diagnostic, decl: &str) {
        self.diags.push(d.in_decl(decl));
    }

    fn error(&mut self, code: &'static str, span: &SourceSpan, msg: impl Into<String>, decl: &str) {
        self.push(Diagnostic::error(code, span.clone(), msg), decl);
    }

    fn warn(&mut self, code: &'static str, span: &SourceSpan, msg: impl Into<String>, decl: &str) {
        self.push(Diagnostic::warning(code, span.clone(), msg), decl);
    }

    fn theory(&self, id: &str) -> Option<&Theory> {
        self.lib.graph.theory(id).ok()
    }

    fn require_theory(&mut self, id: &Ident, decl: &str) -> Option<Theory> {
        match self.theory(&id.name) {
            Some(t) => Some(t.clone()),
            None => {
                self.error(codes::UNKNOWN_REF, &id.span, format!("unknown theory `{}`", id.name), decl);
                None
            }
        }
    }

    fn store_theory(&mut self, t: Theory) {
        self.lib
            .graph
            .update_theory(t)
            .expect("elaboration only extends theories");
    }

    fn closed_wf(&mut self, t: &Theory, f: &SpannedFormula, decl: &str) -> bool {
        if !is_closed(&f.formula) {
            self.error(
                codes::OPEN_FORMULA,
                &f.span,
                format!("`{}` has free variables", f.formula),
                decl,
            );
            return false;
        }
        if let Err(e) = wf_formula(&t.signature, &Context::new(), &f.formula) {
            self.error(wf_code(&e), &f.span, format!("ill-formed in `{}`: {e}", t.id), decl);
            return false;
        }
        true
    }

    fn theory_error(&mut self, e: TheoryError, span: &SourceSpan, decl: &str) {
        let code = match &e {
            TheoryError::DuplicateName(_) | TheoryError::DuplicateTheoryId(_) => codes::DUP_NAME,
            TheoryError::IllFormedFormula { source, .. } => wf_code(source),
            TheoryError::OpenFormula(_) => codes::OPEN_FORMULA,
            TheoryError::DerivationMismatch { .. } | TheoryError::Kernel { .. } => codes::DERIVATION,
        };
        self.error(code, span, e.to_string(), decl);
    }

    // Theories

    fn theories(&mut self, decls: &[&TheoryDecl]) {
        let by_name: BTreeMap<&str, &TheoryDecl> = decls.iter().map(|d| (d.name.name.as_str(), *d)).collect();
        // 0 unvisited, 1 in progress, 2 done
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        let mut order = Vec::new();
        fn visit<'d>(
            d: &'d TheoryDecl,
            by_name: &BTreeMap<&str, &'d TheoryDecl>,
            state: &mut BTreeMap<&'d str, u8>,
            order: &mut Vec<&'d TheoryDecl>,
            cyclic: &mut BTreeSet<String>,
        ) {
            match state.get(d.name.name.as_str()) {
                Some(2) => return,
                Some(1) => {
                    cyclic.insert(d.name.name.clone());
                    return;
                }
                _ => {}
            }
            state.insert(&d.name.name, 1);
            for p in &d.extends {
                if let Some(pd) = by_name.get(p.name.as_str()) {
                    visit(pd, by_name, state, order, cyclic);
                }
            }
            state.insert(&d.name.name, 2);
            order.push(d);
        }
        let mut cyclic = BTreeSet::new();
        for d in decls {
            visit(d, &by_name, &mut state, &mut order, &mut cyclic);
        }
        for d in order {
            if cyclic.contains(&d.name.name) {
                self.error(
                    codes::THEORY_CYCLE,
                    &d.name.span,
                    format!("theory `{}` extends itself through a cycle", d.name.name),
                    &d.name.name,
                );
                continue;
            }
            if let Some(t) = self.build_theory(d) {
                self.lib.graph.add_theory(t).expect("names are unique");
            }
        }
    }

    fn build_theory(&mut self, d: &TheoryDecl) -> Option<Theory> {
        let decl = d.name.name.as_str();
        let mut sig = Signature::new();
        let mut inherited: IndexMap<String, Formula> = IndexMap::new();
        for p in &d.extends {
            let Some(parent) = self.theory(&p.name).cloned() else {
                let msg = format!("unknown theory `{}`", p.name);
                self.error(codes::UNKNOWN_REF, &p.span, msg, decl);
                continue;
            };
            if let Err(e) = sig.merge(&parent.signature) {
                self.error(codes::DUP_NAME, &p.span, format!("conflicting inherited symbol: {e}"), decl);
            }
            for (n, f) in &parent.axioms {
                match inherited.get(n) {
                    Some(g) if alpha_eq(f, g) => {}
                    Some(_) => {
                        let msg = format!("inherited axiom `{n}` differs between parents");
                        self.error(codes::DUP_NAME, &p.span, msg, decl);
                    }
                    None => {
                        inherited.insert(n.clone(), f.clone());
                    }
                }
            }
        }
        for item in &d.items {
            if let TheoryItem::Sort(s) = item {
                if let Err(e) = sig.add_sort(s.name.clone()) {
                    self.error(codes::DUP_NAME, &s.span, e.to_string(), decl);
                }
            }
        }
        for item in &d.items {
            let (name, args, result) = match item {
                TheoryItem::Func { name, args, result } => (name, args, Some(result)),
                TheoryItem::Pred { name, args } => (name, args, None),
                _ => continue,
            };
            let mut ok = true;
            for s in args.iter().chain(result) {
                if !sig.has_sort(&s.name) {
                    self.error(codes::UNKNOWN_SORT, &s.span, format!("unknown sort `{}`", s.name), decl);
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            let arg_sorts = args.iter().map(|a| a.name.clone()).collect();
            let r = match result {
                Some(r) => sig.add_function(name.name.clone(), arg_sorts, r.name.clone()),
                None => sig.add_predicate(name.name.clone(), arg_sorts),
            };
            if let Err(e) = r {
                let code = match e {
                    SignatureError::UnknownSort(_) => codes::UNKNOWN_SORT,
                    _ => codes::DUP_NAME,
                };
                self.error(code, &name.span, e.to_string(), decl);
            }
        }
        let mut t = Theory::new(decl, sig);
        for (n, f) in inherited {
            t = t.add_axiom(n, f).expect("inherited axioms are well-formed");
        }
        for item in &d.items {
            if let TheoryItem::Axiom { name, formula } = item {
                match t.add_axiom(name.name.clone(), formula.formula.clone()) {
                    Ok(next) => t = next,
                    Err(e @ TheoryError::DuplicateName(_)) => self.theory_error(e, &name.span, decl),
                    Err(e) => self.theory_error(e, &formula.span, decl),
                }
            }
        }
        Some(t)
    }

    // Theorem statements

    fn theorems<'d>(&mut self, decls: &[&'d TheoremDecl]) -> Vec<&'d TheoremDecl> {
        let mut transported = Vec::new();
        for d in decls {
            let decl = d.name.name.as_str();
            let Some(t) = self.require_theory(&d.theory, decl) else { continue };
            if !self.closed_wf(&t, &d.formula, decl) {
                continue;
            }
            let key = (t.id.clone(), d.name.name.clone());
            if t.statement(&d.name.name).is_some() || self.declared.contains_key(&key) {
                let msg = format!("`{}` is already declared in `{}`", d.name.name, t.id);
                self.error(codes::DUP_NAME, &d.name.span, msg, decl);
                continue;
            }
            self.declared.insert(key.clone(), d.formula.formula.clone());
            match &d.source {
                TheoremSource::Statement => {
                    self.lib.statements.insert(key, d.formula.formula.clone());
                }
                TheoremSource::Assumed(reason) => {
                    match t.add_theorem(decl, d.formula.formula.clone(), Provenance::Assumed(reason.clone())) {
                        Ok(next) => self.store_theory(next),
                        Err(e) => self.theory_error(e, &d.span, decl),
                    }
                }
                TheoremSource::Transported { .. } => transported.push(*d),
            }
        }
        transported
    }

    // Derivations

    fn build_derivation(&mut self, d: &DerivationDecl) -> Option<Derivation> {
        let decl = d.name.name.as_str();
        let mut labels = BTreeSet::new();
        let mut ok = true;
        for s in &d.steps {
            if !labels.insert(s.label.name.as_str()) {
                let msg = format!("step label `{}` is used twice", s.label.name);
                self.error(codes::DUP_NAME, &s.label.span, msg, decl);
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        let steps = d
            .steps
            .iter()
            .map(|s| Step {
                label: s.label.name.clone(),
                rule: s.rule,
                premises: s.premises.iter().map(|p| p.name.clone()).collect(),
                param: s.param.as_ref().map(|p| match p {
                    ParamDecl::Name(n) => Param::Name(n.clone()),
                    ParamDecl::Term(t) => Param::Term(t.clone()),
                    ParamDecl::Motive(v, f) => Param::Motive(v.clone(), f.clone()),
                }),
                hyps: s.hyps.clone(),
                conclusion: s.conclusion.clone(),
            })
            .collect();
        Some(Derivation::new(decl, steps))
    }

    fn kernel_span(d: &DerivationDecl, e: &KernelError) -> SourceSpan {
        e.step()
            .and_then(|l| d.steps.iter().find(|s| s.label.name == l))
            .map(|s| s.span.clone())
            .unwrap_or_else(|| d.name.span.clone())
    }

    fn derivations(&mut self, decls: &[&DerivationDecl]) {
        for d in decls {
            let decl = d.name.name.as_str();
            let Some(t) = self.require_theory(&d.theory, decl) else { continue };
            for (_, s) in &d.vars {
                if !t.signature.has_sort(&s.name) {
                    self.error(codes::UNKNOWN_SORT, &s.span, format!("unknown sort `{}`", s.name), decl);
                }
            }
            let Some(der) = self.build_derivation(d) else { continue };
            let der = Arc::new(der);
            self.lib
                .graph
                .add_derivation(&t.id, der.clone())
                .expect("names are unique and the theory exists");
            if let Some(thm) = &d.proves {
                self.prove(d, &t, thm, der);
            } else if !der.axiom_leaves().iter().any(|(n, _)| pseudo_axiom(n)) {
                if let Err(e) = check_derivation(&t.signature, &t.axioms, &der) {
                    let span = Self::kernel_span(d, &e);
                    self.error(codes::DERIVATION, &span, format!("`{decl}` does not check: {e}"), decl);
                }
            }
        }
    }

    fn prove(&mut self, d: &DerivationDecl, t: &Theory, thm: &Ident, der: Arc<Derivation>) {
        let decl = d.name.name.as_str();
        let key = (t.id.clone(), thm.name.clone());
        let Some(f) = self.lib.statements.get(&key).cloned() else {
            let msg = if t.theorems.contains_key(&thm.name) {
                format!("`{}` in `{}` is already a theorem", thm.name, t.id)
            } else {
                format!("`{}` is not a theorem statement of `{}`", thm.name, t.id)
            };
            self.error(codes::UNKNOWN_REF, &thm.span, msg, decl);
            return;
        };
        match t.add_theorem(thm.name.clone(), f, Provenance::Derived(der)) {
            Ok(next) => {
                self.store_theory(next);
                self.lib.statements.shift_remove(&key);
            }
            Err(TheoryError::Kernel { source, .. }) => {
                let span = Self::kernel_span(d, &source);
                self.error(codes::DERIVATION, &span, format!("`{decl}` does not check: {source}"), decl);
            }
            Err(e) => self.theory_error(e, &d.name.span, decl),
        }
    }

    // Morphisms

    fn morphisms(&mut self, decls: &[&MorphismDecl]) {
        for d in decls {
            let decl = d.name.name.as_str();
            let src = self.require_theory(&d.source, decl);
            let tgt = self.require_theory(&d.target, decl);
            let (Some(src), Some(tgt)) = (src, tgt) else { continue };
            let Some(assignment) = self.assignment(d, &src, &tgt) else { continue };
            let missing = unmapped_symbols(&assignment, &src);
            if !missing.is_empty() {
                let list: Vec<_> = missing.into_iter().collect();
                let msg = format!("no image for {}", list.join(", "));
                self.error(codes::UNMAPPED_SYMBOL, &d.name.span, msg, decl);
                continue;
            }
            let mut m = match Morphism::new(decl, &src, &tgt, assignment) {
                Ok(m) => m,
                Err(e) => {
                    let code = match e {
                        MorphismError::UnmappedSymbol(_) => codes::UNMAPPED_SYMBOL,
                        _ => codes::ILL_TYPED_MAP,
                    };
                    self.error(code, &d.name.span, e.to_string(), decl);
                    continue;
                }
            };
            for item in &d.items {
                let MorphismItem::Obligation { axiom, by } = item else { continue };
                let method = match by {
                    ObligationBy::Axiom(a) => Discharge::ByAxiom(a.name.clone()),
                    ObligationBy::Assumed(r) => Discharge::Assumed(r.clone()),
                    ObligationBy::Proof(p) => match self.lib.graph.derivation(&p.name) {
                        Ok(s) if s.theory == tgt.id => Discharge::Proved(s.derivation.clone()),
                        Ok(s) => {
                            let msg = format!("`{}` belongs to `{}`, not the target `{}`", p.name, s.theory, tgt.id);
                            self.error(codes::OBLIGATION_FAIL, &p.span, msg, decl);
                            continue;
                        }
                        Err(_) => {
                            self.error(codes::UNKNOWN_REF, &p.span, format!("unknown derivation `{}`", p.name), decl);
                            continue;
                        }
                    },
                };
                match m.discharge(&axiom.name, method, &tgt) {
                    Ok(next) => m = next,
                    Err(e @ MorphismError::NoSuchObligation(_)) => {
                        self.error(codes::UNKNOWN_REF, &axiom.span, e.to_string(), decl)
                    }
                    Err(e) => self.error(codes::OBLIGATION_FAIL, &axiom.span, e.to_string(), decl),
                }
            }
            let status = m.verify();
            if !status.is_verified() {
                if d.assumed {
                    self.lib.assumed_morphisms.insert(decl.to_string());
                } else {
                    let open: Vec<String> = m
                        .obligations
                        .iter()
                        .filter(|o| !o.status.is_discharged())
                        .map(|o| format!("{}: {} ({})", o.axiom_name, o.translated, o.status))
                        .collect();
                    let mut diag = Diagnostic::warning(
                        codes::PARTIAL_MORPHISM,
                        d.name.span.clone(),
                        format!("morphism `{decl}` is {status}"),
                    );
                    for o in open {
                        diag = diag.with_note(o);
                    }
                    self.push(diag, decl);
                }
            }
            self.lib.graph.add_morphism(m).expect("endpoints exist and names are unique");
        }
    }

    fn assignment(&mut self, d: &MorphismDecl, src: &Theory, tgt: &Theory) -> Option<Assignment> {
        let decl = d.name.name.as_str();
        let mut a = Assignment::default();
        let mut ok = true;
        for item in &d.items {
            match item {
                MorphismItem::Identity(_) => {
                    let id = Assignment::identity(src);
                    a.sort_map.extend(id.sort_map);
                    a.func_map.extend(id.func_map);
                    a.pred_map.extend(id.pred_map);
                }
                MorphismItem::Sort { from, to } => {
                    for (s, t, which) in [(from, src, "source"), (to, tgt, "target")] {
                        if !t.signature.has_sort(&s.name) {
                            let msg = format!("`{}` is not a sort of the {which} `{}`", s.name, t.id);
                            self.error(codes::UNKNOWN_SORT, &s.span, msg, decl);
                            ok = false;
                        }
                    }
                    a.sort_map.insert(from.name.clone(), to.name.clone());
                }
                _ => {}
            }
        }
        for item in &d.items {
            let (name, params, span) = match item {
                MorphismItem::Func { name, params, span, .. } => (name, params, span),
                MorphismItem::Pred { name, params, body } => (name, params, &body.span),
                _ => continue,
            };
            let arg_sorts: Option<&[String]> = match item {
                MorphismItem::Func { .. } => src.signature.function(&name.name).map(|f| f.args.as_slice()),
                _ => src.signature.predicate(&name.name),
            };
            let Some(arg_sorts) = arg_sorts else {
                let msg = format!("`{}` is not a symbol of `{}`", name.name, src.id);
                self.error(codes::UNKNOWN_REF, &name.span, msg, decl);
                ok = false;
                continue;
            };
            if arg_sorts.len() != params.len() {
                let msg = format!("`{}` takes {} argument(s), image has {}", name.name, arg_sorts.len(), params.len());
                self.error(codes::ILL_TYPED_MAP, span, msg, decl);
                ok = false;
                continue;
            }
            let Some(mapped) = arg_sorts
                .iter()
                .map(|s| a.sort_map.get(s).cloned())
                .collect::<Option<Vec<String>>>()
            else {
                // Reported as an unmapped sort.
                continue;
            };
            let vars: Vec<Var> = params
                .iter()
                .zip(&mapped)
                .map(|(p, s)| Var::new(p.name.clone(), s.clone()))
                .collect();
            let sorts: BTreeMap<&str, &str> = vars.iter().map(|v| (v.name.as_str(), v.sort.as_str())).collect();
            match item {
                MorphismItem::Func { body, .. } => {
                    a.func_map.insert(
                        name.name.clone(),
                        FuncImage {
                            params: vars.clone(),
                            body: fill_term(body, &sorts),
                        },
                    );
                }
                MorphismItem::Pred { body, .. } => {
                    a.pred_map.insert(
                        name.name.clone(),
                        PredImage {
                            params: vars.clone(),
                            body: fill_formula(&body.formula, &sorts),
                        },
                    );
                }
                _ => unreachable!(),
            }
        }
        ok.then_some(a)
    }

    // Cross checks

    fn statement(&mut self, s: &StatementRef, t: &Ident, decl: &str) -> Option<Statement> {
        let theory = self.require_theory(t, decl)?;
        match s {
            StatementRef::Name(n) => {
                let key = (theory.id.clone(), n.name.clone());
                let formula = theory
                    .statement(&n.name)
                    .cloned()
                    .or_else(|| self.declared.get(&key).cloned())
                    .or_else(|| {
                        theory
                            .signature
                            .predicate(&n.name)
                            .filter(|args| args.is_empty())
                            .map(|_| Formula::pred(n.name.clone(), Vec::new()))
                    });
                match formula {
                    Some(formula) => Some(Statement {
                        theory: theory.id.clone(),
                        label: Some(n.name.clone()),
                        formula,
                    }),
                    None => {
                        let msg = format!("`{}` names no axiom or theorem of `{}`", n.name, theory.id);
                        self.error(codes::UNKNOWN_REF, &n.span, msg, decl);
                        None
                    }
                }
            }
            StatementRef::Formula(f) => self.closed_wf(&theory, f, decl).then(|| Statement {
                theory: theory.id.clone(),
                label: None,
                formula: f.formula.clone(),
            }),
        }
    }

    fn require_derivation(&mut self, d: &Ident, t: &Ident, decl: &str) -> Option<ProofRef> {
        match self.lib.graph.derivation(&d.name) {
            Ok(s) if s.theory == t.name => Some(ProofRef {
                theory: t.name.clone(),
                derivation: d.name.clone(),
            }),
            Ok(s) => {
                let msg = format!("derivation `{}` belongs to `{}`, not `{}`", d.name, s.theory, t.name);
                self.error(codes::UNKNOWN_REF, &t.span, msg, decl);
                None
            }
            Err(_) => {
                self.error(codes::UNKNOWN_REF, &d.span, format!("unknown derivation `{}`", d.name), decl);
                None
            }
        }
    }

    fn checks(&mut self, decls: &[&CrossCheckDecl]) {
        for d in decls {
            let decl = d.name.name.as_str();
            let check = match &d.body {
                CheckBody::Semantic {
                    a1,
                    t1,
                    a2,
                    t2,
                    via,
                    witness,
                } => {
                    let s1 = self.statement(a1, t1, decl);
                    let s2 = self.statement(a2, t2, decl);
                    let mut ok = true;
                    for m in via {
                        if !self.lib.graph.has_morphism(&m.name) {
                            self.error(codes::UNKNOWN_REF, &m.span, format!("unknown morphism `{}`", m.name), decl);
                            ok = false;
                        }
                    }
                    if ok {
                        match self.lib.graph.path(via) {
                            Ok(p) if p.source() == t1.name && p.target() == t2.name => {}
                            Ok(p) => {
                                let msg = format!(
                                    "path runs from `{}` to `{}`, not from `{}` to `{}`",
                                    p.source(),
                                    p.target(),
                                    t1.name,
                                    t2.name
                                );
                                self.error(codes::ILL_FORMED, &d.name.span, msg, decl);
                                ok = false;
                            }
                            Err(e) => {
                                self.error(codes::ILL_FORMED, &d.name.span, e.to_string(), decl);
                                ok = false;
                            }
                        }
                    }
                    if let Some(w) = witness {
                        ok &= self.require_derivation(w, t2, decl).is_some();
                    }
                    let (Some(a1), Some(a2), true) = (s1, s2, ok) else { continue };
                    CrossCheck::Semantic(SemanticCheck {
                        id: decl.to_string(),
                        a1,
                        a2,
                        via: via.iter().map(|m| m.name.clone()).collect(),
                        witness: witness.as_ref().map(|w| w.name.clone()),
                    })
                }
                CheckBody::Structural { d1, t1, d2, t2, with } => {
                    let p1 = self.require_derivation(d1, t1, decl);
                    let p2 = self.require_derivation(d2, t2, decl);
                    let (Some(proof1), Some(proof2)) = (p1, p2) else { continue };
                    CrossCheck::Structural(StructuralCheck {
                        id: decl.to_string(),
                        proof1,
                        proof2,
                        correspondence: with.iter().map(|(a, b)| (a.name.clone(), b.name.clone())).collect(),
                    })
                }
            };
            self.lib.checks.insert(decl.to_string(), check);
        }
    }

    // Proof documents

    fn docs(&mut self, decls: &[&ProofDocDecl]) {
        for d in decls {
            let decl = d.name.name.as_str();
            let Some(t) = self.require_theory(&d.theory, decl) else { continue };
            let key = (t.id.clone(), d.shows.name.clone());
            let Some(thm) = self.declared.get(&key).cloned() else {
                let msg = format!("`{}` is not a theorem of `{}`", d.shows.name, t.id);
                self.error(codes::UNKNOWN_REF, &d.shows.span, msg, decl);
                continue;
            };
            let mut ok = true;
            for c in &d.checks {
                if !self.lib.checks.contains_key(&c.name) {
                    self.error(codes::UNKNOWN_REF, &c.span, format!("unknown cross check `{}`", c.name), decl);
                    ok = false;
                }
            }
            let mut arg = Vec::new();
            for (i, s) in d.steps.iter().enumerate() {
                arg.push(match s {
                    DocStepDecl::Informal { text, claim, label, .. } => DocStep::Informal {
                        label: label.as_ref().map_or_else(|| format!("s{}", i + 1), |l| l.name.clone()),
                        text: text.clone(),
                        claim: claim.as_ref().map(|c| c.formula.clone()),
                    },
                    DocStepDecl::Formal { derivation, label, .. } => {
                        if !self.lib.graph.derivations().any(|(n, _)| *n == derivation.name) {
                            let msg = format!("unknown derivation `{}`", derivation.name);
                            self.error(codes::UNKNOWN_REF, &derivation.span, msg, decl);
                            ok = false;
                        }
                        DocStep::Formal {
                            label: label.as_ref().unwrap_or(derivation).name.clone(),
                            derivation: derivation.name.clone(),
                        }
                    }
                });
            }
            if !ok {
                continue;
            }
            let doc = ProofDoc {
                id: decl.to_string(),
                home: t.id.clone(),
                thm_name: d.shows.name.clone(),
                thm,
                arg,
                cc: d.checks.iter().map(|c| c.name.clone()).collect(),
            };
            match check_doc(&doc, &self.lib.graph, &self.lib.checks) {
                Err(e) => {
                    let code = match e {
                        DocError::DuplicateLabel(_) => codes::DUP_NAME,
                        DocError::IllFormedClaim { .. } | DocError::IllFormedTheorem { .. } => codes::ILL_FORMED,
                        _ => codes::DOC,
                    };
                    self.error(code, &d.name.span, e.to_string(), decl);
                    continue;
                }
                Ok(report) => {
                    if matches!(report.thm_status, ThmStatus::Established { .. })
                        && report.flags.is_empty()
                        && self.lib.statements.contains_key(&key)
                    {
                        match promote(&doc, &self.lib.graph, &self.lib.checks) {
                            Ok(next) => {
                                self.store_theory(next);
                                self.lib.statements.shift_remove(&key);
                            }
                            Err(e) => self.error(codes::DOC, &d.name.span, e.to_string(), decl),
                        }
                    }
                }
            }
            self.lib.docs.insert(decl.to_string(), doc);
        }
    }

    // Transported theorems

    fn transported(&mut self, decls: &[&TheoremDecl]) {
        for d in decls {
            let decl = d.name.name.as_str();
            let TheoremSource::Transported { theory, theorem, via } = &d.source else { continue };
            let mut ok = true;
            for m in via {
                if !self.lib.graph.has_morphism(&m.name) {
                    self.error(codes::UNKNOWN_REF, &m.span, format!("unknown morphism `{}`", m.name), decl);
                    ok = false;
                }
            }
            if self.require_theory(theory, decl).is_none() || !ok {
                continue;
            }
            let path = match self.lib.graph.path(via) {
                Ok(p) => p,
                Err(e) => {
                    self.error(codes::TRANSPORT, &d.span, e.to_string(), decl);
                    continue;
                }
            };
            if path.target() != d.theory.name {
                let msg = format!("path ends at `{}`, not `{}`", path.target(), d.theory.name);
                self.error(codes::TRANSPORT, &d.theory.span, msg, decl);
                continue;
            }
            let opts = TransportOptions {
                allow_partial: true,
                name: Some(decl.to_string()),
            };
            match self.lib.graph.transport(&theory.name, &theorem.name, &path, &opts) {
                Ok(tr) => match tr.outcome {
                    TransportOutcome::Added { formula, .. } if alpha_eq(&formula, &d.formula.formula) => {
                        if tr.partial {
                            let msg = format!("`{decl}` is transported along the partially verified path {path}");
                            self.warn(codes::PARTIAL_TRANSPORT, &d.name.span, msg, decl);
                        }
                        self.store_theory(tr.target);
                    }
                    TransportOutcome::Added { formula, .. } => {
                        let msg = format!("declared formula differs from the image `{formula}`");
                        self.error(codes::TRANSPORT, &d.formula.span, msg, decl);
                    }
                    TransportOutcome::Duplicate { existing, .. } => {
                        let msg = format!("the image already holds in `{}` as `{existing}`", d.theory.name);
                        self.error(codes::DUP_NAME, &d.name.span, msg, decl);
                    }
                },
                Err(GraphError::UnknownTheorem { theory, theorem: th }) => {
                    let msg = format!("`{theory}` has no theorem `{th}`");
                    self.error(codes::UNKNOWN_REF, &theorem.span, msg, decl);
                }
                Err(e) => self.error(codes::TRANSPORT, &d.span, e.to_string(), decl),
            }
        }
    }
}

/// Elaborates a declaration list. Include directives are ignored; resolve
/// them while loading.
pub fn elaborate(ast: &Ast) -> (Library, Vec<Diagnostic>) {
    let mut e = Elab {
        lib: Library::default(),
        diags: Vec::new(),
        declared: BTreeMap::new(),
    };
    let mut theories = Vec::new();
    let mut morphisms = Vec::new();
    let mut theorems = Vec::new();
    let mut derivations = Vec::new();
    let mut docs = Vec::new();
    let mut checks = Vec::new();
    let mut seen: BTreeMap<(&str, &str), &SourceSpan> = BTreeMap::new();
    for d in &ast.decls {
        if let Decl::Include(_) = d {
            continue;
        }
        let name = d.name();
        let ns = match d {
            Decl::Theorem(t) => t.theory.name.as_str(),
            other => other.keyword(),
        };
        if let Some(first) = seen.get(&(ns, name.name.as_str())) {
            let diag = Diagnostic::error(
                codes::DUP_NAME,
                name.span.clone(),
                format!("{} `{}` is declared twice", d.keyword(), name.name),
            )
            .with_note(format!("first declared at {first}"));
            e.push(diag, &name.name);
            continue;
        }
        seen.insert((ns, &name.name), &name.span);
        match d {
            Decl::Theory(x) => theories.push(x),
            Decl::Morphism(x) => morphisms.push(x),
            Decl::Theorem(x) => theorems.push(x),
            Decl::Derivation(x) => derivations.push(x),
            Decl::ProofDoc(x) => docs.push(x),
            Decl::CrossCheck(x) => checks.push(x),
            Decl::Include(_) => unreachable!(),
        }
    }
    e.theories(&theories);
    let transported = e.theorems(&theorems);
    e.derivations(&derivations);
    e.morphisms(&morphisms);
    e.checks(&checks);
    e.docs(&docs);
    e.transported(&transported);
    let unproved: Vec<_> = theorems
        .iter()
        .filter(|d| {
            e.lib
                .statements
                .contains_key(&(d.theory.name.clone(), d.name.name.clone()))
        })
        .collect();
    for d in unproved {
        let msg = format!("theorem `{}` has no derivation or established proof document", d.name.name);
        e.warn(codes::UNPROVED_THEOREM, &d.name.span, msg, &d.name.name);
    }
    let mut diags = e.diags;
    diags.sort_by(|a, b| {
        (&a.span.file, a.span.start).cmp(&(&b.span.file, b.span.start))
    });
    (e.lib, diags)
}
