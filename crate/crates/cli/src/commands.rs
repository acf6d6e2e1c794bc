use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::Value;
use tgc_core::crosscheck::{run_all, CheckOutcome, CheckStatus};
use tgc_core::frontend::{
    elaborate, has_errors, load_files, print_decl, Decl, Diagnostic, Ident, Library, Pos, SourceSpan,
    SpannedFormula, TheoremDecl, TheoremSource,
};
use tgc_core::graph::{GraphError, TransportOptions, TransportOutcome};
use tgc_core::kernel::{check_derivation, Formula};
use tgc_core::morphism::{Morphism, ObligationStatus};
use tgc_core::proofdoc::{check_doc, ThmStatus, STEP_PREFIX};
use tgc_core::theory::Provenance;

use crate::inputs;
use crate::report::{DiagRecord, Item, Report};
use crate::{Action, RunConfig};

struct Session {
    lib: Library,
    diags: Vec<Diagnostic>,
    digest: String,
}

fn load(cfg: &RunConfig) -> Result<Session, String> {
    let files = inputs::collect(&cfg.inputs)?;
    let loaded = load_files(&files).map_err(|e| format!("cannot read input: {e}"))?;
    let (lib, more) = elaborate(&loaded.ast);
    let mut diags = loaded.diags;
    diags.extend(more);
    Ok(Session {
        lib,
        diags,
        digest: inputs::digest(&loaded.files),
    })
}

pub fn run(cfg: &RunConfig) -> Report {
    let command = cfg.action.name();
    let input_names: Vec<String> = cfg.inputs.iter().map(|p| p.display().to_string()).collect();
    let session = match load(cfg) {
        Ok(s) => s,
        Err(e) => return Report::fatal(command, input_names, e),
    };
    let mut report = Report::new(command, input_names);
    report.input_digest = session.digest.clone();
    let outcome = match &cfg.action {
        Action::Check => check(&session),
        Action::Paths { to } => paths(&session, to, cfg.max_depth),
        Action::Transport { theory, theorem, via } => transport(&session, theory, theorem, via, cfg.allow_partial),
        Action::Crosscheck { id } => crosscheck(&session, id.as_deref()),
    };
    match outcome {
        Ok((items, code)) => {
            report.items = items;
            report.finish(code)
        }
        Err(msg) => {
            report.fatal = Some(msg);
            report.items = attach(Vec::new(), &session.diags);
            report.finish(2)
        }
    }
}

type Outcome = Result<(Vec<Item>, u8), String>;

/// Hangs each diagnostic on the item of its declaration, creating a
/// `declaration` item when there is none.
fn attach(mut items: Vec<Item>, diags: &[Diagnostic]) -> Vec<Item> {
    for d in diags {
        let decl = d.decl.clone().unwrap_or_else(|| d.span.file.to_string());
        let rec = DiagRecord::from(d);
        let owner = items.iter_mut().find(|i| {
            i.id == decl || (i.kind == "theorem" && i.id.rsplit_once('.').is_some_and(|(_, n)| n == decl))
        });
        match owner {
            Some(item) => item.diagnostics.push(rec),
            None => {
                let mut item = Item::new("declaration", decl, if d.is_error() { "error" } else { "warning" });
                item.diagnostics.push(rec);
                items.push(item);
            }
        }
    }
    for item in &mut items {
        if item.has_errors() && item.kind != "declaration" {
            item.status = "error".into();
        }
    }
    items
}

fn strings<I: IntoIterator<Item = S>, S: ToString>(xs: I) -> Value {
    Value::Array(xs.into_iter().map(|s| Value::String(s.to_string())).collect())
}

fn obligation_line(axiom: &str, s: &ObligationStatus) -> String {
    let how = match s {
        ObligationStatus::Proved(d) => format!("proved by {}", d.name),
        ObligationStatus::ByAxiom(a) => format!("by axiom {a}"),
        ObligationStatus::ByComposition => "by composition".into(),
        ObligationStatus::Assumed(r) => format!("assumed ({r})"),
        ObligationStatus::Pending => "pending".into(),
    };
    format!("{axiom}: {how}")
}

fn pending(m: &Morphism) -> Vec<String> {
    m.obligations
        .iter()
        .filter(|o| o.status == ObligationStatus::Pending)
        .map(|o| o.axiom_name.clone())
        .collect()
}

fn morphism_item(m: &Morphism, assumed: bool) -> Item {
    let open = pending(m);
    let status = match (open.is_empty(), assumed) {
        (true, _) => "verified",
        (false, true) => "assumed",
        (false, false) => "partial",
    };
    let mut item = Item::new("morphism", &m.id, status)
        .detail("source", m.source.as_str())
        .detail("target", m.target.as_str())
        .detail(
            "obligations",
            strings(m.obligations.iter().map(|o| obligation_line(&o.axiom_name, &o.status))),
        );
    if !open.is_empty() && !assumed {
        item = item.detail("pending", strings(&open));
    }
    item
}

fn outcome_item(o: &CheckOutcome) -> Item {
    let mut item = Item::new("crosscheck", &o.id, o.status.label())
        .detail("type", o.kind)
        .detail("details", o.details.as_str());
    match &o.status {
        CheckStatus::Failure(r) | CheckStatus::Pending(r) if *r != o.details => item = item.detail("reason", r.as_str()),
        _ => {}
    }
    if let Some(l) = &o.locus {
        item = item.detail("locus", l.to_string());
    }
    if !o.assumptions.is_empty() {
        item = item.detail("assumptions", strings(&o.assumptions));
    }
    item
}

fn has_pseudo_leaves(d: &tgc_core::kernel::Derivation) -> bool {
    d.axiom_leaves()
        .iter()
        .any(|(n, _)| n.starts_with(STEP_PREFIX) || n.starts_with("via:"))
}

fn check(s: &Session) -> Outcome {
    let lib = &s.lib;
    let g = &lib.graph;
    let mut items = Vec::new();
    for t in g.theories() {
        items.push(
            Item::new("theory", &t.id, "ok")
                .detail("axioms", t.axioms.len())
                .detail("theorems", t.theorems.len()),
        );
    }
    for m in g.morphisms() {
        items.push(morphism_item(m, lib.assumed_morphisms.contains(&m.id)));
    }
    for t in g.theories() {
        for (name, thm) in &t.theorems {
            let (status, ok) = match &thm.provenance {
                Provenance::Derived(_) => (
                    "proved",
                    t.check_provenance(name, &thm.formula, &thm.provenance).map_err(|e| e.to_string()),
                ),
                Provenance::Transported { partial, .. } => {
                    let ok = g.recheck_transported(&t.id, name).map_err(|e| e.to_string());
                    let status = if *partial { "flagged" } else { "transported" };
                    match ok {
                        Ok(true) => (status, Ok(())),
                        Ok(false) => (status, Err("re-translation differs".to_string())),
                        Err(e) => (status, Err(e)),
                    }
                }
                Provenance::Assumed(_) => ("assumed", Ok(())),
            };
            let mut item = Item::new("theorem", format!("{}.{name}", t.id), status)
                .detail("formula", thm.formula.to_string())
                .detail("provenance", thm.provenance.to_string());
            if let Err(e) = ok {
                item.status = "rejected".into();
                item = item.detail("reason", e.to_string());
            }
            items.push(item);
        }
    }
    for ((theory, name), f) in &lib.statements {
        items.push(Item::new("theorem", format!("{theory}.{name}"), "unproved").detail("formula", f.to_string()));
    }
    for (name, stored) in g.derivations() {
        let d = &stored.derivation;
        let mut item = Item::new("derivation", name, "checked").detail("theory", stored.theory.as_str());
        if has_pseudo_leaves(d) {
            item.status = "deferred".into();
            item = item.detail("note", "cites document steps or transported axioms");
        } else {
            let t = g.theory(&stored.theory).map_err(|e| e.to_string())?;
            match check_derivation(&t.signature, &t.axioms, d) {
                Ok(seq) => item = item.detail("conclusion", seq.conclusion.to_string()),
                Err(e) => {
                    item.status = "rejected".into();
                    item = item.detail("reason", e.to_string());
                }
            }
        }
        items.push(item);
    }
    for doc in lib.docs.values() {
        let item = match check_doc(doc, g, &lib.checks) {
            Ok(r) => {
                let status = match &r.thm_status {
                    ThmStatus::Established { .. } => "established",
                    ThmStatus::Flexiformal => "flexiformal",
                };
                let mut item = Item::new("document", &doc.id, status)
                    .detail("theory", doc.home.as_str())
                    .detail("coverage", r.coverage.to_string());
                if let ThmStatus::Established { by } = &r.thm_status {
                    item = item.detail("established_by", by.as_str());
                }
                if !r.gaps.is_empty() {
                    let gaps = r.gaps.iter().map(|g| format!("step {}: {}", g.step_index, g.reason));
                    item = item.detail("gaps", strings(gaps));
                }
                if !r.flags.is_empty() {
                    item = item.detail("flags", strings(&r.flags));
                }
                item
            }
            Err(e) => Item::new("document", &doc.id, "error").detail("reason", e.to_string()),
        };
        items.push(item);
    }
    let report = run_all(g, lib.checks.values());
    items.extend(report.outcomes.iter().map(outcome_item));
    let items = attach(items, &s.diags);

    let open_obligations = g
        .morphisms()
        .any(|m| !lib.assumed_morphisms.contains(&m.id) && !pending(m).is_empty());
    let failed = items
        .iter()
        .any(|i| crate::report::FAILURE_STATUSES.contains(&i.status.as_str()));
    let code = u8::from(has_errors(&s.diags) || failed || open_obligations);
    Ok((items, code))
}

fn paths(s: &Session, to: &str, max_depth: usize) -> Outcome {
    if has_errors(&s.diags) {
        return Ok((attach(Vec::new(), &s.diags), 1));
    }
    let reach = s.lib.graph.backward_reach(to, max_depth).map_err(|e| e.to_string())?;
    let mut items = Vec::new();
    for (src, path) in &reach {
        let c = path.composite();
        let open = pending(c);
        let status = if open.is_empty() { "verified" } else { "partial" };
        let mut item = Item::new("path", format!("{src} -> {to} via {}", path.edges().join(",")), status)
            .detail("source", src.as_str())
            .detail("edges", strings(path.edges()))
            .detail("composite", c.id.as_str());
        if !open.is_empty() {
            item = item.detail("open", strings(&open));
        }
        items.push(item);
    }
    Ok((attach(items, &s.diags), 0))
}

fn dummy_ident(name: &str) -> Ident {
    Ident {
        name: name.to_string(),
        span: SourceSpan::new(Arc::from("<transport>"), Pos::new(1, 1), Pos::new(1, 2)),
    }
}

fn theorem_decl(name: &str, theory: &str, formula: &Formula, src: &str, thm: &str, via: &[String]) -> String {
    let decl = TheoremDecl {
        name: dummy_ident(name),
        theory: dummy_ident(theory),
        formula: SpannedFormula {
            formula: formula.clone(),
            span: dummy_ident(name).span,
        },
        source: TheoremSource::Transported {
            theory: dummy_ident(src),
            theorem: dummy_ident(thm),
            via: via.iter().map(|v| dummy_ident(v)).collect(),
        },
        span: dummy_ident(name).span,
    };
    print_decl(&Decl::Theorem(decl))
}

fn transport(s: &Session, theory: &str, theorem: &str, via: &[String], allow_partial: bool) -> Outcome {
    if has_errors(&s.diags) {
        return Ok((attach(Vec::new(), &s.diags), 1));
    }
    let g = &s.lib.graph;
    let path = g.path(via).map_err(|e| e.to_string())?;
    let opts = TransportOptions {
        allow_partial,
        name: None,
    };
    let id = format!("{theory}.{theorem}");
    let t = match g.transport(theory, theorem, &path, &opts) {
        Ok(t) => t,
        Err(GraphError::UnverifiedPath { path, status }) => {
            let item = Item::new("transport", id, "unverified")
                .detail("path", path)
                .detail("reason", format!("path is {status}; pass --allow-partial to transport anyway"));
            return Ok((attach(vec![item], &s.diags), 1));
        }
        Err(e @ GraphError::Morphism(_)) => {
            let item = Item::new("transport", id, "error").detail("reason", e.to_string());
            return Ok((attach(vec![item], &s.diags), 1));
        }
        Err(e) => return Err(e.to_string()),
    };
    let target = path.target();
    let item = match &t.outcome {
        TransportOutcome::Added { name, formula } => {
            let mut decl = String::new();
            if t.partial {
                let open: BTreeSet<String> = pending(path.composite()).into_iter().collect();
                let open: Vec<_> = open.into_iter().collect();
                decl.push_str(&format!(
                    "// flagged: transported along a partially verified path (open obligations: {})\n",
                    open.join(", ")
                ));
            }
            decl.push_str(&theorem_decl(name, target, formula, theory, theorem, via));
            Item::new("transport", id, if t.partial { "flagged" } else { "added" })
                .detail("target", format!("{target}.{name}"))
                .detail("formula", formula.to_string())
                .detail("declaration", decl)
        }
        TransportOutcome::Duplicate { existing, formula } => Item::new("transport", id, "duplicate")
            .detail("target", format!("{target}.{existing}"))
            .detail("formula", formula.to_string()),
    };
    Ok((attach(vec![item], &s.diags), 0))
}

fn crosscheck(s: &Session, id: Option<&str>) -> Outcome {
    if has_errors(&s.diags) {
        return Ok((attach(Vec::new(), &s.diags), 1));
    }
    let checks = &s.lib.checks;
    let selected: Vec<_> = match id {
        Some(id) => match checks.get(id) {
            Some(c) => vec![c],
            None => return Err(format!("no cross check named `{id}`")),
        },
        None => checks.values().collect(),
    };
    if selected.is_empty() {
        return Err("no cross checks found".into());
    }
    let report = run_all(&s.lib.graph, selected);
    let items: Vec<Item> = report.outcomes.iter().map(outcome_item).collect();
    let code = u8::from(report.failures() > 0);
    Ok((attach(items, &s.diags), code))
}
