use std::path::PathBuf;

use tgc_core::frontend::{elaborate, load_files, Diagnostic, Library};
use tgc_core::kernel::alpha_eq;

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus_dir() -> PathBuf {
    workspace_root().join("corpus")
}

pub fn fixture(rel: &str) -> PathBuf {
    workspace_root().join("fixtures").join(rel)
}

/// The `.tg` files of the clean corpus, sorted.
pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("corpus entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "tg"))
        .collect();
    files.sort();
    files
}

/// Loads and elaborates `paths`; parse and elaboration diagnostics together.
pub fn load(paths: &[PathBuf]) -> (Library, Vec<Diagnostic>) {
    let loaded = load_files(paths).expect("readable inputs");
    let (lib, more) = elaborate(&loaded.ast);
    let mut diags = loaded.diags;
    diags.extend(more);
    (lib, diags)
}

/// The corpus plus extra fixture files.
pub fn corpus_with(extra: &[&str]) -> (Library, Vec<Diagnostic>) {
    let mut files = corpus_files();
    files.extend(extra.iter().map(|f| fixture(f)));
    load(&files)
}

/// The clean corpus; panics on any diagnostic.
pub fn corpus() -> Library {
    let (lib, diags) = load(&corpus_files());
    assert!(diags.is_empty(), "corpus diagnostics: {diags:#?}");
    lib
}

/// First difference between two libraries, comparing formulas up to
/// alpha-equivalence.
pub fn library_diff(a: &Library, b: &Library) -> Option<String> {
    let ta: Vec<_> = a.graph.theories().collect();
    let tb: Vec<_> = b.graph.theories().collect();
    if ta.len() != tb.len() {
        return Some(format!("{} vs {} theories", ta.len(), tb.len()));
    }
    for (x, y) in ta.iter().zip(&tb) {
        if x.id != y.id || x.signature != y.signature {
            return Some(format!("theory `{}` vs `{}`", x.id, y.id));
        }
        if x.axioms.len() != y.axioms.len() {
            return Some(format!("axiom count of `{}`", x.id));
        }
        for ((n1, f1), (n2, f2)) in x.axioms.iter().zip(&y.axioms) {
            if n1 != n2 || !alpha_eq(f1, f2) {
                return Some(format!("axiom `{n1}` of `{}`: {f1} vs {f2}", x.id));
            }
        }
        if x.theorems.len() != y.theorems.len() {
            return Some(format!("theorem count of `{}`", x.id));
        }
        for ((n1, t1), (n2, t2)) in x.theorems.iter().zip(&y.theorems) {
            if n1 != n2 || !alpha_eq(&t1.formula, &t2.formula) {
                return Some(format!("theorem `{n1}` of `{}`", x.id));
            }
        }
    }
    let ma: Vec<_> = a.graph.morphisms().collect();
    let mb: Vec<_> = b.graph.morphisms().collect();
    if ma.len() != mb.len() {
        return Some(format!("{} vs {} morphisms", ma.len(), mb.len()));
    }
    for (x, y) in ma.iter().zip(&mb) {
        if x.id != y.id || x.source != y.source || x.target != y.target || !x.assignment.alpha_eq(&y.assignment) {
            return Some(format!("morphism `{}` vs `{}`", x.id, y.id));
        }
        let s1: Vec<_> = x.obligations.iter().map(|o| (&o.axiom_name, o.status.is_discharged())).collect();
        let s2: Vec<_> = y.obligations.iter().map(|o| (&o.axiom_name, o.status.is_discharged())).collect();
        if s1 != s2 {
            return Some(format!("obligations of `{}`", x.id));
        }
    }
    let da: Vec<_> = a.graph.derivations().map(|(n, d)| (n, &d.theory)).collect();
    let db: Vec<_> = b.graph.derivations().map(|(n, d)| (n, &d.theory)).collect();
    if da != db {
        return Some("derivations differ".into());
    }
    for ((n, x), (_, y)) in a.graph.derivations().zip(b.graph.derivations()) {
        if !x.derivation.alpha_eq(&y.derivation) {
            return Some(format!("derivation `{n}`"));
        }
    }
    if a.docs.keys().ne(b.docs.keys()) || a.checks.keys().ne(b.checks.keys()) {
        return Some("documents or checks differ".into());
    }
    for (k, x) in &a.docs {
        let y = &b.docs[k];
        if x.arg.len() != y.arg.len() || !alpha_eq(&x.thm, &y.thm) || x.cc != y.cc {
            return Some(format!("document `{k}`"));
        }
    }
    if a.statements.len() != b.statements.len() || a.assumed_morphisms != b.assumed_morphisms {
        return Some("statements or assumed morphisms differ".into());
    }
    None
}
