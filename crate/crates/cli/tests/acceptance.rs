//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use tgc_core::crosscheck::{run_all, semantic_run, structural_run, CheckStatus, CrossCheck, Locus};
use tgc_core::frontend::{codes, elaborate, load_files, parse_file, parse_formula, pretty_print, Decl, Library};
use tgc_core::kernel::*;
use tgc_core::morphism::{compose, Morphism, ObligationStatus};
use tgc_core::proofdoc::{check_doc, promote, Coverage, DocError, ThmStatus};
use tgc_testkit::corpus::{corpus, corpus_dir, corpus_files, corpus_with, fixture, library_diff};
use tgc_testkit::decls::{module, module_shape};
use tgc_testkit::gen::{closed_formula, closed_term};
use tgc_testkit::mutate::{kinds, mutations};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn tgc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgc")).args(args).output().expect("tgc runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn sample<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), String>) -> Verdict
where
    S::Value: std::fmt::Debug,
{
    runner(cases)
        .run(&strategy, |v| test(v).map_err(TestCaseError::fail))
        .map(|()| format!("{cases} cases"))
        .map_err(|e| e.to_string())
}

fn sig(lib: &Library, theory: &str) -> Signature {
    lib.graph.theory(theory).unwrap().signature.clone()
}

fn hand_translation(op: &str, unit: &str) -> Formula {
    parse_formula(&format!("forall u:R. (forall x:R. {op}(u,x) = x) -> u = {unit}"), &[]).unwrap()
}

fn kernel_mutations() -> Verdict {
    let (lib, diags) = corpus_with(&["badmon.tg"]);
    ensure!(diags.iter().all(|d| !d.is_error()), "fixture errors");
    let mut originals = Vec::new();
    let (mut total, mut rejected) = (0, 0);
    let mut seen = BTreeSet::new();
    for (_, d) in lib.graph.derivations() {
        if d.derivation.axiom_leaves().iter().any(|(n, _)| n.contains(':')) {
            continue;
        }
        let th = lib.graph.theory(&d.theory).unwrap();
        ensure!(
            check_derivation(&th.signature, &th.axioms, &d.derivation).is_ok(),
            "false rejection of {}",
            d.derivation.name
        );
        originals.push(format!("{}.{}", d.theory, d.derivation.name));
        let ms = mutations(&d.derivation, &th.signature, &th.axioms);
        seen.extend(kinds(&ms));
        for m in &ms {
            total += 1;
            if check_derivation(&th.signature, &th.axioms, &m.derivation).is_err() {
                rejected += 1;
            }
        }
    }
    ensure!(originals.len() >= 5, "only {} derivations", originals.len());
    ensure!(originals.iter().any(|o| o == "Monoid.d_id_unique"), "d_id_unique missing");
    ensure!(total >= 20 && seen.len() == 4, "{total} mutations, kinds {seen:?}");
    ensure!(rejected == total, "{rejected}/{total} mutations rejected");
    Ok(format!("{} originals accepted, {rejected}/{total} mutations rejected", originals.len()))
}

fn oracle_term(m: &Morphism, t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::var(v.name.clone(), m.assignment.sort_map[&v.sort].clone()),
        Term::App(f, args) => {
            let img = &m.assignment.func_map[f];
            let s: Subst = img
                .params
                .iter()
                .zip(args)
                .map(|(p, a)| (p.name.clone(), oracle_term(m, a)))
                .collect();
            substitute_term(&img.body, &s)
        }
    }
}

fn distributes(m: &Morphism, f: &Formula, g: &Formula) -> bool {
    match (f, g) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Eq(a, b), Formula::Eq(c, d)) => *c == oracle_term(m, a) && *d == oracle_term(m, b),
        (Formula::Pred(p, args), _) => {
            let img = &m.assignment.pred_map[p];
            let s: Subst = img
                .params
                .iter()
                .zip(args)
                .map(|(v, a)| (v.name.clone(), oracle_term(m, a)))
                .collect();
            alpha_eq(&substitute(&img.body, &s), g)
        }
        (Formula::Not(a), Formula::Not(b)) => distributes(m, a, b),
        (Formula::Binary(c, a1, a2), Formula::Binary(d, b1, b2)) => {
            c == d && distributes(m, a1, b1) && distributes(m, a2, b2)
        }
        (Formula::Quant(q, v, a), Formula::Quant(r, w, b)) => {
            q == r && v.name == w.name && m.assignment.sort_map[&v.sort] == w.sort && distributes(m, a, b)
        }
        _ => false,
    }
}

fn homomorphism() -> Verdict {
    let lib = corpus();
    let m = lib.graph.morphism("AddMon").unwrap().clone();
    let ring = sig(&lib, "Ring");
    sample(500, closed_formula(sig(&lib, "Monoid")), |f| {
        let g = m.translate_formula(&f).map_err(|e| e.to_string())?;
        if !distributes(&m, &f, &g) {
            return Err(format!("{f} |-> {g}"));
        }
        wf_formula(&ring, &Context::new(), &g).map_err(|e| format!("{g}: {e}"))
    })
}

fn composition() -> Verdict {
    let lib = corpus();
    let g = &lib.graph;
    let second = g.morphism("RingToInt").unwrap().clone();
    let firsts: Vec<Morphism> = ["AddMon", "MulMon"].map(|id| g.morphism(id).unwrap().clone()).to_vec();
    let mon = sig(&lib, "Monoid");
    let strategy = (closed_formula(mon.clone()), closed_term(mon, "M".into()));
    let coherent = sample(200, strategy, |(f, t)| {
        for first in &firsts {
            let c = compose(first, &second).map_err(|e| e.to_string())?;
            let once = c.translate_formula(&f).unwrap();
            let twice = second.translate_formula(&first.translate_formula(&f).unwrap()).unwrap();
            let t_once = c.translate_term(&t).unwrap();
            let t_twice = second.translate_term(&first.translate_term(&t).unwrap()).unwrap();
            if !alpha_eq(&once, &twice) || t_once != t_twice {
                return Err(format!("{}: {once} vs {twice}", c.id));
            }
        }
        Ok(())
    })?;
    let int_id = Morphism::identity(g.theory("Int").unwrap());
    let m = |id: &str| g.morphism(id).unwrap();
    let chains = [
        [m("AddMon"), m("RingToInt"), &int_id],
        [m("MulMon"), m("RingToInt"), &int_id],
        [m("AtoB"), m("BtoA"), m("AtoB")],
    ];
    for [a, b, c] in chains {
        let left = compose(&compose(a, b).unwrap(), c).unwrap();
        let right = compose(a, &compose(b, c).unwrap()).unwrap();
        ensure!(left.assignment.alpha_eq(&right.assignment), "{} not associative", left.id);
    }
    Ok(format!("{coherent}, {} chains associative", chains.len()))
}

fn corpus_end_to_end() -> Verdict {
    let (lib, diags) = tgc_testkit::corpus::load(&corpus_files());
    ensure!(diags.is_empty(), "{} corpus diagnostics", diags.len());
    let theories: BTreeSet<&str> = lib.graph.theories().map(|t| t.id.as_str()).collect();
    let expected = BTreeSet::from(["Monoid", "CommMonoid", "CommMonoidA", "CommMonoidB", "Ring", "Int"]);
    ensure!(theories == expected, "theories {theories:?}");
    let morphisms: BTreeSet<&str> = lib.graph.morphisms().map(|m| m.id.as_str()).collect();
    for id in ["AddMon", "MulMon", "MonoidInComm", "RingToInt", "AtoB", "BtoA"] {
        ensure!(morphisms.contains(id), "missing morphism {id}");
    }
    ensure!(lib.docs.len() == 2 && lib.checks.len() >= 4, "{} docs, {} checks", lib.docs.len(), lib.checks.len());
    for id in ["AddMon", "MulMon"] {
        let m = lib.graph.morphism(id).unwrap();
        let by_axiom = m
            .obligations
            .iter()
            .filter(|o| matches!(o.status, ObligationStatus::ByAxiom(_)))
            .count();
        ensure!(by_axiom == 3 && m.obligations.len() == 3, "{id}: {by_axiom} ByAxiom");
        ensure!(m.verify().is_verified(), "{id} not verified");
    }
    let rc = lib.graph.realm_candidates();
    ensure!(
        rc.len() == 1 && rc[0].first == "CommMonoidA" && rc[0].second == "CommMonoidB",
        "realm candidates {rc:?}"
    );
    let out = tgc(&["check", path_str(&corpus_dir())]);
    ensure!(out.status.code() == Some(0), "tgc check exited {:?}", out.status.code());
    Ok("0 diagnostics, tgc check exit 0, 3+3 ByAxiom, one realm pair".into())
}

fn parallel_morphisms() -> Verdict {
    let lib = corpus();
    let reach = lib.graph.backward_reach("Ring", 1).map_err(|e| e.to_string())?;
    let found: BTreeSet<(String, Vec<String>)> = reach.iter().map(|(t, p)| (t.clone(), p.edges().to_vec())).collect();
    let expected = BTreeSet::from([
        ("Monoid".to_string(), vec!["AddMon".to_string()]),
        ("Monoid".to_string(), vec!["MulMon".to_string()]),
    ]);
    ensure!(reach.len() == 2 && found == expected, "{found:?}");
    Ok("Monoid via AddMon and via MulMon".into())
}

fn transported_decl(stdout: &[u8]) -> Result<(String, Formula), String> {
    let text = String::from_utf8_lossy(stdout).into_owned();
    let (ast, diags) = parse_file("out.tg", &text);
    ensure!(diags.is_empty(), "unparsable output: {text}");
    match ast.decls.as_slice() {
        [Decl::Theorem(t)] => Ok((text.clone(), t.formula.formula.clone())),
        _ => Err(format!("expected one theorem, got {text}")),
    }
}

fn copy_corpus(dir: &Path, extra: &[&str]) -> PathBuf {
    let root = dir.join("lib");
    std::fs::create_dir_all(&root).unwrap();
    for f in corpus_files().into_iter().chain(extra.iter().map(|e| fixture(e))) {
        std::fs::copy(&f, root.join(f.file_name().unwrap())).unwrap();
    }
    root
}

fn transport_round_trip() -> Verdict {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = copy_corpus(tmp.path(), &[]);
    let root_s = path_str(&root);
    let mut added = String::new();
    for (via, op, unit) in [("AddMon", "add", "zero"), ("MulMon", "mul", "one")] {
        let out = tgc(&["transport", "Monoid.id_unique", "--via", via, root_s]);
        ensure!(out.status.code() == Some(0), "transport via {via} exited {:?}", out.status.code());
        let (text, formula) = transported_decl(&out.stdout)?;
        ensure!(alpha_eq(&formula, &hand_translation(op, unit)), "via {via}: {formula}");
        added.push('\n');
        added.push_str(&text);
    }
    std::fs::write(root.join("transported.tg"), added).unwrap();
    for via in ["AddMon", "MulMon"] {
        let out = tgc(&["--format", "json", "transport", "Monoid.id_unique", "--via", via, root_s]);
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let status = &report["items"][0]["status"];
        ensure!(status == "duplicate", "re-transport via {via}: {status}");
    }
    let bad = copy_corpus(&tmp.path().join("bad"), &["badmon.tg"]);
    let out = tgc(&["transport", "Monoid.id_unique", "--via", "BadMon", path_str(&bad)]);
    ensure!(out.status.code() == Some(1), "BadMon transport exited {:?}", out.status.code());
    Ok("two Ring theorems, duplicates detected, BadMon exit 1".into())
}

fn crosscheck_semantics() -> Verdict {
    let lib = corpus();
    let report = run_all(&lib.graph, lib.checks.values());
    ensure!(report.successes() == 4, "{} successes", report.successes());
    let (bad, _) = corpus_with(&["badmon.tg"]);
    let CrossCheck::Structural(s) = &bad.checks["cc_struct_mutated"] else {
        return Err("cc_struct_mutated is not structural".into());
    };
    let out = structural_run(s, &bad.graph).map_err(|e| e.to_string())?;
    ensure!(
        matches!(out.status, CheckStatus::Failure(_)) && matches!(out.locus, Some(Locus::Skeleton(_))),
        "mutated check gave {out:?}"
    );
    let CrossCheck::Semantic(mut sem) = lib.checks["cc_special"].clone() else {
        return Err("cc_special is not semantic".into());
    };
    sem.witness = None;
    let out = semantic_run(&sem, &lib.graph).map_err(|e| e.to_string())?;
    ensure!(matches!(out.status, CheckStatus::Pending(_)), "witnessless check gave {out:?}");
    Ok("4 Success, skeleton Failure, Pending without witness".into())
}

fn flexiformal() -> Verdict {
    let lib = corpus();
    let mut doc = lib.docs["id_unique_doc"].clone();
    let r = check_doc(&doc, &lib.graph, &lib.checks).map_err(|e| e.to_string())?;
    ensure!(matches!(r.thm_status, ThmStatus::Established { .. }), "{:?}", r.thm_status);
    ensure!(r.coverage == Coverage { formal: 1, total: 3 }, "coverage {:?}", r.coverage);
    doc.arg.retain(|s| !s.is_formal());
    let r = check_doc(&doc, &lib.graph, &lib.checks).map_err(|e| e.to_string())?;
    ensure!(r.thm_status == ThmStatus::Flexiformal && !r.gaps.is_empty(), "{:?}", r.thm_status);
    ensure!(
        matches!(promote(&doc, &lib.graph, &lib.checks), Err(DocError::NotEstablished(_))),
        "promote was not blocked"
    );
    Ok(format!("Established 1/3, then Flexiformal with {} gaps", r.gaps.len()))
}

fn frontend_round_trip() -> Verdict {
    let loaded = load_files(&corpus_files()).map_err(|e| e.to_string())?;
    let (lib, _) = elaborate(&loaded.ast);
    let (ast, diags) = parse_file("printed.tg", &pretty_print(&loaded.ast));
    ensure!(diags.is_empty(), "printed corpus does not parse");
    let (again, _) = elaborate(&ast);
    if let Some(d) = library_diff(&lib, &again) {
        return Err(format!("corpus: {d}"));
    }
    let generated = sample(200, module_shape(), |shape| {
        let ast = module(0, &shape);
        let (lib, _) = elaborate(&ast);
        let text = pretty_print(&ast);
        let (re, diags) = parse_file("gen.tg", &text);
        if !diags.is_empty() {
            return Err(format!("{diags:?}\n{text}"));
        }
        match library_diff(&lib, &elaborate(&re).0) {
            Some(d) => Err(format!("{d}\n{text}")),
            None => Ok(()),
        }
    })?;
    let seeded = [
        ("errors/unknown_sort.tg", codes::UNKNOWN_SORT, (4, 20)),
        ("errors/unmapped_symbol.tg", codes::UNMAPPED_SYMBOL, (15, 10)),
        ("errors/syntax_error.tg", codes::SYNTAX, (5, 37)),
    ];
    for (file, code, at) in seeded {
        let loaded = load_files(&[fixture(file)]).map_err(|e| e.to_string())?;
        let (_, more) = elaborate(&loaded.ast);
        let all: Vec<_> = loaded.diags.iter().chain(&more).collect();
        let first = all.iter().find(|d| d.is_error()).ok_or(format!("{file}: no error"))?;
        ensure!(
            first.code == code && (first.span.start.line, first.span.start.col) == at,
            "{file}: {first}"
        );
        let lines = loaded.files[0].text.lines().count() as u32 + 1;
        for d in &all {
            ensure!(d.span.start < d.span.end && d.span.end.line <= lines, "{file}: span of {d}");
        }
    }
    Ok(format!("corpus and {generated} round-trip, seeded errors located"))
}

fn determinism() -> Verdict {
    let dir = corpus_dir();
    let args = ["--format", "json", "check", path_str(&dir)];
    let a = tgc(&args);
    let b = tgc(&args);
    ensure!(a.status.code() == Some(0), "exit {:?}", a.status.code());
    serde_json::from_slice::<serde_json::Value>(&a.stdout).map_err(|e| e.to_string())?;
    ensure!(a.stdout == b.stdout, "reports differ");
    Ok(format!("{} identical bytes", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("kernel rejects every single-step mutation", kernel_mutations),
        ("AddMon translation is a homomorphism", homomorphism),
        ("composition is coherent and associative", composition),
        ("corpus elaborates and checks end to end", corpus_end_to_end),
        ("Ring has two Monoid morphisms into it", parallel_morphisms),
        ("transport round trip", transport_round_trip),
        ("cross-check outcomes", crosscheck_semantics),
        ("flexiformal document status", flexiformal),
        ("frontend round trip and diagnostics", frontend_round_trip),
        ("check reports are deterministic", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("PASS criterion {n}: {title} ({detail})"),
            Err(why) => {
                println!("FAIL criterion {n}: {title} ({why})");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
