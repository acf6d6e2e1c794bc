use proptest::prelude::*;
use tgc_core::crosscheck::*;
use tgc_core::kernel::{Derivation, Formula, Param, Rule, Term, Var};
use tgc_testkit::corpus::{corpus, corpus_with};

fn rn_var(v: &Var) -> Var {
    Var::new(format!("v_{}", v.name), format!("S_{}", v.sort))
}

fn rn_term(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(rn_var(v)),
        Term::App(f, args) => Term::App(format!("z_{f}"), args.iter().map(rn_term).collect()),
    }
}

fn rn(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Pred(p, args) => Formula::Pred(format!("z_{p}"), args.iter().map(rn_term).collect()),
        Formula::Eq(a, b) => Formula::Eq(rn_term(a), rn_term(b)),
        Formula::Not(a) => Formula::not(rn(a)),
        Formula::Binary(c, a, b) => Formula::Binary(*c, Box::new(rn(a)), Box::new(rn(b))),
        Formula::Quant(q, v, body) => Formula::Quant(*q, rn_var(v), Box::new(rn(body))),
    }
}

/// Renames every variable, sort and symbol of `d`.
fn rename(d: &Derivation) -> Derivation {
    let mut out = d.clone();
    for s in &mut out.steps {
        s.conclusion = rn(&s.conclusion);
        s.hyps = s.hyps.as_ref().map(|hs| hs.iter().map(rn).collect());
        s.param = s.param.as_ref().map(|p| match p {
            Param::Name(n) => Param::Name(n.clone()),
            Param::Term(t) => Param::Term(rn_term(t)),
            Param::Motive(v, b) => Param::Motive(rn_var(v), rn(b)),
        });
    }
    out
}

#[test]
fn skeletons_ignore_names() {
    let (lib, _) = corpus_with(&["badmon.tg"]);
    for (name, d) in lib.graph.derivations() {
        let a = skeleton(&d.derivation).unwrap();
        let b = skeleton(&rename(&d.derivation)).unwrap();
        assert_eq!(a, b, "{name}");
        assert_eq!(skeleton_divergence(&a, &b), None);
    }
}

fn structural(lib: &tgc_core::frontend::Library, id: &str) -> StructuralCheck {
    match &lib.checks[id] {
        CrossCheck::Structural(s) => s.clone(),
        other => panic!("{id} is {other:?}"),
    }
}

fn swapped(s: &StructuralCheck) -> StructuralCheck {
    StructuralCheck {
        id: format!("{}_swapped", s.id),
        proof1: s.proof2.clone(),
        proof2: s.proof1.clone(),
        correspondence: s.correspondence.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
    }
}

#[test]
fn structural_checks_are_symmetric() {
    let (lib, _) = corpus_with(&["badmon.tg"]);
    for id in ["cc_struct", "cc_struct_mutated"] {
        let s = structural(&lib, id);
        let a = structural_run(&s, &lib.graph).unwrap();
        let b = structural_run(&swapped(&s), &lib.graph).unwrap();
        assert_eq!(a.status.label(), b.status.label(), "{id}");
        if let Some(Locus::Skeleton(p)) = &a.locus {
            assert_eq!(b.locus, Some(Locus::Skeleton(p.clone())));
        }
    }
}

#[test]
fn mutated_check_reports_skeleton_locus() {
    let (lib, _) = corpus_with(&["badmon.tg"]);
    let out = structural_run(&structural(&lib, "cc_struct_mutated"), &lib.graph).unwrap();
    assert!(matches!(out.status, CheckStatus::Failure(_)));
    assert!(matches!(out.locus, Some(Locus::Skeleton(_))));
}

#[test]
fn semantic_success_is_stable_and_runs_leave_graph_unchanged() {
    let lib = corpus();
    let before = lib.graph.clone();
    let first = run_all(&lib.graph, lib.checks.values());
    let second = run_all(&lib.graph, lib.checks.values());
    assert_eq!(first, second);
    assert_eq!(lib.graph, before);
    for c in lib.checks.values() {
        assert_eq!(&run(c, &lib.graph).unwrap(), first.get(c.id()).unwrap());
    }
}

#[test]
fn deleting_a_witness_gives_pending() {
    let lib = corpus();
    let CrossCheck::Semantic(mut s) = lib.checks["cc_special"].clone() else { panic!() };
    assert!(s.witness.is_some());
    s.witness = None;
    let out = semantic_run(&s, &lib.graph).unwrap();
    assert!(matches!(out.status, CheckStatus::Pending(_)), "{out:?}");
}

#[test]
fn inclusion_image_is_the_statement_itself() {
    let lib = corpus();
    let mon = lib.graph.theory("Monoid").unwrap();
    let comm = lib.graph.theory("CommMonoid").unwrap();
    let m = lib.graph.morphism("MonoidInComm").unwrap();
    assert!(m.is_inclusion(mon, comm));
    for f in mon.axioms.values().chain(mon.theorems.values().map(|t| &t.formula)) {
        assert_eq!(&m.translate_formula(f).unwrap(), f);
    }
    let f = mon.theorems["id_unique"].formula.clone();
    let s = SemanticCheck {
        id: "incl".into(),
        a1: Statement {
            theory: "Monoid".into(),
            label: Some("id_unique".into()),
            formula: f.clone(),
        },
        a2: Statement {
            theory: "CommMonoid".into(),
            label: None,
            formula: f,
        },
        via: vec!["MonoidInComm".into()],
        witness: None,
    };
    assert_eq!(semantic_run(&s, &lib.graph).unwrap().status, CheckStatus::Success);
}

#[test]
fn unknown_references_are_errors() {
    let lib = corpus();
    let mut s = structural(&lib, "cc_struct");
    s.proof2.derivation = "nope".into();
    assert!(structural_run(&s, &lib.graph).is_err());
    let report = run_all(&lib.graph, [&CrossCheck::Structural(s)]);
    assert_eq!(report.failures(), 1);
    assert!(matches!(report.outcomes[0].locus, Some(Locus::Reference(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skeleton_divergence_finds_first_difference(depth in 0usize..4, width in 1usize..3, at in 0usize..3) {
        fn tree(d: usize, w: usize) -> Skeleton {
            Skeleton {
                rule: Rule::ALL[d],
                children: if d == 0 { Vec::new() } else { (0..w).map(|_| tree(d - 1, w)).collect() },
            }
        }
        let a = tree(depth, width);
        prop_assert_eq!(skeleton_divergence(&a, &a.clone()), None);
        let mut b = a.clone();
        let path = vec![0; at.min(depth)];
        let mut node = &mut b;
        for _ in &path {
            node = &mut node.children[0];
        }
        node.rule = Rule::ALL[10];
        prop_assert_eq!(skeleton_divergence(&a, &b), Some(path));
    }
}
