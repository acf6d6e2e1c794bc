use proptest::prelude::*;
use tgc_core::frontend::Library;
use tgc_core::kernel::*;
use tgc_core::morphism::{compose, Morphism, ObligationStatus};
use tgc_testkit::corpus::{corpus, corpus_with};
use tgc_testkit::gen::{closed_formula, closed_term, formula_shape, open_term, Builder};

/// Term translation written out directly: variables change sort, symbols are
/// replaced by their image with parameters filled in.
fn oracle_term(m: &Morphism, t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::var(v.name.clone(), m.assignment.sort_map[&v.sort].clone()),
        Term::App(f, args) => {
            let img = &m.assignment.func_map[f];
            let args: Vec<Term> = args.iter().map(|a| oracle_term(m, a)).collect();
            fill(&img.body, &img.params, &args)
        }
    }
}

fn fill(body: &Term, params: &[Var], args: &[Term]) -> Term {
    match body {
        Term::Var(v) => match params.iter().position(|p| p.name == v.name) {
            Some(i) => args[i].clone(),
            None => body.clone(),
        },
        Term::App(f, xs) => Term::App(f.clone(), xs.iter().map(|x| fill(x, params, args)).collect()),
    }
}

/// `g` is `f` with every atom translated and every connective and binder kept.
fn distributes(m: &Morphism, f: &Formula, g: &Formula) -> bool {
    match (f, g) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Eq(a, b), Formula::Eq(c, d)) => *c == oracle_term(m, a) && *d == oracle_term(m, b),
        (Formula::Pred(..), _) => m.translate_formula(f).is_ok_and(|h| alpha_eq(&h, g)),
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

fn monoid_sig(lib: &Library) -> Signature {
    lib.graph.theory("Monoid").unwrap().signature.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn addmon_is_a_homomorphism(f in closed_formula(monoid_sig(&corpus()))) {
        let lib = corpus();
        let ring = lib.graph.theory("Ring").unwrap();
        for id in ["AddMon", "MulMon"] {
            let m = lib.graph.morphism(id).unwrap();
            let g = m.translate_formula(&f).unwrap();
            prop_assert!(distributes(m, &f, &g), "{}: {} |-> {}", id, f, g);
            prop_assert!(wf_formula(&ring.signature, &Context::new(), &g).is_ok());
            prop_assert!(is_closed(&g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn translation_commutes_with_substitution(
        shape in formula_shape(),
        t1 in open_term(monoid_sig(&corpus()), "M".into(), vec![Var::new("y", "M")]),
        t2 in closed_term(monoid_sig(&corpus()), "M".into()),
    ) {
        let lib = corpus();
        let free = [Var::new("x", "M"), Var::new("y", "M")];
        let f = Builder::new(&monoid_sig(&lib)).open_formula(&shape, &free);
        let s = Subst::from([("x".to_string(), t1), ("y".to_string(), t2)]);
        for m in lib.graph.morphisms().filter(|m| m.source == "Monoid") {
            let lhs = m.translate_formula(&substitute(&f, &s)).unwrap();
            let ts: Subst = s.iter().map(|(k, t)| (k.clone(), m.translate_term(t).unwrap())).collect();
            let rhs = substitute(&m.translate_formula(&f).unwrap(), &ts);
            prop_assert!(alpha_eq(&lhs, &rhs), "{}: {} vs {}", m.id, lhs, rhs);
        }
    }

    #[test]
    fn composite_translation_is_translation_twice(
        f in closed_formula(monoid_sig(&corpus())),
        t in closed_term(monoid_sig(&corpus()), "M".into()),
    ) {
        let lib = corpus();
        let int = lib.graph.theory("Int").unwrap();
        let second = lib.graph.morphism("RingToInt").unwrap();
        for id in ["AddMon", "MulMon"] {
            let first = lib.graph.morphism(id).unwrap();
            let c = compose(first, second).unwrap();
            let once = c.translate_formula(&f).unwrap();
            let twice = second.translate_formula(&first.translate_formula(&f).unwrap()).unwrap();
            prop_assert!(alpha_eq(&once, &twice));
            prop_assert!(wf_formula(&int.signature, &Context::new(), &once).is_ok());
            prop_assert_eq!(
                c.translate_term(&t).unwrap(),
                second.translate_term(&first.translate_term(&t).unwrap()).unwrap()
            );
        }
    }
}

fn chain<'a>(lib: &'a Library, ids: [&str; 3]) -> [&'a Morphism; 3] {
    ids.map(|id| lib.graph.morphism(id).unwrap())
}

#[test]
fn composition_is_associative_on_corpus_chains() {
    let lib = corpus();
    let int_id = Morphism::identity(lib.graph.theory("Int").unwrap());
    let add = lib.graph.morphism("AddMon").unwrap();
    let r2i = lib.graph.morphism("RingToInt").unwrap();
    let mut chains = vec![
        chain(&lib, ["AtoB", "BtoA", "AtoB"]),
        chain(&lib, ["BtoA", "AtoB", "BtoA"]),
    ];
    chains.push([add, r2i, &int_id]);
    for [a, b, c] in chains {
        let left = compose(&compose(a, b).unwrap(), c).unwrap();
        let right = compose(a, &compose(b, c).unwrap()).unwrap();
        assert!(left.assignment.alpha_eq(&right.assignment), "{} / {}", left.id, right.id);
        assert_eq!(left.id, right.id);
        assert_eq!(left.verify(), right.verify());
    }
}

#[test]
fn identity_is_neutral_for_composition() {
    let lib = corpus();
    for m in lib.graph.morphisms() {
        let src = Morphism::identity(lib.graph.theory(&m.source).unwrap());
        let tgt = Morphism::identity(lib.graph.theory(&m.target).unwrap());
        assert!(compose(&src, m).unwrap().assignment.alpha_eq(&m.assignment), "{}", m.id);
        assert!(compose(m, &tgt).unwrap().assignment.alpha_eq(&m.assignment), "{}", m.id);
    }
}

#[test]
fn discharged_obligations_recheck() {
    let (lib, _) = corpus_with(&["badmon.tg"]);
    let mut proved = 0;
    for m in lib.graph.morphisms() {
        let tgt = lib.graph.theory(&m.target).unwrap();
        let src = lib.graph.theory(&m.source).unwrap();
        for o in &m.obligations {
            assert!(alpha_eq(&o.translated, &m.translate_formula(&src.axioms[&o.axiom_name]).unwrap()));
            match &o.status {
                ObligationStatus::ByAxiom(a) => assert!(alpha_eq(&tgt.axioms[a], &o.translated), "{}", m.id),
                ObligationStatus::Proved(d) => {
                    let seq = check_derivation(&tgt.signature, &tgt.axioms, d).unwrap();
                    assert!(seq.is_closed_theorem());
                    assert!(alpha_eq(&seq.conclusion, &o.translated));
                    proved += 1;
                }
                ObligationStatus::Pending => assert_eq!(m.id, "BadMon"),
                other => panic!("unexpected {other:?}"),
            }
        }
    }
    assert_eq!(proved, 2);
}

#[test]
fn composite_obligations_follow_component_status() {
    let (lib, _) = corpus_with(&["badmon.tg"]);
    let g = &lib.graph;
    let ok = g.path(&["AddMon", "RingToInt"]).unwrap();
    assert!(ok
        .composite()
        .obligations
        .iter()
        .all(|o| o.status == ObligationStatus::ByComposition));
    let ad = g.morphism("BadMon").unwrap();
    let id = Morphism::identity(g.theory("AbsDiff").unwrap());
    let c = compose(ad, &id).unwrap();
    assert!(!c.verify().is_verified());
}
