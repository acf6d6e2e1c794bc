use proptest::prelude::*;
use tgc_core::frontend::*;
use tgc_core::kernel::alpha_eq;
use tgc_testkit::corpus::{corpus_files, library_diff};
use tgc_testkit::decls::{module, module_shape};
use tgc_testkit::gen::closed_formula;

fn reparse(ast: &Ast) -> (String, Ast) {
    let text = pretty_print(ast);
    let (again, diags) = parse_file("printed.tg", &text);
    assert!(diags.is_empty(), "{diags:#?}\n{text}");
    (text, again)
}

fn codes_of(diags: &[Diagnostic]) -> Vec<&'static str> {
    diags.iter().map(|d| d.code).collect()
}

#[test]
fn corpus_round_trips() {
    let loaded = load_files(&corpus_files()).unwrap();
    let (lib, diags) = elaborate(&loaded.ast);
    assert!(diags.is_empty());
    let (text, ast) = reparse(&loaded.ast);
    let (again, diags) = elaborate(&ast);
    assert!(diags.is_empty(), "{diags:#?}");
    assert_eq!(library_diff(&lib, &again), None);
    assert_eq!(pretty_print(&ast), text);
}

#[test]
fn each_corpus_file_round_trips_alone() {
    for f in corpus_files() {
        let src = std::fs::read_to_string(&f).unwrap();
        let (ast, diags) = parse_file("x.tg", &src);
        assert!(diags.is_empty());
        let (text, again) = reparse(&ast);
        assert_eq!(ast.decls.len(), again.decls.len());
        for (a, b) in ast.decls.iter().zip(&again.decls) {
            assert_eq!(a.name().name, b.name().name);
            assert_eq!(print_decl(a), print_decl(b));
        }
        assert_eq!(pretty_print(&again), text);
    }
}

#[test]
fn empty_ast_prints_empty_text() {
    assert_eq!(pretty_print(&Ast::default()), "");
    let (ast, diags) = parse_file("e.tg", "");
    assert!(ast.decls.is_empty() && diags.is_empty());
}

#[test]
fn elaboration_is_deterministic() {
    let mut files = corpus_files();
    files.push(tgc_testkit::corpus::fixture("badmon.tg"));
    let a = load_files(&files).unwrap();
    let b = load_files(&files).unwrap();
    assert_eq!(a, b);
    let (la, da) = elaborate(&a.ast);
    let (lb, db) = elaborate(&b.ast);
    assert_eq!(la, lb);
    assert_eq!(da, db);
}

#[test]
fn seeded_error_spans_sit_inside_their_declaration() {
    for f in ["errors/unknown_sort.tg", "errors/unmapped_symbol.tg", "errors/syntax_error.tg"] {
        let loaded = load_files(&[tgc_testkit::corpus::fixture(f)]).unwrap();
        let (_, diags) = elaborate(&loaded.ast);
        assert!(has_errors(&diags) || has_errors(&loaded.diags), "{f}");
        for d in &diags {
            let decl = d.decl.as_deref().expect("elaboration diagnostics name their declaration");
            let owner = loaded.ast.decls.iter().find(|x| x.name().name == decl).unwrap();
            assert!(owner.span().contains(&d.span), "{f}: {d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn generated_declarations_round_trip(shape in module_shape()) {
        let ast = module(0, &shape);
        let (lib, diags) = elaborate(&ast);
        let (text, again) = reparse(&ast);
        prop_assert_eq!(again.decls.len(), 3);
        let (lib2, diags2) = elaborate(&again);
        prop_assert_eq!(codes_of(&diags), codes_of(&diags2));
        prop_assert_eq!(library_diff(&lib, &lib2), None, "{}", text);
        prop_assert!(!has_errors(&diags), "{:?}\n{}", diags, text);
        prop_assert_eq!(pretty_print(&again), text);
    }

    #[test]
    fn formulas_reparse_alpha_equal(f in closed_formula(tgc_testkit::corpus::corpus().graph.theory("Ring").unwrap().signature.clone())) {
        let g = parse_formula(&f.to_string(), &[]).unwrap();
        prop_assert!(alpha_eq(&f, &g), "{} vs {}", f, g);
    }
}

fn corpus_text() -> Vec<String> {
    corpus_files().iter().map(|f| std::fs::read_to_string(f).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn damaged_sources_give_diagnostics_not_panics(
        file in 0usize..4,
        at in any::<prop::sample::Index>(),
        len in 0usize..6,
        insert in prop::sample::select(vec!["", "}", "{", "(", "forall", "->", "=", ":", "theory", "#", "\"", "x"]),
    ) {
        let texts = corpus_text();
        let src = &texts[file % texts.len()];
        let chars: Vec<char> = src.chars().collect();
        let i = at.index(chars.len());
        let j = (i + len).min(chars.len());
        let damaged: String = chars[..i].iter().chain(insert.chars().collect::<Vec<_>>().iter()).chain(&chars[j..]).collect();
        let (ast, mut diags) = parse_file("d.tg", &damaged);
        let (_, more) = elaborate(&ast);
        diags.extend(more);
        let lines = damaged.lines().count() as u32 + 1;
        for d in &diags {
            prop_assert!(d.span.start < d.span.end, "{}", d);
            prop_assert!(d.span.start.line >= 1 && d.span.end.line <= lines + 1, "{}", d);
        }
    }
}
