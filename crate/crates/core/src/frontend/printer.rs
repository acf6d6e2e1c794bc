use std::fmt::Write;

use crate::kernel::Formula;

use super::ast::*;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn names(ids: &[Ident], sep: &str) -> String {
    ids.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(sep)
}

fn statement(s: &StatementRef) -> String {
    match s {
        StatementRef::Name(n) => n.name.clone(),
        StatementRef::Formula(f) => match &f.formula {
            Formula::Pred(_, args) if args.is_empty() => format!("({})", f.formula),
            other => other.to_string(),
        },
    }
}

fn param(p: &ParamDecl) -> String {
    match p {
        ParamDecl::Name(n) => n.clone(),
        ParamDecl::Term(t) => t.to_string(),
        ParamDecl::Motive(v, body) => format!("{v}. {body}"),
    }
}

fn theory(out: &mut String, t: &TheoryDecl) {
    write!(out, "theory {}", t.name.name).unwrap();
    if !t.extends.is_empty() {
        write!(out, " extends {}", names(&t.extends, ", ")).unwrap();
    }
    out.push_str(" {\n");
    for item in &t.items {
        match item {
            TheoryItem::Sort(s) => writeln!(out, "  sort {}", s.name),
            TheoryItem::Func { name, args, result } if args.is_empty() => {
                writeln!(out, "  func {} : {}", name.name, result.name)
            }
            TheoryItem::Func { name, args, result } => {
                writeln!(out, "  func {} : {} -> {}", name.name, names(args, ", "), result.name)
            }
            TheoryItem::Pred { name, args } if args.is_empty() => writeln!(out, "  pred {}", name.name),
            TheoryItem::Pred { name, args } => writeln!(out, "  pred {} : {}", name.name, names(args, ", ")),
            TheoryItem::Axiom { name, formula } => writeln!(out, "  axiom {} : {}", name.name, formula.formula),
        }
        .unwrap();
    }
    out.push_str("}\n");
}

fn image_head(kw: &str, name: &Ident, params: &[Ident]) -> String {
    if params.is_empty() {
        format!("  {kw} {}", name.name)
    } else {
        format!("  {kw} {}({})", name.name, names(params, ","))
    }
}

fn morphism(out: &mut String, m: &MorphismDecl) {
    write!(out, "morphism {} : {} -> {}", m.name.name, m.source.name, m.target.name).unwrap();
    if m.assumed {
        out.push_str(" assumed");
    }
    out.push_str(" {\n");
    for item in &m.items {
        match item {
            MorphismItem::Identity(_) => writeln!(out, "  identity"),
            MorphismItem::Sort { from, to } => writeln!(out, "  sort {} -> {}", from.name, to.name),
            MorphismItem::Func { name, params, body, .. } => {
                writeln!(out, "{} -> {body}", image_head("func", name, params))
            }
            MorphismItem::Pred { name, params, body } => {
                writeln!(out, "{} -> {}", image_head("pred", name, params), body.formula)
            }
            MorphismItem::Obligation { axiom, by } => match by {
                ObligationBy::Axiom(a) => writeln!(out, "  obligation {} by axiom {}", axiom.name, a.name),
                ObligationBy::Proof(d) => writeln!(out, "  obligation {} by proof {}", axiom.name, d.name),
                ObligationBy::Assumed(r) => writeln!(out, "  obligation {} assumed {}", axiom.name, quote(r)),
            },
        }
        .unwrap();
    }
    out.push_str("}\n");
}

fn theorem(out: &mut String, t: &TheoremDecl) {
    write!(out, "theorem {} in {} : {}", t.name.name, t.theory.name, t.formula.formula).unwrap();
    match &t.source {
        TheoremSource::Statement => {}
        TheoremSource::Assumed(r) => write!(out, " assumed {}", quote(r)).unwrap(),
        TheoremSource::Transported { theory, theorem, via } => write!(
            out,
            " transported from {}.{} via {}",
            theory.name,
            theorem.name,
            names(via, ", ")
        )
        .unwrap(),
    }
    out.push('\n');
}

fn derivation(out: &mut String, d: &DerivationDecl) {
    write!(out, "derivation {} in {}", d.name.name, d.theory.name).unwrap();
    if let Some(p) = &d.proves {
        write!(out, " proves {}", p.name).unwrap();
    }
    out.push_str(" {\n");
    if !d.vars.is_empty() {
        let vs: Vec<String> = d.vars.iter().map(|(v, s)| format!("{}:{}", v.name, s.name)).collect();
        writeln!(out, "  vars {}", vs.join(", ")).unwrap();
    }
    for s in &d.steps {
        write!(out, "  {} : {}", s.label.name, s.rule).unwrap();
        for p in &s.premises {
            write!(out, " {}", p.name).unwrap();
        }
        if let Some(p) = &s.param {
            write!(out, " [{}]", param(p)).unwrap();
        }
        if let Some(hs) = &s.hyps {
            out.push_str(" :");
            let hs: Vec<String> = hs.iter().map(Formula::to_string).collect();
            if !hs.is_empty() {
                write!(out, " {}", hs.join(", ")).unwrap();
            }
        }
        writeln!(out, " |- {}", s.conclusion).unwrap();
    }
    out.push_str("}\n");
}

fn proofdoc(out: &mut String, p: &ProofDocDecl) {
    writeln!(out, "proofdoc {} in {} shows {} {{", p.name.name, p.theory.name, p.shows.name).unwrap();
    for s in &p.steps {
        match s {
            DocStepDecl::Informal { text, claim, label, .. } => {
                write!(out, "  informal {}", quote(text)).unwrap();
                if let Some(c) = claim {
                    write!(out, " claims {}", c.formula).unwrap();
                }
                if let Some(l) = label {
                    write!(out, " as {}", l.name).unwrap();
                }
            }
            DocStepDecl::Formal { derivation, label, .. } => {
                write!(out, "  formal {}", derivation.name).unwrap();
                if let Some(l) = label {
                    write!(out, " as {}", l.name).unwrap();
                }
            }
        }
        out.push('\n');
    }
    if !p.checks.is_empty() {
        writeln!(out, "  crosscheck {}", names(&p.checks, " ")).unwrap();
    }
    out.push_str("}\n");
}

fn crosscheck(out: &mut String, c: &CrossCheckDecl) {
    write!(out, "crosscheck {} : ", c.name.name).unwrap();
    match &c.body {
        CheckBody::Semantic {
            a1,
            t1,
            a2,
            t2,
            via,
            witness,
        } => {
            write!(
                out,
                "semantic({} in {}, {} in {}, via {})",
                statement(a1),
                t1.name,
                statement(a2),
                t2.name,
                names(via, ", ")
            )
            .unwrap();
            if let Some(w) = witness {
                write!(out, " witness {}", w.name).unwrap();
            }
        }
        CheckBody::Structural { d1, t1, d2, t2, with } => {
            write!(out, "structural({} in {}, {} in {})", d1.name, t1.name, d2.name, t2.name).unwrap();
            if !with.is_empty() {
                let pairs: Vec<String> = with.iter().map(|(a, b)| format!("{} -> {}", a.name, b.name)).collect();
                write!(out, " with {{ {} }}", pairs.join(", ")).unwrap();
            }
        }
    }
    out.push('\n');
}

pub fn print_decl(d: &Decl) -> String {
    let mut out = String::new();
    match d {
        Decl::Theory(t) => theory(&mut out, t),
        Decl::Morphism(m) => morphism(&mut out, m),
        Decl::Theorem(t) => theorem(&mut out, t),
        Decl::Derivation(x) => derivation(&mut out, x),
        Decl::ProofDoc(p) => proofdoc(&mut out, p),
        Decl::CrossCheck(c) => crosscheck(&mut out, c),
        Decl::Include(i) => writeln!(out, "include {}", quote(&i.path.name)).unwrap(),
    }
    out
}

/// Canonical source text: one blank line between declarations.
pub fn pretty_print(ast: &Ast) -> String {
    ast.decls.iter().map(print_decl).collect::<Vec<_>>().join("\n")
}
