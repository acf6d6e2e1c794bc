use std::sync::Arc;

use crate::kernel::{Connective, Formula, Quantifier, Rule, Term, Var};

use super::ast::*;
use super::diag::{codes, Diagnostic, SourceSpan};
use super::lexer::{lex, Tok, Token};

const DECL_KEYWORDS: &[&str] = &[
    "theory",
    "morphism",
    "theorem",
    "derivation",
    "proofdoc",
    "crosscheck",
    "include",
];

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    idx: usize,
    scope: Vec<Var>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.idx + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.idx].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.idx.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.idx];
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::error(codes::SYNTAX, self.span(), msg))
    }

    fn expected<T>(&self, what: &str) -> PResult<T> {
        self.error(format!("expected {what}, found {}", self.peek()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.expected(&t.to_string())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.expected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.span();
                self.bump();
                Ok(Ident { name, span })
            }
            _ => self.expected("an identifier"),
        }
    }

    fn string(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.expected("a string literal"),
        }
    }

    fn ident_list(&mut self, sep: &Tok) -> PResult<Vec<Ident>> {
        let mut out = vec![self.ident()?];
        while self.eat(sep) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// Skips to the next declaration keyword outside braces (or at column 1).
    fn recover(&mut self, decl_start: usize) {
        let mut depth: i64 = self.toks[decl_start..self.idx]
            .iter()
            .map(|t| match t.tok {
                Tok::LBrace => 1,
                Tok::RBrace => -1,
                _ => 0,
            })
            .sum();
        if self.idx == decl_start {
            self.bump();
        }
        loop {
            let t = &self.toks[self.idx];
            match &t.tok {
                Tok::Eof => return,
                Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) && (depth <= 0 || t.span.start.col == 1) => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                _ => {}
            }
            self.bump();
        }
    }

    fn file(&mut self, diags: &mut Vec<Diagnostic>) -> Ast {
        let mut ast = Ast::default();
        while *self.peek() != Tok::Eof {
            let start = self.idx;
            self.scope.clear();
            match self.decl() {
                Ok(d) => ast.decls.push(d),
                Err(e) => {
                    diags.push(e);
                    self.recover(start);
                }
            }
        }
        ast
    }

    fn decl(&mut self) -> PResult<Decl> {
        let start = self.span();
        let kw = match self.peek() {
            Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return self.expected("a declaration"),
        };
        self.bump();
        let decl = match kw.as_str() {
            "theory" => Decl::Theory(self.theory(start)?),
            "morphism" => Decl::Morphism(self.morphism(start)?),
            "theorem" => Decl::Theorem(self.theorem(start)?),
            "derivation" => Decl::Derivation(self.derivation(start)?),
            "proofdoc" => Decl::ProofDoc(self.proofdoc(start)?),
            "crosscheck" => Decl::CrossCheck(self.crosscheck(start)?),
            "include" => {
                let span = self.span();
                let path = self.string()?;
                Decl::Include(IncludeDecl {
                    path: Ident { name: path, span },
                    span: start.to(&self.prev_span()),
                })
            }
            _ => unreachable!(),
        };
        Ok(decl)
    }

    fn theory(&mut self, start: SourceSpan) -> PResult<TheoryDecl> {
        let name = self.ident()?;
        let extends = if self.eat_kw("extends") {
            self.ident_list(&Tok::Comma)?
        } else {
            Vec::new()
        };
        self.expect(&Tok::LBrace)?;
        let mut items = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let kw = self.ident()?;
            let item = match kw.name.as_str() {
                "sort" => TheoryItem::Sort(self.ident()?),
                "func" => {
                    let name = self.ident()?;
                    self.expect(&Tok::Colon)?;
                    let list = self.ident_list(&Tok::Comma)?;
                    if self.eat(&Tok::Arrow) {
                        TheoryItem::Func {
                            name,
                            args: list,
                            result: self.ident()?,
                        }
                    } else if list.len() == 1 {
                        TheoryItem::Func {
                            name,
                            args: Vec::new(),
                            result: list.into_iter().next().expect("one element"),
                        }
                    } else {
                        return self.expected("`->` and a result sort");
                    }
                }
                "pred" => {
                    let name = self.ident()?;
                    let args = if self.eat(&Tok::Colon) {
                        self.ident_list(&Tok::Comma)?
                    } else {
                        Vec::new()
                    };
                    TheoryItem::Pred { name, args }
                }
                "axiom" => {
                    let name = self.ident()?;
                    self.expect(&Tok::Colon)?;
                    TheoryItem::Axiom {
                        name,
                        formula: self.spanned_formula()?,
                    }
                }
                other => {
                    return Err(Diagnostic::error(
                        codes::SYNTAX,
                        kw.span,
                        format!("expected `sort`, `func`, `pred` or `axiom`, found `{other}`"),
                    ))
                }
            };
            items.push(item);
        }
        Ok(TheoryDecl {
            name,
            extends,
            items,
            span: start.to(&self.prev_span()),
        })
    }

    fn params(&mut self) -> PResult<Vec<Ident>> {
        if !self.eat(&Tok::LParen) {
            return Ok(Vec::new());
        }
        if self.eat(&Tok::RParen) {
            return Ok(Vec::new());
        }
        let ps = self.ident_list(&Tok::Comma)?;
        self.expect(&Tok::RParen)?;
        Ok(ps)
    }

    fn morphism(&mut self, start: SourceSpan) -> PResult<MorphismDecl> {
        let name = self.ident()?;
        self.expect(&Tok::Colon)?;
        let source = self.ident()?;
        self.expect(&Tok::Arrow)?;
        let target = self.ident()?;
        let assumed = self.eat_kw("assumed");
        self.expect(&Tok::LBrace)?;
        let mut items = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let kw = self.ident()?;
            let item = match kw.name.as_str() {
                "identity" => MorphismItem::Identity(kw.span),
                "sort" => {
                    let from = self.ident()?;
                    self.expect(&Tok::Arrow)?;
                    MorphismItem::Sort { from, to: self.ident()? }
                }
                "func" | "pred" => {
                    let name = self.ident()?;
                    let params = self.params()?;
                    self.expect(&Tok::Arrow)?;
                    self.scope = params.iter().map(|p| Var::new(p.name.clone(), "")).collect();
                    let item = if kw.name == "func" {
                        let s = self.span();
                        let body = self.term()?;
                        MorphismItem::Func {
                            name,
                            params,
                            body,
                            span: s.to(&self.prev_span()),
                        }
                    } else {
                        MorphismItem::Pred {
                            name,
                            params,
                            body: self.spanned_formula()?,
                        }
                    };
                    self.scope.clear();
                    item
                }
                "obligation" => {
                    let axiom = self.ident()?;
                    let by = if self.eat_kw("by") {
                        if self.eat_kw("axiom") {
                            ObligationBy::Axiom(self.ident()?)
                        } else if self.eat_kw("proof") {
                            ObligationBy::Proof(self.ident()?)
                        } else {
                            return self.expected("`axiom` or `proof`");
                        }
                    } else if self.eat_kw("assumed") {
                        ObligationBy::Assumed(self.string()?)
                    } else {
                        return self.expected("`by` or `assumed`");
                    };
                    MorphismItem::Obligation { axiom, by }
                }
                other => {
                    return Err(Diagnostic::error(
                        codes::SYNTAX,
                        kw.span,
                        format!("expected `identity`, `sort`, `func`, `pred` or `obligation`, found `{other}`"),
                    ))
                }
            };
            items.push(item);
        }
        Ok(MorphismDecl {
            name,
            source,
            target,
            assumed,
            items,
            span: start.to(&self.prev_span()),
        })
    }

    fn theorem(&mut self, start: SourceSpan) -> PResult<TheoremDecl> {
        let name = self.ident()?;
        self.expect_kw("in")?;
        let theory = self.ident()?;
        self.expect(&Tok::Colon)?;
        let formula = self.spanned_formula()?;
        let source = if self.eat_kw("assumed") {
            TheoremSource::Assumed(self.string()?)
        } else if self.eat_kw("transported") {
            self.expect_kw("from")?;
            let theory = self.ident()?;
            self.expect(&Tok::Dot)?;
            let theorem = self.ident()?;
            self.expect_kw("via")?;
            TheoremSource::Transported {
                theory,
                theorem,
                via: self.ident_list(&Tok::Comma)?,
            }
        } else {
            TheoremSource::Statement
        };
        Ok(TheoremDecl {
            name,
            theory,
            formula,
            source,
            span: start.to(&self.prev_span()),
        })
    }

    fn derivation(&mut self, start: SourceSpan) -> PResult<DerivationDecl> {
        let name = self.ident()?;
        self.expect_kw("in")?;
        let theory = self.ident()?;
        let proves = if self.eat_kw("proves") {
            Some(self.ident()?)
        } else {
            None
        };
        self.expect(&Tok::LBrace)?;
        let mut vars = Vec::new();
        if self.eat_kw("vars") {
            loop {
                let v = self.ident()?;
                self.expect(&Tok::Colon)?;
                let s = self.ident()?;
                self.scope.push(Var::new(v.name.clone(), s.name.clone()));
                vars.push((v, s));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        let mut steps = Vec::new();
        while !self.eat(&Tok::RBrace) {
            steps.push(self.step()?);
        }
        self.scope.clear();
        Ok(DerivationDecl {
            name,
            theory,
            proves,
            vars,
            steps,
            span: start.to(&self.prev_span()),
        })
    }

    fn step(&mut self) -> PResult<StepDecl> {
        let label = self.ident()?;
        self.expect(&Tok::Colon)?;
        let rule_id = self.ident()?;
        let rule: Rule = rule_id
            .name
            .parse()
            .map_err(|e: String| Diagnostic::error(codes::SYNTAX, rule_id.span.clone(), e))?;
        let mut premises = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            premises.push(self.ident()?);
        }
        let param = if self.eat(&Tok::LBrack) {
            let p = self.param(rule)?;
            self.expect(&Tok::RBrack)?;
            Some(p)
        } else {
            None
        };
        let hyps = if self.eat(&Tok::Colon) {
            let mut hs = Vec::new();
            if *self.peek() != Tok::Turnstile {
                hs.push(self.formula()?);
                while self.eat(&Tok::Comma) {
                    hs.push(self.formula()?);
                }
            }
            Some(hs)
        } else {
            None
        };
        self.expect(&Tok::Turnstile)?;
        let conclusion = self.formula()?;
        Ok(StepDecl {
            span: label.span.to(&self.prev_span()),
            label,
            rule,
            premises,
            param,
            hyps,
            conclusion,
        })
    }

    fn param(&mut self, rule: Rule) -> PResult<ParamDecl> {
        use crate::kernel::ParamKind;
        match rule.param_kind() {
            ParamKind::Name => {
                let mut name = self.ident()?.name;
                if self.eat(&Tok::Colon) {
                    name = format!("{name}:{}", self.ident()?.name);
                }
                Ok(ParamDecl::Name(name))
            }
            ParamKind::Motive => {
                let z = self.ident()?;
                self.expect(&Tok::Colon)?;
                let sort = self.ident()?;
                self.expect(&Tok::Dot)?;
                let var = Var::new(z.name, sort.name);
                self.scope.push(var.clone());
                let body = self.formula();
                self.scope.pop();
                Ok(ParamDecl::Motive(var, body?))
            }
            ParamKind::Term | ParamKind::Variable | ParamKind::None => Ok(ParamDecl::Term(self.term()?)),
        }
    }

    fn proofdoc(&mut self, start: SourceSpan) -> PResult<ProofDocDecl> {
        let name = self.ident()?;
        self.expect_kw("in")?;
        let theory = self.ident()?;
        self.expect_kw("shows")?;
        let shows = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut steps = Vec::new();
        let mut checks = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let s = self.span();
            if self.eat_kw("informal") {
                let text = self.string()?;
                let claim = if self.eat_kw("claims") {
                    Some(self.spanned_formula()?)
                } else {
                    None
                };
                let label = self.step_label()?;
                steps.push(DocStepDecl::Informal {
                    text,
                    claim,
                    label,
                    span: s.to(&self.prev_span()),
                });
            } else if self.eat_kw("formal") {
                let derivation = self.ident()?;
                let label = self.step_label()?;
                steps.push(DocStepDecl::Formal {
                    derivation,
                    label,
                    span: s.to(&self.prev_span()),
                });
            } else if self.eat_kw("crosscheck") {
                while let Tok::Ident(_) = self.peek() {
                    checks.push(self.ident()?);
                }
            } else {
                return self.expected("`informal`, `formal` or `crosscheck`");
            }
        }
        Ok(ProofDocDecl {
            name,
            theory,
            shows,
            steps,
            checks,
            span: start.to(&self.prev_span()),
        })
    }

    fn step_label(&mut self) -> PResult<Option<Ident>> {
        if self.eat_kw("as") {
            Ok(Some(self.ident()?))
        } else {
            Ok(None)
        }
    }

    fn statement_ref(&mut self) -> PResult<StatementRef> {
        if let (Tok::Ident(_), Tok::Ident(kw)) = (self.peek(), self.peek_at(1)) {
            if kw == "in" {
                return Ok(StatementRef::Name(self.ident()?));
            }
        }
        Ok(StatementRef::Formula(self.spanned_formula()?))
    }

    fn crosscheck(&mut self, start: SourceSpan) -> PResult<CrossCheckDecl> {
        let name = self.ident()?;
        self.expect(&Tok::Colon)?;
        let kind = self.ident()?;
        let body = match kind.name.as_str() {
            "semantic" => {
                self.expect(&Tok::LParen)?;
                let a1 = self.statement_ref()?;
                self.expect_kw("in")?;
                let t1 = self.ident()?;
                self.expect(&Tok::Comma)?;
                let a2 = self.statement_ref()?;
                self.expect_kw("in")?;
                let t2 = self.ident()?;
                self.expect(&Tok::Comma)?;
                self.expect_kw("via")?;
                let via = self.ident_list(&Tok::Comma)?;
                self.expect(&Tok::RParen)?;
                let witness = if self.eat_kw("witness") {
                    Some(self.ident()?)
                } else {
                    None
                };
                CheckBody::Semantic {
                    a1,
                    t1,
                    a2,
                    t2,
                    via,
                    witness,
                }
            }
            "structural" => {
                self.expect(&Tok::LParen)?;
                let d1 = self.ident()?;
                self.expect_kw("in")?;
                let t1 = self.ident()?;
                self.expect(&Tok::Comma)?;
                let d2 = self.ident()?;
                self.expect_kw("in")?;
                let t2 = self.ident()?;
                self.expect(&Tok::RParen)?;
                let mut with = Vec::new();
                if self.eat_kw("with") {
                    self.expect(&Tok::LBrace)?;
                    if !self.eat(&Tok::RBrace) {
                        loop {
                            let a = self.ident()?;
                            self.expect(&Tok::Arrow)?;
                            with.push((a, self.ident()?));
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        self.expect(&Tok::RBrace)?;
                    }
                }
                CheckBody::Structural { d1, t1, d2, t2, with }
            }
            other => {
                return Err(Diagnostic::error(
                    codes::SYNTAX,
                    kind.span,
                    format!("expected `semantic` or `structural`, found `{other}`"),
                ))
            }
        };
        Ok(CrossCheckDecl {
            name,
            body,
            span: start.to(&self.prev_span()),
        })
    }

    fn spanned_formula(&mut self) -> PResult<SpannedFormula> {
        let start = self.span();
        let formula = self.formula()?;
        Ok(SpannedFormula {
            formula,
            span: start.to(&self.prev_span()),
        })
    }

    fn formula(&mut self) -> PResult<Formula> {
        self.iff()
    }

    fn iff(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if self.eat(&Tok::Iff) {
            Ok(Formula::Binary(Connective::Iff, Box::new(lhs), Box::new(self.iff()?)))
        } else {
            Ok(lhs)
        }
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::implies(lhs, self.implication()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quantified(),
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(_) => self.atom(),
            _ => self.expected("a formula"),
        }
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let q = if self.eat(&Tok::Forall) {
            Quantifier::Forall
        } else {
            self.expect(&Tok::Exists)?;
            Quantifier::Exists
        };
        let mark = self.scope.len();
        let mut binders = Vec::new();
        let result = (|| {
            loop {
                let v = self.ident()?;
                self.expect(&Tok::Colon)?;
                let s = self.ident()?;
                let var = Var::new(v.name, s.name);
                self.scope.push(var.clone());
                binders.push(var);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::Dot)?;
            self.formula()
        })();
        self.scope.truncate(mark);
        let body = result?;
        Ok(binders
            .into_iter()
            .rev()
            .fold(body, |acc, v| Formula::Quant(q, v, Box::new(acc))))
    }

    fn atom(&mut self) -> PResult<Formula> {
        let start = self.span();
        let lhs = self.term()?;
        if self.eat(&Tok::Eq) {
            return Ok(Formula::eq(lhs, self.term()?));
        }
        match lhs {
            Term::App(name, args) => Ok(Formula::Pred(name, args)),
            Term::Var(v) => Err(Diagnostic::error(
                codes::SYNTAX,
                start,
                format!("variable `{}` is not a formula; expected `=`", v.name),
            )),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let id = self.ident()?;
        if self.eat(&Tok::LParen) {
            let mut args = Vec::new();
            if !self.eat(&Tok::RParen) {
                loop {
                    args.push(self.term()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen)?;
            }
            return Ok(Term::App(id.name, args));
        }
        Ok(match self.scope.iter().rev().find(|v| v.name == id.name) {
            Some(v) => Term::Var(v.clone()),
            None => Term::App(id.name, Vec::new()),
        })
    }
}

/// Parses one source file. Syntax errors are reported and parsing resumes at
/// the next declaration.
pub fn parse_file(file: &str, src: &str) -> (Ast, Vec<Diagnostic>) {
    let file: Arc<str> = Arc::from(file);
    let (toks, mut diags) = lex(&file, src);
    let mut p = Parser {
        toks,
        idx: 0,
        scope: Vec::new(),
    };
    let ast = p.file(&mut diags);
    (ast, diags)
}

/// Parses several sources into one declaration list, in order.
pub fn parse<P: AsRef<str>, S: AsRef<str>>(files: &[(P, S)]) -> (Ast, Vec<Diagnostic>) {
    let mut ast = Ast::default();
    let mut diags = Vec::new();
    for (path, src) in files {
        let (a, d) = parse_file(path.as_ref(), src.as_ref());
        ast.decls.extend(a.decls);
        diags.extend(d);
    }
    (ast, diags)
}

/// Parses a formula. `vars` are the free variables in scope.
pub fn parse_formula(src: &str, vars: &[Var]) -> Result<Formula, Diagnostic> {
    let file: Arc<str> = Arc::from("<formula>");
    let (toks, diags) = lex(&file, src);
    if let Some(d) = diags.into_iter().next() {
        return Err(d);
    }
    let mut p = Parser {
        toks,
        idx: 0,
        scope: vars.to_vec(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.expected("end of input");
    }
    Ok(f)
}

pub fn parse_term(src: &str, vars: &[Var]) -> Result<Term, Diagnostic> {
    let file: Arc<str> = Arc::from("<term>");
    let (toks, diags) = lex(&file, src);
    if let Some(d) = diags.into_iter().next() {
        return Err(d);
    }
    let mut p = Parser {
        toks,
        idx: 0,
        scope: vars.to_vec(),
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.expected("end of input");
    }
    Ok(t)
}
