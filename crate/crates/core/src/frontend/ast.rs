use crate::kernel::{Formula, Rule, Term, Var};

use super::diag::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannedFormula {
    pub formula: Formula,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ast {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Theory(TheoryDecl),
    Morphism(MorphismDecl),
    Theorem(TheoremDecl),
    Derivation(DerivationDecl),
    ProofDoc(ProofDocDecl),
    CrossCheck(CrossCheckDecl),
    Include(IncludeDecl),
}

impl Decl {
    pub fn name(&self) -> &Ident {
        match self {
            Decl::Theory(d) => &d.name,
            Decl::Morphism(d) => &d.name,
            Decl::Theorem(d) => &d.name,
            Decl::Derivation(d) => &d.name,
            Decl::ProofDoc(d) => &d.name,
            Decl::CrossCheck(d) => &d.name,
            Decl::Include(d) => &d.path,
        }
    }

    pub fn span(&self) -> &SourceSpan {
        match self {
            Decl::Theory(d) => &d.span,
            Decl::Morphism(d) => &d.span,
            Decl::Theorem(d) => &d.span,
            Decl::Derivation(d) => &d.span,
            Decl::ProofDoc(d) => &d.span,
            Decl::CrossCheck(d) => &d.span,
            Decl::Include(d) => &d.span,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Decl::Theory(_) => "theory",
            Decl::Morphism(_) => "morphism",
            Decl::Theorem(_) => "theorem",
            Decl::Derivation(_) => "derivation",
            Decl::ProofDoc(_) => "proofdoc",
            Decl::CrossCheck(_) => "crosscheck",
            Decl::Include(_) => "include",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryDecl {
    pub name: Ident,
    pub extends: Vec<Ident>,
    pub items: Vec<TheoryItem>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryItem {
    Sort(Ident),
    Func { name: Ident, args: Vec<Ident>, result: Ident },
    Pred { name: Ident, args: Vec<Ident> },
    Axiom { name: Ident, formula: SpannedFormula },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: Ident,
    pub source: Ident,
    pub target: Ident,
    /// Open obligations are accepted without a warning.
    pub assumed: bool,
    pub items: Vec<MorphismItem>,
    pub span: SourceSpan,
}

/// Parameters and variables in images carry an empty sort until elaboration
/// fills in the target sorts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismItem {
    /// Maps every source symbol to the same-named target symbol.
    Identity(SourceSpan),
    Sort { from: Ident, to: Ident },
    Func { name: Ident, params: Vec<Ident>, body: Term, span: SourceSpan },
    Pred { name: Ident, params: Vec<Ident>, body: SpannedFormula },
    Obligation { axiom: Ident, by: ObligationBy },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObligationBy {
    Axiom(Ident),
    Proof(Ident),
    Assumed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoremSource {
    /// A statement to be proved by a derivation or a proof document.
    Statement,
    Assumed(String),
    Transported { theory: Ident, theorem: Ident, via: Vec<Ident> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremDecl {
    pub name: Ident,
    pub theory: Ident,
    pub formula: SpannedFormula,
    pub source: TheoremSource,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamDecl {
    Name(String),
    Term(Term),
    Motive(Var, Formula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDecl {
    pub label: Ident,
    pub rule: Rule,
    pub premises: Vec<Ident>,
    pub param: Option<ParamDecl>,
    pub hyps: Option<Vec<Formula>>,
    pub conclusion: Formula,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationDecl {
    pub name: Ident,
    pub theory: Ident,
    pub proves: Option<Ident>,
    pub vars: Vec<(Ident, Ident)>,
    pub steps: Vec<StepDecl>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocStepDecl {
    Informal {
        text: String,
        claim: Option<SpannedFormula>,
        label: Option<Ident>,
        span: SourceSpan,
    },
    Formal {
        derivation: Ident,
        label: Option<Ident>,
        span: SourceSpan,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofDocDecl {
    pub name: Ident,
    pub theory: Ident,
    pub shows: Ident,
    pub steps: Vec<DocStepDecl>,
    pub checks: Vec<Ident>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementRef {
    Name(Ident),
    Formula(SpannedFormula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckBody {
    Semantic {
        a1: StatementRef,
        t1: Ident,
        a2: StatementRef,
        t2: Ident,
        via: Vec<Ident>,
        witness: Option<Ident>,
    },
    Structural {
        d1: Ident,
        t1: Ident,
        d2: Ident,
        t2: Ident,
        with: Vec<(Ident, Ident)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckDecl {
    pub name: Ident,
    pub body: CheckBody,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncludeDecl {
    pub path: Ident,
    pub span: SourceSpan,
}

impl AsRef<str> for Ident {
    fn as_ref(&self) -> &str {
        &self.name
    }
}
