use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub fn new(line: u32, col: u32) -> Self {
        Pos { line, col }
    }
}

/// 1-based; `start` inclusive, `end` exclusive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start: Pos,
    pub end: Pos,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, start: Pos, end: Pos) -> Self {
        SourceSpan { file, start, end }
    }

    /// Smallest span covering both; `other` must be in the same file.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.file == other.file && self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start.line, self.start.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

pub mod codes {
    pub const SYNTAX: &str = "E-SYNTAX";
    pub const INCLUDE: &str = "E-INCLUDE";
    pub const UNKNOWN_SORT: &str = "E-UNKNOWN-SORT";
    pub const UNKNOWN_REF: &str = "E-UNKNOWN-REF";
    pub const DUP_NAME: &str = "E-DUP-NAME";
    pub const ILL_FORMED: &str = "E-ILL-FORMED";
    pub const OPEN_FORMULA: &str = "E-OPEN-FORMULA";
    pub const THEORY_CYCLE: &str = "E-THEORY-CYCLE";
    pub const UNMAPPED_SYMBOL: &str = "E-UNMAPPED-SYMBOL";
    pub const ILL_TYPED_MAP: &str = "E-ILL-TYPED-MAP";
    pub const OBLIGATION_FAIL: &str = "E-OBLIGATION-FAIL";
    pub const DERIVATION: &str = "E-DERIVATION";
    pub const TRANSPORT: &str = "E-TRANSPORT";
    pub const DOC: &str = "E-DOC";
    pub const PARTIAL_MORPHISM: &str = "W-PARTIAL-MORPHISM";
    pub const PARTIAL_TRANSPORT: &str = "W-PARTIAL-TRANSPORT";
    pub const UNPROVED_THEOREM: &str = "W-UNPROVED-THEOREM";
    pub const FLEXIFORMAL_DOC: &str = "W-FLEXIFORMAL-DOC";
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: SourceSpan,
    pub notes: Vec<String>,
    /// Name of the declaration the diagnostic belongs to, when known.
    pub decl: Option<String>,
}

impl Diagnostic {
    pub fn error(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
            notes: Vec::new(),
            decl: None,
        }
    }

    pub fn warning(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, span, message)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn in_decl(mut self, decl: impl Into<String>) -> Self {
        self.decl = Some(decl.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}[{}]: {}", self.span, self.severity, self.code, self.message)?;
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
