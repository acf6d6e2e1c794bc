use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;
use tgc_core::frontend::{Diagnostic, Severity};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DiagRecord {
    pub severity: &'static str,
    pub code: &'static str,
    pub message: String,
    pub file: String,
    pub start: Position,
    pub end: Position,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&Diagnostic> for DiagRecord {
    fn from(d: &Diagnostic) -> Self {
        DiagRecord {
            severity: match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            },
            code: d.code,
            message: d.message.clone(),
            file: d.span.file.to_string(),
            start: Position {
                line: d.span.start.line,
                col: d.span.start.col,
            },
            end: Position {
                line: d.span.end.line,
                col: d.span.end.col,
            },
            notes: d.notes.clone(),
        }
    }
}

impl DiagRecord {
    fn line(&self) -> String {
        format!(
            "{}:{}:{}: {}[{}]: {}",
            self.file, self.start.line, self.start.col, self.severity, self.code, self.message
        )
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Item {
    pub kind: &'static str,
    pub id: String,
    pub status: String,
    pub diagnostics: Vec<DiagRecord>,
    pub details: BTreeMap<String, Value>,
}

impl Item {
    pub fn new(kind: &'static str, id: impl Into<String>, status: impl Into<String>) -> Self {
        Item {
            kind,
            id: id.into(),
            status: status.into(),
            diagnostics: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == "error")
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub items: usize,
    pub errors: usize,
    pub warnings: usize,
    pub failures: usize,
    pub pending: usize,
    pub exit_code: u8,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fatal: Option<String>,
    pub items: Vec<Item>,
    pub summary: Summary,
    #[serde(skip)]
    pub exit_code: u8,
}

pub const FAILURE_STATUSES: &[&str] = &["failure", "error", "rejected", "unverified"];

impl Report {
    pub fn new(command: &'static str, inputs: Vec<String>) -> Self {
        Report {
            tool: "tgc",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            input_digest: String::new(),
            fatal: None,
            items: Vec::new(),
            summary: Summary::default(),
            exit_code: 0,
        }
    }

    /// Fills in the summary from the items and fixes the exit code.
    pub fn finish(mut self, exit_code: u8) -> Self {
        let diags = self.items.iter().flat_map(|i| &i.diagnostics);
        let errors = diags.clone().filter(|d| d.severity == "error").count();
        let warnings = diags.filter(|d| d.severity == "warning").count();
        self.summary = Summary {
            items: self.items.len(),
            errors,
            warnings,
            failures: self
                .items
                .iter()
                .filter(|i| FAILURE_STATUSES.contains(&i.status.as_str()))
                .count(),
            pending: self
                .items
                .iter()
                .map(|i| match i.details.get("pending") {
                    Some(Value::Array(a)) => a.len(),
                    _ => usize::from(i.status == "pending"),
                })
                .sum(),
            exit_code,
        };
        self.exit_code = exit_code;
        self
    }

    pub fn fatal(command: &'static str, inputs: Vec<String>, msg: String) -> Self {
        let mut r = Report::new(command, inputs);
        r.fatal = Some(msg);
        r.finish(2)
    }

    pub fn declaration(&self) -> Option<&str> {
        self.items
            .iter()
            .find_map(|i| i.details.get("declaration").and_then(Value::as_str))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(f) = &self.fatal {
            writeln!(out, "fatal: {f}").unwrap();
        }
        for item in &self.items {
            writeln!(out, "{} {}: {}", item.kind, item.id, item.status).unwrap();
            for d in &item.diagnostics {
                writeln!(out, "  {}", d.line()).unwrap();
                for n in &d.notes {
                    writeln!(out, "    note: {n}").unwrap();
                }
            }
            for (k, v) in &item.details {
                if k == "declaration" {
                    continue;
                }
                writeln!(out, "  {k}: {}", plain(v)).unwrap();
            }
        }
        let s = &self.summary;
        writeln!(
            out,
            "summary: {} errors, {} warnings, {} failures, {} pending ({} items, input {})",
            s.errors,
            s.warnings,
            s.failures,
            s.pending,
            s.items,
            short(&self.input_digest)
        )
        .unwrap();
        out
    }
}

fn short(digest: &str) -> &str {
    if digest.is_empty() {
        "-"
    } else {
        &digest[..digest.len().min(12)]
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(plain).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}
