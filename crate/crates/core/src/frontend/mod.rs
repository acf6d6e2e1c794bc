//! The `.tg` declaration language: lexing, parsing with recovery, canonical
//! printing and elaboration into a theory graph.

mod ast;
mod diag;
mod elaborate;
mod lexer;
mod load;
mod parser;
mod printer;

pub use ast::*;
pub use diag::{codes, has_errors, Diagnostic, Pos, Severity, SourceSpan};
pub use elaborate::{elaborate, Library};
pub use lexer::{lex, Tok, Token};
pub use load::{load_files, Loaded, SourceFile};
pub use parser::{parse, parse_file, parse_formula, parse_term};
pub use printer::{pretty_print, print_decl};

/// Parses and elaborates a single source text.
pub fn elaborate_source(file: &str, src: &str) -> (Library, Vec<Diagnostic>) {
    let (ast, mut diags) = parse_file(file, src);
    let (lib, more) = elaborate(&ast);
    diags.extend(more);
    (lib, diags)
}
