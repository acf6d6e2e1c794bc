use std::fmt;
use std::sync::Arc;

use super::diag::{codes, Diagnostic, Pos, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Dot,
    Eq,
    Not,
    And,
    Or,
    Arrow,
    Iff,
    Turnstile,
    Forall,
    Exists,
    True,
    False,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Eof => f.write_str("end of file"),
            other => write!(f, "`{}`", other.spelling()),
        }
    }
}

impl Tok {
    fn spelling(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Eq => "=",
            Tok::Not => "~",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::Turnstile => "|-",
            Tok::Forall => "forall",
            Tok::Exists => "exists",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Ident(_) | Tok::Str(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes `src`. Unknown characters are reported and skipped.
pub fn lex(file: &Arc<str>, src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        pos: Pos::new(1, 1),
    };
    let mut toks = Vec::new();
    let mut diags = Vec::new();
    let span = |s: Pos, e: Pos| SourceSpan::new(file.clone(), s, e);
    while let Some(c) = cur.peek() {
        let start = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek2() == Some('/') {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let tok = if is_ident_start(c) {
            let mut s = String::new();
            while let Some(c) = cur.peek() {
                if is_ident_char(c) || (c == '-' && cur.peek2().is_some_and(|d| d.is_ascii_alphabetic())) {
                    s.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            match s.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(s),
            }
        } else if c == '"' {
            cur.bump();
            let mut s = String::new();
            let mut closed = false;
            while let Some(c) = cur.bump() {
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match cur.bump() {
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some(other) => s.push(other),
                        None => break,
                    },
                    '\n' => break,
                    other => s.push(other),
                }
            }
            if !closed {
                diags.push(Diagnostic::error(
                    codes::SYNTAX,
                    span(start, cur.pos),
                    "unterminated string literal",
                ));
            }
            Tok::Str(s)
        } else {
            cur.bump();
            let two = |cur: &mut Cursor<'_>, next: char, yes: Tok, no: Option<Tok>| {
                if cur.peek() == Some(next) {
                    cur.bump();
                    Some(yes)
                } else {
                    no
                }
            };
            let t = match c {
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBrack),
                ']' => Some(Tok::RBrack),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                '.' => Some(Tok::Dot),
                '=' => Some(Tok::Eq),
                '~' | '¬' => Some(Tok::Not),
                '∧' => Some(Tok::And),
                '∨' => Some(Tok::Or),
                '→' => Some(Tok::Arrow),
                '↔' => Some(Tok::Iff),
                '⊢' => Some(Tok::Turnstile),
                '∀' => Some(Tok::Forall),
                '∃' => Some(Tok::Exists),
                '⊤' => Some(Tok::True),
                '⊥' => Some(Tok::False),
                '/' => two(&mut cur, '\\', Tok::And, None),
                '\\' => two(&mut cur, '/', Tok::Or, None),
                '-' => two(&mut cur, '>', Tok::Arrow, None),
                '|' => two(&mut cur, '-', Tok::Turnstile, None),
                '<' => {
                    if cur.peek() == Some('-') && cur.peek2() == Some('>') {
                        cur.bump();
                        cur.bump();
                        Some(Tok::Iff)
                    } else {
                        None
                    }
                }
                _ => None,
            };
            match t {
                Some(t) => t,
                None => {
                    diags.push(Diagnostic::error(
                        codes::SYNTAX,
                        span(start, cur.pos),
                        format!("unexpected character {c:?}"),
                    ));
                    continue;
                }
            }
        };
        toks.push(Token {
            tok,
            span: span(start, cur.pos),
        });
    }
    let end = cur.pos;
    let eof_end = Pos::new(end.line, end.col + 1);
    toks.push(Token {
        tok: Tok::Eof,
        span: span(end, eof_end),
    });
    (toks, diags)
}
