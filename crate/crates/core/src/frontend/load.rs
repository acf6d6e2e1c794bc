use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::ast::{Ast, Decl};
use super::diag::{codes, Diagnostic};
use super::parser::parse_file;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
}

/// The files of one run and their merged declarations. Included files are
/// spliced in after the directive that includes them; each file is read once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Loaded {
    pub files: Vec<SourceFile>,
    pub ast: Ast,
    pub diags: Vec<Diagnostic>,
}

struct Loader {
    seen: BTreeSet<PathBuf>,
    out: Loaded,
}

impl Loader {
    fn visit(&mut self, path: &Path, text: String) {
        let display = path.display().to_string();
        let (ast, diags) = parse_file(&display, &text);
        self.out.files.push(SourceFile { path: display, text });
        self.out.diags.extend(diags);
        for d in ast.decls {
            let include = match &d {
                Decl::Include(inc) => Some(inc.clone()),
                _ => None,
            };
            self.out.ast.decls.push(d);
            let Some(inc) = include else { continue };
            let target = path.parent().unwrap_or(Path::new("")).join(&inc.path.name);
            let key = fs::canonicalize(&target).unwrap_or_else(|_| target.clone());
            if self.seen.contains(&key) {
                continue;
            }
            match fs::read_to_string(&target) {
                Ok(text) => {
                    self.seen.insert(key);
                    self.visit(&target, text);
                }
                Err(e) => self.out.diags.push(Diagnostic::error(
                    codes::INCLUDE,
                    inc.path.span.clone(),
                    format!("cannot read `{}`: {e}", target.display()),
                )),
            }
        }
    }
}

/// Reads and parses `paths` in order, following include directives. Failing
/// to read an entry path is an I/O error; a missing include is a diagnostic.
pub fn load_files<P: AsRef<Path>>(paths: &[P]) -> io::Result<Loaded> {
    let mut loader = Loader {
        seen: BTreeSet::new(),
        out: Loaded::default(),
    };
    for p in paths {
        let p = p.as_ref();
        let key = fs::canonicalize(p)?;
        if loader.seen.contains(&key) {
            continue;
        }
        let text = fs::read_to_string(p)?;
        loader.seen.insert(key);
        loader.visit(p, text);
    }
    Ok(loader.out)
}
