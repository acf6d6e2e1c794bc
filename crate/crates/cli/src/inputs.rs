use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tgc_core::frontend::SourceFile;
use walkdir::WalkDir;

/// Expands directories into their `.tg` files, sorted by path.
pub fn collect(paths: &[PathBuf]) -> Result<Vec<PathBuf>, String> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found = Vec::new();
            for entry in WalkDir::new(p).follow_links(true) {
                let entry = entry.map_err(|e| format!("cannot read `{}`: {e}", p.display()))?;
                if entry.file_type().is_file() && is_source(entry.path()) {
                    found.push(entry.into_path());
                }
            }
            found.sort();
            out.extend(found);
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            return Err(format!("no such file or directory: `{}`", p.display()));
        }
    }
    Ok(out)
}

fn is_source(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "tg")
}

/// SHA-256 over the loaded texts in load order, each prefixed by its length.
pub fn digest(files: &[SourceFile]) -> String {
    let mut h = Sha256::new();
    for f in files {
        h.update((f.text.len() as u64).to_le_bytes());
        h.update(f.text.as_bytes());
    }
    hex::encode(h.finalize())
}
