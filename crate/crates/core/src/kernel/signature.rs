use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuncDecl {
    pub args: Vec<String>,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("symbol `{0}` is already declared")]
    DuplicateSymbol(String),
    #[error("sort `{0}` is already declared")]
    DuplicateSort(String),
}

/// Sorts, function symbols and predicate symbols of one theory language.
///
/// Construction goes through the `add_*` methods, which keep the arity sorts
/// declared and the symbol names unique across functions and predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeSet<String>,
    functions: BTreeMap<String, FuncDecl>,
    predicates: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Sort,
    Function,
    Predicate,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, sort: impl Into<String>) -> Result<(), SignatureError> {
        let sort = sort.into();
        if self.sorts.contains(&sort) {
            return Err(SignatureError::DuplicateSort(sort));
        }
        self.sorts.insert(sort);
        Ok(())
    }

    fn check_sorts<'a>(&self, sorts: impl IntoIterator<Item = &'a String>) -> Result<(), SignatureError> {
        for s in sorts {
            if !self.sorts.contains(s) {
                return Err(SignatureError::UnknownSort(s.clone()));
            }
        }
        Ok(())
    }

    fn check_fresh_symbol(&self, name: &str) -> Result<(), SignatureError> {
        if self.functions.contains_key(name) || self.predicates.contains_key(name) {
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn add_function(
        &mut self,
        name: impl Into<String>,
        args: Vec<String>,
        result: impl Into<String>,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        let result = result.into();
        self.check_fresh_symbol(&name)?;
        self.check_sorts(args.iter().chain(std::iter::once(&result)))?;
        self.functions.insert(name, FuncDecl { args, result });
        Ok(())
    }

    pub fn add_predicate(&mut self, name: impl Into<String>, args: Vec<String>) -> Result<(), SignatureError> {
        let name = name.into();
        self.check_fresh_symbol(&name)?;
        self.check_sorts(args.iter())?;
        self.predicates.insert(name, args);
        Ok(())
    }

    /// Adds everything from `other`; identical redeclarations are accepted.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for s in &other.sorts {
            self.sorts.insert(s.clone());
        }
        for (name, decl) in &other.functions {
            match self.functions.get(name) {
                Some(existing) if existing == decl => {}
                Some(_) => return Err(SignatureError::DuplicateSymbol(name.clone())),
                None => self.add_function(name.clone(), decl.args.clone(), decl.result.clone())?,
            }
        }
        for (name, args) in &other.predicates {
            match self.predicates.get(name) {
                Some(existing) if existing == args => {}
                Some(_) => return Err(SignatureError::DuplicateSymbol(name.clone())),
                None => self.add_predicate(name.clone(), args.clone())?,
            }
        }
        Ok(())
    }

    pub fn has_sort(&self, sort: &str) -> bool {
        self.sorts.contains(sort)
    }

    pub fn function(&self, name: &str) -> Option<&FuncDecl> {
        self.functions.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&[String]> {
        self.predicates.get(name).map(Vec::as_slice)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &String> {
        self.sorts.iter()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&String, &FuncDecl)> {
        self.functions.iter()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&String, &Vec<String>)> {
        self.predicates.iter()
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.functions.contains_key(name) {
            Some(SymbolKind::Function)
        } else if self.predicates.contains_key(name) {
            Some(SymbolKind::Predicate)
        } else if self.sorts.contains(name) {
            Some(SymbolKind::Sort)
        } else {
            None
        }
    }

    /// True iff every entry of `self` appears in `other` with the same arity.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.sorts.iter().all(|s| other.sorts.contains(s))
            && self
                .functions
                .iter()
                .all(|(n, d)| other.functions.get(n) == Some(d))
            && self
                .predicates
                .iter()
                .all(|(n, a)| other.predicates.get(n) == Some(a))
    }

    pub fn is_empty(&self) -> bool {
        self.sorts.is_empty() && self.functions.is_empty() && self.predicates.is_empty()
    }
}
