//! The theory graph: theories as nodes, morphisms as directed edges (parallel
//! edges allowed), with reachability, transport, instances and realm
//! candidates.
//!
//! Queries borrow the graph immutably. Mutations go through `&mut self`, so a
//! clone taken before a mutation is an unchanged snapshot.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::kernel::{alpha_eq, DerivationRef, Formula};
use crate::morphism::{compose, Morphism, MorphismError, VerificationStatus};
use crate::theory::{Provenance, Theory, TheoryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("`{0}` is already defined")]
    DuplicateId(String),
    #[error("morphism `{morphism}` refers to missing theory `{theory}`")]
    DanglingEndpoint { morphism: String, theory: String },
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),
    #[error("theory `{theory}` has no theorem `{theorem}`")]
    UnknownTheorem { theory: String, theorem: String },
    #[error("path mismatch: {0}")]
    PathMismatch(String),
    #[error("path {path} is {status}")]
    UnverifiedPath { path: String, status: VerificationStatus },
    #[error("update of `{0}` would drop or alter existing content")]
    NotAnExtension(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredDerivation {
    pub theory: String,
    pub derivation: DerivationRef,
}

/// A nonempty chain of adjacent morphisms with its cached composite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPath {
    edges: Vec<String>,
    composite: Morphism,
}

impl MorphismPath {
    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn composite(&self) -> &Morphism {
        &self.composite
    }

    pub fn source(&self) -> &str {
        &self.composite.source
    }

    pub fn target(&self) -> &str {
        &self.composite.target
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl fmt::Display for MorphismPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.edges.join(", "))
    }
}

#[derive(Clone, Debug, Default)]
pub struct TransportOptions {
    /// Permit a path whose composite is only partially verified; the
    /// resulting provenance is flagged.
    pub allow_partial: bool,
    /// Name for the new theorem; defaults to `<theorem>_<edge>_<edge>...`.
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransportOutcome {
    Added { name: String, formula: Formula },
    /// The target already holds an alpha-equal theorem.
    Duplicate { existing: String, formula: Formula },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transported {
    pub target: Theory,
    pub outcome: TransportOutcome,
    pub partial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RealmCandidate {
    pub first: String,
    pub second: String,
    /// `first -> second`.
    pub forward: String,
    /// `second -> first`.
    pub backward: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoryGraph {
    theories: IndexMap<String, Theory>,
    morphisms: IndexMap<String, Morphism>,
    derivations: IndexMap<String, StoredDerivation>,
}

impl TheoryGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_theory(&mut self, t: Theory) -> Result<(), GraphError> {
        if self.theories.contains_key(&t.id) {
            return Err(GraphError::DuplicateId(t.id));
        }
        self.check_provenance_refs(&t)?;
        self.theories.insert(t.id.clone(), t);
        Ok(())
    }

    pub fn add_morphism(&mut self, m: Morphism) -> Result<(), GraphError> {
        if self.morphisms.contains_key(&m.id) {
            return Err(GraphError::DuplicateId(m.id));
        }
        for end in [&m.source, &m.target] {
            if !self.theories.contains_key(end) {
                return Err(GraphError::DanglingEndpoint {
                    morphism: m.id.clone(),
                    theory: end.clone(),
                });
            }
        }
        self.morphisms.insert(m.id.clone(), m);
        Ok(())
    }

    pub fn add_derivation(&mut self, theory: &str, d: DerivationRef) -> Result<(), GraphError> {
        if self.derivations.contains_key(&d.name) {
            return Err(GraphError::DuplicateId(d.name.clone()));
        }
        if !self.theories.contains_key(theory) {
            return Err(GraphError::UnknownTheory(theory.to_string()));
        }
        self.derivations.insert(
            d.name.clone(),
            StoredDerivation {
                theory: theory.to_string(),
                derivation: d,
            },
        );
        Ok(())
    }

    /// Replaces a theory by an append-only extension of itself.
    pub fn update_theory(&mut self, t: Theory) -> Result<(), GraphError> {
        let current = self
            .theories
            .get(&t.id)
            .ok_or_else(|| GraphError::UnknownTheory(t.id.clone()))?;
        if !current.is_prefix_of(&t) {
            return Err(GraphError::NotAnExtension(t.id));
        }
        self.check_provenance_refs(&t)?;
        self.theories.insert(t.id.clone(), t);
        Ok(())
    }

    /// Replaces a morphism by one with the same endpoints and assignment.
    pub fn update_morphism(&mut self, m: Morphism) -> Result<(), GraphError> {
        let current = self
            .morphisms
            .get(&m.id)
            .ok_or_else(|| GraphError::UnknownMorphism(m.id.clone()))?;
        if current.source != m.source || current.target != m.target || current.assignment != m.assignment {
            return Err(GraphError::NotAnExtension(m.id));
        }
        self.morphisms.insert(m.id.clone(), m);
        Ok(())
    }

    fn check_provenance_refs(&self, t: &Theory) -> Result<(), GraphError> {
        for thm in t.theorems.values() {
            if let Provenance::Transported { source_theory, path, .. } = &thm.provenance {
                if !self.theories.contains_key(source_theory) {
                    return Err(GraphError::UnknownTheory(source_theory.clone()));
                }
                if let Some(missing) = path.iter().find(|e| !self.morphisms.contains_key(*e)) {
                    return Err(GraphError::UnknownMorphism(missing.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn theory(&self, id: &str) -> Result<&Theory, GraphError> {
        self.theories
            .get(id)
            .ok_or_else(|| GraphError::UnknownTheory(id.to_string()))
    }

    pub fn morphism(&self, id: &str) -> Result<&Morphism, GraphError> {
        self.morphisms
            .get(id)
            .ok_or_else(|| GraphError::UnknownMorphism(id.to_string()))
    }

    pub fn derivation(&self, name: &str) -> Result<&StoredDerivation, GraphError> {
        self.derivations
            .get(name)
            .ok_or_else(|| GraphError::UnknownDerivation(name.to_string()))
    }

    pub fn theories(&self) -> impl Iterator<Item = &Theory> {
        self.theories.values()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &Morphism> {
        self.morphisms.values()
    }

    pub fn derivations(&self) -> impl Iterator<Item = (&String, &StoredDerivation)> {
        self.derivations.iter()
    }

    pub fn has_theory(&self, id: &str) -> bool {
        self.theories.contains_key(id)
    }

    pub fn has_morphism(&self, id: &str) -> bool {
        self.morphisms.contains_key(id)
    }

    /// Resolves adjacent edges and composes them left to right.
    pub fn path<S: AsRef<str>>(&self, edges: &[S]) -> Result<MorphismPath, GraphError> {
        let (first, rest) = edges
            .split_first()
            .ok_or_else(|| GraphError::PathMismatch("empty path".into()))?;
        let mut composite = self.morphism(first.as_ref())?.clone();
        for e in rest {
            let next = self.morphism(e.as_ref())?;
            if next.source != composite.target {
                return Err(GraphError::PathMismatch(format!(
                    "`{}` starts at `{}`, expected `{}`",
                    next.id, next.source, composite.target
                )));
            }
            composite = compose(&composite, next)?;
        }
        Ok(MorphismPath {
            edges: edges.iter().map(|e| e.as_ref().to_string()).collect(),
            composite,
        })
    }

    /// All edge-simple paths of length at most `max_depth` ending at `target`,
    /// ordered by length and then by edge ids.
    pub fn backward_reach(&self, target: &str, max_depth: usize) -> Result<Vec<(String, MorphismPath)>, GraphError> {
        self.theory(target)?;
        let mut found: Vec<Vec<&str>> = Vec::new();
        let mut frontier: Vec<Vec<&str>> = vec![Vec::new()];
        for _ in 0..max_depth {
            let mut next = Vec::new();
            for path in &frontier {
                let head = match path.first() {
                    Some(e) => self.morphisms[*e].source.as_str(),
                    None => target,
                };
                for m in self.morphisms.values() {
                    if m.target == head && !path.contains(&m.id.as_str()) {
                        let mut longer = Vec::with_capacity(path.len() + 1);
                        longer.push(m.id.as_str());
                        longer.extend_from_slice(path);
                        next.push(longer);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            found.extend(next.iter().cloned());
            frontier = next;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
            .into_iter()
            .map(|edges| {
                let path = self.path(&edges)?;
                Ok((path.source().to_string(), path))
            })
            .collect()
    }

    /// Targets of the morphisms leaving `t`, one entry per edge.
    pub fn instances_of(&self, t: &str) -> Result<Vec<String>, GraphError> {
        self.theory(t)?;
        Ok(self
            .morphisms
            .values()
            .filter(|m| m.source == t)
            .map(|m| m.target.clone())
            .collect())
    }

    /// Theory pairs joined by a verified morphism in each direction, once per
    /// morphism pair, with the pair ordered by theory id.
    pub fn realm_candidates(&self) -> Vec<RealmCandidate> {
        let verified: Vec<&Morphism> = self
            .morphisms
            .values()
            .filter(|m| m.source != m.target && m.verify().is_verified())
            .collect();
        let mut out = Vec::new();
        for f in &verified {
            if f.source > f.target {
                continue;
            }
            for b in &verified {
                if b.source == f.target && b.target == f.source {
                    out.push(RealmCandidate {
                        first: f.source.clone(),
                        second: f.target.clone(),
                        forward: f.id.clone(),
                        backward: b.id.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    /// Computes the image of `src_theory.theorem` along `path` and returns the
    /// target theory extended with it. The graph itself is not modified.
    pub fn transport(
        &self,
        src_theory: &str,
        theorem: &str,
        path: &MorphismPath,
        opts: &TransportOptions,
    ) -> Result<Transported, GraphError> {
        let src = self.theory(src_theory)?;
        let thm = src.theorems.get(theorem).ok_or_else(|| GraphError::UnknownTheorem {
            theory: src_theory.to_string(),
            theorem: theorem.to_string(),
        })?;
        if path.source() != src_theory {
            return Err(GraphError::PathMismatch(format!(
                "path {path} starts at `{}`, not `{src_theory}`",
                path.source()
            )));
        }
        let status = path.composite().verify();
        let partial = !status.is_verified();
        if partial && !opts.allow_partial {
            return Err(GraphError::UnverifiedPath {
                path: path.to_string(),
                status,
            });
        }
        let formula = path.composite().translate_formula(&thm.formula)?;
        let target = self.theory(path.target())?;
        if let Some(existing) = target.find_theorem(&formula) {
            return Ok(Transported {
                target: target.clone(),
                outcome: TransportOutcome::Duplicate {
                    existing: existing.to_string(),
                    formula,
                },
                partial,
            });
        }
        let name = opts
            .name
            .clone()
            .unwrap_or_else(|| format!("{theorem}_{}", path.edges().join("_")));
        let provenance = Provenance::Transported {
            source_theory: src_theory.to_string(),
            source_theorem: theorem.to_string(),
            path: path.edges().to_vec(),
            partial,
        };
        let updated = target.add_theorem(name.clone(), formula.clone(), provenance)?;
        Ok(Transported {
            target: updated,
            outcome: TransportOutcome::Added { name, formula },
            partial,
        })
    }

    /// `transport` followed by storing the updated target.
    pub fn apply_transport(
        &mut self,
        src_theory: &str,
        theorem: &str,
        path: &MorphismPath,
        opts: &TransportOptions,
    ) -> Result<TransportOutcome, GraphError> {
        let t = self.transport(src_theory, theorem, path, opts)?;
        if matches!(t.outcome, TransportOutcome::Added { .. }) {
            self.update_theory(t.target)?;
        }
        Ok(t.outcome)
    }

    /// Re-translates the source theorem of a transported theorem along its
    /// recorded path and compares with the stored formula.
    pub fn recheck_transported(&self, theory: &str, theorem: &str) -> Result<bool, GraphError> {
        let t = self.theory(theory)?;
        let thm = t.theorems.get(theorem).ok_or_else(|| GraphError::UnknownTheorem {
            theory: theory.to_string(),
            theorem: theorem.to_string(),
        })?;
        let Provenance::Transported {
            source_theory,
            source_theorem,
            path,
            ..
        } = &thm.provenance
        else {
            return Ok(false);
        };
        let src = self.theory(source_theory)?;
        let Some(original) = src.statement(source_theorem) else {
            return Ok(false);
        };
        let path = self.path(path)?;
        Ok(path.target() == theory && alpha_eq(&path.composite().translate_formula(original)?, &thm.formula))
    }
}
