//! Axiomatic theories, theory morphisms and theory graphs over a small
//! trusted first-order kernel, plus cross checks, flexiformal proof documents
//! and the `.tg` declaration language.

#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod kernel;
pub mod theory;
pub mod morphism;
pub mod graph;
pub mod crosscheck;
pub mod proofdoc;
pub mod frontend;
