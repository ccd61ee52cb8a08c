//! Core library for managing linguistic field data.
//!
//! The crate covers the whole data path of a field-linguistics project:
//! the shared domain types ([`model`]), revisioned document persistence
//! ([`store`]), interchange formats ([`ingest`]), OntoLex-Lemon and Ligt
//! export ([`linkeddata`]), the count-based auto-glosser ([`glosser`]) and
//! dictionary compilation under a project alphabet ([`dictionary`]).

pub mod dictionary;
pub mod glosser;
pub mod id;
pub mod ingest;
pub mod linkeddata;
pub mod model;
pub mod store;
pub mod validate;

pub use id::Id;
pub use model::{
    Example, Extra, IgtDocument, LexicalEntry, MediaAsset, MediaKind, MediaRef, Morph, MorphType,
    Project, Role, Sense, Translation, User, Utterance, Word,
};
pub use validate::{validate_entry, validate_utterance, Issue, Severity, ValidationReport};
