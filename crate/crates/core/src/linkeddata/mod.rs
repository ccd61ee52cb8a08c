//! RDF views of project data.
//!
//! Lexical entries map to OntoLex-Lemon, interlinear texts map to Ligt, and
//! offline linksets add `ontolex:reference` links to external resources.
//! Every IRI the mappers mint is a fragment or path under the context's
//! base IRI, so two exports of the same data produce the same graph.
//! Both serializers are pure functions of the triple set.

mod ligt;
mod linkset;
mod ntriples;
mod ontolex;
mod term;
mod turtle;
pub mod vocab;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::Project;

pub use ligt::{document_iri, igt_to_ligt};
pub use linkset::{link_externals, load_linkset, LinkSet, LinkTarget};
pub use ntriples::{canonical_blank_labels, serialize_ntriples};
pub use ontolex::{entry_iri, entry_to_ontolex};
pub use term::{is_absolute_iri, BlankNode, Iri, Literal, LiteralKind, RdfGraph, Subject, Term, Triple};
pub use turtle::{serialize_turtle, serialize_turtle_with_base};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LinkedDataError {
    #[error("not an absolute IRI: {0:?}")]
    InvalidIri(String),
    #[error("base IRI must be absolute and end with '/': {0:?}")]
    InvalidBaseIri(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("linkset row {row}: expected {expected} columns, found {found}")]
    CsvShape { row: usize, expected: usize, found: usize },
    #[error("linkset row {row}: {message}")]
    CsvValue { row: usize, message: String },
    #[error("linkset row {row}: not an absolute IRI: {iri:?}")]
    InvalidLinkIri { row: usize, iri: String },
}

/// Graph plus non-fatal mapping notes such as unmapped parts of speech.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mapped {
    pub graph: RdfGraph,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingContext {
    base_iri: String,
    project_slug: String,
    lang_tag: String,
    meta_lang: String,
    pos_map: BTreeMap<String, Iri>,
}

impl MappingContext {
    pub fn new(base_iri: &str, project_slug: &str, lang_tag: &str) -> Result<MappingContext, LinkedDataError> {
        if !base_iri.ends_with('/') || !is_absolute_iri(base_iri) || base_iri.contains('#') {
            return Err(LinkedDataError::InvalidBaseIri(base_iri.to_owned()));
        }
        if !crate::model::is_valid_slug(project_slug) {
            return Err(LinkedDataError::InvalidIri(format!("{base_iri}lexicon/{project_slug}/")));
        }
        if !crate::validate::is_language_tag(lang_tag) {
            return Err(LinkedDataError::InvalidLanguageTag(lang_tag.to_owned()));
        }
        let pos_map =
            vocab::DEFAULT_POS_MAP.iter().map(|(k, local)| ((*k).to_owned(), vocab::lexinfo(local))).collect();
        Ok(MappingContext {
            base_iri: base_iri.to_owned(),
            project_slug: project_slug.to_owned(),
            lang_tag: lang_tag.to_ascii_lowercase(),
            meta_lang: crate::model::DEFAULT_METALANGUAGE.to_owned(),
            pos_map,
        })
    }

    /// Slug, language code and metalanguage taken from the project.
    pub fn for_project(base_iri: &str, project: &Project) -> Result<MappingContext, LinkedDataError> {
        MappingContext::new(base_iri, &project.slug, &project.language_code)?.with_meta_lang(&project.metalanguage)
    }

    pub fn with_meta_lang(mut self, tag: &str) -> Result<MappingContext, LinkedDataError> {
        if !crate::validate::is_language_tag(tag) {
            return Err(LinkedDataError::InvalidLanguageTag(tag.to_owned()));
        }
        self.meta_lang = tag.to_ascii_lowercase();
        Ok(self)
    }

    /// Adds or replaces a mapping; the key is lowercased.
    pub fn with_pos(mut self, pos: &str, target: Iri) -> MappingContext {
        self.pos_map.insert(pos.to_lowercase(), target);
        self
    }

    pub fn base_iri(&self) -> &str {
        &self.base_iri
    }

    pub fn project_slug(&self) -> &str {
        &self.project_slug
    }

    pub fn lang_tag(&self) -> &str {
        &self.lang_tag
    }

    pub fn meta_lang(&self) -> &str {
        &self.meta_lang
    }

    pub fn pos_iri(&self, pos: &str) -> Option<&Iri> {
        self.pos_map.get(&pos.to_lowercase())
    }

    pub(crate) fn lang_literal(&self, text: &str) -> Literal {
        Literal::lang(text, &self.lang_tag).expect("validated tag")
    }

    pub(crate) fn meta_literal(&self, text: &str) -> Literal {
        Literal::lang(text, &self.meta_lang).expect("validated tag")
    }
}
