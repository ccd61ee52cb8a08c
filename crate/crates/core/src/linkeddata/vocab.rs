//! Namespaces, classes and properties used by the mappers.

use super::term::Iri;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const ONTOLEX: &str = "http://www.w3.org/ns/lemon/ontolex#";
pub const LEXINFO: &str = "http://www.lexinfo.net/ontology/3.0/lexinfo#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const LIGT: &str = "http://purl.org/liodi/ligt/";
pub const DCT: &str = "http://purl.org/dc/terms/";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

/// Prefix table for Turtle output, in emission order.
pub const PREFIXES: [(&str, &str); 8] = [
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("ontolex", ONTOLEX),
    ("lexinfo", LEXINFO),
    ("skos", SKOS),
    ("ligt", LIGT),
    ("dct", DCT),
    ("xsd", XSD),
];

/// Local extension namespace for ordering indices, relative to a base IRI.
pub const LIGT_EXT_PATH: &str = "ns/ligt-ext#";

fn term(ns: &str, local: &str) -> Iri {
    Iri::known(format!("{ns}{local}"))
}

pub fn rdf_type() -> Iri {
    term(RDF, "type")
}
pub fn rdf_value() -> Iri {
    term(RDF, "value")
}

pub fn ontolex_lexical_entry() -> Iri {
    term(ONTOLEX, "LexicalEntry")
}
pub fn ontolex_word() -> Iri {
    term(ONTOLEX, "Word")
}
pub fn ontolex_multiword_expression() -> Iri {
    term(ONTOLEX, "MultiwordExpression")
}
pub fn ontolex_form() -> Iri {
    term(ONTOLEX, "Form")
}
pub fn ontolex_lexical_sense() -> Iri {
    term(ONTOLEX, "LexicalSense")
}
pub fn ontolex_canonical_form() -> Iri {
    term(ONTOLEX, "canonicalForm")
}
pub fn ontolex_written_rep() -> Iri {
    term(ONTOLEX, "writtenRep")
}
pub fn ontolex_sense() -> Iri {
    term(ONTOLEX, "sense")
}
pub fn ontolex_reference() -> Iri {
    term(ONTOLEX, "reference")
}

pub fn lexinfo_part_of_speech() -> Iri {
    term(LEXINFO, "partOfSpeech")
}
pub fn lexinfo(local: &str) -> Iri {
    term(LEXINFO, local)
}

pub fn skos_definition() -> Iri {
    term(SKOS, "definition")
}

pub fn ligt_document() -> Iri {
    term(LIGT, "Document")
}
pub fn ligt_utterance() -> Iri {
    term(LIGT, "Utterance")
}
pub fn ligt_word() -> Iri {
    term(LIGT, "Word")
}
pub fn ligt_morph() -> Iri {
    term(LIGT, "Morph")
}
pub fn ligt_has_utterances() -> Iri {
    term(LIGT, "hasUtterances")
}
pub fn ligt_has_words() -> Iri {
    term(LIGT, "hasWords")
}
pub fn ligt_has_morphs() -> Iri {
    term(LIGT, "hasMorphs")
}
pub fn ligt_gloss() -> Iri {
    term(LIGT, "gloss")
}
pub fn ligt_translation() -> Iri {
    term(LIGT, "translation")
}

pub fn ligt_ext_index(base_iri: &str) -> Iri {
    Iri::known(format!("{base_iri}{LIGT_EXT_PATH}index"))
}

/// Default part-of-speech abbreviations mapped to lexinfo individuals.
pub const DEFAULT_POS_MAP: [(&str, &str); 28] = [
    ("n", "noun"),
    ("noun", "noun"),
    ("pn", "properNoun"),
    ("propn", "properNoun"),
    ("v", "verb"),
    ("verb", "verb"),
    ("vt", "verb"),
    ("vi", "verb"),
    ("adj", "adjective"),
    ("a", "adjective"),
    ("adjective", "adjective"),
    ("adv", "adverb"),
    ("adverb", "adverb"),
    ("pron", "pronoun"),
    ("pro", "pronoun"),
    ("pronoun", "pronoun"),
    ("prep", "preposition"),
    ("post", "postposition"),
    ("postp", "postposition"),
    ("conj", "conjunction"),
    ("num", "numeral"),
    ("interj", "interjection"),
    ("intj", "interjection"),
    ("det", "determiner"),
    ("art", "article"),
    ("prt", "particle"),
    ("part", "particle"),
    ("clf", "classifier"),
];
