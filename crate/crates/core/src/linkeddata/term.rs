use std::collections::BTreeSet;
use std::fmt;

use super::vocab::XSD_STRING;
use super::LinkedDataError;

/// Absolute IRI.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Result<Iri, LinkedDataError> {
        let iri = iri.into();
        if is_absolute_iri(&iri) {
            Ok(Iri(iri))
        } else {
            Err(LinkedDataError::InvalidIri(iri))
        }
    }

    /// For constants and IRIs minted from an already validated base.
    pub(crate) fn known(iri: impl Into<String>) -> Iri {
        let iri = iri.into();
        debug_assert!(is_absolute_iri(&iri), "{iri}");
        Iri(iri)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A scheme followed by `:` and no characters that IRIREF forbids.
pub fn is_absolute_iri(s: &str) -> bool {
    let Some((scheme, rest)) = s.split_once(':') else { return false };
    let mut sc = scheme.chars();
    sc.next().is_some_and(|c| c.is_ascii_alphabetic())
        && sc.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !rest.is_empty()
        && !rest.chars().any(|c| c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    /// Labels are `[A-Za-z0-9_]+`.
    pub fn new(label: impl Into<String>) -> Result<BlankNode, LinkedDataError> {
        let label = label.into();
        if !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(BlankNode(label))
        } else {
            Err(LinkedDataError::InvalidBlankLabel(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralKind {
    Simple,
    Lang(String),
    Typed(Iri),
}

/// `xsd:string` literals are stored as simple literals so the two spellings
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    kind: LiteralKind,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Literal {
        Literal { lexical: lexical.into(), kind: LiteralKind::Simple }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Literal, LinkedDataError> {
        if !crate::validate::is_language_tag(tag) {
            return Err(LinkedDataError::InvalidLanguageTag(tag.to_owned()));
        }
        Ok(Literal { lexical: lexical.into(), kind: LiteralKind::Lang(tag.to_ascii_lowercase()) })
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Literal {
        let kind = if datatype.as_str() == XSD_STRING { LiteralKind::Simple } else { LiteralKind::Typed(datatype) };
        Literal { lexical: lexical.into(), kind }
    }

    pub fn integer(n: i64) -> Literal {
        Literal::typed(n.to_string(), Iri::known(super::vocab::XSD_INTEGER))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn kind(&self) -> &LiteralKind {
        &self.kind
    }

    pub fn language(&self) -> Option<&str> {
        match &self.kind {
            LiteralKind::Lang(t) => Some(t),
            _ => None,
        }
    }

    pub fn datatype(&self) -> Option<&Iri> {
        match &self.kind {
            LiteralKind::Typed(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    Blank(BlankNode),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl From<Iri> for Subject {
    fn from(i: Iri) -> Subject {
        Subject::Iri(i)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Subject {
        Subject::Blank(b)
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Term {
        Term::Iri(i)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Term {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Term {
        Term::Literal(l)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Term {
        match s {
            Subject::Iri(i) => Term::Iri(i),
            Subject::Blank(b) => Term::Blank(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Triple {
        Triple { subject: subject.into(), predicate, object: object.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RdfGraph {
    triples: BTreeSet<Triple>,
}

impl RdfGraph {
    pub fn new() -> RdfGraph {
        RdfGraph::default()
    }

    /// False when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn add(&mut self, subject: impl Into<Subject>, predicate: &Iri, object: impl Into<Term>) {
        self.triples.insert(Triple::new(subject, predicate.clone(), object));
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn extend(&mut self, other: RdfGraph) {
        self.triples.extend(other.triples);
    }
}

impl FromIterator<Triple> for RdfGraph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> RdfGraph {
        RdfGraph { triples: iter.into_iter().collect() }
    }
}

impl IntoIterator for RdfGraph {
    type Item = Triple;
    type IntoIter = std::collections::btree_set::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}
