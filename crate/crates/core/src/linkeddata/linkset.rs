use std::collections::BTreeMap;

use super::ontolex::{entry_iri, sense_iri};
use super::term::{Iri, RdfGraph};
use super::vocab;
use super::{LinkedDataError, MappingContext};
use crate::model::{nfc, LexicalEntry};

const HEADER: [&str; 4] = ["lemma", "pos", "target_iri", "source"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkTarget {
    pub iri: Iri,
    pub source: String,
}

/// Offline lemma table. Keys are lowercased; a `None` part of speech
/// matches any entry with the lemma.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkSet {
    pub records: BTreeMap<(String, Option<String>), Vec<LinkTarget>>,
}

impl LinkSet {
    pub fn insert(&mut self, lemma: &str, pos: Option<&str>, target: LinkTarget) {
        let key = (nfc(lemma).to_lowercase(), pos.map(str::to_lowercase));
        self.records.entry(key).or_default().push(target);
    }

    /// Exact `(lemma, pos)` hits followed by wildcard hits.
    pub fn lookup(&self, lemma: &str, pos: &str) -> Vec<&LinkTarget> {
        let lemma = nfc(lemma).to_lowercase();
        let mut out = Vec::new();
        if !pos.is_empty() {
            if let Some(v) = self.records.get(&(lemma.clone(), Some(pos.to_lowercase()))) {
                out.extend(v);
            }
        }
        if let Some(v) = self.records.get(&(lemma, None)) {
            out.extend(v);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.records.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// CSV with header `lemma,pos,target_iri,source`; rows count from 1 with
/// the header as row 1.
pub fn load_linkset(text: &str) -> Result<LinkSet, LinkedDataError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut set = LinkSet::default();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| LinkedDataError::CsvValue { row, message: e.to_string() })?;
        if record.len() != HEADER.len() {
            return Err(LinkedDataError::CsvShape { row, expected: HEADER.len(), found: record.len() });
        }
        if row == 1 {
            let header: Vec<&str> = record.iter().map(str::trim).collect();
            if header != HEADER {
                return Err(LinkedDataError::CsvValue { row, message: format!("header must be {}", HEADER.join(",")) });
            }
            continue;
        }
        let lemma = record[0].trim();
        if lemma.is_empty() {
            return Err(LinkedDataError::CsvValue { row, message: "empty lemma".into() });
        }
        let pos = record[1].trim();
        let target = record[2].trim();
        let iri = Iri::new(target).map_err(|_| LinkedDataError::InvalidLinkIri { row, iri: target.to_owned() })?;
        let pos = if pos.is_empty() { None } else { Some(pos) };
        set.insert(lemma, pos, LinkTarget { iri, source: record[3].trim().to_owned() });
    }
    Ok(set)
}

/// One `ontolex:reference` per sense for each linkset hit.
pub fn link_externals(entry: &LexicalEntry, linkset: &LinkSet, ctx: &MappingContext) -> RdfGraph {
    let mut g = RdfGraph::new();
    let hits = linkset.lookup(&entry.headword, &entry.pos);
    if hits.is_empty() {
        return g;
    }
    let e = entry_iri(ctx, entry);
    let reference = vocab::ontolex_reference();
    for k in 1..=entry.senses.len() {
        let s = sense_iri(&e, k);
        for hit in &hits {
            g.add(s.clone(), &reference, hit.iri.clone());
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;
    use crate::Id;

    const HEAD: &str = "lemma,pos,target_iri,source\n";

    fn ctx() -> MappingContext {
        MappingContext::new("http://example.org/", "awa", "awa").unwrap()
    }

    #[test]
    fn one_record() {
        let set = load_linkset(&format!("{HEAD}kitab,n,http://wn/k-01,wordnet\n")).unwrap();
        assert_eq!(set.records.len(), 1);
        let hits = set.lookup("kitab", "n");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].source, "wordnet");
    }

    #[test]
    fn duplicates_aggregate() {
        let set = load_linkset(&format!("{HEAD}kitab,n,http://wn/k-01,wordnet\nkitab,n,http://wn/k-01,wordnet\n")).unwrap();
        assert_eq!(set.records[&("kitab".to_owned(), Some("n".to_owned()))].len(), 2);
    }

    #[test]
    fn bad_iri_reports_row() {
        let err = load_linkset(&format!("{HEAD}kitab,n,http://wn/k-01,wordnet\nkitab,n,not-an-iri,wordnet\n")).unwrap_err();
        assert_eq!(err, LinkedDataError::InvalidLinkIri { row: 3, iri: "not-an-iri".into() });
    }

    #[test]
    fn shape_errors() {
        let err = load_linkset(&format!("{HEAD}kitab,n\n")).unwrap_err();
        assert_eq!(err, LinkedDataError::CsvShape { row: 2, expected: 4, found: 2 });
        assert!(load_linkset("a,b,c,d\n").is_err());
    }

    #[test]
    fn per_sense_references() {
        let set = load_linkset(&format!("{HEAD}kitab,n,http://wn/k-01,wordnet\n")).unwrap();
        let mut e = LexicalEntry::new(Id::generate(), "Kitab", "n", "book");
        e.senses.push(Sense::with_gloss(2, "volume"));
        assert_eq!(link_externals(&e, &set, &ctx()).len(), 2);

        let other = LexicalEntry::new(Id::generate(), "ghar", "n", "house");
        assert!(link_externals(&other, &set, &ctx()).is_empty());

        let verb = LexicalEntry::new(Id::generate(), "kitab", "v", "write");
        assert!(link_externals(&verb, &set, &ctx()).is_empty());
    }

    #[test]
    fn wildcard_pos_matches_any() {
        let set = load_linkset(&format!("{HEAD}ghar,,http://dbpedia.org/resource/House,dbpedia\n")).unwrap();
        let e = LexicalEntry::new(Id::generate(), "ghar", "n", "house");
        let g = link_externals(&e, &set, &ctx());
        assert_eq!(g.len(), 1);
        assert!(g.iter().all(|t| t.predicate == vocab::ontolex_reference()));
    }
}
