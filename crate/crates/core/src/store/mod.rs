//! Revisioned document persistence.
//!
//! Documents are JSON objects carrying a string `id`. They are kept as
//! canonical JSON bytes (object keys sorted, UTF-8) so that equal documents
//! are byte-identical. Every write produces a revision of the form
//! `<counter>-<content-hash-prefix>` where the counter is monotonic per
//! document; writes to existing documents must name the revision they are
//! replacing.
//!
//! Two backends implement [`DocumentStore`]: [`MemoryStore`] and the
//! journaled [`FileStore`].

mod file;
mod memory;
mod tables;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use file::FileStore;
pub use memory::MemoryStore;

pub const MAX_PAGE: usize = 500;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("stale revision (current: {})", current.as_deref().unwrap_or("none"))]
    StaleRevision { current: Option<String> },
    #[error("document not found")]
    NotFound,
    #[error("unknown collection {0:?}")]
    UnknownCollection(String),
    #[error("document has no string \"id\" field")]
    MissingId,
    #[error("blob is empty")]
    EmptyBlob,
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("corrupt data store: {0}")]
    Corrupt(String),
    #[error("document does not match the expected shape: {0}")]
    Decode(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Collection {
    Users,
    Projects,
    Entries,
    Texts,
    Assets,
    Models,
    Sessions,
}

impl Collection {
    pub const ALL: [Collection; 7] = [
        Collection::Users,
        Collection::Projects,
        Collection::Entries,
        Collection::Texts,
        Collection::Assets,
        Collection::Models,
        Collection::Sessions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Collection::Users => "users",
            Collection::Projects => "projects",
            Collection::Entries => "entries",
            Collection::Texts => "texts",
            Collection::Assets => "assets",
            Collection::Models => "models",
            Collection::Sessions => "sessions",
        }
    }
}

impl FromStr for Collection {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Collection::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| StoreError::UnknownCollection(s.to_owned()))
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A document as read back from the store.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stored {
    pub id: String,
    pub bytes: Vec<u8>,
    pub rev: String,
}

impl Stored {
    pub fn value(&self) -> Value {
        serde_json::from_slice(&self.bytes).expect("stored documents are valid JSON")
    }

    /// Deserialize into a domain type, filling a top-level `rev` field with
    /// the store revision.
    pub fn decode<T: DeserializeOwned>(&self) -> Result<T, StoreError> {
        let mut value = self.value();
        if let Value::Object(map) = &mut value {
            map.insert("rev".to_owned(), Value::String(self.rev.clone()));
        }
        Ok(serde_json::from_value(value)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryFilter {
    pub project_id: Option<String>,
    /// Dotted field paths (`"senses.0.gloss"`) with the value they must equal.
    pub field_equals: Vec<(String, Value)>,
    pub headword_prefix: Option<String>,
    /// Order by headword under `collation` instead of by id. Prefix
    /// queries are always ordered this way.
    pub by_headword: bool,
    pub collation: Vec<String>,
    pub offset: usize,
    pub limit: usize,
}

impl Default for QueryFilter {
    fn default() -> Self {
        QueryFilter {
            project_id: None,
            field_equals: Vec::new(),
            headword_prefix: None,
            by_headword: false,
            collation: Vec::new(),
            offset: 0,
            limit: 50,
        }
    }
}

impl QueryFilter {
    pub fn project(project_id: impl Into<String>) -> QueryFilter {
        QueryFilter { project_id: Some(project_id.into()), ..QueryFilter::default() }
    }

    pub fn field(mut self, path: &str, value: impl Into<Value>) -> QueryFilter {
        self.field_equals.push((path.to_owned(), value.into()));
        self
    }

    pub fn collated(mut self, alphabet: &[String]) -> QueryFilter {
        self.by_headword = true;
        self.collation = alphabet.to_vec();
        self
    }

    pub fn page(mut self, offset: usize, limit: usize) -> QueryFilter {
        self.offset = offset;
        self.limit = limit;
        self
    }

    fn check(&self) -> Result<(), StoreError> {
        if !(1..=MAX_PAGE).contains(&self.limit) {
            return Err(StoreError::InvalidFilter(format!("limit must be in 1..={MAX_PAGE}, got {}", self.limit)));
        }
        Ok(())
    }

    fn matches(&self, doc: &Value) -> bool {
        if let Some(pid) = &self.project_id {
            if doc.get("project_id").and_then(Value::as_str) != Some(pid.as_str()) {
                return false;
            }
        }
        if let Some(prefix) = &self.headword_prefix {
            match doc.get("headword").and_then(Value::as_str) {
                Some(h) if h.starts_with(prefix.as_str()) => {}
                _ => return false,
            }
        }
        self.field_equals.iter().all(|(path, expected)| lookup(doc, path) == Some(expected))
    }

    fn order(&self, a: &(String, Value), b: &(String, Value)) -> Ordering {
        if self.by_headword || self.headword_prefix.is_some() {
            let ha = a.1.get("headword").and_then(Value::as_str).unwrap_or("");
            let hb = b.1.get("headword").and_then(Value::as_str).unwrap_or("");
            crate::dictionary::compare_headwords(&self.collation, ha, hb).then_with(|| a.0.cmp(&b.0))
        } else {
            a.0.cmp(&b.0)
        }
    }
}

fn lookup<'a>(doc: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(doc, |v, seg| match v {
        Value::Object(map) => map.get(seg),
        Value::Array(items) => seg.parse::<usize>().ok().and_then(|i| items.get(i)),
        _ => None,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryResult {
    pub documents: Vec<Stored>,
    pub total: usize,
}

pub trait DocumentStore: Send + Sync {
    /// Insert or replace a document. Replacing requires `expected_rev` to be
    /// the current revision; inserting requires it to be absent.
    fn put(&self, collection: Collection, doc: &Value, expected_rev: Option<&str>) -> Result<String, StoreError>;

    fn get(&self, collection: Collection, id: &str) -> Result<Stored, StoreError>;

    fn query(&self, collection: Collection, filter: &QueryFilter) -> Result<QueryResult, StoreError>;

    fn delete(&self, collection: Collection, id: &str, expected_rev: &str) -> Result<(), StoreError>;

    /// Store bytes under their SHA-256 and return the lowercase hex digest.
    fn put_blob(&self, bytes: &[u8]) -> Result<String, StoreError>;

    fn get_blob(&self, sha256: &str) -> Result<Vec<u8>, StoreError>;

    /// Every match of `filter`, ignoring its pagination.
    fn query_all(&self, collection: Collection, filter: &QueryFilter) -> Result<Vec<Stored>, StoreError> {
        let mut page = QueryFilter { offset: 0, limit: MAX_PAGE, ..filter.clone() };
        let mut out = Vec::new();
        loop {
            let res = self.query(collection, &page)?;
            let n = res.documents.len();
            out.extend(res.documents);
            if n < MAX_PAGE || out.len() >= res.total {
                return Ok(out);
            }
            page.offset += n;
        }
    }
}

/// Serialize a domain value for storage: the `rev` field is owned by the
/// store and never part of the stored bytes.
pub fn to_document<T: Serialize>(doc: &T) -> Result<Value, StoreError> {
    Ok(without_rev(serde_json::to_value(doc)?))
}

fn without_rev(mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.remove("rev");
    }
    value
}

/// Canonical JSON: object keys sorted by code point, no insignificant
/// whitespace, UTF-8.
pub fn canonical_json(value: &Value) -> Vec<u8> {
    serde_json::to_vec(&sorted(value)).expect("JSON values always serialize")
}

fn sorted(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let mut out = serde_json::Map::new();
            for k in keys {
                out.insert(k.clone(), sorted(&map[k]));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn is_sha256_hex(s: &str) -> bool {
    s.len() == 64 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}

pub(crate) fn make_rev(counter: u64, bytes: &[u8]) -> String {
    format!("{counter}-{}", &sha256_hex(bytes)[..12])
}

pub(crate) fn doc_id(doc: &Value) -> Result<String, StoreError> {
    doc.get("id").and_then(Value::as_str).map(str::to_owned).ok_or(StoreError::MissingId)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_json_sorts_keys_recursively() {
        let v = json!({"b": 1, "a": {"d": [ {"z": 1, "y": 2} ], "c": "é"}});
        assert_eq!(canonical_json(&v), r#"{"a":{"c":"é","d":[{"y":2,"z":1}]},"b":1}"#.as_bytes());
    }

    #[test]
    fn collection_names() {
        assert_eq!("entries".parse::<Collection>().unwrap(), Collection::Entries);
        assert!(matches!("widgets".parse::<Collection>(), Err(StoreError::UnknownCollection(n)) if n == "widgets"));
    }

    #[test]
    fn dotted_lookup() {
        let v = json!({"senses": [{"gloss": "book"}]});
        assert_eq!(lookup(&v, "senses.0.gloss"), Some(&json!("book")));
        assert_eq!(lookup(&v, "senses.1.gloss"), None);
    }
}
