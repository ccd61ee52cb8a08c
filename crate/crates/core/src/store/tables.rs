use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{canonical_json, doc_id, make_rev, Collection, QueryFilter, QueryResult, StoreError, Stored};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct Record {
    pub doc: String,
    pub rev: String,
    pub counter: u64,
}

/// A write that has passed its revision check and can be applied.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub(crate) enum Mutation {
    Put { collection: String, id: String, record: Record },
    Delete { collection: String, id: String },
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub(crate) struct Tables {
    collections: HashMap<String, BTreeMap<String, Record>>,
}

impl Tables {
    pub fn prepare_put(&self, collection: Collection, doc: &Value, expected_rev: Option<&str>) -> Result<Mutation, StoreError> {
        let id = doc_id(doc)?;
        let bytes = canonical_json(doc);
        let current = self.collections.get(collection.name()).and_then(|c| c.get(&id));
        let counter = match (current, expected_rev) {
            (None, None) => 1,
            (Some(rec), Some(rev)) if rec.rev == rev => rec.counter + 1,
            (current, _) => return Err(StoreError::StaleRevision { current: current.map(|r| r.rev.clone()) }),
        };
        let doc = String::from_utf8(bytes).expect("serde_json emits UTF-8");
        let rev = make_rev(counter, doc.as_bytes());
        Ok(Mutation::Put { collection: collection.name().to_owned(), id, record: Record { doc, rev, counter } })
    }

    pub fn prepare_delete(&self, collection: Collection, id: &str, expected_rev: &str) -> Result<Mutation, StoreError> {
        let current = self
            .collections
            .get(collection.name())
            .and_then(|c| c.get(id))
            .ok_or(StoreError::NotFound)?;
        if current.rev != expected_rev {
            return Err(StoreError::StaleRevision { current: Some(current.rev.clone()) });
        }
        Ok(Mutation::Delete { collection: collection.name().to_owned(), id: id.to_owned() })
    }

    pub fn apply(&mut self, m: Mutation) -> Option<String> {
        match m {
            Mutation::Put { collection, id, record } => {
                let rev = record.rev.clone();
                self.collections.entry(collection).or_default().insert(id, record);
                Some(rev)
            }
            Mutation::Delete { collection, id } => {
                if let Some(c) = self.collections.get_mut(&collection) {
                    c.remove(&id);
                }
                None
            }
        }
    }

    pub fn get(&self, collection: Collection, id: &str) -> Result<Stored, StoreError> {
        let rec = self.collections.get(collection.name()).and_then(|c| c.get(id)).ok_or(StoreError::NotFound)?;
        Ok(Stored { id: id.to_owned(), bytes: rec.doc.as_bytes().to_vec(), rev: rec.rev.clone() })
    }

    pub fn query(&self, collection: Collection, filter: &QueryFilter) -> Result<QueryResult, StoreError> {
        filter.check()?;
        let Some(table) = self.collections.get(collection.name()) else {
            return Ok(QueryResult::default());
        };
        let mut hits: Vec<(String, Value)> = Vec::new();
        for (id, rec) in table {
            let value: Value = serde_json::from_str(&rec.doc).map_err(|e| StoreError::Corrupt(e.to_string()))?;
            if filter.matches(&value) {
                hits.push((id.clone(), value));
            }
        }
        hits.sort_by(|a, b| filter.order(a, b));
        let total = hits.len();
        let documents = hits
            .into_iter()
            .skip(filter.offset)
            .take(filter.limit)
            .map(|(id, _)| {
                let rec = &table[&id];
                Stored { id, bytes: rec.doc.as_bytes().to_vec(), rev: rec.rev.clone() }
            })
            .collect();
        Ok(QueryResult { documents, total })
    }
}
