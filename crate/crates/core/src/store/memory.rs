use std::collections::HashMap;

use parking_lot::RwLock;
use serde_json::Value;

use super::tables::Tables;
use super::{is_sha256_hex, sha256_hex, Collection, DocumentStore, QueryFilter, QueryResult, StoreError, Stored};

/// Volatile backend, used by tests and throwaway servers.
#[derive(Default)]
pub struct MemoryStore {
    tables: RwLock<Tables>,
    blobs: RwLock<HashMap<String, Vec<u8>>>,
}

impl MemoryStore {
    pub fn new() -> MemoryStore {
        MemoryStore::default()
    }
}

impl DocumentStore for MemoryStore {
    fn put(&self, collection: Collection, doc: &Value, expected_rev: Option<&str>) -> Result<String, StoreError> {
        let mut tables = self.tables.write();
        let m = tables.prepare_put(collection, doc, expected_rev)?;
        Ok(tables.apply(m).expect("put yields a revision"))
    }

    fn get(&self, collection: Collection, id: &str) -> Result<Stored, StoreError> {
        self.tables.read().get(collection, id)
    }

    fn query(&self, collection: Collection, filter: &QueryFilter) -> Result<QueryResult, StoreError> {
        self.tables.read().query(collection, filter)
    }

    fn delete(&self, collection: Collection, id: &str, expected_rev: &str) -> Result<(), StoreError> {
        let mut tables = self.tables.write();
        let m = tables.prepare_delete(collection, id, expected_rev)?;
        tables.apply(m);
        Ok(())
    }

    fn put_blob(&self, bytes: &[u8]) -> Result<String, StoreError> {
        if bytes.is_empty() {
            return Err(StoreError::EmptyBlob);
        }
        let hash = sha256_hex(bytes);
        self.blobs.write().entry(hash.clone()).or_insert_with(|| bytes.to_vec());
        Ok(hash)
    }

    fn get_blob(&self, sha256: &str) -> Result<Vec<u8>, StoreError> {
        if !is_sha256_hex(sha256) {
            return Err(StoreError::NotFound);
        }
        self.blobs.read().get(sha256).cloned().ok_or(StoreError::NotFound)
    }
}
