use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use parking_lot::{Mutex, RwLock};
use serde_json::Value;

use super::tables::{Mutation, Tables};
use super::{is_sha256_hex, sha256_hex, Collection, DocumentStore, QueryFilter, QueryResult, StoreError, Stored};

const LOG: &str = "log";
const SNAPSHOT: &str = "snapshot";
const BLOBS: &str = "blobs";
pub const DEFAULT_COMPACT_EVERY: usize = 1000;

struct Journal {
    file: File,
    entries: usize,
}

/// Single-node backend: an append-only write log replayed over the last
/// snapshot at startup, compacted into a new snapshot every
/// `compact_every` writes. Blobs live under `blobs/<first-2-hex>/<sha256>`.
pub struct FileStore {
    dir: PathBuf,
    tables: RwLock<Tables>,
    journal: Mutex<Journal>,
    compact_every: usize,
}

impl FileStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<FileStore, StoreError> {
        FileStore::open_with(dir, DEFAULT_COMPACT_EVERY)
    }

    pub fn open_with(dir: impl AsRef<Path>, compact_every: usize) -> Result<FileStore, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join(BLOBS))?;

        let mut tables = match fs::read(dir.join(SNAPSHOT)) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| StoreError::Corrupt(format!("snapshot: {e}")))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Tables::default(),
            Err(e) => return Err(e.into()),
        };

        let log_path = dir.join(LOG);
        let mut entries = 0;
        let mut valid_len = 0u64;
        if log_path.exists() {
            let reader = BufReader::new(File::open(&log_path)?);
            let mut lines = reader.split(b'\n').peekable();
            while let Some(line) = lines.next() {
                let line = line?;
                let last = lines.peek().is_none();
                match serde_json::from_slice::<Mutation>(&line) {
                    Ok(m) => {
                        tables.apply(m);
                        entries += 1;
                        valid_len += line.len() as u64 + 1;
                    }
                    // A torn final write from a crash is dropped.
                    Err(_) if last => break,
                    Err(e) => return Err(StoreError::Corrupt(format!("log entry {}: {e}", entries + 1))),
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).read(true).open(&log_path)?;
        if file.metadata()?.len() > valid_len {
            file.set_len(valid_len)?;
        }

        Ok(FileStore {
            dir,
            tables: RwLock::new(tables),
            journal: Mutex::new(Journal { file, entries }),
            compact_every: compact_every.max(1),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Write a snapshot of the current state and truncate the log.
    pub fn compact(&self) -> Result<(), StoreError> {
        let tables = self.tables.read();
        let mut journal = self.journal.lock();
        self.compact_locked(&tables, &mut journal)
    }

    fn compact_locked(&self, tables: &Tables, journal: &mut Journal) -> Result<(), StoreError> {
        let tmp = self.dir.join("snapshot.tmp");
        {
            let mut f = File::create(&tmp)?;
            serde_json::to_writer(&mut f, tables).map_err(|e| StoreError::Corrupt(e.to_string()))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.dir.join(SNAPSHOT))?;
        sync_dir(&self.dir)?;
        journal.file.set_len(0)?;
        journal.file.sync_all()?;
        journal.entries = 0;
        Ok(())
    }

    fn commit(&self, tables: &mut Tables, m: Mutation) -> Result<Option<String>, StoreError> {
        let mut journal = self.journal.lock();
        let mut line = serde_json::to_vec(&m).map_err(|e| StoreError::Corrupt(e.to_string()))?;
        line.push(b'\n');
        journal.file.write_all(&line)?;
        journal.file.sync_data()?;
        journal.entries += 1;
        let rev = tables.apply(m);
        if journal.entries >= self.compact_every {
            self.compact_locked(tables, &mut journal)?;
        }
        Ok(rev)
    }

    fn blob_path(&self, hash: &str) -> PathBuf {
        self.dir.join(BLOBS).join(&hash[..2]).join(hash)
    }
}

fn sync_dir(dir: &Path) -> std::io::Result<()> {
    // Not every platform can fsync a directory; the rename is atomic regardless.
    let _ = File::open(dir).and_then(|d| d.sync_all());
    Ok(())
}

impl DocumentStore for FileStore {
    fn put(&self, collection: Collection, doc: &Value, expected_rev: Option<&str>) -> Result<String, StoreError> {
        let mut tables = self.tables.write();
        let m = tables.prepare_put(collection, doc, expected_rev)?;
        Ok(self.commit(&mut tables, m)?.expect("put yields a revision"))
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
        self.commit(&mut tables, m)?;
        Ok(())
    }

    fn put_blob(&self, bytes: &[u8]) -> Result<String, StoreError> {
        if bytes.is_empty() {
            return Err(StoreError::EmptyBlob);
        }
        let hash = sha256_hex(bytes);
        let path = self.blob_path(&hash);
        if path.exists() {
            return Ok(hash);
        }
        let parent = path.parent().expect("blob paths have a parent");
        fs::create_dir_all(parent)?;
        let tmp = parent.join(format!("{hash}.tmp-{}", std::process::id()));
        {
            let mut f = File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(hash)
    }

    fn get_blob(&self, sha256: &str) -> Result<Vec<u8>, StoreError> {
        if !is_sha256_hex(sha256) {
            return Err(StoreError::NotFound);
        }
        match fs::read(self.blob_path(sha256)) {
            Ok(bytes) => Ok(bytes),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(StoreError::NotFound),
            Err(e) => Err(e.into()),
        }
    }
}
