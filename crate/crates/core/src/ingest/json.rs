use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::id::Id;
use crate::model::{IgtDocument, LexicalEntry, MediaAsset, Project};
use crate::store::canonical_json;

pub const FORMAT_VERSION: u32 = 1;

/// Value of the manifest's `revisions` field: revisions are store-local and
/// are not exported; the importing store assigns fresh ones.
const REVISIONS_DROPPED: &str = "dropped";

/// Everything that belongs to one project.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectData {
    pub project: Project,
    pub entries: Vec<LexicalEntry>,
    pub texts: Vec<IgtDocument>,
    pub assets: Vec<MediaAsset>,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    #[serde(default)]
    revisions: Option<String>,
    project: Project,
    entries: Vec<LexicalEntry>,
    texts: Vec<IgtDocument>,
    #[serde(default)]
    assets: Vec<MediaAsset>,
}

impl ProjectData {
    pub fn empty(project: Project) -> ProjectData {
        ProjectData { project, entries: Vec::new(), texts: Vec::new(), assets: Vec::new() }
    }

    /// Copy with every `rev` cleared, the form an export/import cycle yields.
    pub fn without_revisions(&self) -> ProjectData {
        let mut d = self.clone();
        d.project.rev.clear();
        d.entries.iter_mut().for_each(|e| e.rev.clear());
        d.texts.iter_mut().for_each(|t| t.rev.clear());
        d.assets.iter_mut().for_each(|a| a.rev.clear());
        d
    }

    /// Re-home the data under `project`: entries, texts, utterances and
    /// assets get fresh ids and media references are rewritten to match.
    pub fn remap_into(self, project: &Project) -> ProjectData {
        let mut asset_ids: HashMap<Id, Id> = HashMap::new();
        let assets = self
            .assets
            .into_iter()
            .map(|mut a| {
                let fresh = Id::generate();
                asset_ids.insert(a.id.clone(), fresh.clone());
                a.id = fresh;
                a.project_id = project.id.clone();
                a.rev.clear();
                a
            })
            .collect();
        let remap = |id: &Id| asset_ids.get(id).cloned().unwrap_or_else(|| id.clone());
        let entries = self
            .entries
            .into_iter()
            .map(|mut e| {
                e.id = Id::generate();
                e.project_id = project.id.clone();
                e.media = e.media.iter().map(remap).collect();
                e.rev.clear();
                e
            })
            .collect();
        let texts = self
            .texts
            .into_iter()
            .map(|mut t| {
                t.id = Id::generate();
                t.project_id = project.id.clone();
                t.rev.clear();
                for u in &mut t.utterances {
                    u.id = Id::generate();
                    if let Some(m) = &mut u.media_ref {
                        m.asset_id = remap(&m.asset_id);
                    }
                }
                t
            })
            .collect();
        ProjectData { project: project.clone(), entries, texts, assets }
    }
}

/// Canonical JSON manifest `{format_version, revisions, project, entries,
/// texts, assets}` with sorted keys and no `rev` fields.
pub fn export_json(data: &ProjectData) -> Vec<u8> {
    let d = data.without_revisions();
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        revisions: Some(REVISIONS_DROPPED.to_owned()),
        project: d.project,
        entries: d.entries,
        texts: d.texts,
        assets: d.assets,
    };
    canonical_json(&serde_json::to_value(&manifest).expect("manifest serializes"))
}

pub fn import_json(bytes: &[u8]) -> Result<ProjectData, IngestError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let manifest: Manifest = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let mut pointer = String::new();
        for seg in err.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", escape_pointer(key))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{}", escape_pointer(variant))),
                Segment::Unknown => {}
            }
        }
        let message = err.inner().to_string();
        if let Some(field) = missing_field(&message) {
            pointer.push('/');
            pointer.push_str(&escape_pointer(field));
        }
        IngestError::SchemaViolation { pointer, message }
    })?;
    de.end().map_err(|e| IngestError::SchemaViolation { pointer: String::new(), message: e.to_string() })?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(IngestError::SchemaViolation {
            pointer: "/format_version".into(),
            message: format!("unsupported format version {}", manifest.format_version),
        });
    }
    Ok(ProjectData { project: manifest.project, entries: manifest.entries, texts: manifest.texts, assets: manifest.assets })
}

fn missing_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

fn escape_pointer(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}
