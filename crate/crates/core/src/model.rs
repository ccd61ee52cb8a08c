//! Shared domain types.
//!
//! Everything here is a plain value object. Mutation happens by building a
//! new value and writing it through the [`store`](crate::store), which
//! assigns a fresh revision.

use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::id::Id;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("name {0:?} does not reduce to a usable slug")]
    InvalidName(String),
    #[error("unknown role {0:?}")]
    UnknownRole(String),
    #[error("unknown morph type {0:?}")]
    UnknownMorphType(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Owner,
    Editor,
    Viewer,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Owner => "owner",
            Role::Editor => "editor",
            Role::Viewer => "viewer",
        }
    }
}

impl std::str::FromStr for Role {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "owner" => Ok(Role::Owner),
            "editor" => Ok(Role::Editor),
            "viewer" => Ok(Role::Viewer),
            other => Err(ModelError::UnknownRole(other.to_owned())),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_METALANGUAGE: &str = "en";

fn default_metalanguage() -> String {
    DEFAULT_METALANGUAGE.to_owned()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub id: Id,
    pub name: String,
    pub slug: String,
    pub language_name: String,
    /// ISO 639-3 code, three lowercase letters.
    pub language_code: String,
    /// Ordered grapheme clusters used for collation ("a", "b", "ch", "c", ...).
    #[serde(default)]
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub pos_inventory: Vec<String>,
    /// Language tag for glosses and definitions.
    #[serde(default = "default_metalanguage")]
    pub metalanguage: String,
    pub members: BTreeMap<Id, Role>,
    pub created_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rev: String,
}

impl Project {
    pub fn new(name: &str, language_name: &str, language_code: &str, owner: Id) -> Result<Project, ModelError> {
        let mut members = BTreeMap::new();
        members.insert(owner, Role::Owner);
        Ok(Project {
            id: Id::generate(),
            name: name.to_owned(),
            slug: slugify(name)?,
            language_name: language_name.to_owned(),
            language_code: language_code.to_owned(),
            alphabet: Vec::new(),
            pos_inventory: Vec::new(),
            metalanguage: default_metalanguage(),
            members,
            created_at: Utc::now(),
            rev: String::new(),
        })
    }

    pub fn role_of(&self, user: &Id) -> Option<Role> {
        self.members.get(user).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct User {
    pub id: Id,
    pub username: String,
    pub password_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rev: String,
}

pub fn is_valid_username(name: &str) -> bool {
    (3..=32).contains(&name.len())
        && name.bytes().all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
}

/// Marker/value pair kept verbatim from an import.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extra {
    pub marker: String,
    pub value: String,
}

impl Extra {
    pub fn new(marker: impl Into<String>, value: impl Into<String>) -> Extra {
        Extra { marker: marker.into(), value: value.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub vernacular: String,
    pub translation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sense {
    pub sense_no: u32,
    #[serde(default)]
    pub gloss: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantic_domain: Option<String>,
    #[serde(default)]
    pub examples: Vec<Example>,
}

impl Sense {
    pub fn new(sense_no: u32) -> Sense {
        Sense { sense_no, gloss: String::new(), definition: None, semantic_domain: None, examples: Vec::new() }
    }

    pub fn with_gloss(sense_no: u32, gloss: &str) -> Sense {
        Sense { gloss: gloss.to_owned(), ..Sense::new(sense_no) }
    }

    /// The text used where a single description of the sense is needed:
    /// the definition when present, otherwise the gloss.
    pub fn description(&self) -> &str {
        match &self.definition {
            Some(d) if !d.is_empty() => d,
            _ => &self.gloss,
        }
    }
}

fn default_homonym() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LexicalEntry {
    pub id: Id,
    pub project_id: Id,
    pub headword: String,
    #[serde(default = "default_homonym")]
    pub homonym_no: u32,
    #[serde(default)]
    pub pos: String,
    pub senses: Vec<Sense>,
    #[serde(default)]
    pub variants: Vec<String>,
    #[serde(default)]
    pub media: Vec<Id>,
    #[serde(default)]
    pub extras: Vec<Extra>,
    pub created_at: DateTime<Utc>,
    pub modified_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rev: String,
}

impl LexicalEntry {
    /// A fresh entry with one sense glossed `gloss`.
    pub fn new(project_id: Id, headword: &str, pos: &str, gloss: &str) -> LexicalEntry {
        let now = Utc::now();
        LexicalEntry {
            id: Id::generate(),
            project_id,
            headword: headword.to_owned(),
            homonym_no: 1,
            pos: pos.to_owned(),
            senses: vec![Sense::with_gloss(1, gloss)],
            variants: Vec::new(),
            media: Vec::new(),
            extras: Vec::new(),
            created_at: now,
            modified_at: now,
            rev: String::new(),
        }
    }

    /// Equality over the linguistic content, ignoring identity, ownership,
    /// timestamps and revision.
    pub fn same_content(&self, other: &LexicalEntry) -> bool {
        self.headword == other.headword
            && self.homonym_no == other.homonym_no
            && self.pos == other.pos
            && self.senses == other.senses
            && self.variants == other.variants
            && self.media == other.media
            && self.extras == other.extras
    }

    pub fn renumber_senses(&mut self) {
        for (i, sense) in self.senses.iter_mut().enumerate() {
            sense.sense_no = i as u32 + 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MediaKind {
    Audio,
    Video,
    Image,
}

impl MediaKind {
    pub fn from_mime(mime: &str) -> Option<MediaKind> {
        let top = mime.split('/').next()?.trim().to_ascii_lowercase();
        match top.as_str() {
            "audio" => Some(MediaKind::Audio),
            "video" => Some(MediaKind::Video),
            "image" => Some(MediaKind::Image),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediaAsset {
    pub id: Id,
    pub project_id: Id,
    pub kind: MediaKind,
    pub mime: String,
    pub byte_size: u64,
    pub sha256: String,
    pub filename: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rev: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphType {
    Prefix,
    Root,
    Suffix,
    Clitic,
}

impl MorphType {
    pub const ALL: [MorphType; 4] = [MorphType::Prefix, MorphType::Root, MorphType::Suffix, MorphType::Clitic];

    pub fn as_str(self) -> &'static str {
        match self {
            MorphType::Prefix => "prefix",
            MorphType::Root => "root",
            MorphType::Suffix => "suffix",
            MorphType::Clitic => "clitic",
        }
    }
}

impl std::str::FromStr for MorphType {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(MorphType::Prefix),
            "root" => Ok(MorphType::Root),
            "suffix" => Ok(MorphType::Suffix),
            "clitic" => Ok(MorphType::Clitic),
            other => Err(ModelError::UnknownMorphType(other.to_owned())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morph {
    pub form: String,
    #[serde(default)]
    pub gloss: String,
    #[serde(rename = "type")]
    pub kind: MorphType,
}

impl Morph {
    pub fn new(form: &str, gloss: &str, kind: MorphType) -> Morph {
        Morph { form: form.to_owned(), gloss: gloss.to_owned(), kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub surface: String,
    #[serde(default)]
    pub morphs: Vec<Morph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
}

impl Word {
    pub fn unanalyzed(surface: &str) -> Word {
        Word { surface: surface.to_owned(), morphs: Vec::new(), pos: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Translation {
    pub text: String,
    pub lang: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediaRef {
    pub asset_id: Id,
    pub start_ms: u64,
    pub end_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub id: Id,
    pub phrase: String,
    #[serde(default)]
    pub words: Vec<Word>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Translation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub media_ref: Option<MediaRef>,
    #[serde(default)]
    pub glossed: bool,
}

impl Utterance {
    pub fn morphs(&self) -> impl Iterator<Item = &Morph> {
        self.words.iter().flat_map(|w| w.morphs.iter())
    }

    /// Equality ignoring the utterance id.
    pub fn same_content(&self, other: &Utterance) -> bool {
        self.phrase == other.phrase
            && self.words == other.words
            && self.translation == other.translation
            && self.media_ref == other.media_ref
            && self.glossed == other.glossed
    }
}

/// A glossed text. A "paragraph" of connected discourse is a document with
/// one or more utterances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IgtDocument {
    pub id: Id,
    pub project_id: Id,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub utterances: Vec<Utterance>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rev: String,
}

impl IgtDocument {
    pub fn new(project_id: Id, title: &str) -> IgtDocument {
        IgtDocument { id: Id::generate(), project_id, title: title.to_owned(), utterances: Vec::new(), rev: String::new() }
    }

    pub fn same_content(&self, other: &IgtDocument) -> bool {
        self.title == other.title
            && self.utterances.len() == other.utterances.len()
            && self.utterances.iter().zip(&other.utterances).all(|(a, b)| a.same_content(b))
    }
}

/// Lowercase, collapse runs of anything outside `[a-z0-9]` to a single
/// `-` and trim dashes from both ends.
pub fn slugify(name: &str) -> Result<String, ModelError> {
    let mut slug = String::with_capacity(name.len());
    let mut pending_dash = false;
    for c in name.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() || c.is_ascii_digit() {
            if pending_dash && !slug.is_empty() {
                slug.push('-');
            }
            pending_dash = false;
            slug.push(c);
        } else {
            pending_dash = true;
        }
    }
    if slug.is_empty() {
        Err(ModelError::InvalidName(name.to_owned()))
    } else {
        Ok(slug)
    }
}

pub fn is_valid_slug(slug: &str) -> bool {
    let mut bytes = slug.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z' | b'0'..=b'9'))
        && bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'-'))
}

/// Canonical composition applied to text at ingestion boundaries.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Collapse whitespace runs to one space and trim.
pub fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
