use chrono::Utc;
use life_core::model::{nfc, Extra, MediaRef, Translation, Word};
use life_core::store::{Collection, QueryFilter, StoreError};
use life_core::validate::{validate_entry, validate_utterance, Issue, ValidationReport};
use life_core::{Id, IgtDocument, LexicalEntry, MediaAsset, MediaKind, Sense, Utterance};
use serde::{Deserialize, Serialize};

use super::{decode, document, parse_id, Access, Service};
use crate::auth::{permits, Action};
use crate::error::{ApiError, ApiResult};

#[derive(Clone, Debug, Serialize)]
pub struct Page<T> {
    pub items: Vec<T>,
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
}

/// The editable part of a lexical entry.
#[derive(Clone, Debug, Deserialize)]
pub struct EntryInput {
    pub headword: String,
    #[serde(default = "one")]
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
    #[serde(default)]
    pub rev: Option<String>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Deserialize)]
pub struct UtteranceInput {
    #[serde(default)]
    pub id: Option<Id>,
    pub phrase: String,
    #[serde(default)]
    pub words: Vec<Word>,
    #[serde(default)]
    pub translation: Option<Translation>,
    #[serde(default)]
    pub media_ref: Option<MediaRef>,
    #[serde(default)]
    pub glossed: bool,
    /// Revision of the enclosing text.
    #[serde(default)]
    pub rev: Option<String>,
}

impl UtteranceInput {
    /// Without words, the phrase is split on whitespace into unanalyzed words.
    fn into_utterance(self) -> Utterance {
        let phrase = nfc(&self.phrase);
        let words = if self.words.is_empty() {
            phrase.split_whitespace().map(Word::unanalyzed).collect()
        } else {
            self.words
        };
        Utterance {
            id: self.id.unwrap_or_else(Id::generate),
            phrase,
            words,
            translation: self.translation,
            media_ref: self.media_ref,
            glossed: self.glossed,
        }
    }
}

/// A text given either as utterances or as backslash-tiered interlinear
/// source in `igt`.
#[derive(Clone, Debug, Deserialize)]
pub struct TextInput {
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub utterances: Vec<UtteranceInput>,
    #[serde(default)]
    pub igt: Option<String>,
    #[serde(default)]
    pub rev: Option<String>,
}

fn prefixed(report: ValidationReport, prefix: &str) -> ValidationReport {
    ValidationReport {
        ok: report.ok,
        issues: report
            .issues
            .into_iter()
            .map(|i| Issue { path: format!("{prefix}/{}", i.path), ..i })
            .collect(),
    }
}

impl Service {
    fn check_media(&self, project: &Id, media: &[Id]) -> ApiResult<()> {
        for id in media {
            match self.store.get(Collection::Assets, id.as_str()) {
                Ok(s) if decode::<MediaAsset>(&s)?.project_id == *project => {}
                Ok(_) | Err(StoreError::NotFound) => {
                    return Err(ApiError::unprocessable(format!("media {id} is not an asset of this project")))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(())
    }

    // ---- entries

    pub fn list_entries(
        &self,
        access: &Access,
        prefix: Option<&str>,
        pos: Option<&str>,
        offset: usize,
        limit: usize,
    ) -> ApiResult<Page<LexicalEntry>> {
        let mut filter =
            QueryFilter::project(access.project.id.as_str()).collated(&access.project.alphabet).page(offset, limit);
        if let Some(p) = prefix.filter(|p| !p.is_empty()) {
            filter.headword_prefix = Some(nfc(p));
        }
        if let Some(pos) = pos.filter(|p| !p.is_empty()) {
            filter = filter.field("pos", pos);
        }
        let result = self.store.query(Collection::Entries, &filter)?;
        let items = result.documents.iter().map(decode).collect::<ApiResult<_>>()?;
        Ok(Page { items, total: result.total, offset, limit })
    }

    pub fn entry(&self, access: &Access, id: &str) -> ApiResult<LexicalEntry> {
        let e: LexicalEntry = self.get_doc(Collection::Entries, parse_id(id, "entry")?.as_str(), "entry")?;
        if e.project_id != access.project.id {
            return Err(ApiError::not_found("entry"));
        }
        Ok(e)
    }

    fn save_entry(&self, access: &Access, mut entry: LexicalEntry, rev: Option<&str>) -> ApiResult<LexicalEntry> {
        entry.headword = nfc(&entry.headword);
        let report = validate_entry(&entry, &access.project);
        if !report.ok {
            return Err(ApiError::validation(&report));
        }
        self.check_media(&access.project.id, &entry.media)?;
        entry.rev = self.store.put(Collection::Entries, &document(&entry)?, rev)?;
        Ok(entry)
    }

    pub fn create_entry(&self, access: &Access, input: EntryInput) -> ApiResult<LexicalEntry> {
        let now = Utc::now();
        let entry = LexicalEntry {
            id: Id::generate(),
            project_id: access.project.id.clone(),
            headword: input.headword,
            homonym_no: input.homonym_no,
            pos: input.pos,
            senses: input.senses,
            variants: input.variants,
            media: input.media,
            extras: input.extras,
            created_at: now,
            modified_at: now,
            rev: String::new(),
        };
        self.save_entry(access, entry, None)
    }

    /// Bulk insert used by imports; entries are validated the same way.
    pub(crate) fn insert_entry(&self, access: &Access, entry: LexicalEntry) -> ApiResult<LexicalEntry> {
        self.save_entry(access, entry, None)
    }

    pub fn update_entry(&self, access: &Access, id: &str, input: EntryInput) -> ApiResult<LexicalEntry> {
        let current = self.entry(access, id)?;
        let entry = LexicalEntry {
            headword: input.headword,
            homonym_no: input.homonym_no,
            pos: input.pos,
            senses: input.senses,
            variants: input.variants,
            media: input.media,
            extras: input.extras,
            modified_at: Utc::now(),
            ..current
        };
        self.save_entry(access, entry, input.rev.as_deref())
    }

    pub fn delete_entry(&self, access: &Access, id: &str, rev: Option<&str>) -> ApiResult<()> {
        let e = self.entry(access, id)?;
        self.store.delete(Collection::Entries, e.id.as_str(), rev.unwrap_or(""))?;
        Ok(())
    }

    pub fn all_entries(&self, project: &Id) -> ApiResult<Vec<LexicalEntry>> {
        self.query_docs(Collection::Entries, &QueryFilter::project(project.as_str()))
    }

    // ---- texts

    pub fn list_texts(&self, access: &Access, offset: usize, limit: usize) -> ApiResult<Page<IgtDocument>> {
        let filter = QueryFilter::project(access.project.id.as_str()).page(offset, limit);
        let result = self.store.query(Collection::Texts, &filter)?;
        let items = result.documents.iter().map(decode).collect::<ApiResult<_>>()?;
        Ok(Page { items, total: result.total, offset, limit })
    }

    pub fn text(&self, access: &Access, id: &str) -> ApiResult<IgtDocument> {
        let t: IgtDocument = self.get_doc(Collection::Texts, parse_id(id, "text")?.as_str(), "text")?;
        if t.project_id != access.project.id {
            return Err(ApiError::not_found("text"));
        }
        Ok(t)
    }

    pub fn all_texts(&self, project: &Id) -> ApiResult<Vec<IgtDocument>> {
        self.query_docs(Collection::Texts, &QueryFilter::project(project.as_str()))
    }

    fn utterances_from(&self, input: &mut TextInput) -> ApiResult<Vec<Utterance>> {
        let mut utterances: Vec<Utterance> = std::mem::take(&mut input.utterances).into_iter().map(UtteranceInput::into_utterance).collect();
        if let Some(src) = input.igt.take() {
            let (doc, _) = life_core::ingest::parse_igt_text(&src, &Id::generate())?;
            utterances.extend(doc.utterances);
        }
        Ok(utterances)
    }

    /// Writes the text after validating every utterance, then brings the
    /// project's glosser up to date with the change.
    fn save_text(&self, access: &Access, mut text: IgtDocument, previous: Option<&IgtDocument>, rev: Option<&str>) -> ApiResult<IgtDocument> {
        let mut issues = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, u) in text.utterances.iter().enumerate() {
            issues.extend(prefixed(validate_utterance(u), &format!("utterances/{i}")).issues);
            if !seen.insert(u.id.clone()) {
                issues.push(Issue {
                    severity: life_core::Severity::Error,
                    path: format!("utterances/{i}/id"),
                    message: "duplicate utterance id".into(),
                });
            }
            if let Some(m) = &u.media_ref {
                self.check_media(&access.project.id, std::slice::from_ref(&m.asset_id))?;
            }
        }
        let report = ValidationReport { ok: !issues.iter().any(|i| i.severity == life_core::Severity::Error), issues };
        if !report.ok {
            return Err(ApiError::validation(&report));
        }
        text.rev = self.store.put(Collection::Texts, &document(&text)?, rev)?;
        let before = previous.map_or(&[][..], |p| p.utterances.as_slice());
        self.apply_corpus_change(&access.project.id, before, &text.utterances);
        Ok(text)
    }

    pub fn create_text(&self, access: &Access, mut input: TextInput) -> ApiResult<IgtDocument> {
        let utterances = self.utterances_from(&mut input)?;
        let text = IgtDocument {
            id: Id::generate(),
            project_id: access.project.id.clone(),
            title: input.title,
            utterances,
            rev: String::new(),
        };
        self.save_text(access, text, None, None)
    }

    pub(crate) fn insert_text(&self, access: &Access, text: IgtDocument) -> ApiResult<IgtDocument> {
        self.save_text(access, text, None, None)
    }

    pub fn update_text(&self, access: &Access, id: &str, mut input: TextInput) -> ApiResult<IgtDocument> {
        let current = self.text(access, id)?;
        let utterances = self.utterances_from(&mut input)?;
        let text = IgtDocument { title: input.title, utterances, ..current.clone() };
        self.save_text(access, text, Some(&current), input.rev.as_deref())
    }

    pub fn delete_text(&self, access: &Access, id: &str, rev: Option<&str>) -> ApiResult<()> {
        let t = self.text(access, id)?;
        self.store.delete(Collection::Texts, t.id.as_str(), rev.unwrap_or(""))?;
        self.apply_corpus_change(&access.project.id, &t.utterances, &[]);
        Ok(())
    }

    // ---- utterances inside a text

    pub fn utterance(&self, access: &Access, text_id: &str, utt_id: &str) -> ApiResult<(IgtDocument, usize)> {
        let text = self.text(access, text_id)?;
        let uid = parse_id(utt_id, "utterance")?;
        let i = text.utterances.iter().position(|u| u.id == uid).ok_or_else(|| ApiError::not_found("utterance"))?;
        Ok((text, i))
    }

    pub fn append_utterance(&self, access: &Access, text_id: &str, input: UtteranceInput) -> ApiResult<(IgtDocument, Utterance)> {
        let current = self.text(access, text_id)?;
        let rev = input.rev.clone();
        let utt = UtteranceInput { id: None, ..input }.into_utterance();
        let mut text = current.clone();
        text.utterances.push(utt.clone());
        let saved = self.save_text(access, text, Some(&current), rev.as_deref())?;
        Ok((saved, utt))
    }

    pub fn update_utterance(
        &self,
        access: &Access,
        text_id: &str,
        utt_id: &str,
        input: UtteranceInput,
    ) -> ApiResult<(IgtDocument, Utterance)> {
        let (current, i) = self.utterance(access, text_id, utt_id)?;
        let rev = input.rev.clone();
        let utt = UtteranceInput { id: Some(current.utterances[i].id.clone()), ..input }.into_utterance();
        let mut text = current.clone();
        text.utterances[i] = utt.clone();
        let saved = self.save_text(access, text, Some(&current), rev.as_deref())?;
        Ok((saved, utt))
    }

    pub fn delete_utterance(&self, access: &Access, text_id: &str, utt_id: &str, rev: Option<&str>) -> ApiResult<IgtDocument> {
        let (current, i) = self.utterance(access, text_id, utt_id)?;
        let mut text = current.clone();
        text.utterances.remove(i);
        self.save_text(access, text, Some(&current), rev)
    }

    // ---- media

    pub fn upload_media(&self, access: &Access, filename: &str, mime: &str, bytes: &[u8]) -> ApiResult<MediaAsset> {
        if bytes.len() > self.config.max_upload_bytes {
            return Err(ApiError::new(axum::http::StatusCode::PAYLOAD_TOO_LARGE, "too_large", "upload exceeds the size limit"));
        }
        let kind = MediaKind::from_mime(mime).ok_or_else(|| {
            ApiError::new(
                axum::http::StatusCode::UNSUPPORTED_MEDIA_TYPE,
                "unsupported_media_type",
                format!("{mime:?} is not an audio, video or image type"),
            )
        })?;
        let sha256 = self.store.put_blob(bytes)?;
        let mut asset = MediaAsset {
            id: Id::generate(),
            project_id: access.project.id.clone(),
            kind,
            mime: mime.to_owned(),
            byte_size: bytes.len() as u64,
            sha256,
            filename: filename.to_owned(),
            rev: String::new(),
        };
        asset.rev = self.store.put(Collection::Assets, &document(&asset)?, None)?;
        Ok(asset)
    }

    pub fn list_media(&self, access: &Access) -> ApiResult<Vec<MediaAsset>> {
        self.query_docs(Collection::Assets, &QueryFilter::project(access.project.id.as_str()))
    }

    /// Blob bytes and media type, if some project holding the blob lets
    /// the caller read.
    pub fn media_blob(&self, token: &str, sha256: &str) -> ApiResult<(Vec<u8>, String)> {
        let user = self.session_user(token)?;
        let assets: Vec<MediaAsset> = self.query_docs(Collection::Assets, &QueryFilter::default().field("sha256", sha256))?;
        if assets.is_empty() {
            return Err(ApiError::not_found("media"));
        }
        let readable = assets.iter().find(|a| {
            self.project(&a.project_id).ok().and_then(|p| p.role_of(&user)).is_some_and(|r| permits(r, Action::Read))
        });
        let asset = readable.ok_or_else(ApiError::forbidden)?;
        let bytes = match self.store.get_blob(sha256) {
            Ok(b) => b,
            Err(StoreError::NotFound) => return Err(ApiError::not_found("media")),
            Err(e) => return Err(e.into()),
        };
        Ok((bytes, asset.mime.clone()))
    }
}
