use serde::{Deserialize, Serialize};

use crate::model::{is_valid_slug, normalize_ws, LexicalEntry, Project, Role, Utterance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }
}

#[derive(Default)]
struct Collector {
    issues: Vec<Issue>,
}

impl Collector {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue { severity: Severity::Error, path: path.into(), message: message.into() });
    }

    fn warn(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue { severity: Severity::Warning, path: path.into(), message: message.into() });
    }

    fn finish(self) -> ValidationReport {
        let ok = !self.issues.iter().any(|i| i.severity == Severity::Error);
        ValidationReport { ok, issues: self.issues }
    }
}

pub fn validate_entry(entry: &LexicalEntry, project: &Project) -> ValidationReport {
    let mut c = Collector::default();
    if entry.project_id != project.id {
        c.error("project_id", "entry belongs to a different project");
    }
    if entry.headword.trim().is_empty() {
        c.error("headword", "headword is empty");
    }
    if entry.homonym_no < 1 {
        c.error("homonym_no", "homonym number must be at least 1");
    }
    if entry.pos.is_empty() {
        c.warn("pos", "no part of speech");
    } else if !project.pos_inventory.contains(&entry.pos) {
        c.warn("pos", format!("part of speech {:?} is not in the project inventory", entry.pos));
    }
    if entry.senses.is_empty() {
        c.error("senses", "entry has no senses");
    }
    for (i, sense) in entry.senses.iter().enumerate() {
        if sense.sense_no != i as u32 + 1 {
            c.error(format!("senses/{i}/sense_no"), format!("expected sense number {}, found {}", i + 1, sense.sense_no));
        }
        let no_definition = sense.definition.as_deref().is_none_or(|d| d.trim().is_empty());
        if sense.gloss.trim().is_empty() && no_definition {
            c.error(format!("senses/{i}"), "sense has neither gloss nor definition");
        }
    }
    for (i, variant) in entry.variants.iter().enumerate() {
        if variant.trim().is_empty() {
            c.warn(format!("variants/{i}"), "empty variant");
        }
    }
    for (i, extra) in entry.extras.iter().enumerate() {
        if extra.marker.is_empty() {
            c.error(format!("extras/{i}/marker"), "empty marker");
        }
    }
    c.finish()
}

pub fn validate_utterance(utt: &Utterance) -> ValidationReport {
    let mut c = Collector::default();
    if utt.phrase.trim().is_empty() {
        c.error("phrase", "phrase is empty");
    }
    for (i, word) in utt.words.iter().enumerate() {
        if word.surface.is_empty() {
            c.error(format!("words/{i}/surface"), "empty word");
        } else if word.surface.chars().any(char::is_whitespace) {
            c.error(format!("words/{i}/surface"), "word contains whitespace");
        }
        if utt.glossed && word.morphs.is_empty() {
            c.error(format!("words/{i}/morphs"), "glossed utterance has an unanalyzed word");
        }
        for (j, morph) in word.morphs.iter().enumerate() {
            let path = format!("words/{i}/morphs/{j}");
            let stripped = morph.form.trim_matches(|ch| ch == '-' || ch == '=');
            if stripped.is_empty() {
                c.error(format!("{path}/form"), "empty morph form");
            } else if stripped.len() != morph.form.len() {
                c.error(format!("{path}/form"), "morph form carries a separator; position belongs in the type field");
            }
            if morph.form.chars().any(char::is_whitespace) {
                c.error(format!("{path}/form"), "morph form contains whitespace");
            }
            if utt.glossed && morph.gloss.trim().is_empty() {
                c.error(format!("{path}/gloss"), "glossed utterance has a morph without gloss");
            }
        }
    }
    let rejoined = utt.words.iter().map(|w| w.surface.as_str()).collect::<Vec<_>>().join(" ");
    if normalize_ws(&rejoined) != normalize_ws(&utt.phrase) {
        c.error("words", format!("words rejoin to {rejoined:?}, which differs from the phrase"));
    }
    if let Some(t) = &utt.translation {
        if !is_language_tag(&t.lang) {
            c.error("translation/lang", format!("{:?} is not a language tag", t.lang));
        }
    }
    if let Some(m) = &utt.media_ref {
        if m.end_ms <= m.start_ms {
            c.error("media_ref", "media span must end after it starts");
        }
    }
    c.finish()
}

pub fn validate_project(project: &Project) -> ValidationReport {
    let mut c = Collector::default();
    if project.name.trim().is_empty() {
        c.error("name", "project name is empty");
    }
    if !is_valid_slug(&project.slug) {
        c.error("slug", format!("{:?} is not a valid slug", project.slug));
    }
    if project.language_code.len() != 3 || !project.language_code.bytes().all(|b| b.is_ascii_lowercase()) {
        c.error("language_code", "language code must be three lowercase letters");
    }
    for (i, unit) in project.alphabet.iter().enumerate() {
        if unit.is_empty() {
            c.error(format!("alphabet/{i}"), "empty alphabet unit");
        } else if project.alphabet[..i].contains(unit) {
            c.error(format!("alphabet/{i}"), format!("duplicate alphabet unit {unit:?}"));
        }
    }
    if !project.members.values().any(|r| *r == Role::Owner) {
        c.error("members", "project needs at least one owner");
    }
    if !is_language_tag(&project.metalanguage) {
        c.error("metalanguage", "metalanguage must be a language tag");
    }
    c.finish()
}

/// Loose BCP-47 shape check: alphanumeric subtags of 1..=8 characters
/// separated by `-`, primary subtag alphabetic.
pub fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary_ok = parts
        .next()
        .is_some_and(|p| (2..=8).contains(&p.len()) && p.bytes().all(|b| b.is_ascii_alphabetic()));
    primary_ok && parts.all(|p| (1..=8).contains(&p.len()) && p.bytes().all(|b| b.is_ascii_alphanumeric()))
}
