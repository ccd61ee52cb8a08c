//! Count-based auto-glosser.
//!
//! A [`GlossModel`] tallies `(form, gloss)` pairs and morph positions from
//! glossed utterances, seeded with one root observation per lexicon entry.
//! Unseen words are segmented into known forms by dynamic programming and
//! each segment gets its majority gloss. Models are plain values: every
//! operation returns a new snapshot.

mod evaluate;
mod exchange;
mod segment;
mod sketch;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::id::Id;
use crate::model::{LexicalEntry, MorphType, Utterance};

pub use evaluate::{evaluate, Metrics};
pub use exchange::{export_training_data, import_predictions, PredictionOverlay};
pub use segment::segment;
pub use sketch::{sketch_summary, AffixRow, SketchReport};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GlosserError {
    #[error("cannot remove {form:?}/{gloss:?}: not present in the model")]
    UnderflowRemoval { form: String, gloss: String },
    #[error("utterance is not glossed")]
    NotGlossed,
    #[error("held-out set has no glossed morphs")]
    EmptyHeldout,
    #[error("line {line}: {message}")]
    SchemaViolation { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionCounts {
    pub prefix: u64,
    pub root: u64,
    pub suffix: u64,
    pub clitic: u64,
}

impl PositionCounts {
    fn slot(&mut self, kind: MorphType) -> &mut u64 {
        match kind {
            MorphType::Prefix => &mut self.prefix,
            MorphType::Root => &mut self.root,
            MorphType::Suffix => &mut self.suffix,
            MorphType::Clitic => &mut self.clitic,
        }
    }

    pub fn get(&self, kind: MorphType) -> u64 {
        match kind {
            MorphType::Prefix => self.prefix,
            MorphType::Root => self.root,
            MorphType::Suffix => self.suffix,
            MorphType::Clitic => self.clitic,
        }
    }

    pub fn total(&self) -> u64 {
        self.prefix + self.root + self.suffix + self.clitic
    }

    /// Most frequent position; ties go root, suffix, prefix, clitic.
    pub fn majority(&self) -> MorphType {
        let order = [MorphType::Root, MorphType::Suffix, MorphType::Prefix, MorphType::Clitic];
        let mut best = MorphType::Root;
        for kind in order {
            if self.get(kind) > self.get(best) {
                best = kind;
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlossModel {
    pub project_id: Id,
    pub version: u64,
    /// Glossed utterances folded into the tables.
    pub trained_on: u64,
    pub morph_counts: BTreeMap<String, BTreeMap<String, u64>>,
    pub position_counts: BTreeMap<String, PositionCounts>,
    pub total_morph_tokens: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateOp {
    Add,
    Remove,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuggestedMorph {
    pub form: String,
    #[serde(rename = "type")]
    pub kind: MorphType,
    pub gloss: String,
    pub confidence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlossSuggestion {
    pub word: String,
    pub morphs: Vec<SuggestedMorph>,
    /// Sum of `ln(count + 1)` over the segments.
    pub score: f64,
}

impl GlossModel {
    pub fn empty(project_id: Id) -> GlossModel {
        GlossModel {
            project_id,
            version: 0,
            trained_on: 0,
            morph_counts: BTreeMap::new(),
            position_counts: BTreeMap::new(),
            total_morph_tokens: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.morph_counts.is_empty()
    }

    /// Observations of `form` over all glosses.
    pub fn count(&self, form: &str) -> u64 {
        self.morph_counts.get(form).map_or(0, |g| g.values().sum())
    }

    /// Same counts, ignoring version and training size.
    pub fn same_tables(&self, other: &GlossModel) -> bool {
        self.morph_counts == other.morph_counts
            && self.position_counts == other.position_counts
            && self.total_morph_tokens == other.total_morph_tokens
    }

    fn observe(&mut self, form: &str, gloss: &str, kind: MorphType) {
        *self.morph_counts.entry(form.to_owned()).or_default().entry(gloss.to_owned()).or_default() += 1;
        *self.position_counts.entry(form.to_owned()).or_default().slot(kind) += 1;
        self.total_morph_tokens += 1;
    }

    fn forget(&mut self, form: &str, gloss: &str, kind: MorphType) {
        let glosses = self.morph_counts.get_mut(form).expect("checked");
        let n = glosses.get_mut(gloss).expect("checked");
        *n -= 1;
        if *n == 0 {
            glosses.remove(gloss);
        }
        if glosses.is_empty() {
            self.morph_counts.remove(form);
        }
        let pos = self.position_counts.get_mut(form).expect("checked");
        *pos.slot(kind) -= 1;
        if pos.total() == 0 {
            self.position_counts.remove(form);
        }
        self.total_morph_tokens -= 1;
    }

    /// Majority gloss (ties to the smallest string) and its share.
    pub fn best_gloss(&self, form: &str) -> Option<(&str, f64)> {
        let glosses = self.morph_counts.get(form)?;
        let total: u64 = glosses.values().sum();
        let (gloss, n) = glosses.iter().fold(None::<(&String, u64)>, |best, (g, &n)| match best {
            Some((_, m)) if m >= n => best,
            _ => Some((g, n)),
        })?;
        Some((gloss.as_str(), n as f64 / total as f64))
    }

    pub fn majority_type(&self, form: &str) -> MorphType {
        self.position_counts.get(form).map_or(MorphType::Root, PositionCounts::majority)
    }
}

/// Tallies every morph of the glossed utterances plus one root observation
/// per lexicon entry (headword, first-sense gloss). Entries with an empty
/// first gloss or a multiword headword are not seeded.
pub fn train(project_id: Id, corpus: &[Utterance], lexicon: &[LexicalEntry]) -> GlossModel {
    let mut model = GlossModel::empty(project_id);
    for utt in corpus.iter().filter(|u| u.glossed) {
        for m in utt.morphs() {
            model.observe(&m.form, &m.gloss, m.kind);
        }
        model.trained_on += 1;
    }
    for entry in lexicon {
        let Some(sense) = entry.senses.first() else { continue };
        if sense.gloss.trim().is_empty() || entry.headword.chars().any(char::is_whitespace) {
            continue;
        }
        model.observe(&entry.headword, sense.gloss.trim(), MorphType::Root);
    }
    model.version = u64::from(!model.is_empty());
    model
}

/// Adds or removes one utterance's morphs. Removal checks every count
/// first so a failed call leaves no partial change.
pub fn update(model: &GlossModel, utt: &Utterance, op: UpdateOp) -> Result<GlossModel, GlosserError> {
    if !utt.glossed {
        return Err(GlosserError::NotGlossed);
    }
    let mut next = model.clone();
    match op {
        UpdateOp::Add => {
            for m in utt.morphs() {
                next.observe(&m.form, &m.gloss, m.kind);
            }
            next.trained_on += 1;
        }
        UpdateOp::Remove => {
            let mut need: BTreeMap<(&str, &str), u64> = BTreeMap::new();
            let mut need_pos: BTreeMap<(&str, MorphType), u64> = BTreeMap::new();
            for m in utt.morphs() {
                *need.entry((&m.form, &m.gloss)).or_default() += 1;
                *need_pos.entry((&m.form, m.kind)).or_default() += 1;
            }
            let underflow = |form: &str, gloss: &str| GlosserError::UnderflowRemoval { form: form.into(), gloss: gloss.into() };
            for ((form, gloss), n) in &need {
                let have = model.morph_counts.get(*form).and_then(|g| g.get(*gloss)).copied().unwrap_or(0);
                if have < *n {
                    return Err(underflow(form, gloss));
                }
            }
            for ((form, kind), n) in &need_pos {
                let have = model.position_counts.get(*form).map_or(0, |p| p.get(*kind));
                if have < *n {
                    return Err(underflow(form, kind.as_str()));
                }
            }
            if next.trained_on == 0 {
                let first = utt.morphs().next();
                return Err(underflow(first.map_or("", |m| &m.form), first.map_or("", |m| &m.gloss)));
            }
            for m in utt.morphs() {
                next.forget(&m.form, &m.gloss, m.kind);
            }
            next.trained_on -= 1;
        }
    }
    next.version = if next.is_empty() { 0 } else { model.version + 1 };
    Ok(next)
}

/// Segment `word`, then give each segment its majority gloss and position.
/// Unknown segments get an empty gloss and confidence 0.
pub fn suggest(model: &GlossModel, word: &str) -> GlossSuggestion {
    let word = crate::model::nfc(word);
    let segments = segment(model, &word);
    let mut score = 0.0;
    let morphs = segments
        .into_iter()
        .map(|(form, kind)| {
            let count = model.count(&form);
            score += ((count + 1) as f64).ln();
            let (gloss, confidence) = model.best_gloss(&form).map_or((String::new(), 0.0), |(g, c)| (g.to_owned(), c));
            SuggestedMorph { form, kind, gloss, confidence }
        })
        .collect();
    GlossSuggestion { word, morphs, score }
}
