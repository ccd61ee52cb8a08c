use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{suggest, GlossModel, GlossSuggestion, GlosserError, SuggestedMorph};
use crate::model::{nfc, MorphType, Utterance};

#[derive(Serialize)]
struct TrainingLine<'a> {
    word: &'a str,
    morphs: Vec<TrainingMorph<'a>>,
}

#[derive(Serialize)]
struct TrainingMorph<'a> {
    form: &'a str,
    #[serde(rename = "type")]
    kind: MorphType,
    gloss: &'a str,
}

#[derive(Deserialize)]
struct PredictionLine {
    word: String,
    morphs: Vec<PredictionMorph>,
}

#[derive(Deserialize)]
struct PredictionMorph {
    form: String,
    #[serde(rename = "type")]
    kind: MorphType,
    gloss: String,
    confidence: Option<f64>,
}

/// One JSON object per word token of the glossed utterances.
pub fn export_training_data(corpus: &[Utterance]) -> Vec<u8> {
    let mut out = Vec::new();
    for utt in corpus.iter().filter(|u| u.glossed) {
        for w in &utt.words {
            let line = TrainingLine {
                word: &w.surface,
                morphs: w
                    .morphs
                    .iter()
                    .map(|m| TrainingMorph { form: &m.form, kind: m.kind, gloss: &m.gloss })
                    .collect(),
            };
            serde_json::to_writer(&mut out, &line).expect("serializing to memory");
            out.push(b'\n');
        }
    }
    out
}

/// Parses externally produced predictions. Blank lines are skipped; a
/// missing confidence means 1.0.
pub fn import_predictions(bytes: &[u8]) -> Result<Vec<GlossSuggestion>, GlosserError> {
    let mut out = Vec::new();
    for (i, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = i + 1;
        let violation = |message: String| GlosserError::SchemaViolation { line, message };
        let text = std::str::from_utf8(raw).map_err(|e| violation(e.to_string()))?;
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let parsed: PredictionLine = serde_json::from_str(text).map_err(|e| violation(e.to_string()))?;
        if parsed.word.trim().is_empty() {
            return Err(violation("empty word".into()));
        }
        let mut morphs = Vec::with_capacity(parsed.morphs.len());
        for m in parsed.morphs {
            let confidence = m.confidence.unwrap_or(1.0);
            if !(0.0..=1.0).contains(&confidence) {
                return Err(violation(format!("confidence {confidence} outside [0, 1]")));
            }
            morphs.push(SuggestedMorph { form: nfc(&m.form), kind: m.kind, gloss: m.gloss, confidence });
        }
        out.push(GlossSuggestion { word: nfc(&parsed.word), morphs, score: 0.0 });
    }
    Ok(out)
}

/// Imported predictions keyed by word; they win over the built-in model.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PredictionOverlay {
    by_word: BTreeMap<String, GlossSuggestion>,
}

impl PredictionOverlay {
    /// Later predictions for the same word replace earlier ones.
    pub fn new(predictions: Vec<GlossSuggestion>) -> PredictionOverlay {
        PredictionOverlay { by_word: predictions.into_iter().map(|p| (p.word.clone(), p)).collect() }
    }

    pub fn merge(&mut self, predictions: Vec<GlossSuggestion>) {
        self.by_word.extend(predictions.into_iter().map(|p| (p.word.clone(), p)));
    }

    pub fn get(&self, word: &str) -> Option<&GlossSuggestion> {
        self.by_word.get(&nfc(word))
    }

    /// Stored predictions ordered by word.
    pub fn predictions(&self) -> impl Iterator<Item = &GlossSuggestion> {
        self.by_word.values()
    }

    pub fn len(&self) -> usize {
        self.by_word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_word.is_empty()
    }

    pub fn suggest(&self, model: &GlossModel, word: &str) -> GlossSuggestion {
        self.get(word).cloned().unwrap_or_else(|| suggest(model, word))
    }
}
