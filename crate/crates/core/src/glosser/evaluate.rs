use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{suggest, GlossModel, GlosserError};
use crate::model::Utterance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub morph_gloss_accuracy: f64,
    pub seg_precision: f64,
    pub seg_recall: f64,
    pub seg_f1: f64,
    pub n_utterances: usize,
}

/// Harmonic mean, 0 when both inputs are 0.
pub(crate) fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Each analysed word is re-segmented from the concatenation of its gold
/// forms. Boundary precision and recall are pooled over all words (1.0
/// when there is nothing to predict or recover). A gold morph counts as
/// correct only when its exact span was recovered with the gold gloss.
pub fn evaluate(model: &GlossModel, heldout: &[Utterance]) -> Result<Metrics, GlosserError> {
    let mut gold_morphs = 0usize;
    let mut correct = 0usize;
    let (mut tp, mut n_pred, mut n_gold) = (0usize, 0usize, 0usize);
    let mut n_utterances = 0;

    for utt in heldout.iter().filter(|u| u.glossed) {
        n_utterances += 1;
        for word in utt.words.iter().filter(|w| !w.morphs.is_empty()) {
            let text: String = word.morphs.iter().map(|m| m.form.as_str()).collect();
            let gold = spans(word.morphs.iter().map(|m| m.form.chars().count()));
            let suggestion = suggest(model, &text);
            let pred = spans(suggestion.morphs.iter().map(|m| m.form.chars().count()));

            let gold_bounds: BTreeSet<usize> = gold.iter().skip(1).map(|s| s.0).collect();
            let pred_bounds: BTreeSet<usize> = pred.iter().skip(1).map(|s| s.0).collect();
            tp += gold_bounds.intersection(&pred_bounds).count();
            n_gold += gold_bounds.len();
            n_pred += pred_bounds.len();

            for (span, morph) in gold.iter().zip(&word.morphs) {
                gold_morphs += 1;
                if let Some(k) = pred.iter().position(|p| p == span) {
                    if suggestion.morphs[k].gloss == morph.gloss {
                        correct += 1;
                    }
                }
            }
        }
    }
    if gold_morphs == 0 {
        return Err(GlosserError::EmptyHeldout);
    }
    let ratio = |a: usize, b: usize| if b == 0 { 1.0 } else { a as f64 / b as f64 };
    let seg_precision = ratio(tp, n_pred);
    let seg_recall = ratio(tp, n_gold);
    Ok(Metrics {
        morph_gloss_accuracy: correct as f64 / gold_morphs as f64,
        seg_precision,
        seg_recall,
        seg_f1: f1(seg_precision, seg_recall),
        n_utterances,
    })
}

/// `(start, end)` character spans for consecutive lengths.
fn spans(lengths: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut at = 0;
    lengths
        .map(|len| {
            let s = (at, at + len);
            at += len;
            s
        })
        .collect()
}
