use std::sync::Arc;

use life_core::glosser::{
    evaluate, import_predictions, train, update, GlossModel, GlossSuggestion, Metrics, PredictionOverlay, SketchReport,
    UpdateOp,
};
use life_core::store::{Collection, StoreError};
use life_core::{Id, Utterance};
use serde::{Deserialize, Serialize};

use super::{decode, document, Access, Service};
use crate::error::ApiResult;

/// A model with its imported predictions. Readers hold an `Arc` to one
/// snapshot; writers build a new one and swap it in.
#[derive(Clone, Debug, PartialEq)]
pub struct GlossSnapshot {
    pub model: GlossModel,
    pub overlay: PredictionOverlay,
}

#[derive(Serialize, Deserialize)]
struct ModelRecord {
    id: String,
    project_id: Id,
    model: GlossModel,
    predictions: Vec<GlossSuggestion>,
}

fn model_doc_id(project: &Id) -> String {
    format!("glosser-{project}")
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelInfo {
    pub version: u64,
    pub trained_on: u64,
    pub total_morph_tokens: u64,
    pub forms: usize,
    pub predictions: usize,
}

impl Service {
    /// Current snapshot, loaded from the store on first use.
    pub fn gloss_snapshot(&self, project: &Id) -> ApiResult<Arc<GlossSnapshot>> {
        if let Some(s) = self.glossers.read().get(project) {
            return Ok(s.clone());
        }
        let loaded = match self.store.get(Collection::Models, &model_doc_id(project)) {
            Ok(stored) => {
                let r: ModelRecord = decode(&stored)?;
                GlossSnapshot { model: r.model, overlay: PredictionOverlay::new(r.predictions) }
            }
            Err(StoreError::NotFound) => {
                GlossSnapshot { model: GlossModel::empty(project.clone()), overlay: PredictionOverlay::default() }
            }
            Err(e) => return Err(e.into()),
        };
        let mut map = self.glossers.write();
        Ok(map.entry(project.clone()).or_insert_with(|| Arc::new(loaded)).clone())
    }

    /// Persists `next` and makes it current. Callers hold `gloss_writes`.
    fn install(&self, project: &Id, next: GlossSnapshot) -> ApiResult<Arc<GlossSnapshot>> {
        let record = ModelRecord {
            id: model_doc_id(project),
            project_id: project.clone(),
            model: next.model.clone(),
            predictions: next.overlay.predictions().cloned().collect(),
        };
        let rev = match self.store.get(Collection::Models, &record.id) {
            Ok(s) => Some(s.rev),
            Err(StoreError::NotFound) => None,
            Err(e) => return Err(e.into()),
        };
        self.store.put(Collection::Models, &document(&record)?, rev.as_deref())?;
        let next = Arc::new(next);
        self.glossers.write().insert(project.clone(), next.clone());
        Ok(next)
    }

    pub fn model_info(&self, project: &Id) -> ApiResult<ModelInfo> {
        let s = self.gloss_snapshot(project)?;
        Ok(ModelInfo {
            version: s.model.version,
            trained_on: s.model.trained_on,
            total_morph_tokens: s.model.total_morph_tokens,
            forms: s.model.morph_counts.len(),
            predictions: s.overlay.len(),
        })
    }

    pub fn suggest(&self, access: &Access, words: &[String]) -> ApiResult<(u64, Vec<GlossSuggestion>)> {
        let snap = self.gloss_snapshot(&access.project.id)?;
        Ok((snap.model.version, words.iter().map(|w| snap.overlay.suggest(&snap.model, w)).collect()))
    }

    fn corpus(&self, project: &Id) -> ApiResult<Vec<Utterance>> {
        Ok(self.all_texts(project)?.into_iter().flat_map(|t| t.utterances).collect())
    }

    /// Rebuilds the model from every glossed utterance and the lexicon.
    pub fn retrain(&self, project: &Id) -> ApiResult<u64> {
        let _guard = self.gloss_writes.lock();
        let previous = self.gloss_snapshot(project)?;
        let corpus = self.corpus(project)?;
        let lexicon = self.all_entries(project)?;
        let mut model = train(project.clone(), &corpus, &lexicon);
        model.version = if model.is_empty() { 0 } else { previous.model.version + 1 };
        let version = model.version;
        self.install(project, GlossSnapshot { model, overlay: previous.overlay.clone() })?;
        Ok(version)
    }

    pub fn import_gloss_predictions(&self, project: &Id, bytes: &[u8]) -> ApiResult<usize> {
        let predictions = import_predictions(bytes)?;
        let n = predictions.len();
        let _guard = self.gloss_writes.lock();
        let current = self.gloss_snapshot(project)?;
        let mut overlay = current.overlay.clone();
        overlay.merge(predictions);
        self.install(project, GlossSnapshot { model: current.model.clone(), overlay })?;
        Ok(n)
    }

    /// Incremental upkeep after a text write. A failure (the model no longer
    /// matching the stored texts) leaves the model as it was until the next
    /// retrain.
    pub(crate) fn apply_corpus_change(&self, project: &Id, before: &[Utterance], after: &[Utterance]) {
        let removed: Vec<&Utterance> =
            before.iter().filter(|u| u.glossed && !after.iter().any(|a| a.id == u.id && a == *u)).collect();
        let added: Vec<&Utterance> =
            after.iter().filter(|u| u.glossed && !before.iter().any(|b| b.id == u.id && b == *u)).collect();
        if removed.is_empty() && added.is_empty() {
            return;
        }
        let _guard = self.gloss_writes.lock();
        let Ok(current) = self.gloss_snapshot(project) else { return };
        let step = removed
            .iter()
            .map(|u| (*u, UpdateOp::Remove))
            .chain(added.iter().map(|u| (*u, UpdateOp::Add)))
            .try_fold(current.model.clone(), |m, (u, op)| update(&m, u, op));
        match step {
            Ok(model) => {
                if let Err(e) = self.install(project, GlossSnapshot { model, overlay: current.overlay.clone() }) {
                    tracing::warn!(%project, "could not persist glosser update: {e}");
                }
            }
            Err(e) => tracing::warn!(%project, "glosser update skipped, retrain to resynchronize: {e}"),
        }
    }

    /// Trains on all but every `every`-th glossed utterance and scores the rest.
    pub fn evaluate_heldout(&self, project: &Id, every: usize) -> ApiResult<Metrics> {
        let every = every.max(2);
        let glossed: Vec<Utterance> = self.corpus(project)?.into_iter().filter(|u| u.glossed).collect();
        let (heldout, training): (Vec<_>, Vec<_>) =
            glossed.into_iter().enumerate().partition(|(i, _)| (i + 1) % every == 0);
        let training: Vec<Utterance> = training.into_iter().map(|(_, u)| u).collect();
        let heldout: Vec<Utterance> = heldout.into_iter().map(|(_, u)| u).collect();
        let model = train(project.clone(), &training, &self.all_entries(project)?);
        Ok(evaluate(&model, &heldout)?)
    }

    pub fn sketch(&self, project: &Id) -> ApiResult<SketchReport> {
        let snap = self.gloss_snapshot(project)?;
        Ok(life_core::glosser::sketch_summary(&self.corpus(project)?, &snap.model))
    }
}
