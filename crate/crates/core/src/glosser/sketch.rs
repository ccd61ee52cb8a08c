use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::GlossModel;
use crate::id::Id;
use crate::model::{MorphType, Utterance};

const MAX_EXAMPLES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffixRow {
    pub form: String,
    #[serde(rename = "type")]
    pub kind: MorphType,
    pub count: u64,
    /// Descending by count, ties by gloss.
    pub glosses: Vec<(String, u64)>,
    pub examples: Vec<Id>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchReport {
    pub affixes: Vec<AffixRow>,
    pub gloss_frequency: BTreeMap<String, u64>,
    pub pos_distribution: BTreeMap<String, u64>,
}

/// Affix inventory from the model plus gloss and part-of-speech tallies
/// from the corpus. Forms whose majority position is root are not affixes.
pub fn sketch_summary(corpus: &[Utterance], model: &GlossModel) -> SketchReport {
    let mut affixes: Vec<AffixRow> = model
        .position_counts
        .iter()
        .filter_map(|(form, pos)| {
            let kind = pos.majority();
            if kind == MorphType::Root {
                return None;
            }
            let mut glosses: Vec<(String, u64)> =
                model.morph_counts.get(form).map(|g| g.iter().map(|(k, v)| (k.clone(), *v)).collect()).unwrap_or_default();
            glosses.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let examples = corpus
                .iter()
                .filter(|u| u.morphs().any(|m| &m.form == form))
                .take(MAX_EXAMPLES)
                .map(|u| u.id.clone())
                .collect();
            Some(AffixRow { form: form.clone(), kind, count: model.count(form), glosses, examples })
        })
        .collect();
    affixes.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.form.cmp(&b.form)));

    let mut gloss_frequency = BTreeMap::new();
    let mut pos_distribution = BTreeMap::new();
    for utt in corpus {
        for m in utt.morphs().filter(|m| !m.gloss.is_empty()) {
            *gloss_frequency.entry(m.gloss.clone()).or_default() += 1;
        }
        for pos in utt.words.iter().filter_map(|w| w.pos.as_deref()).filter(|p| !p.is_empty()) {
            *pos_distribution.entry(pos.to_owned()).or_default() += 1;
        }
    }
    SketchReport { affixes, gloss_frequency, pos_distribution }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glosser::tests::utt;
    use crate::glosser::train;
    use crate::model::MorphType::{Root, Suffix};

    #[test]
    fn suffix_row_with_glosses_and_examples() {
        let mut corpus = Vec::new();
        for root in ["kitab", "ev", "kalem", "ad", "el"] {
            corpus.push(utt(&[&[(root, "thing", Root), ("lar", "PL", Suffix)]]));
        }
        corpus.push(utt(&[&[("göz", "eye", Root), ("lar", "PLURAL", Suffix)]]));
        let model = train(Id::generate(), &corpus, &[]);
        let report = sketch_summary(&corpus, &model);
        assert_eq!(report.affixes.len(), 1);
        let row = &report.affixes[0];
        assert_eq!(row.form, "lar");
        assert_eq!(row.kind, Suffix);
        assert_eq!(row.glosses, vec![("PL".to_owned(), 5), ("PLURAL".to_owned(), 1)]);
        assert_eq!(row.examples, corpus[..3].iter().map(|u| u.id.clone()).collect::<Vec<_>>());
        assert_eq!(report.gloss_frequency["PL"], 5);
        assert_eq!(report.gloss_frequency["thing"], 5);
    }

    #[test]
    fn empty_corpus() {
        let model = train(Id::generate(), &[], &[]);
        assert_eq!(sketch_summary(&[], &model), SketchReport::default());
    }

    #[test]
    fn equal_root_and_suffix_counts_is_root() {
        let corpus = vec![utt(&[&[("da", "LOC", Suffix)]]), utt(&[&[("da", "also", Root)]])];
        let model = train(Id::generate(), &corpus, &[]);
        assert!(sketch_summary(&corpus, &model).affixes.is_empty());
    }

    #[test]
    fn pos_tally() {
        let mut u = utt(&[&[("ev", "house", Root)], &[("git", "go", Root)]]);
        u.words[0].pos = Some("n".into());
        u.words[1].pos = Some("v".into());
        let model = train(Id::generate(), &[u.clone()], &[]);
        let report = sketch_summary(&[u], &model);
        assert_eq!(report.pos_distribution, BTreeMap::from([("n".to_owned(), 1), ("v".to_owned(), 1)]));
    }
}
