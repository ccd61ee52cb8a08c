//! Dictionary compilation: collation under a project alphabet, letter
//! sections, homonym numbering, the reversal index, and rendering to
//! hypertext and print markup.

mod collation;
mod render;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

pub use collation::{collation_key, compare_headwords, CollationKey, Collator, Token};
pub use render::{render_html, render_print};

use crate::model::{Example, LexicalEntry, Project};

/// Section label for headwords whose first character is outside the alphabet.
pub const OTHER_SECTION: &str = "#";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseBlock {
    pub number: u32,
    pub gloss: String,
    pub definition: Option<String>,
    pub semantic_domain: Option<String>,
    pub examples: Vec<Example>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryBlock {
    pub entry_id: String,
    pub headword: String,
    /// Set only when the headword is shared by more than one entry.
    pub homonym: Option<u32>,
    /// Headword with its homonym superscript, e.g. `do¹`.
    pub display: String,
    pub pos: String,
    pub senses: Vec<SenseBlock>,
    pub variants: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub letter: String,
    pub entries: Vec<EntryBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeadwordRef {
    pub entry_id: String,
    pub display: String,
    pub sense_no: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversalItem {
    pub gloss: String,
    pub refs: Vec<HeadwordRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryDocument {
    pub title: String,
    pub language: String,
    pub sections: Vec<Section>,
    pub reversal: Vec<ReversalItem>,
}

impl DictionaryDocument {
    pub fn entry_count(&self) -> usize {
        self.sections.iter().map(|s| s.entries.len()).sum()
    }
}

pub fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|d| DIGITS[d.to_digit(10).unwrap() as usize]).collect()
}

pub fn compile_dictionary(entries: &[LexicalEntry], project: &Project) -> DictionaryDocument {
    let collator = Collator::new(&project.alphabet);
    let mut keyed: Vec<(CollationKey, &LexicalEntry)> = entries.iter().map(|e| (collator.key(&e.headword), e)).collect();
    // An empty headword has no initial; it joins the "#" section at the end.
    keyed.sort_by(|(ka, a), (kb, b)| {
        ka.ranks.is_empty().cmp(&kb.ranks.is_empty())
            .then_with(|| ka.cmp(kb))
            .then(a.homonym_no.cmp(&b.homonym_no))
            .then_with(|| a.id.cmp(&b.id))
    });

    let mut headword_counts: HashMap<&str, usize> = HashMap::new();
    for e in entries {
        *headword_counts.entry(e.headword.as_str()).or_default() += 1;
    }

    let mut sections: Vec<Section> = Vec::new();
    let mut reversal: BTreeMap<String, Vec<HeadwordRef>> = BTreeMap::new();
    for (_, entry) in keyed {
        let letter = collator
            .tokenize(&entry.headword)
            .first()
            .and_then(|t| t.unit)
            .map_or_else(|| OTHER_SECTION.to_owned(), |i| project.alphabet[i].clone());
        let homonym = (headword_counts[entry.headword.as_str()] > 1).then_some(entry.homonym_no);
        let display = match homonym {
            Some(n) => format!("{}{}", entry.headword, superscript(n)),
            None => entry.headword.clone(),
        };
        let senses = entry
            .senses
            .iter()
            .enumerate()
            .map(|(i, s)| SenseBlock {
                number: i as u32 + 1,
                gloss: s.gloss.clone(),
                definition: s.definition.clone(),
                semantic_domain: s.semantic_domain.clone(),
                examples: s.examples.clone(),
            })
            .collect::<Vec<_>>();
        for s in &senses {
            let gloss = s.gloss.trim();
            if !gloss.is_empty() {
                reversal.entry(gloss.to_owned()).or_default().push(HeadwordRef {
                    entry_id: entry.id.to_string(),
                    display: display.clone(),
                    sense_no: s.number,
                });
            }
        }
        let block = EntryBlock {
            entry_id: entry.id.to_string(),
            headword: entry.headword.clone(),
            homonym,
            display,
            pos: entry.pos.clone(),
            senses,
            variants: entry.variants.clone(),
        };
        match sections.last_mut() {
            Some(s) if s.letter == letter => s.entries.push(block),
            _ => sections.push(Section { letter, entries: vec![block] }),
        }
    }

    DictionaryDocument {
        title: project.name.clone(),
        language: project.language_code.clone(),
        sections,
        reversal: reversal.into_iter().map(|(gloss, refs)| ReversalItem { gloss, refs }).collect(),
    }
}
