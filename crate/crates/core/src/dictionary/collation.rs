use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Sort key under a project alphabet.
///
/// Keys compare by `ranks` first and fall back to the code points of the
/// original string, so two keys are equal only for identical strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CollationKey {
    pub ranks: Vec<u32>,
    pub raw: String,
}

/// One piece of a tokenized string: either an alphabet unit (by index) or
/// a character the alphabet does not start with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub unit: Option<usize>,
}

/// Greedy longest-match tokenizer over an ordered alphabet.
#[derive(Clone, Debug)]
pub struct Collator {
    units: Vec<String>,
    /// Unit indices ordered by descending length, first occurrence winning.
    by_length: Vec<usize>,
}

impl Collator {
    pub fn new<S: AsRef<str>>(alphabet: &[S]) -> Collator {
        let units: Vec<String> = alphabet.iter().map(|u| u.as_ref().to_lowercase()).collect();
        let mut by_length: Vec<usize> = (0..units.len())
            .filter(|&i| !units[i].is_empty() && !units[..i].contains(&units[i]))
            .collect();
        by_length.sort_by(|&a, &b| units[b].len().cmp(&units[a].len()).then(a.cmp(&b)));
        Collator { units, by_length }
    }

    pub fn alphabet_len(&self) -> usize {
        self.units.len()
    }

    pub fn tokenize(&self, s: &str) -> Vec<Token> {
        let lowered = s.to_lowercase();
        let mut rest = lowered.as_str();
        let mut out = Vec::new();
        while let Some(c) = rest.chars().next() {
            let hit = self.by_length.iter().copied().find(|&i| rest.starts_with(self.units[i].as_str()));
            let len = hit.map_or(c.len_utf8(), |i| self.units[i].len());
            out.push(Token { text: rest[..len].to_owned(), unit: hit });
            rest = &rest[len..];
        }
        out
    }

    pub fn key(&self, s: &str) -> CollationKey {
        let n = self.units.len() as u32;
        let ranks = self
            .tokenize(s)
            .into_iter()
            .map(|t| match t.unit {
                Some(i) => i as u32,
                None => n + t.text.chars().next().expect("tokens are non-empty") as u32,
            })
            .collect();
        CollationKey { ranks, raw: s.to_owned() }
    }

    pub fn compare(&self, a: &str, b: &str) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        self.key(a).cmp(&self.key(b))
    }
}

pub fn collation_key<S: AsRef<str>>(alphabet: &[S], s: &str) -> CollationKey {
    Collator::new(alphabet).key(s)
}

pub fn compare_headwords<S: AsRef<str>>(alphabet: &[S], a: &str, b: &str) -> Ordering {
    Collator::new(alphabet).compare(a, b)
}
