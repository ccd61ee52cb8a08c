use super::{lines, split_marker, tokens_with_columns, IngestError, ParseWarning};
use crate::id::Id;
use crate::model::{nfc, normalize_ws, IgtDocument, Morph, MorphType, Translation, Utterance, Word};

pub const DEFAULT_TRANSLATION_LANG: &str = "en";

const TIERS: [&str; 4] = ["tx", "mb", "gl", "ft"];

struct Tier<'a> {
    line: usize,
    value: &'a str,
    value_col: usize,
}

/// One blank-line-delimited block of tier lines.
#[derive(Debug)]
pub struct IgtBlock {
    /// Line number of the block's first line.
    pub line: usize,
    pub result: Result<(Utterance, Vec<ParseWarning>), IngestError>,
}

/// Parse every block independently, so one misaligned block does not hide
/// the others.
pub fn parse_igt_blocks(text: &str) -> Vec<IgtBlock> {
    let mut blocks = Vec::new();
    let mut current: Vec<(usize, &str)> = Vec::new();
    for (line_no, line) in lines(text) {
        if line.trim().is_empty() {
            if !current.is_empty() {
                let block = std::mem::take(&mut current);
                blocks.push(IgtBlock { line: block[0].0, result: parse_block(&block) });
            }
        } else {
            current.push((line_no, line));
        }
    }
    if !current.is_empty() {
        blocks.push(IgtBlock { line: current[0].0, result: parse_block(&current) });
    }
    blocks
}

/// Parse a whole text into one document, failing at the first bad block.
pub fn parse_igt_text(text: &str, project_id: &Id) -> Result<(IgtDocument, Vec<ParseWarning>), IngestError> {
    let mut doc = IgtDocument::new(project_id.clone(), "");
    let mut warnings = Vec::new();
    for block in parse_igt_blocks(text) {
        let (utt, w) = block.result?;
        doc.utterances.push(utt);
        warnings.extend(w);
    }
    Ok((doc, warnings))
}

fn parse_block<'a>(block: &[(usize, &'a str)]) -> Result<(Utterance, Vec<ParseWarning>), IngestError> {
    let mut tiers: [Option<Tier<'a>>; 4] = [None, None, None, None];
    for &(line, text) in block {
        let Some((marker, value, value_col)) = split_marker(text) else {
            let column = 1 + text.chars().take_while(|c| c.is_whitespace()).count();
            return Err(IngestError::UnknownLineMarker { line, column, marker: String::new() });
        };
        let Some(slot) = TIERS.iter().position(|t| *t == marker) else {
            return Err(IngestError::UnknownLineMarker { line, column: 1, marker });
        };
        if tiers[slot].is_some() {
            return Err(IngestError::DuplicateTier { line, tier: marker });
        }
        tiers[slot] = Some(Tier { line, value, value_col });
    }
    let [tx, mb, gl, ft] = tiers;
    let first_line = block[0].0;
    let tx = tx.ok_or_else(|| IngestError::MissingTier { line: first_line, tier: "tx".into() })?;
    let tx_words = tokens_at(&tx);
    if tx_words.is_empty() {
        return Err(IngestError::MissingTier { line: tx.line, tier: "tx".into() });
    }

    let mut warnings = Vec::new();
    let mut words: Vec<Word> = tx_words.iter().map(|(w, _)| Word::unanalyzed(&nfc(w))).collect();
    let glossed = match (mb, gl) {
        (None, None) => false,
        (Some(_), None) => return Err(IngestError::MissingTier { line: first_line, tier: "gl".into() }),
        (None, Some(_)) => return Err(IngestError::MissingTier { line: first_line, tier: "mb".into() }),
        (Some(mb), Some(gl)) => {
            let mb_tokens = tokens_at(&mb);
            let gl_tokens = tokens_at(&gl);
            check_count(&mb, &mb_tokens, tx_words.len())?;
            check_count(&gl, &gl_tokens, tx_words.len())?;
            for (i, word) in words.iter_mut().enumerate() {
                let (mb_tok, mb_col) = mb_tokens[i];
                let (gl_tok, gl_col) = gl_tokens[i];
                let forms = split_token(mb_tok, mb.line, mb_col)?;
                let glosses = split_token(gl_tok, gl.line, gl_col)?;
                if forms.segments.len() != glosses.segments.len() || forms.separators != glosses.separators {
                    return Err(IngestError::TierMisalignment {
                        line: gl.line,
                        column: gl_col,
                        message: format!("{gl_tok:?} does not split like {mb_tok:?}"),
                    });
                }
                let kinds = assign_types(&forms.separators, &glosses.segments);
                word.morphs = forms
                    .segments
                    .iter()
                    .zip(&glosses.segments)
                    .zip(kinds)
                    .map(|((f, g), k)| Morph::new(&nfc(f), &nfc(g), k))
                    .collect();
                let joined: String = word.morphs.iter().map(|m| m.form.as_str()).collect();
                if joined != word.surface {
                    warnings.push(ParseWarning {
                        line: mb.line,
                        column: mb_col,
                        message: format!("morphs {mb_tok:?} do not spell the word {:?}", word.surface),
                    });
                }
            }
            true
        }
    };

    let translation = ft
        .map(|t| t.value.trim())
        .filter(|t| !t.is_empty())
        .map(|t| Translation { text: nfc(&normalize_ws(t)), lang: DEFAULT_TRANSLATION_LANG.into() });

    let utt = Utterance {
        id: Id::generate(),
        phrase: words.iter().map(|w| w.surface.as_str()).collect::<Vec<_>>().join(" "),
        words,
        translation,
        media_ref: None,
        glossed,
    };
    Ok((utt, warnings))
}

fn tokens_at<'a>(tier: &Tier<'a>) -> Vec<(&'a str, usize)> {
    tokens_with_columns(tier.value).into_iter().map(|(t, c)| (t, c + tier.value_col - 1)).collect()
}

fn check_count(tier: &Tier<'_>, tokens: &[(&str, usize)], expected: usize) -> Result<(), IngestError> {
    use std::cmp::Ordering::*;
    let column = match tokens.len().cmp(&expected) {
        Equal => return Ok(()),
        Greater => tokens[expected].1,
        Less => tokens.last().map_or(tier.value_col, |t| t.1),
    };
    Err(IngestError::TierMisalignment {
        line: tier.line,
        column,
        message: format!("{} tokens for {} words", tokens.len(), expected),
    })
}

struct Split<'a> {
    segments: Vec<&'a str>,
    separators: Vec<char>,
}

fn split_token<'a>(token: &'a str, line: usize, column: usize) -> Result<Split<'a>, IngestError> {
    let mut segments = Vec::new();
    let mut separators = Vec::new();
    let mut start = 0;
    for (i, c) in token.char_indices() {
        if c == '-' || c == '=' {
            segments.push(&token[start..i]);
            separators.push(c);
            start = i + 1;
        }
    }
    segments.push(&token[start..]);
    if segments.iter().any(|s| s.is_empty()) {
        return Err(IngestError::MalformedToken { line, column, message: format!("{token:?} has an empty segment") });
    }
    Ok(Split { segments, separators })
}

/// Lexical glosses are written in lower case, grammatical labels in small
/// capitals (`PL`, `3SG.PST`).
fn is_lexical_gloss(gloss: &str) -> bool {
    gloss.chars().any(char::is_lowercase)
}

/// Morph positions within one word token.
///
/// Segments attached with `=` outside the host are clitics; the host is the
/// run of `-`-joined segments with the most members (the first on ties).
/// Inside the host the root is the first segment with a lexical gloss (the
/// first segment if none is lexical); segments before it are prefixes and
/// segments after it suffixes.
fn assign_types(separators: &[char], glosses: &[&str]) -> Vec<MorphType> {
    let n = glosses.len();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for (i, sep) in separators.iter().enumerate() {
        if *sep == '=' {
            groups.push((start, i + 1));
            start = i + 1;
        }
    }
    groups.push((start, n));
    let host = groups
        .iter()
        .copied()
        .fold(None::<(usize, usize)>, |best, g| match best {
            Some(b) if b.1 - b.0 >= g.1 - g.0 => Some(b),
            _ => Some(g),
        })
        .expect("at least one group");

    let root = (host.0..host.1).find(|&i| is_lexical_gloss(glosses[i])).unwrap_or(host.0);
    (0..n)
        .map(|i| {
            if i < host.0 || i >= host.1 {
                MorphType::Clitic
            } else if i < root {
                MorphType::Prefix
            } else if i == root {
                MorphType::Root
            } else {
                MorphType::Suffix
            }
        })
        .collect()
}
