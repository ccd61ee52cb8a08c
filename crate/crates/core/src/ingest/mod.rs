//! Interchange formats for field data.
//!
//! * Toolbox/SFM lexicon records ([`parse_sfm_lexicon`], [`serialize_sfm_lexicon`])
//! * backslash-tiered interlinear text ([`parse_igt_text`])
//! * one-row-per-sense CSV ([`export_csv`], [`import_csv`])
//! * canonical JSON project manifests ([`export_json`], [`import_json`])
//!
//! Parsers report 1-based line and column positions. ELAN or FLEx XML
//! would slot in here as further parser/serializer pairs over the same
//! model types.

mod csv_io;
mod igt;
mod json;
mod sfm;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use csv_io::{export_csv, import_csv, CSV_COLUMNS};
pub use igt::{parse_igt_blocks, parse_igt_text, IgtBlock, DEFAULT_TRANSLATION_LANG};
pub use json::{export_json, import_json, ProjectData, FORMAT_VERSION};
pub use sfm::{parse_sfm_lexicon, serialize_sfm_lexicon};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseWarning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("input is empty")]
    EmptyInput,
    #[error("line {line}, column {column}: content before the first \\lx record")]
    ContentBeforeFirstRecord { line: usize, column: usize },
    #[error("line {line}, column {column}: tiers are misaligned: {message}")]
    TierMisalignment { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown line marker {marker:?}")]
    UnknownLineMarker { line: usize, column: usize, marker: String },
    #[error("line {line}: block is missing the \\{tier} tier")]
    MissingTier { line: usize, tier: String },
    #[error("line {line}: duplicate \\{tier} tier")]
    DuplicateTier { line: usize, tier: String },
    #[error("line {line}, column {column}: {message}")]
    MalformedToken { line: usize, column: usize, message: String },
    #[error("schema violation at {pointer:?}: {message}")]
    SchemaViolation { pointer: String, message: String },
    #[error("CSV row {row}: expected {expected} columns, found {found}")]
    CsvShape { row: usize, expected: usize, found: usize },
    #[error("CSV row {row}, column {column}: {message}")]
    CsvValue { row: usize, column: String, message: String },
}

/// Split a line into its marker (without backslash, lowercased) and the
/// trimmed value with the value's 1-based column. `None` when the line
/// does not start with a backslash.
pub(crate) fn split_marker(line: &str) -> Option<(String, &str, usize)> {
    let rest = line.strip_prefix('\\')?;
    let marker_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let marker = rest[..marker_end].to_lowercase();
    let after = &rest[marker_end..];
    let value = after.trim();
    let lead = after.len() - after.trim_start().len();
    let col = 1 + line[..1 + marker_end + lead].chars().count();
    Some((marker, value, col))
}

/// Whitespace-separated tokens with their 1-based columns in `line`.
pub(crate) fn tokens_with_columns(line: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((&line[s..i], 1 + line[..s].chars().count()));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}
