use chrono::Utc;

use super::IngestError;
use crate::id::Id;
use crate::model::{nfc, LexicalEntry, Sense};

pub const CSV_COLUMNS: [&str; 7] = ["headword", "homonym_no", "pos", "sense_no", "gloss", "definition", "semantic_domain"];

/// One row per sense, RFC 4180 quoting and CRLF line ends. Variants,
/// examples and extras are not part of this format.
pub fn export_csv(entries: &[LexicalEntry]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("writing to memory");
    for e in entries {
        let homonym = e.homonym_no.to_string();
        for s in &e.senses {
            let sense_no = s.sense_no.to_string();
            w.write_record([
                e.headword.as_str(),
                homonym.as_str(),
                e.pos.as_str(),
                sense_no.as_str(),
                s.gloss.as_str(),
                s.definition.as_deref().unwrap_or(""),
                s.semantic_domain.as_deref().unwrap_or(""),
            ])
            .expect("writing to memory");
        }
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("input strings are UTF-8")
}

fn int_cell(row: usize, column: &str, value: &str) -> Result<u32, IngestError> {
    match value.trim().parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(IngestError::CsvValue { row, column: column.into(), message: format!("{value:?} is not a positive integer") }),
    }
}

/// Rows are numbered from 1 with the header as row 1. Consecutive rows
/// sharing `(headword, homonym_no)` form one entry.
pub fn import_csv(text: &str, project_id: &Id) -> Result<Vec<LexicalEntry>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut entries: Vec<LexicalEntry> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| IngestError::CsvValue { row, column: String::new(), message: e.to_string() })?;
        if record.len() != CSV_COLUMNS.len() {
            return Err(IngestError::CsvShape { row, expected: CSV_COLUMNS.len(), found: record.len() });
        }
        if row == 1 {
            let header: Vec<&str> = record.iter().map(str::trim).collect();
            if header != CSV_COLUMNS {
                return Err(IngestError::CsvValue {
                    row,
                    column: String::new(),
                    message: format!("header must be {}", CSV_COLUMNS.join(",")),
                });
            }
            continue;
        }
        let cell = |k: usize| nfc(&record[k]);
        let headword = cell(0);
        let homonym_no = int_cell(row, "homonym_no", &record[1])?;
        int_cell(row, "sense_no", &record[3])?;
        let optional = |s: String| if s.is_empty() { None } else { Some(s) };
        let sense = Sense {
            sense_no: 0,
            gloss: cell(4),
            definition: optional(cell(5)),
            semantic_domain: optional(cell(6)),
            examples: Vec::new(),
        };
        match entries.last_mut() {
            Some(e) if e.headword == headword && e.homonym_no == homonym_no => e.senses.push(sense),
            _ => {
                let now = Utc::now();
                entries.push(LexicalEntry {
                    id: Id::generate(),
                    project_id: project_id.clone(),
                    headword,
                    homonym_no,
                    pos: cell(2),
                    senses: vec![sense],
                    variants: Vec::new(),
                    media: Vec::new(),
                    extras: Vec::new(),
                    created_at: now,
                    modified_at: now,
                    rev: String::new(),
                });
            }
        }
    }
    for e in &mut entries {
        e.renumber_senses();
    }
    Ok(entries)
}
