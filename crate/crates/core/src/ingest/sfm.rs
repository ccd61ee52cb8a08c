use chrono::{NaiveDate, Utc};

use super::{lines, split_marker, IngestError, ParseWarning};
use crate::id::Id;
use crate::model::{nfc, Example, Extra, LexicalEntry, Sense};

struct Field {
    marker: String,
    value: String,
    line: usize,
    column: usize,
}

/// Parse a Toolbox/MDF-style lexicon.
///
/// Records start at `\lx`. The marker table is
/// `lx hm ps sn ge de sd va xv xe dt`; every other marker is kept in the
/// entry's extras in source order. Lines not starting with a backslash
/// continue the previous field. File header lines (`\_sh ...`) before the
/// first record are skipped.
pub fn parse_sfm_lexicon(text: &str, project_id: &Id) -> Result<(Vec<LexicalEntry>, Vec<ParseWarning>), IngestError> {
    if text.trim().is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut warnings = Vec::new();
    let mut records: Vec<Vec<Field>> = Vec::new();

    for (line_no, line) in lines(text) {
        if line.trim().is_empty() {
            continue;
        }
        match split_marker(line) {
            Some((marker, value, column)) => {
                if marker.is_empty() {
                    warnings.push(ParseWarning { line: line_no, column: 1, message: "line has a backslash but no marker; skipped".into() });
                    continue;
                }
                let field = Field { marker, value: nfc(value), line: line_no, column };
                if field.marker == "lx" {
                    records.push(vec![field]);
                } else if let Some(record) = records.last_mut() {
                    record.push(field);
                } else if !field.marker.starts_with('_') {
                    return Err(IngestError::ContentBeforeFirstRecord { line: line_no, column: 1 });
                }
            }
            None => {
                let column = 1 + line.chars().take_while(|c| c.is_whitespace()).count();
                let Some(field) = records.last_mut().and_then(|r| r.last_mut()) else {
                    return Err(IngestError::ContentBeforeFirstRecord { line: line_no, column });
                };
                let more = nfc(line.trim());
                if field.value.is_empty() {
                    field.value = more;
                } else {
                    field.value.push(' ');
                    field.value.push_str(&more);
                }
            }
        }
    }

    if records.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let entries = records.into_iter().map(|r| build_entry(r, project_id, &mut warnings)).collect();
    Ok((entries, warnings))
}

fn current_sense(senses: &mut Vec<Sense>) -> &mut Sense {
    if senses.is_empty() {
        senses.push(Sense::new(1));
    }
    senses.last_mut().unwrap()
}

fn merge(slot: &mut String, value: &str, f: &Field, warnings: &mut Vec<ParseWarning>) {
    if value.is_empty() {
        return;
    }
    if slot.is_empty() {
        *slot = value.to_owned();
    } else {
        warnings.push(ParseWarning {
            line: f.line,
            column: f.column,
            message: format!("repeated \\{} in one sense; joined with \"; \"", f.marker),
        });
        slot.push_str("; ");
        slot.push_str(value);
    }
}

fn merge_opt(slot: &mut Option<String>, value: &str, f: &Field, warnings: &mut Vec<ParseWarning>) {
    if value.is_empty() {
        return;
    }
    let mut s = slot.take().unwrap_or_default();
    merge(&mut s, value, f, warnings);
    *slot = Some(s);
}

fn is_valid_date(value: &str) -> bool {
    ["%d/%b/%Y", "%Y-%m-%d", "%d/%m/%Y"].iter().any(|fmt| NaiveDate::parse_from_str(value, fmt).is_ok())
}

fn build_entry(fields: Vec<Field>, project_id: &Id, warnings: &mut Vec<ParseWarning>) -> LexicalEntry {
    let mut fields = fields.into_iter();
    let lx = fields.next().expect("records start with \\lx");
    if lx.value.is_empty() {
        warnings.push(ParseWarning { line: lx.line, column: lx.column, message: "empty headword".into() });
    }
    let now = Utc::now();
    let mut entry = LexicalEntry {
        id: Id::generate(),
        project_id: project_id.clone(),
        headword: lx.value.clone(),
        homonym_no: 1,
        pos: String::new(),
        senses: Vec::new(),
        variants: Vec::new(),
        media: Vec::new(),
        extras: Vec::new(),
        created_at: now,
        modified_at: now,
        rev: String::new(),
    };
    let mut homonym_seen = false;

    for f in fields {
        let v = f.value.as_str();
        match f.marker.as_str() {
            "hm" => match v.parse::<u32>() {
                Ok(n) if n >= 1 && !homonym_seen => {
                    entry.homonym_no = n;
                    homonym_seen = true;
                }
                parsed => {
                    let message = if parsed.is_ok() && homonym_seen {
                        "repeated \\hm kept as an extra field".to_owned()
                    } else {
                        format!("malformed homonym number {v:?} kept as an extra field")
                    };
                    warnings.push(ParseWarning { line: f.line, column: f.column, message });
                    entry.extras.push(Extra::new("hm", v));
                }
            },
            "ps" => {
                if entry.pos.is_empty() {
                    entry.pos = v.to_owned();
                } else {
                    warnings.push(ParseWarning { line: f.line, column: f.column, message: "repeated \\ps kept as an extra field".into() });
                    entry.extras.push(Extra::new("ps", v));
                }
            }
            "sn" => entry.senses.push(Sense::new(entry.senses.len() as u32 + 1)),
            "ge" => merge(&mut current_sense(&mut entry.senses).gloss, v, &f, warnings),
            "de" => merge_opt(&mut current_sense(&mut entry.senses).definition, v, &f, warnings),
            "sd" => merge_opt(&mut current_sense(&mut entry.senses).semantic_domain, v, &f, warnings),
            "xv" => current_sense(&mut entry.senses)
                .examples
                .push(Example { vernacular: v.to_owned(), translation: String::new() }),
            "xe" => {
                let sense = current_sense(&mut entry.senses);
                match sense.examples.last_mut() {
                    Some(ex) if ex.translation.is_empty() => {
                        if !v.is_empty() {
                            ex.translation = v.to_owned();
                        }
                    }
                    _ => sense.examples.push(Example { vernacular: String::new(), translation: v.to_owned() }),
                }
            }
            "va" => entry.variants.push(v.to_owned()),
            "dt" => {
                if is_valid_date(v) {
                    entry.extras.push(Extra::new("dt", v));
                } else {
                    warnings.push(ParseWarning { line: f.line, column: f.column, message: format!("malformed date {v:?} ignored") });
                }
            }
            other => entry.extras.push(Extra::new(other, v)),
        }
    }

    if entry.senses.is_empty() {
        entry.senses.push(Sense::new(1));
    }
    entry.renumber_senses();
    if entry.pos.is_empty() {
        warnings.push(ParseWarning { line: lx.line, column: 1, message: format!("record {:?} has no \\ps", entry.headword) });
    }
    let described = entry
        .senses
        .iter()
        .any(|s| !s.gloss.is_empty() || s.definition.as_deref().is_some_and(|d| !d.is_empty()));
    if !described {
        warnings.push(ParseWarning { line: lx.line, column: 1, message: format!("record {:?} has no \\ge or \\de", entry.headword) });
    }
    entry
}

fn push_line(out: &mut String, marker: &str, value: &str) {
    out.push('\\');
    out.push_str(marker);
    let value = value.replace(['\n', '\r'], " ");
    let value = value.trim();
    if !value.is_empty() {
        out.push(' ');
        out.push_str(value);
    }
    out.push('\n');
}

/// Emit records in the given order with fields in canonical marker order:
/// `lx hm ps`, then per sense `sn ge de sd xv xe`, then `va`, then extras.
/// `\sn` is written only for entries with more than one sense.
pub fn serialize_sfm_lexicon(entries: &[LexicalEntry]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        push_line(&mut out, "lx", &e.headword);
        if e.homonym_no != 1 || e.extras.iter().any(|x| x.marker == "hm") {
            push_line(&mut out, "hm", &e.homonym_no.to_string());
        }
        if !e.pos.is_empty() {
            push_line(&mut out, "ps", &e.pos);
        }
        let numbered = e.senses.len() > 1;
        for (k, s) in e.senses.iter().enumerate() {
            if numbered {
                push_line(&mut out, "sn", &(k + 1).to_string());
            }
            if !s.gloss.is_empty() {
                push_line(&mut out, "ge", &s.gloss);
            }
            if let Some(d) = s.definition.as_deref().filter(|d| !d.is_empty()) {
                push_line(&mut out, "de", d);
            }
            if let Some(sd) = s.semantic_domain.as_deref().filter(|d| !d.is_empty()) {
                push_line(&mut out, "sd", sd);
            }
            for ex in &s.examples {
                push_line(&mut out, "xv", &ex.vernacular);
                push_line(&mut out, "xe", &ex.translation);
            }
        }
        for v in &e.variants {
            push_line(&mut out, "va", v);
        }
        for x in &e.extras {
            push_line(&mut out, &x.marker, &x.value);
        }
    }
    out
}
