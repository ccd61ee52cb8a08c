use std::collections::{BTreeMap, BTreeSet};

use super::ntriples::{canonical_blank_labels, escape_literal};
use super::term::{Iri, LiteralKind, RdfGraph, Subject, Term};
use super::vocab::{PREFIXES, RDF};

struct Writer<'a> {
    base: Option<&'a str>,
}

impl Writer<'_> {
    fn iri(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        if let Some(rel) = self.base.and_then(|b| relative_ref(b, s)) {
            return format!("<{rel}>");
        }
        let best = PREFIXES
            .iter()
            .filter(|(_, ns)| s.starts_with(ns))
            .max_by_key(|(_, ns)| ns.len())
            .filter(|(_, ns)| is_simple_local(&s[ns.len()..]));
        match best {
            Some((prefix, ns)) => format!("{prefix}:{}", &s[ns.len()..]),
            None => format!("<{s}>"),
        }
    }

    fn object(&self, term: &Term, labels: &std::collections::HashMap<super::term::BlankNode, String>) -> String {
        match term {
            Term::Iri(i) => self.iri(i),
            Term::Blank(b) => format!("_:{}", labels[b]),
            Term::Literal(l) => {
                let mut out = String::from("\"");
                escape_literal(&mut out, l.lexical());
                out.push('"');
                match l.kind() {
                    LiteralKind::Simple => {}
                    LiteralKind::Lang(tag) => {
                        out.push('@');
                        out.push_str(tag);
                    }
                    LiteralKind::Typed(dt) => {
                        out.push_str("^^");
                        out.push_str(&self.iri(dt));
                    }
                }
                out
            }
        }
    }
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Reference that resolves back to `iri` against `base`, when a plain
/// suffix is safe to write relative.
fn relative_ref<'a>(base: &str, iri: &'a str) -> Option<&'a str> {
    let suffix = iri.strip_prefix(base)?;
    if suffix.starts_with('/') {
        return None;
    }
    let path_end = suffix.find(['?', '#']).unwrap_or(suffix.len());
    let path = &suffix[..path_end];
    let first = path.split('/').next().unwrap_or("");
    if first.contains(':') || path.split('/').any(|seg| seg == "." || seg == "..") {
        return None;
    }
    Some(suffix)
}

fn usable_base(base: &str) -> bool {
    super::is_absolute_iri(base)
        && base.ends_with('/')
        && !base.contains(['?', '#'])
        && !base.split('/').any(|seg| seg == "." || seg == "..")
}

/// Turtle with the fixed prefix table. Subjects are sorted, predicates
/// grouped with `;` (`a` first) and objects with `,`.
pub fn serialize_turtle(graph: &RdfGraph) -> String {
    write(graph, None)
}

/// As [`serialize_turtle`], adding an `@base` directive and writing IRIs
/// under `base_iri` relative to it.
pub fn serialize_turtle_with_base(graph: &RdfGraph, base_iri: &str) -> String {
    write(graph, Some(base_iri).filter(|b| usable_base(b)))
}

fn write(graph: &RdfGraph, base: Option<&str>) -> String {
    let w = Writer { base };
    let labels = canonical_blank_labels(graph);
    let rdf_type = format!("{RDF}type");

    // (blank?, subject) -> (not rdf:type?, predicate) -> objects
    type Block = BTreeMap<(bool, String), BTreeSet<String>>;
    let mut subjects: BTreeMap<(bool, String), Block> = BTreeMap::new();
    for t in graph.iter() {
        let subject = match &t.subject {
            Subject::Iri(i) => (false, w.iri(i)),
            Subject::Blank(b) => (true, format!("_:{}", labels[b])),
        };
        let is_type = t.predicate.as_str() == rdf_type;
        let predicate = if is_type { (false, "a".to_owned()) } else { (true, w.iri(&t.predicate)) };
        subjects.entry(subject).or_default().entry(predicate).or_default().insert(w.object(&t.object, &labels));
    }

    let mut out = String::new();
    if let Some(b) = base {
        out.push_str(&format!("@base <{b}> .\n"));
    }
    for (prefix, ns) in PREFIXES {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    for ((_, subject), predicates) in subjects {
        out.push('\n');
        out.push_str(&subject);
        let count = predicates.len();
        for (i, ((_, predicate), objects)) in predicates.into_iter().enumerate() {
            out.push_str(if i == 0 { " " } else { "    " });
            out.push_str(&predicate);
            out.push(' ');
            out.push_str(&objects.into_iter().collect::<Vec<_>>().join(", "));
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}
