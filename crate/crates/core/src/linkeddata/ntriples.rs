use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::term::{BlankNode, Iri, Literal, LiteralKind, RdfGraph, Subject, Term, Triple};

pub(crate) fn escape_literal(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

pub(crate) fn write_iri(out: &mut String, iri: &Iri) {
    out.push('<');
    out.push_str(iri.as_str());
    out.push('>');
}

/// Writes the literal with datatypes as full IRIs.
pub(crate) fn write_literal(out: &mut String, lit: &Literal) {
    out.push('"');
    escape_literal(out, lit.lexical());
    out.push('"');
    match lit.kind() {
        LiteralKind::Simple => {}
        LiteralKind::Lang(tag) => {
            out.push('@');
            out.push_str(tag);
        }
        LiteralKind::Typed(dt) => {
            out.push_str("^^");
            write_iri(out, dt);
        }
    }
}

fn write_term(out: &mut String, term: &Term, blank: &dyn Fn(&BlankNode) -> String) {
    match term {
        Term::Iri(i) => write_iri(out, i),
        Term::Blank(b) => out.push_str(&blank(b)),
        Term::Literal(l) => write_literal(out, l),
    }
}

fn write_triple(out: &mut String, t: &Triple, blank: &dyn Fn(&BlankNode) -> String) {
    write_term(out, &Term::from(t.subject.clone()), blank);
    out.push(' ');
    write_iri(out, &t.predicate);
    out.push(' ');
    write_term(out, &t.object, blank);
    out.push_str(" .");
}

fn blanks_of(t: &Triple) -> impl Iterator<Item = &BlankNode> {
    let s = match &t.subject {
        Subject::Blank(b) => Some(b),
        Subject::Iri(_) => None,
    };
    let o = match &t.object {
        Term::Blank(b) => Some(b),
        _ => None,
    };
    s.into_iter().chain(o)
}

/// Maps every blank node to `b0`, `b1`, ... independent of its original
/// label wherever neighbourhood refinement can tell nodes apart.
///
/// Each node's signature is repeatedly rehashed from the triples it
/// occurs in, with neighbouring blank nodes replaced by their previous
/// signatures. Triples are then sorted by their signature rendering and
/// labels are handed out in order of first appearance.
pub fn canonical_blank_labels(graph: &RdfGraph) -> HashMap<BlankNode, String> {
    let mut incident: BTreeMap<&BlankNode, Vec<&Triple>> = BTreeMap::new();
    for t in graph.iter() {
        for b in blanks_of(t).collect::<BTreeSet<_>>() {
            incident.entry(b).or_default().push(t);
        }
    }
    if incident.is_empty() {
        return HashMap::new();
    }

    let mut sig: HashMap<&BlankNode, String> = incident.keys().map(|b| (*b, String::new())).collect();
    let mut classes = 1;
    for _ in 0..=incident.len() {
        let mut next = HashMap::with_capacity(sig.len());
        for (b, triples) in &incident {
            let mut lines: Vec<String> = triples
                .iter()
                .map(|t| {
                    let mut line = String::new();
                    write_triple(&mut line, t, &|other| {
                        if other == *b {
                            "_:@".to_owned()
                        } else {
                            format!("_:{}", sig[other])
                        }
                    });
                    line
                })
                .collect();
            lines.sort();
            let mut h = Sha256::new();
            h.update(sig[b].as_bytes());
            for l in &lines {
                h.update(l.as_bytes());
                h.update(b"\n");
            }
            next.insert(*b, hex::encode(h.finalize()));
        }
        let next_classes = next.values().collect::<BTreeSet<_>>().len();
        sig = next;
        if next_classes == classes || next_classes == incident.len() {
            break;
        }
        classes = next_classes;
    }

    let mut rank: Vec<&BlankNode> = incident.keys().copied().collect();
    rank.sort_by(|a, b| sig[a].cmp(&sig[b]).then_with(|| a.cmp(b)));
    let rank: HashMap<&BlankNode, usize> = rank.into_iter().enumerate().map(|(i, b)| (b, i)).collect();

    let mut keyed: Vec<(String, String, &Triple)> = graph
        .iter()
        .filter(|t| blanks_of(t).next().is_some())
        .map(|t| {
            let mut by_sig = String::new();
            write_triple(&mut by_sig, t, &|b| format!("_:{}", sig[b]));
            let mut by_rank = String::new();
            write_triple(&mut by_rank, t, &|b| format!("_:{:08}", rank[b]));
            (by_sig, by_rank, t)
        })
        .collect();
    keyed.sort();

    let mut labels = HashMap::new();
    for (_, _, t) in keyed {
        for b in blanks_of(t) {
            let n = labels.len();
            labels.entry(b.clone()).or_insert_with(|| format!("b{n}"));
        }
    }
    labels
}

/// One triple per line, lines sorted bytewise, canonical blank labels.
pub fn serialize_ntriples(graph: &RdfGraph) -> String {
    let labels = canonical_blank_labels(graph);
    let blank = |b: &BlankNode| format!("_:{}", labels[b]);
    let mut lines: Vec<String> = graph
        .iter()
        .map(|t| {
            let mut line = String::new();
            write_triple(&mut line, t, &blank);
            line.push('\n');
            line
        })
        .collect();
    lines.sort();
    lines.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn bn(s: &str) -> BlankNode {
        BlankNode::new(s).unwrap()
    }

    #[test]
    fn single_triple() {
        let g: RdfGraph =
            [Triple::new(iri("http://x/a"), iri("http://x/p"), Literal::lang("v", "en").unwrap())].into_iter().collect();
        assert_eq!(serialize_ntriples(&g), "<http://x/a> <http://x/p> \"v\"@en .\n");
    }

    #[test]
    fn escapes() {
        let g: RdfGraph = [Triple::new(iri("http://x/a"), iri("http://x/p"), Literal::simple("a \"q\"\\\n\u{1}"))]
            .into_iter()
            .collect();
        assert_eq!(serialize_ntriples(&g), "<http://x/a> <http://x/p> \"a \\\"q\\\"\\\\\\n\\u0001\" .\n");
    }

    #[test]
    fn typed_literal() {
        let g: RdfGraph = [Triple::new(iri("http://x/a"), iri("http://x/p"), Literal::integer(3))].into_iter().collect();
        assert_eq!(
            serialize_ntriples(&g),
            "<http://x/a> <http://x/p> \"3\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n"
        );
    }

    #[test]
    fn blank_labels_ignore_original_names() {
        let p = iri("http://x/p");
        let q = iri("http://x/q");
        let make = |x: &str, y: &str| -> RdfGraph {
            [
                Triple::new(iri("http://x/a"), p.clone(), bn(x)),
                Triple::new(bn(x), q.clone(), bn(y)),
                Triple::new(bn(y), q.clone(), Literal::simple("end")),
            ]
            .into_iter()
            .collect()
        };
        let one = serialize_ntriples(&make("zz", "aa"));
        let two = serialize_ntriples(&make("n1", "n2"));
        assert_eq!(one, two);
        assert!(one.contains("_:b0") && one.contains("_:b1"));
    }

    #[test]
    fn duplicate_free_and_sorted() {
        let g: RdfGraph = [
            Triple::new(iri("http://x/b"), iri("http://x/p"), Literal::simple("1")),
            Triple::new(iri("http://x/a"), iri("http://x/p"), Literal::simple("2")),
        ]
        .into_iter()
        .collect();
        let out = serialize_ntriples(&g);
        let lines: Vec<&str> = out.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }
}
