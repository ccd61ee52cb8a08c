//! Shared fixtures: an independent RDF reader for isomorphism checks and
//! seeded generators for entries and texts.

#![allow(dead_code)]

use life_core::linkeddata::{LiteralKind, RdfGraph, Subject, Term};
use life_core::model::{Morph, MorphType, Translation, Utterance, Word};
use life_core::{Id, IgtDocument, LexicalEntry, Sense};
use oxrdf::dataset::CanonicalizationAlgorithm;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn to_oxrdf(graph: &RdfGraph) -> oxrdf::Graph {
    let mut out = oxrdf::Graph::new();
    for t in graph.iter() {
        let subject: oxrdf::NamedOrBlankNode = match &t.subject {
            Subject::Iri(i) => oxrdf::NamedNode::new(i.as_str()).unwrap().into(),
            Subject::Blank(b) => oxrdf::BlankNode::new(b.label()).unwrap().into(),
        };
        let predicate = oxrdf::NamedNode::new(t.predicate.as_str()).unwrap();
        let object: oxrdf::Term = match &t.object {
            Term::Iri(i) => oxrdf::NamedNode::new(i.as_str()).unwrap().into(),
            Term::Blank(b) => oxrdf::BlankNode::new(b.label()).unwrap().into(),
            Term::Literal(l) => match l.kind() {
                LiteralKind::Simple => oxrdf::Literal::new_simple_literal(l.lexical()).into(),
                LiteralKind::Lang(tag) => oxrdf::Literal::new_language_tagged_literal(l.lexical(), tag).unwrap().into(),
                LiteralKind::Typed(dt) => {
                    oxrdf::Literal::new_typed_literal(l.lexical(), oxrdf::NamedNode::new(dt.as_str()).unwrap()).into()
                }
            },
        };
        out.insert(&oxrdf::Triple::new(subject, predicate, object));
    }
    out
}

pub fn parse_turtle(text: &str) -> oxrdf::Graph {
    oxttl::TurtleParser::new()
        .for_slice(text.as_bytes())
        .map(|t| t.unwrap_or_else(|e| panic!("turtle did not parse: {e}\n{text}")))
        .collect()
}

pub fn parse_ntriples(text: &str) -> oxrdf::Graph {
    oxttl::NTriplesParser::new()
        .for_slice(text.as_bytes())
        .map(|t| t.unwrap_or_else(|e| panic!("n-triples did not parse: {e}\n{text}")))
        .collect()
}

pub fn isomorphic(a: &oxrdf::Graph, b: &oxrdf::Graph) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    a.canonicalize(CanonicalizationAlgorithm::Unstable);
    b.canonicalize(CanonicalizationAlgorithm::Unstable);
    a == b
}

const SYLLABLES: [&str; 14] = ["ka", "ri", "tu", "mo", "sha", "ne", "lu", "pa", "dhi", "ñe", "gë", "o", "a", "i"];
const TEXT_PIECES: [&str; 10] = ["book", "house", "a \"quoted\" word", "back\\slash", "line\nbreak", "é", "", "tab\there", "<tag>", "x"];

pub fn word<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(1..=3);
    (0..n).map(|_| *SYLLABLES.choose(rng).unwrap()).collect()
}

fn text<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(1..=3);
    (0..n).map(|_| *TEXT_PIECES.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// A valid entry with 1 to 3 senses; some headwords contain a space and
/// some parts of speech are not in the default lexinfo map.
pub fn random_entry<R: Rng>(rng: &mut R, project_id: &Id) -> LexicalEntry {
    let headword = if rng.random_bool(0.2) { format!("{} {}", word(rng), word(rng)) } else { word(rng) };
    let pos = *["n", "v", "adj", "xyz", "", "N"].choose(rng).unwrap();
    let mut e = LexicalEntry::new(project_id.clone(), &headword, pos, &text(rng));
    if e.senses[0].gloss.trim().is_empty() {
        e.senses[0].gloss = "thing".into();
    }
    for k in 2..=rng.random_range(1..=3) {
        let mut s = Sense::with_gloss(k, &word(rng));
        if rng.random_bool(0.5) {
            s.definition = Some(text(rng));
        }
        e.senses.push(s);
    }
    e.homonym_no = rng.random_range(1..=2);
    e
}

fn random_morphs<R: Rng>(rng: &mut R) -> Vec<Morph> {
    let n = rng.random_range(1..=3);
    (0..n)
        .map(|i| {
            let kind = if i == 0 { MorphType::Root } else { MorphType::Suffix };
            let gloss = if i == 0 { word(rng) } else { (*["PL", "GEN", "PST", "3SG"].choose(rng).unwrap()).to_owned() };
            Morph::new(&word(rng), &gloss, kind)
        })
        .collect()
}

pub fn random_document<R: Rng>(rng: &mut R, project_id: &Id) -> IgtDocument {
    let mut doc = IgtDocument::new(project_id.clone(), &text(rng));
    for _ in 0..rng.random_range(0..=4) {
        let glossed = rng.random_bool(0.7);
        let words: Vec<Word> = (0..rng.random_range(1..=4))
            .map(|_| {
                if glossed {
                    let morphs = random_morphs(rng);
                    let surface = morphs.iter().map(|m| m.form.as_str()).collect::<Vec<_>>().join("-");
                    Word { surface, morphs, pos: None }
                } else {
                    Word::unanalyzed(&word(rng))
                }
            })
            .collect();
        let phrase = words.iter().map(|w| w.surface.as_str()).collect::<Vec<_>>().join(" ");
        let translation =
            rng.random_bool(0.6).then(|| Translation { text: text(rng), lang: (*["en", "hi", "fr"].choose(rng).unwrap()).into() });
        doc.utterances.push(Utterance { id: Id::generate(), phrase, words, translation, media_ref: None, glossed });
    }
    doc
}

/// Every way to cut `word` into known forms, best first: highest mean
/// `ln(count + 1)`, then fewer pieces, then longer pieces from the left.
/// Means are compared exactly through products of `count + 1`.
pub fn brute_force_segment(counts: &std::collections::BTreeMap<String, u64>, word: &str) -> Option<Vec<String>> {
    use num_bigint::BigUint;
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let mut best: Option<(Vec<String>, BigUint)> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || mask & (1 << (i - 1)) != 0 {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        if !pieces.iter().all(|p| counts.get(p).is_some_and(|&c| c > 0)) {
            continue;
        }
        let product = pieces.iter().fold(BigUint::from(1u32), |acc, p| acc * (counts[p] + 1));
        let better = match &best {
            None => true,
            Some((bp, bprod)) => {
                let (k, m) = (pieces.len() as u32, bp.len() as u32);
                let lhs = product.pow(m);
                let rhs = bprod.pow(k);
                if lhs != rhs {
                    lhs > rhs
                } else if k != m {
                    k < m
                } else {
                    let lens: Vec<usize> = pieces.iter().map(|p| p.chars().count()).collect();
                    let blens: Vec<usize> = bp.iter().map(|p| p.chars().count()).collect();
                    lens > blens
                }
            }
        };
        if better {
            best = Some((pieces, product));
        }
    }
    best.map(|(p, _)| p)
}

/// `(form, gloss) -> count` tallied straight from the corpus.
pub fn brute_force_counts(corpus: &[Utterance]) -> std::collections::BTreeMap<(String, String), u64> {
    let mut out = std::collections::BTreeMap::new();
    for u in corpus.iter().filter(|u| u.glossed) {
        for w in &u.words {
            for m in &w.morphs {
                *out.entry((m.form.clone(), m.gloss.clone())).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Glossed utterances built from `(form, gloss, type)` words.
pub fn glossed_utterance(words: &[Vec<(String, String, MorphType)>]) -> Utterance {
    let words: Vec<Word> = words
        .iter()
        .map(|ms| Word {
            surface: ms.iter().map(|m| m.0.as_str()).collect(),
            morphs: ms.iter().map(|(f, g, k)| Morph::new(f, g, *k)).collect(),
            pos: None,
        })
        .collect();
    let phrase = words.iter().map(|w| w.surface.as_str()).collect::<Vec<_>>().join(" ");
    Utterance { id: Id::generate(), phrase, words, translation: None, media_ref: None, glossed: true }
}

const SFM_TABLE: [&str; 11] = ["lx", "hm", "ps", "sn", "ge", "de", "sd", "va", "xv", "xe", "dt"];
const SFM_UNKNOWN: [&str; 8] = ["zz", "so", "nt", "sf", "pc", "bw", "lc", "et"];

fn sfm_value<R: Rng>(rng: &mut R, marker: &str) -> String {
    match marker {
        "hm" => (*["1", "2", "3", "0", "x", ""].choose(rng).unwrap()).to_owned(),
        "sn" => (*["1", "2", ""].choose(rng).unwrap()).to_owned(),
        "dt" => (*["12/Feb/2021", "2020-03-04", "31/Foo/20x", ""].choose(rng).unwrap()).to_owned(),
        "ps" => (*["n", "v", "adj", ""].choose(rng).unwrap()).to_owned(),
        _ => {
            let n = rng.random_range(0..=3);
            (0..n).map(|_| word(rng)).collect::<Vec<_>>().join(" ")
        }
    }
}

/// One SFM record: `\lx` followed by 0 to 12 random draws over the marker
/// table and unrelated markers, with occasional continuation lines,
/// upper-case markers and stray spacing.
pub fn random_sfm_record<R: Rng>(rng: &mut R) -> String {
    let mut out = format!("\\lx {}\n", word(rng));
    for _ in 0..rng.random_range(0..=12) {
        let marker = if rng.random_bool(0.75) {
            *SFM_TABLE[1..].choose(rng).unwrap()
        } else {
            *SFM_UNKNOWN.choose(rng).unwrap()
        };
        let shown = if rng.random_bool(0.1) { marker.to_uppercase() } else { marker.to_owned() };
        let pad = if rng.random_bool(0.1) { "  " } else { " " };
        out.push_str(&format!("\\{shown}{pad}{}\n", sfm_value(rng, marker)));
        if rng.random_bool(0.1) {
            out.push_str(&format!("   {}\n", word(rng)));
        }
    }
    out
}

pub fn random_sfm_lexicon<R: Rng>(rng: &mut R, records: usize) -> String {
    (0..records).map(|_| random_sfm_record(rng)).collect::<Vec<_>>().join("\n")
}

/// Kinds of damage injected into an interlinear block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IgtFault {
    None,
    ExtraMorphToken,
    MissingMorphToken,
    ExtraGlossToken,
    MissingGlossToken,
    GlossSplitsDifferently,
    EmptySegment,
}

pub const IGT_FAULTS: [IgtFault; 7] = [
    IgtFault::None,
    IgtFault::ExtraMorphToken,
    IgtFault::MissingMorphToken,
    IgtFault::ExtraGlossToken,
    IgtFault::MissingGlossToken,
    IgtFault::GlossSplitsDifferently,
    IgtFault::EmptySegment,
];

/// A generated interlinear corpus: the text plus, per block, the line its
/// first tier sits on and the fault that was injected.
pub struct IgtCorpus {
    pub text: String,
    pub blocks: Vec<(usize, IgtFault)>,
}

/// `utterances` blocks, roughly half of them damaged. Undamaged blocks are
/// either glossed (`tx mb gl` and maybe `ft`) or bare (`tx` and maybe `ft`).
pub fn random_igt_corpus<R: Rng>(rng: &mut R, utterances: usize) -> IgtCorpus {
    let mut lines: Vec<String> = Vec::new();
    let mut blocks = Vec::new();
    for _ in 0..utterances {
        if !lines.is_empty() {
            for _ in 0..rng.random_range(1..=2) {
                lines.push(String::new());
            }
        }
        let fault = if rng.random_bool(0.5) { IgtFault::None } else { *IGT_FAULTS[1..].choose(rng).unwrap() };
        blocks.push((lines.len() + 1, fault));

        let n_words = rng.random_range(1..=5);
        let mut forms: Vec<Vec<String>> = Vec::new();
        let mut glosses: Vec<Vec<String>> = Vec::new();
        let mut seps: Vec<Vec<char>> = Vec::new();
        for _ in 0..n_words {
            let k = rng.random_range(1..=3);
            forms.push((0..k).map(|_| word(rng)).collect());
            let mut g: Vec<String> = vec![word(rng).replace(['ñ', 'ë'], "x")];
            for _ in 1..k {
                g.push((*["PL", "GEN", "PST", "3SG", "DEF"].choose(rng).unwrap()).to_owned());
            }
            glosses.push(g);
            seps.push((1..k).map(|_| if rng.random_bool(0.8) { '-' } else { '=' }).collect());
        }
        let join = |pieces: &[String], s: &[char]| {
            let mut t = pieces[0].clone();
            for (p, c) in pieces[1..].iter().zip(s) {
                t.push(*c);
                t.push_str(p);
            }
            t
        };
        let tx: Vec<String> = forms.iter().map(|f| f.concat()).collect();
        let mut mb: Vec<String> = forms.iter().zip(&seps).map(|(f, s)| join(f, s)).collect();
        let mut gl: Vec<String> = glosses.iter().zip(&seps).map(|(g, s)| join(g, s)).collect();
        let target = rng.random_range(0..n_words);
        match fault {
            IgtFault::None => {}
            IgtFault::ExtraMorphToken => mb.insert(rng.random_range(0..=n_words), word(rng)),
            IgtFault::MissingMorphToken => {
                mb.remove(target);
            }
            IgtFault::ExtraGlossToken => gl.insert(rng.random_range(0..=n_words), "X".into()),
            IgtFault::MissingGlossToken => {
                gl.remove(target);
            }
            IgtFault::GlossSplitsDifferently => gl[target].push_str("-EXTRA"),
            IgtFault::EmptySegment => {
                if rng.random_bool(0.5) {
                    mb[target].push('-')
                } else {
                    gl[target].insert(0, '=')
                }
            }
        }
        let glossed = fault != IgtFault::None || rng.random_bool(0.8);
        let sep = |rng: &mut R| if rng.random_bool(0.2) { "   " } else { " " };
        let mut row = |marker: &str, toks: &[String], rng: &mut R| {
            let mut s = format!("\\{marker}");
            for t in toks {
                s.push_str(sep(rng));
                s.push_str(t);
            }
            lines.push(s);
        };
        row("tx", &tx, rng);
        if glossed {
            row("mb", &mb, rng);
            row("gl", &gl, rng);
        }
        if rng.random_bool(0.6) {
            lines.push(format!("\\ft {}", text(rng).replace('\n', " ")));
        }
    }
    IgtCorpus { text: lines.join("\n") + "\n", blocks }
}

/// A tier token cut at `-` and `=`: the pieces and the separators between them.
pub fn resplit(token: &str) -> (Vec<String>, Vec<char>) {
    let mut pieces = vec![String::new()];
    let mut seps = Vec::new();
    for c in token.chars() {
        if c == '-' || c == '=' {
            seps.push(c);
            pieces.push(String::new());
        } else {
            pieces.last_mut().unwrap().push(c);
        }
    }
    (pieces, seps)
}

/// Outcome of checking one block independently of the parser: the line
/// of the first alignment problem, or the per-word `(form, gloss)` pairs.
pub fn check_igt_block(block: &[(usize, &str)]) -> Result<Vec<Vec<(String, String)>>, usize> {
    let tier = |name: &str| {
        block.iter().find_map(|(n, l)| {
            let mut parts = l.split_whitespace();
            (parts.next() == Some(&format!("\\{name}")[..])).then(|| (*n, parts.map(str::to_owned).collect::<Vec<_>>()))
        })
    };
    let (_, tx) = tier("tx").expect("generator always writes \\tx");
    let (Some((mb_line, mb)), Some((gl_line, gl))) = (tier("mb"), tier("gl")) else {
        return Ok(tx.iter().map(|_| Vec::new()).collect());
    };
    if mb.len() != tx.len() {
        return Err(mb_line);
    }
    if gl.len() != tx.len() {
        return Err(gl_line);
    }
    let mut words = Vec::new();
    for (m, g) in mb.iter().zip(&gl) {
        let (forms, fseps) = resplit(m);
        if forms.iter().any(String::is_empty) {
            return Err(mb_line);
        }
        let (glosses, gseps) = resplit(g);
        if glosses.iter().any(String::is_empty) || fseps != gseps {
            return Err(gl_line);
        }
        words.push(forms.into_iter().zip(glosses).collect());
    }
    Ok(words)
}

/// Non-blank lines of `text` grouped into blocks, with 1-based line numbers.
pub fn blocks_of(text: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !out.last().unwrap().is_empty() {
                out.push(Vec::new());
            }
        } else {
            out.last_mut().unwrap().push((i + 1, line));
        }
    }
    out.retain(|b| !b.is_empty());
    out
}

const LETTERS: [&str; 12] = ["a", "b", "c", "h", "ch", "sh", "s", "e", "ng", "n", "g", "ñ"];

/// A shuffled alphabet over overlapping letters and digraphs.
pub fn random_alphabet<R: Rng>(rng: &mut R) -> Vec<String> {
    use rand::seq::SliceRandom;
    let mut units: Vec<String> = LETTERS.iter().map(|s| (*s).to_owned()).collect();
    units.shuffle(rng);
    units.truncate(rng.random_range(4..=LETTERS.len()));
    if rng.random_bool(0.3) {
        units.push("tsh".into());
    }
    units
}

/// Strings over the alphabet's letters plus a few characters outside it.
pub fn random_headword<R: Rng>(rng: &mut R) -> String {
    let pool: Vec<&str> = LETTERS.iter().copied().chain(["t", "z", "A", "Ch", "'", " "]).collect();
    let n = rng.random_range(0..=5);
    (0..n).map(|_| *pool.choose(rng).unwrap()).collect()
}

/// Collation by re-tokenizing: walk the lower-cased characters, at each
/// step taking the longest alphabet unit that starts there (earliest unit
/// on equal length), else the single character ranked after the alphabet
/// by code point. Rank sequences compare lexicographically, then the raw
/// strings.
pub fn oracle_ranks(alphabet: &[String], s: &str) -> Vec<u64> {
    let chars: Vec<char> = s.to_lowercase().chars().collect();
    let units: Vec<Vec<char>> = alphabet.iter().map(|u| u.to_lowercase().chars().collect()).collect();
    let mut ranks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut best: Option<(usize, usize)> = None;
        for (idx, u) in units.iter().enumerate() {
            if !u.is_empty() && chars[i..].starts_with(u) && best.is_none_or(|(_, len)| u.len() > len) {
                best = Some((idx, u.len()));
            }
        }
        match best {
            Some((idx, len)) => {
                ranks.push(idx as u64);
                i += len;
            }
            None => {
                ranks.push(alphabet.len() as u64 + chars[i] as u64);
                i += 1;
            }
        }
    }
    ranks
}

pub fn oracle_compare(alphabet: &[String], a: &str, b: &str) -> std::cmp::Ordering {
    oracle_ranks(alphabet, a).cmp(&oracle_ranks(alphabet, b)).then_with(|| a.cmp(b))
}

/// Alphabet unit that opens `s` under the oracle tokenization, if any.
pub fn oracle_first_unit(alphabet: &[String], s: &str) -> Option<String> {
    let first = *oracle_ranks(alphabet, s).first()?;
    alphabet.get(first as usize).cloned()
}
