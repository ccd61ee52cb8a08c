mod common;

use std::time::Instant;

use common::{blocks_of, check_igt_block, random_document, random_entry, random_igt_corpus, random_sfm_lexicon, IgtFault};
use life_core::ingest::{
    export_csv, export_json, import_csv, import_json, parse_igt_blocks, parse_sfm_lexicon, serialize_sfm_lexicon,
    IngestError, ProjectData,
};
use life_core::{Id, LexicalEntry, Project};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pid() -> Id {
    Id::parse("0000000000000000000000000000000a").unwrap()
}

fn assert_same_entries(a: &[LexicalEntry], b: &[LexicalEntry]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!(x.same_content(y), "{x:#?}\n{y:#?}");
    }
}

#[test]
fn sfm_reparse_is_stable() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = random_sfm_lexicon(&mut rng, 500);
        let started = Instant::now();
        let (first, _) = parse_sfm_lexicon(&text, &pid()).unwrap();
        let (second, _) = parse_sfm_lexicon(&serialize_sfm_lexicon(&first), &pid()).unwrap();
        assert!(started.elapsed().as_secs_f64() < 5.0);
        assert_eq!(first.len(), 500);
        assert_same_entries(&first, &second);
        // the canonical text is a fixed point
        assert_eq!(serialize_sfm_lexicon(&first), serialize_sfm_lexicon(&second));
    }
}

fn error_line(e: &IngestError) -> Option<usize> {
    match e {
        IngestError::TierMisalignment { line, .. } | IngestError::MalformedToken { line, .. } => Some(*line),
        _ => None,
    }
}

#[test]
fn igt_misalignments_are_found_on_the_right_line() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let corpus = random_igt_corpus(&mut rng, 200);
        let parsed = parse_igt_blocks(&corpus.text);
        let blocks = blocks_of(&corpus.text);
        assert_eq!(parsed.len(), 200);
        assert_eq!(blocks.len(), 200);
        for ((parsed, lines), (first_line, fault)) in parsed.iter().zip(&blocks).zip(&corpus.blocks) {
            assert_eq!(parsed.line, *first_line);
            let oracle = check_igt_block(lines);
            assert_eq!(oracle.is_ok(), *fault == IgtFault::None, "{fault:?} at line {first_line}");
            match (&parsed.result, oracle) {
                (Ok((utt, _)), Ok(words)) => {
                    assert_eq!(utt.words.len(), words.len());
                    for (w, pairs) in utt.words.iter().zip(words) {
                        let got: Vec<(String, String)> = w.morphs.iter().map(|m| (m.form.clone(), m.gloss.clone())).collect();
                        assert_eq!(got, pairs);
                    }
                }
                (Err(e), Err(line)) => assert_eq!(error_line(e), Some(line), "{e}"),
                (got, expected) => panic!("block at line {first_line}: parser {got:?}, oracle {expected:?}"),
            }
        }
    }
}

#[test]
fn json_round_trip_after_id_remap() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let owner = Id::generate();
    let mut project = Project::new("Field Notes", "Turkish", "tur", owner.clone()).unwrap();
    project.alphabet = vec!["a".into(), "ch".into(), "c".into()];
    let mut data = ProjectData::empty(project.clone());
    data.entries = (0..40).map(|_| random_entry(&mut rng, &project.id)).collect();
    data.texts = (0..10).map(|_| random_document(&mut rng, &project.id)).collect();
    data.entries[0].rev = "3-abc".into();

    let bytes = export_json(&data);
    assert!(!String::from_utf8_lossy(&bytes).contains("3-abc"));
    let back = import_json(&bytes).unwrap();
    assert_eq!(back, data.without_revisions());

    let fresh = Project::new("Copy", "Turkish", "tur", owner).unwrap();
    let moved = back.remap_into(&fresh);
    assert_same_entries(&data.entries, &moved.entries);
    assert!(moved.entries.iter().all(|e| e.project_id == fresh.id));
    assert!(moved.entries.iter().zip(&data.entries).all(|(a, b)| a.id != b.id));
    for (a, b) in data.texts.iter().zip(&moved.texts) {
        assert!(a.same_content(b));
        assert_eq!(b.project_id, fresh.id);
    }
    // exporting the remapped copy gives the same bytes modulo ids
    let strip = |d: &ProjectData| {
        let mut v: serde_json::Value = serde_json::from_slice(&export_json(d)).unwrap();
        v.as_object_mut().unwrap().remove("project");
        for e in v["entries"].as_array_mut().unwrap() {
            for k in ["id", "project_id", "created_at", "modified_at"] {
                e.as_object_mut().unwrap().remove(k);
            }
        }
        for t in v["texts"].as_array_mut().unwrap() {
            t.as_object_mut().unwrap().remove("id");
            t.as_object_mut().unwrap().remove("project_id");
            for u in t["utterances"].as_array_mut().unwrap() {
                u.as_object_mut().unwrap().remove("id");
            }
        }
        v
    };
    assert_eq!(strip(&data), strip(&moved));
}

#[test]
fn json_import_reports_pointer() {
    let data = ProjectData::empty(Project::new("P", "L", "lll", Id::generate()).unwrap());
    let mut v: serde_json::Value = serde_json::from_slice(&export_json(&data)).unwrap();
    v["entries"] = serde_json::json!([{"headword": 5}]);
    match import_json(&serde_json::to_vec(&v).unwrap()) {
        Err(IngestError::SchemaViolation { pointer, .. }) => assert!(pointer.starts_with("/entries/0"), "{pointer}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn csv_round_trip_of_random_entries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut entries: Vec<LexicalEntry> = Vec::new();
    while entries.len() < 100 {
        let mut e = random_entry(&mut rng, &pid());
        // an empty definition cell reads back as no definition
        for s in &mut e.senses {
            s.definition = s.definition.take().filter(|d| !d.is_empty());
        }
        if entries.last().is_some_and(|l| l.headword == e.headword && l.homonym_no == e.homonym_no) {
            continue;
        }
        entries.push(e);
    }
    let text = export_csv(&entries);
    assert!(text.ends_with("\r\n"));
    let back = import_csv(&text, &pid()).unwrap();
    assert_same_entries(&entries, &back);
}
