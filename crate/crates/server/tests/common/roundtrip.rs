//! JSON export followed by import into a fresh project.

use std::collections::BTreeSet;

use axum::http::{Method, StatusCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::gen::{random_document, random_entry};
use super::{seed, App, Payload, Team};

/// Fills the project through the create endpoints.
pub async fn populate(app: &App, token: &str, base: &str, seed: u64, entries: usize, texts: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pid = life_core::Id::generate();
    for _ in 0..entries {
        let e = random_entry(&mut rng, &pid);
        let body = json!({"headword": e.headword, "homonym_no": e.homonym_no, "pos": e.pos, "senses": e.senses});
        let r = app.post(&format!("{base}/entries"), token, body).await;
        assert_eq!(r.status, StatusCode::CREATED, "{}", r.text());
    }
    for _ in 0..texts {
        let d = random_document(&mut rng, &pid);
        let r = app.post(&format!("{base}/texts"), token, json!({"title": d.title, "utterances": d.utterances})).await;
        assert_eq!(r.status, StatusCode::CREATED, "{}", r.text());
    }
}

/// Canonical form of an export: ids, project references and timestamps
/// dropped, records sorted.
fn canonical(export: &Value) -> (BTreeSet<String>, BTreeSet<String>) {
    let strip = |v: &Value, keys: &[&str]| {
        let mut v = v.clone();
        for k in keys {
            v.as_object_mut().unwrap().remove(*k);
        }
        v
    };
    let entries = export["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| strip(e, &["id", "project_id", "created_at", "modified_at"]).to_string())
        .collect();
    let texts = export["texts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let mut t = strip(t, &["id", "project_id"]);
            for u in t["utterances"].as_array_mut().unwrap() {
                u.as_object_mut().unwrap().remove("id");
            }
            t.to_string()
        })
        .collect();
    (entries, texts)
}

fn ids(export: &Value) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for e in export["entries"].as_array().unwrap() {
        out.insert(e["id"].as_str().unwrap().to_owned());
    }
    for t in export["texts"].as_array().unwrap() {
        out.insert(t["id"].as_str().unwrap().to_owned());
        for u in t["utterances"].as_array().unwrap() {
            out.insert(u["id"].as_str().unwrap().to_owned());
        }
    }
    out
}

/// Exports a populated project as JSON, imports it into a new project and
/// compares both exports; returns the number of records compared.
pub async fn json_round_trip(app: &App, team: &Team, seed_no: u64) -> usize {
    let source = seed(app, team, &format!("json source {seed_no}"));
    populate(app, &team.editor.1, &source.base(), seed_no, 40, 10).await;
    let exported = app.get(&format!("{}/export?format=json", source.base()), &team.viewer.1).await;
    assert_eq!(exported.status, StatusCode::OK);

    let created = app
        .post("/api/v1/projects", &team.owner.1, json!({"name": format!("json copy {seed_no}"), "language_name": "Turkish", "language_code": "tur"}))
        .await
        .json();
    let copy = format!("/api/v1/projects/{}", created["id"].as_str().unwrap());
    let report = app
        .send(Method::POST, &format!("{copy}/import?format=json"), Some(&team.owner.1), Payload::Raw("application/json", exported.bytes.clone()))
        .await;
    assert_eq!(report.status, StatusCode::OK, "{}", report.text());
    let report = report.json();
    assert_eq!(report["skipped"], json!([]));

    let original = exported.json();
    let copied = app.get(&format!("{copy}/export?format=json"), &team.owner.1).await.json();
    assert_eq!(report["entries"], original["entries"].as_array().unwrap().len());
    assert_eq!(report["texts"], original["texts"].as_array().unwrap().len());
    assert_eq!(canonical(&original), canonical(&copied));
    assert!(ids(&original).is_disjoint(&ids(&copied)));
    for e in copied["entries"].as_array().unwrap() {
        assert_eq!(e["project_id"], created["id"]);
    }
    original["entries"].as_array().unwrap().len() + original["texts"].as_array().unwrap().len()
}

