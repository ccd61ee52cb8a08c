#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::header::{AUTHORIZATION, CONTENT_TYPE};
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use life_core::model::{MorphType, Word, Morph};
use life_core::store::MemoryStore;
use life_core::{Id, Role, Sense};
use life_server::auth::Action;
use life_server::service::{Access, EntryInput, NewProject, TextInput, UtteranceInput};
use life_server::{Config, Service};
use serde_json::{json, Value};
use tower::ServiceExt;

pub const SECRET: &str = "integration-test-secret";
pub const PASSWORD: &str = "correct horse battery";

pub struct App {
    pub router: Router,
    pub service: Arc<Service>,
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub bytes: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.bytes)))
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.bytes.clone()).unwrap()
    }

    pub fn header(&self, name: &str) -> &str {
        self.headers.get(name).map(|v| v.to_str().unwrap()).unwrap_or("")
    }

    pub fn code(&self) -> String {
        self.json()["error"]["code"].as_str().unwrap_or("").to_owned()
    }
}

pub enum Payload {
    Empty,
    Json(Value),
    Raw(&'static str, Vec<u8>),
}

impl App {
    pub fn new() -> App {
        App::with_config(Config { secret: SECRET.into(), ..Config::default() })
    }

    pub fn with_config(config: Config) -> App {
        let service = Arc::new(Service::new(Arc::new(MemoryStore::new()), config));
        App { router: life_server::api::router(service.clone()), service }
    }

    pub async fn send(&self, method: Method, uri: &str, token: Option<&str>, payload: Payload) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        if let Some(t) = token {
            req = req.header(AUTHORIZATION, format!("Bearer {t}"));
        }
        let req = match payload {
            Payload::Empty => req.body(Body::empty()),
            Payload::Json(v) => req.header(CONTENT_TYPE, "application/json").body(Body::from(v.to_string())),
            Payload::Raw(ct, bytes) => req.header(CONTENT_TYPE, ct).body(Body::from(bytes)),
        }
        .unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let headers = resp.headers().clone();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, headers, bytes }
    }

    pub async fn get(&self, uri: &str, token: &str) -> Reply {
        self.send(Method::GET, uri, Some(token), Payload::Empty).await
    }

    pub async fn post(&self, uri: &str, token: &str, body: Value) -> Reply {
        self.send(Method::POST, uri, Some(token), Payload::Json(body)).await
    }

    pub async fn put(&self, uri: &str, token: &str, body: Value) -> Reply {
        self.send(Method::PUT, uri, Some(token), Payload::Json(body)).await
    }

    pub async fn delete(&self, uri: &str, token: &str) -> Reply {
        self.send(Method::DELETE, uri, Some(token), Payload::Empty).await
    }

    /// Creates the user and logs in through the API.
    pub async fn login_new(&self, username: &str) -> (Id, String) {
        let user = self.service.create_user(username, PASSWORD, None).unwrap();
        let reply = self.post("/api/v1/auth/login", "", json!({"username": username, "password": PASSWORD})).await;
        assert_eq!(reply.status, StatusCode::OK, "{}", reply.text());
        (user.id, reply.json()["token"].as_str().unwrap().to_owned())
    }
}

pub fn multipart(field: &str, filename: &str, mime: &str, bytes: &[u8]) -> (&'static str, Vec<u8>) {
    let mut body = Vec::new();
    body.extend_from_slice(b"--XBOUNDARYX\r\n");
    body.extend_from_slice(
        format!("Content-Disposition: form-data; name=\"{field}\"; filename=\"{filename}\"\r\nContent-Type: {mime}\r\n\r\n")
            .as_bytes(),
    );
    body.extend_from_slice(bytes);
    body.extend_from_slice(b"\r\n--XBOUNDARYX--\r\n");
    ("multipart/form-data; boundary=XBOUNDARYX", body)
}

pub fn sense(gloss: &str) -> Sense {
    Sense { gloss: gloss.into(), ..Sense::new(1) }
}

pub fn entry_input(headword: &str, pos: &str, gloss: &str) -> EntryInput {
    EntryInput {
        headword: headword.into(),
        homonym_no: 1,
        pos: pos.into(),
        senses: vec![sense(gloss)],
        variants: vec![],
        media: vec![],
        extras: vec![],
        rev: None,
    }
}

pub fn word(morphs: &[(&str, &str, MorphType)]) -> Word {
    Word {
        surface: morphs.iter().map(|m| m.0).collect(),
        morphs: morphs.iter().map(|(f, g, k)| Morph::new(f, g, *k)).collect(),
        pos: None,
    }
}

pub fn glossed_input(words: Vec<Word>) -> UtteranceInput {
    UtteranceInput {
        id: None,
        phrase: words.iter().map(|w| w.surface.as_str()).collect::<Vec<_>>().join(" "),
        words,
        translation: None,
        media_ref: None,
        glossed: true,
        rev: None,
    }
}

/// Users with every role plus an outsider and a spare user.
pub struct Team {
    pub owner: (Id, String),
    pub editor: (Id, String),
    pub viewer: (Id, String),
    pub outsider: (Id, String),
    pub extra: (Id, String),
}

impl Team {
    pub async fn new(app: &App) -> Team {
        Team {
            owner: app.login_new("olive").await,
            editor: app.login_new("edgar").await,
            viewer: app.login_new("vera").await,
            outsider: app.login_new("oscar").await,
            extra: app.login_new("xena").await,
        }
    }

    pub fn token(&self, role: Option<Role>) -> &str {
        match role {
            Some(Role::Owner) => &self.owner.1,
            Some(Role::Editor) => &self.editor.1,
            Some(Role::Viewer) => &self.viewer.1,
            None => &self.outsider.1,
        }
    }
}

/// A project with one of each kind of document, seeded directly through the service.
#[derive(Clone)]
pub struct Seed {
    pub pid: Id,
    pub project_rev: String,
    pub entry_id: Id,
    pub entry_rev: String,
    pub text_id: Id,
    pub text_rev: String,
    pub utt_id: Id,
    pub sha: String,
}

impl Seed {
    pub fn base(&self) -> String {
        format!("/api/v1/projects/{}", self.pid)
    }
}

pub fn seed(app: &App, team: &Team, name: &str) -> Seed {
    let s = &app.service;
    let req = NewProject {
        name: name.into(),
        language_name: "Turkish".into(),
        language_code: "tur".into(),
        alphabet: ["a", "b", "c", "ç", "d", "e", "k", "l", "r", "t"].map(String::from).to_vec(),
        pos_inventory: vec![],
        metalanguage: None,
    };
    let project = s.create_project(&team.owner.0, req).unwrap();
    let access = s.authorize(&team.owner.1, project.id.as_str(), Action::Admin).unwrap();
    let mut p = access.project.clone();
    for (user, role) in [(&team.editor.0, Role::Editor), (&team.viewer.0, Role::Viewer), (&team.extra.0, Role::Viewer)] {
        let rev = p.rev.clone();
        p = s.set_member(&Access { project: p, ..access.clone() }, user, role, Some(&rev)).unwrap();
    }
    let access = Access { project: p.clone(), ..access };
    let entry = s.create_entry(&access, entry_input("kitab", "n", "book")).unwrap();
    let text = s
        .create_text(
            &access,
            TextInput {
                title: "Story".into(),
                utterances: vec![glossed_input(vec![word(&[
                    ("kitab", "book", MorphType::Root),
                    ("lar", "PL", MorphType::Suffix),
                ])])],
                igt: None,
                rev: None,
            },
        )
        .unwrap();
    let asset = s.upload_media(&access, "a.wav", "audio/wav", format!("RIFF{}", p.id).as_bytes()).unwrap();
    s.put_linkset(&p.id, "lemma,pos,target_iri,source\nkitab,n,http://example.org/book,wikidata\n").unwrap();
    let project = s.project(&p.id).unwrap();
    Seed {
        pid: project.id.clone(),
        project_rev: project.rev,
        entry_id: entry.id,
        entry_rev: entry.rev,
        text_id: text.id,
        utt_id: text.utterances[0].id.clone(),
        text_rev: text.rev,
        sha: asset.sha256,
    }
}

#[path = "../../../core/tests/common/mod.rs"]
pub mod gen;
pub mod matrix;
pub mod roundtrip;
