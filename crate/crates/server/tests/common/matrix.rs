//! Every project-scoped endpoint with the action it requires.

use axum::http::{Method, StatusCode};
use life_core::Role;
use life_server::auth::{permits, Action};
use serde_json::json;

use super::{multipart, seed, App, Payload, Reply, Seed, Team};

pub struct Case {
    pub family: &'static str,
    pub name: &'static str,
    pub action: Action,
    pub success: StatusCode,
}

const fn case(family: &'static str, name: &'static str, action: Action, success: u16) -> Case {
    let success = match StatusCode::from_u16(success) {
        Ok(s) => s,
        Err(_) => panic!("bad status"),
    };
    Case { family, name, action, success }
}

use Action::{Admin, Read, Write};

pub const CASES: &[Case] = &[
    case("project", "get project", Read, 200),
    case("project", "update project", Admin, 200),
    case("project", "delete project", Admin, 204),
    case("members", "list members", Read, 200),
    case("members", "add member", Admin, 200),
    case("members", "change role", Admin, 200),
    case("members", "remove member", Admin, 200),
    case("entries", "list entries", Read, 200),
    case("entries", "get entry", Read, 200),
    case("entries", "create entry", Write, 201),
    case("entries", "update entry", Write, 200),
    case("entries", "delete entry", Write, 204),
    case("texts", "list texts", Read, 200),
    case("texts", "get text", Read, 200),
    case("texts", "create text", Write, 201),
    case("texts", "update text", Write, 200),
    case("texts", "delete text", Write, 204),
    case("utterances", "list utterances", Read, 200),
    case("utterances", "get utterance", Read, 200),
    case("utterances", "append utterance", Write, 201),
    case("utterances", "update utterance", Write, 200),
    case("utterances", "delete utterance", Write, 200),
    case("media", "list media", Read, 200),
    case("media", "download media", Read, 200),
    case("media", "upload media", Write, 201),
    case("gloss", "suggest", Read, 200),
    case("gloss", "model info", Read, 200),
    case("gloss", "retrain", Write, 200),
    case("gloss", "import predictions", Write, 200),
    case("exchange", "export", Read, 200),
    case("exchange", "sketch", Read, 200),
    case("exchange", "dictionary", Read, 200),
    case("exchange", "import", Write, 200),
    case("linkset", "get linkset", Read, 200),
    case("linkset", "put linkset", Write, 200),
];

/// Issues the request of `name` against `seed`, with `token` as credentials.
pub async fn issue(app: &App, team: &Team, seed: &Seed, name: &str, token: Option<&str>) -> Reply {
    let b = seed.base();
    let (e, t, u) = (&seed.entry_id, &seed.text_id, &seed.utt_id);
    let (method, uri, payload) = match name {
        "get project" => (Method::GET, b.clone(), Payload::Empty),
        "update project" => (Method::PUT, b.clone(), Payload::Json(json!({"name": "Renamed", "rev": seed.project_rev}))),
        "delete project" => (Method::DELETE, format!("{b}?rev={}", seed.project_rev), Payload::Empty),
        "list members" => (Method::GET, format!("{b}/members"), Payload::Empty),
        "add member" => (
            Method::POST,
            format!("{b}/members"),
            Payload::Json(json!({"username": "oscar", "role": "viewer", "rev": seed.project_rev})),
        ),
        "change role" => (
            Method::PUT,
            format!("{b}/members/{}", team.extra.0),
            Payload::Json(json!({"role": "editor", "rev": seed.project_rev})),
        ),
        "remove member" => (Method::DELETE, format!("{b}/members/{}?rev={}", team.extra.0, seed.project_rev), Payload::Empty),
        "list entries" => (Method::GET, format!("{b}/entries?q=ki"), Payload::Empty),
        "get entry" => (Method::GET, format!("{b}/entries/{e}"), Payload::Empty),
        "create entry" => (
            Method::POST,
            format!("{b}/entries"),
            Payload::Json(json!({"headword": "ev", "pos": "n", "senses": [{"sense_no": 1, "gloss": "house"}]})),
        ),
        "update entry" => (
            Method::PUT,
            format!("{b}/entries/{e}"),
            Payload::Json(json!({"headword": "kitap", "senses": [{"sense_no": 1, "gloss": "book"}], "rev": seed.entry_rev})),
        ),
        "delete entry" => (Method::DELETE, format!("{b}/entries/{e}?rev={}", seed.entry_rev), Payload::Empty),
        "list texts" => (Method::GET, format!("{b}/texts"), Payload::Empty),
        "get text" => (Method::GET, format!("{b}/texts/{t}"), Payload::Empty),
        "create text" => (
            Method::POST,
            format!("{b}/texts"),
            Payload::Json(json!({"title": "Other", "igt": "\\tx ev\n\\mb ev\n\\gl house\n"})),
        ),
        "update text" => (
            Method::PUT,
            format!("{b}/texts/{t}"),
            Payload::Json(json!({"title": "Retitled", "utterances": [], "rev": seed.text_rev})),
        ),
        "delete text" => (Method::DELETE, format!("{b}/texts/{t}?rev={}", seed.text_rev), Payload::Empty),
        "list utterances" => (Method::GET, format!("{b}/texts/{t}/utterances"), Payload::Empty),
        "get utterance" => (Method::GET, format!("{b}/texts/{t}/utterances/{u}"), Payload::Empty),
        "append utterance" => (
            Method::POST,
            format!("{b}/texts/{t}/utterances"),
            Payload::Json(json!({"phrase": "ev", "rev": seed.text_rev})),
        ),
        "update utterance" => (
            Method::PUT,
            format!("{b}/texts/{t}/utterances/{u}"),
            Payload::Json(json!({"phrase": "kitablar", "rev": seed.text_rev})),
        ),
        "delete utterance" => (Method::DELETE, format!("{b}/texts/{t}/utterances/{u}?rev={}", seed.text_rev), Payload::Empty),
        "list media" => (Method::GET, format!("{b}/media"), Payload::Empty),
        "download media" => (Method::GET, format!("/api/v1/media/{}", seed.sha), Payload::Empty),
        "upload media" => {
            let (ct, body) = multipart("file", "b.png", "image/png", format!("PNG{}", seed.pid).as_bytes());
            (Method::POST, format!("{b}/media"), Payload::Raw(ct, body))
        }
        "suggest" => (Method::POST, format!("{b}/gloss/suggest"), Payload::Json(json!({"words": ["kitablar"]}))),
        "model info" => (Method::GET, format!("{b}/gloss/model"), Payload::Empty),
        "retrain" => (Method::POST, format!("{b}/gloss/retrain"), Payload::Empty),
        "import predictions" => (
            Method::POST,
            format!("{b}/gloss/predictions"),
            Payload::Raw(
                "application/x-ndjson",
                br#"{"word":"evler","morphs":[{"form":"ev","type":"root","gloss":"house"},{"form":"ler","type":"suffix","gloss":"PL"}]}"#
                    .to_vec(),
            ),
        ),
        "export" => (Method::GET, format!("{b}/export?format=json"), Payload::Empty),
        "sketch" => (Method::GET, format!("{b}/sketch"), Payload::Empty),
        "dictionary" => (Method::GET, format!("{b}/dictionary"), Payload::Empty),
        "import" => (
            Method::POST,
            format!("{b}/import?format=sfm"),
            Payload::Raw("text/plain", b"\\lx ev\n\\ps n\n\\ge house\n".to_vec()),
        ),
        "get linkset" => (Method::GET, format!("{b}/linkset"), Payload::Empty),
        "put linkset" => (
            Method::PUT,
            format!("{b}/linkset"),
            Payload::Raw("text/csv", b"lemma,pos,target_iri,source\nev,n,http://example.org/house,wikidata\n".to_vec()),
        ),
        other => panic!("unknown case {other}"),
    };
    app.send(method, &uri, token, payload).await
}

/// Status the matrix requires for `role` (None = non-member).
pub fn expected(case: &Case, role: Option<Role>) -> StatusCode {
    match role {
        Some(r) if permits(r, case.action) => case.success,
        _ => StatusCode::FORBIDDEN,
    }
}

pub const ROLES: [Option<Role>; 4] = [Some(Role::Owner), Some(Role::Editor), Some(Role::Viewer), None];

/// Runs every case for every role, the non-member, a missing token and a
/// bogus token, each on a freshly seeded project. Returns the mismatches.
pub async fn sweep(app: &App, team: &Team) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (i, case) in CASES.iter().enumerate() {
        for role in ROLES {
            let seed = seed(app, team, &format!("matrix {i} {role:?}"));
            let reply = issue(app, team, &seed, case.name, Some(team.token(role))).await;
            let want = expected(case, role);
            checked += 1;
            if reply.status != want {
                failures.push(format!("{} / {role:?}: got {} want {want}: {}", case.name, reply.status, reply.text()));
            }
        }
        let seed = seed(app, team, &format!("matrix {i} anon"));
        for (label, token) in [("no token", None), ("bad token", Some("bogus-token"))] {
            let reply = issue(app, team, &seed, case.name, token).await;
            checked += 1;
            if reply.status != StatusCode::UNAUTHORIZED {
                failures.push(format!("{} / {label}: got {}", case.name, reply.status));
            }
        }
    }
    (checked, failures)
}

/// Writes that replace an existing document, with the document whose
/// revision they carry.
pub const REV_CASES: &[(&str, &str)] = &[
    ("update project", "project"),
    ("delete project", "project"),
    ("add member", "project"),
    ("change role", "project"),
    ("remove member", "project"),
    ("update entry", "entry"),
    ("delete entry", "entry"),
    ("update text", "text"),
    ("delete text", "text"),
    ("append utterance", "text"),
    ("update utterance", "text"),
    ("delete utterance", "text"),
];

pub const STALE_REV: &str = "1-000000000000";

/// Sends each revisioned write with a stale revision as the owner. Every
/// one must answer 409 carrying the current revision.
pub async fn stale_sweep(app: &App, team: &Team) -> (usize, Vec<String>) {
    let mut failures = Vec::new();
    for (i, (name, doc)) in REV_CASES.iter().enumerate() {
        let fresh = seed(app, team, &format!("stale {i}"));
        let mut stale = fresh.clone();
        let current = match *doc {
            "project" => std::mem::replace(&mut stale.project_rev, STALE_REV.into()),
            "entry" => std::mem::replace(&mut stale.entry_rev, STALE_REV.into()),
            _ => std::mem::replace(&mut stale.text_rev, STALE_REV.into()),
        };
        let reply = issue(app, team, &stale, name, Some(&team.owner.1)).await;
        if reply.status != StatusCode::CONFLICT {
            failures.push(format!("{name}: got {} {}", reply.status, reply.text()));
            continue;
        }
        let body = reply.json();
        if body["error"]["code"] != "conflict" || body["error"]["current_rev"] != current.as_str() {
            failures.push(format!("{name}: body {body}"));
        }
    }
    (REV_CASES.len(), failures)
}
