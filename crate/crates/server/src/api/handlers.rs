use axum::body::Bytes;
use axum::extract::{Multipart, Path, State};
use axum::http::header::{CONTENT_DISPOSITION, CONTENT_TYPE};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use life_core::dictionary::{render_html, render_print};
use life_core::Role;
use serde::Deserialize;
use serde_json::json;

use super::{blocking, AppState, Bearer, Body, Params};
use crate::auth::Action;
use crate::error::{ApiError, ApiResult};
use crate::service::{
    export_filename, parse_id, EntryInput, ExportFormat, ImportFormat, NewProject, ProjectUpdate, TextInput, UtteranceInput,
};

type Reply = ApiResult<Response>;

fn ok<T: serde::Serialize>(value: T) -> Reply {
    Ok(Json(value).into_response())
}

fn created<T: serde::Serialize>(value: T) -> Reply {
    Ok((StatusCode::CREATED, Json(value)).into_response())
}

fn no_content() -> Reply {
    Ok(StatusCode::NO_CONTENT.into_response())
}

#[derive(Deserialize)]
pub struct RevParam {
    rev: Option<String>,
}

#[derive(Deserialize)]
pub struct PageParams {
    q: Option<String>,
    pos: Option<String>,
    #[serde(default)]
    offset: usize,
    #[serde(default = "default_limit")]
    limit: usize,
}

fn default_limit() -> usize {
    50
}

// ---- auth

#[derive(Deserialize)]
pub struct Login {
    username: String,
    password: String,
}

pub async fn login(State(app): State<AppState>, Body(req): Body<Login>) -> Reply {
    let token = blocking(move || app.service.authenticate(&req.username, &req.password)).await?;
    ok(token)
}

pub async fn logout(State(app): State<AppState>, Bearer(token): Bearer) -> Reply {
    blocking(move || app.service.logout(&token)).await?;
    no_content()
}

pub async fn me(State(app): State<AppState>, Bearer(token): Bearer) -> Reply {
    let user = blocking(move || {
        let id = app.service.session_user(&token)?;
        app.service.user(&id)
    })
    .await?;
    ok(json!({ "id": user.id, "username": user.username }))
}

// ---- projects and members

pub async fn list_projects(State(app): State<AppState>, Bearer(token): Bearer) -> Reply {
    let items = blocking(move || {
        let user = app.service.session_user(&token)?;
        app.service.projects_of(&user)
    })
    .await?;
    ok(json!({ "items": items }))
}

pub async fn create_project(State(app): State<AppState>, Bearer(token): Bearer, Body(req): Body<NewProject>) -> Reply {
    let project = blocking(move || {
        let user = app.service.session_user(&token)?;
        app.service.create_project(&user, req)
    })
    .await?;
    created(project)
}

pub async fn get_project(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    let access = blocking(move || app.service.authorize(&token, &pid, Action::Read)).await?;
    ok(access.project)
}

pub async fn update_project(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Body(update): Body<ProjectUpdate>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Admin)?;
        app.service.update_project(&access, update)
    })
    .await?)
}

pub async fn delete_project(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Params(p): Params<RevParam>,
) -> Reply {
    blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Admin)?;
        app.service.delete_project(&access, p.rev.as_deref())
    })
    .await?;
    no_content()
}

pub async fn list_members(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    let items = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.members(&access.project)
    })
    .await?;
    ok(json!({ "items": items }))
}

#[derive(Deserialize)]
pub struct NewMember {
    username: String,
    role: Role,
    rev: Option<String>,
}

pub async fn add_member(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Body(req): Body<NewMember>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Admin)?;
        app.service.add_member_by_name(&access, &req.username, req.role, req.rev.as_deref())
    })
    .await?)
}

#[derive(Deserialize)]
pub struct RoleChange {
    role: Role,
    rev: Option<String>,
}

pub async fn set_member(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, uid)): Path<(String, String)>,
    Body(req): Body<RoleChange>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Admin)?;
        app.service.set_member(&access, &parse_id(&uid, "user")?, req.role, req.rev.as_deref())
    })
    .await?)
}

pub async fn remove_member(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, uid)): Path<(String, String)>,
    Params(p): Params<RevParam>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Admin)?;
        app.service.remove_member(&access, &parse_id(&uid, "member")?, p.rev.as_deref())
    })
    .await?)
}

// ---- entries

pub async fn list_entries(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Params(p): Params<PageParams>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.list_entries(&access, p.q.as_deref(), p.pos.as_deref(), p.offset, p.limit)
    })
    .await?)
}

pub async fn create_entry(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Body(input): Body<EntryInput>,
) -> Reply {
    created(
        blocking(move || {
            let access = app.service.authorize(&token, &pid, Action::Write)?;
            app.service.create_entry(&access, input)
        })
        .await?,
    )
}

pub async fn get_entry(State(app): State<AppState>, Bearer(token): Bearer, Path((pid, eid)): Path<(String, String)>) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.entry(&access, &eid)
    })
    .await?)
}

pub async fn update_entry(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, eid)): Path<(String, String)>,
    Body(input): Body<EntryInput>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.update_entry(&access, &eid, input)
    })
    .await?)
}

pub async fn delete_entry(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, eid)): Path<(String, String)>,
    Params(p): Params<RevParam>,
) -> Reply {
    blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.delete_entry(&access, &eid, p.rev.as_deref())
    })
    .await?;
    no_content()
}

// ---- texts and utterances

pub async fn list_texts(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Params(p): Params<PageParams>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.list_texts(&access, p.offset, p.limit)
    })
    .await?)
}

pub async fn create_text(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Body(input): Body<TextInput>,
) -> Reply {
    created(
        blocking(move || {
            let access = app.service.authorize(&token, &pid, Action::Write)?;
            app.service.create_text(&access, input)
        })
        .await?,
    )
}

pub async fn get_text(State(app): State<AppState>, Bearer(token): Bearer, Path((pid, tid)): Path<(String, String)>) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.text(&access, &tid)
    })
    .await?)
}

pub async fn update_text(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid)): Path<(String, String)>,
    Body(input): Body<TextInput>,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.update_text(&access, &tid, input)
    })
    .await?)
}

pub async fn delete_text(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid)): Path<(String, String)>,
    Params(p): Params<RevParam>,
) -> Reply {
    blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.delete_text(&access, &tid, p.rev.as_deref())
    })
    .await?;
    no_content()
}

pub async fn list_utterances(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid)): Path<(String, String)>,
) -> Reply {
    let text = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.text(&access, &tid)
    })
    .await?;
    ok(json!({ "text_rev": text.rev, "items": text.utterances }))
}

pub async fn append_utterance(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid)): Path<(String, String)>,
    Body(input): Body<UtteranceInput>,
) -> Reply {
    let (text, utt) = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.append_utterance(&access, &tid, input)
    })
    .await?;
    created(json!({ "text_rev": text.rev, "utterance": utt }))
}

pub async fn get_utterance(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid, uid)): Path<(String, String, String)>,
) -> Reply {
    let (text, i) = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.utterance(&access, &tid, &uid)
    })
    .await?;
    ok(json!({ "text_rev": text.rev, "utterance": text.utterances[i] }))
}

pub async fn update_utterance(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid, uid)): Path<(String, String, String)>,
    Body(input): Body<UtteranceInput>,
) -> Reply {
    let (text, utt) = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.update_utterance(&access, &tid, &uid, input)
    })
    .await?;
    ok(json!({ "text_rev": text.rev, "utterance": utt }))
}

pub async fn delete_utterance(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path((pid, tid, uid)): Path<(String, String, String)>,
    Params(p): Params<RevParam>,
) -> Reply {
    let text = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.delete_utterance(&access, &tid, &uid, p.rev.as_deref())
    })
    .await?;
    ok(json!({ "text_rev": text.rev }))
}

// ---- media

pub async fn list_media(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    let items = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.list_media(&access)
    })
    .await?;
    ok(json!({ "items": items }))
}

/// Multipart upload; the first part carrying a file name is stored.
pub async fn upload_media(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    multipart: Result<Multipart, axum::extract::multipart::MultipartRejection>,
) -> Reply {
    let service = app.service.clone();
    let access = blocking(move || service.authorize(&token, &pid, Action::Write)).await?;
    let mut multipart = multipart.map_err(|r| ApiError::bad_request(r.body_text()))?;
    let too_large = |e: axum::extract::multipart::MultipartError| {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::new(StatusCode::PAYLOAD_TOO_LARGE, "too_large", "upload exceeds the size limit")
        } else {
            ApiError::bad_request(e.body_text())
        }
    };
    while let Some(field) = multipart.next_field().await.map_err(too_large)? {
        let Some(filename) = field.file_name().map(str::to_owned) else { continue };
        let mime = field.content_type().unwrap_or("application/octet-stream").to_owned();
        let bytes = field.bytes().await.map_err(too_large)?;
        let asset = blocking(move || app.service.upload_media(&access, &filename, &mime, &bytes)).await?;
        return created(asset);
    }
    Err(ApiError::unprocessable("no file part in the upload"))
}

pub async fn get_media(State(app): State<AppState>, Bearer(token): Bearer, Path(sha): Path<String>) -> Reply {
    let (bytes, mime) = blocking(move || app.service.media_blob(&token, &sha)).await?;
    Ok(([(CONTENT_TYPE, mime)], bytes).into_response())
}

// ---- glosser

#[derive(Deserialize)]
pub struct SuggestRequest {
    words: Vec<String>,
}

pub async fn suggest(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Body(req): Body<SuggestRequest>,
) -> Reply {
    let (version, suggestions) = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.suggest(&access, &req.words)
    })
    .await?;
    ok(json!({ "model_version": version, "suggestions": suggestions }))
}

pub async fn retrain(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    let version = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.retrain(&access.project.id)
    })
    .await?;
    ok(json!({ "version": version }))
}

pub async fn import_predictions(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    body: Bytes,
) -> Reply {
    let n = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        app.service.import_gloss_predictions(&access.project.id, &body)
    })
    .await?;
    ok(json!({ "imported": n }))
}

pub async fn model_info(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.model_info(&access.project.id)
    })
    .await?)
}

pub async fn sketch(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.sketch(&access.project.id)
    })
    .await?)
}

// ---- interchange

#[derive(Deserialize)]
pub struct FormatParam {
    format: Option<String>,
    title: Option<String>,
}

pub async fn export(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Params(p): Params<FormatParam>,
) -> Reply {
    let (bytes, format, filename) = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        let format = ExportFormat::parse(p.format.as_deref().unwrap_or(""))?;
        let bytes = app.service.export(&access.project, format)?;
        Ok((bytes, format, export_filename(&access.project, format)))
    })
    .await?;
    let disposition = format!("attachment; filename=\"{filename}\"");
    Ok(([(CONTENT_TYPE, format.media_type().to_owned()), (CONTENT_DISPOSITION, disposition)], bytes).into_response())
}

pub async fn import(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Params(p): Params<FormatParam>,
    body: Bytes,
) -> Reply {
    ok(blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        let format = ImportFormat::parse(p.format.as_deref().unwrap_or(""))?;
        app.service.import(&access, format, &body, p.title.as_deref())
    })
    .await?)
}

pub async fn dictionary(
    State(app): State<AppState>,
    Bearer(token): Bearer,
    Path(pid): Path<String>,
    Params(p): Params<FormatParam>,
) -> Reply {
    let doc = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.dictionary(&access.project)
    })
    .await?;
    match p.format.as_deref().unwrap_or("json") {
        "json" => ok(doc),
        "html" => Ok(([(CONTENT_TYPE, "text/html; charset=utf-8")], render_html(&doc)).into_response()),
        "print" => Ok(([(CONTENT_TYPE, "text/plain; charset=utf-8")], render_print(&doc)).into_response()),
        other => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "unsupported_format",
            format!("unsupported dictionary format {other:?}; supported: json, html, print"),
        )
        .with("supported", vec!["json", "html", "print"])),
    }
}

pub async fn get_linkset(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>) -> Reply {
    let csv = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Read)?;
        app.service.linkset_source(&access.project.id)?.ok_or_else(|| ApiError::not_found("linkset"))
    })
    .await?;
    Ok(([(CONTENT_TYPE, "text/csv; charset=utf-8")], csv).into_response())
}

pub async fn put_linkset(State(app): State<AppState>, Bearer(token): Bearer, Path(pid): Path<String>, body: Bytes) -> Reply {
    let n = blocking(move || {
        let access = app.service.authorize(&token, &pid, Action::Write)?;
        let text = std::str::from_utf8(&body).map_err(|_| ApiError::unprocessable("linkset is not UTF-8"))?;
        app.service.put_linkset(&access.project.id, text)
    })
    .await?;
    ok(json!({ "links": n }))
}

