//! Application logic behind the HTTP handlers and the CLI. Methods are
//! blocking; the HTTP layer calls them from a blocking thread pool.

mod exchange;
mod gloss;
mod records;

use std::collections::HashMap;
use std::sync::Arc;

use chrono::{Duration, Utc};
use life_core::model::is_valid_username;
use life_core::store::{to_document, Collection, DocumentStore, QueryFilter, StoreError, Stored};
use life_core::validate::validate_project;
use life_core::{Id, Project, Role, User};
use parking_lot::{Mutex, RwLock};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use exchange::{export_filename, ExportFormat, ImportFormat, ImportReport, SkippedRecord};
pub use gloss::{GlossSnapshot, ModelInfo};
pub use records::{EntryInput, Page, TextInput, UtteranceInput};

use crate::auth::{self, permits, Action, SessionRecord, SessionToken};
use crate::config::Config;
use crate::error::{ApiError, ApiResult};

pub struct Service {
    store: Arc<dyn DocumentStore>,
    config: Config,
    /// Verified against when the user does not exist, so both failures cost the same.
    dummy_hash: String,
    glossers: RwLock<HashMap<Id, Arc<GlossSnapshot>>>,
    gloss_writes: Mutex<()>,
}

/// The caller of an authorized request and the project it targets.
#[derive(Clone, Debug)]
pub struct Access {
    pub user_id: Id,
    pub role: Role,
    pub project: Project,
}

#[derive(Clone, Debug, Deserialize)]
pub struct NewProject {
    pub name: String,
    pub language_name: String,
    pub language_code: String,
    #[serde(default)]
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub pos_inventory: Vec<String>,
    #[serde(default)]
    pub metalanguage: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ProjectUpdate {
    pub name: Option<String>,
    pub language_name: Option<String>,
    pub language_code: Option<String>,
    pub alphabet: Option<Vec<String>>,
    pub pos_inventory: Option<Vec<String>>,
    pub metalanguage: Option<String>,
    #[serde(default)]
    pub rev: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Member {
    pub user_id: Id,
    pub username: String,
    pub role: Role,
}

/// Public view of a user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UserInfo {
    pub id: Id,
    pub username: String,
}

pub(crate) fn parse_id(raw: &str, what: &str) -> ApiResult<Id> {
    Id::parse(raw).map_err(|_| ApiError::not_found(what))
}

fn decode<T: DeserializeOwned>(stored: &Stored) -> ApiResult<T> {
    stored.decode().map_err(|e| ApiError::internal(format!("stored document {} is unreadable: {e}", stored.id)))
}

fn document<T: Serialize>(value: &T) -> ApiResult<Value> {
    to_document(value).map_err(ApiError::from)
}

impl Service {
    pub fn new(store: Arc<dyn DocumentStore>, config: Config) -> Service {
        Service {
            store,
            config,
            dummy_hash: auth::hash_password(&auth::new_token()),
            glossers: RwLock::new(HashMap::new()),
            gloss_writes: Mutex::new(()),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn store(&self) -> &Arc<dyn DocumentStore> {
        &self.store
    }

    fn get_doc<T: DeserializeOwned>(&self, coll: Collection, id: &str, what: &str) -> ApiResult<T> {
        match self.store.get(coll, id) {
            Ok(stored) => decode(&stored),
            Err(StoreError::NotFound) => Err(ApiError::not_found(what)),
            Err(e) => Err(e.into()),
        }
    }

    fn query_docs<T: DeserializeOwned>(&self, coll: Collection, filter: &QueryFilter) -> ApiResult<Vec<T>> {
        self.store.query_all(coll, filter)?.iter().map(decode).collect()
    }

    // ---- users and sessions

    pub fn create_user(&self, username: &str, password: &str, email: Option<String>) -> ApiResult<UserInfo> {
        if !is_valid_username(username) {
            return Err(ApiError::unprocessable("username must be 3 to 32 characters of a-z, 0-9 and _"));
        }
        if password.chars().count() < auth::MIN_PASSWORD_LEN {
            return Err(ApiError::unprocessable(format!("password must be at least {} characters", auth::MIN_PASSWORD_LEN)));
        }
        let user = User {
            id: auth::user_id_for(username),
            username: username.to_owned(),
            password_hash: auth::hash_password(password),
            email,
            rev: String::new(),
        };
        match self.store.put(Collection::Users, &document(&user)?, None) {
            Ok(_) => Ok(UserInfo { id: user.id, username: user.username }),
            Err(StoreError::StaleRevision { .. }) => {
                Err(ApiError::new(axum::http::StatusCode::CONFLICT, "already_exists", format!("user {username:?} exists")))
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn find_user(&self, username: &str) -> ApiResult<Option<User>> {
        match self.store.get(Collection::Users, auth::user_id_for(username).as_str()) {
            Ok(s) => decode(&s).map(Some),
            Err(StoreError::NotFound) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn user(&self, id: &Id) -> ApiResult<User> {
        self.get_doc(Collection::Users, id.as_str(), "user")
    }

    /// Same error, and the same hashing work, for an unknown user and a wrong password.
    pub fn authenticate(&self, username: &str, password: &str) -> ApiResult<SessionToken> {
        let user = self.find_user(username)?;
        let hash = user.as_ref().map_or(self.dummy_hash.as_str(), |u| u.password_hash.as_str());
        let verified = auth::verify_password(hash, password);
        let user = match user {
            Some(u) if verified => u,
            _ => return Err(ApiError::invalid_credentials()),
        };
        let token = auth::new_token();
        let expires_at = Utc::now() + Duration::hours(self.config.token_ttl_hours);
        let record = SessionRecord { id: auth::token_key(&self.config.secret, &token), user_id: user.id.clone(), expires_at };
        self.store.put(Collection::Sessions, &document(&record)?, None)?;
        Ok(SessionToken { token, user_id: user.id, expires_at })
    }

    /// The user behind a bearer token. Expired sessions are removed.
    pub fn session_user(&self, token: &str) -> ApiResult<Id> {
        let key = auth::token_key(&self.config.secret, token);
        let stored = match self.store.get(Collection::Sessions, &key) {
            Ok(s) => s,
            Err(StoreError::NotFound) => return Err(ApiError::unauthenticated()),
            Err(e) => return Err(e.into()),
        };
        let record: SessionRecord = decode(&stored)?;
        if record.expires_at <= Utc::now() {
            let _ = self.store.delete(Collection::Sessions, &key, &stored.rev);
            return Err(ApiError::unauthenticated());
        }
        Ok(record.user_id)
    }

    pub fn logout(&self, token: &str) -> ApiResult<()> {
        let key = auth::token_key(&self.config.secret, token);
        match self.store.get(Collection::Sessions, &key) {
            Ok(s) => match self.store.delete(Collection::Sessions, &key, &s.rev) {
                Ok(()) | Err(StoreError::NotFound) => Ok(()),
                Err(e) => Err(e.into()),
            },
            Err(StoreError::NotFound) => Err(ApiError::unauthenticated()),
            Err(e) => Err(e.into()),
        }
    }

    // ---- authorization

    /// 401 for a bad token, 404 for an unknown project, 403 when the
    /// caller is not a member or the role does not grant `action`.
    pub fn authorize(&self, token: &str, project_id: &str, action: Action) -> ApiResult<Access> {
        let user_id = self.session_user(token)?;
        let project = self.project(&parse_id(project_id, "project")?)?;
        let role = project.role_of(&user_id).ok_or_else(ApiError::forbidden)?;
        if !permits(role, action) {
            return Err(ApiError::forbidden());
        }
        Ok(Access { user_id, role, project })
    }

    // ---- projects

    pub fn project(&self, id: &Id) -> ApiResult<Project> {
        self.get_doc(Collection::Projects, id.as_str(), "project")
    }

    pub fn project_by_slug(&self, slug: &str) -> ApiResult<Project> {
        self.query_docs::<Project>(Collection::Projects, &QueryFilter::default().field("slug", slug))?
            .into_iter()
            .next()
            .ok_or_else(|| ApiError::not_found("project"))
    }

    pub fn all_projects(&self) -> ApiResult<Vec<Project>> {
        self.query_docs(Collection::Projects, &QueryFilter::default())
    }

    pub fn projects_of(&self, user: &Id) -> ApiResult<Vec<Project>> {
        Ok(self.all_projects()?.into_iter().filter(|p| p.members.contains_key(user)).collect())
    }

    pub fn create_project(&self, owner: &Id, req: NewProject) -> ApiResult<Project> {
        let mut project = Project::new(&req.name, &req.language_name, &req.language_code, owner.clone())
            .map_err(|e| ApiError::unprocessable(e.to_string()))?;
        project.alphabet = req.alphabet;
        project.pos_inventory = req.pos_inventory;
        if let Some(m) = req.metalanguage {
            project.metalanguage = m;
        }
        let report = validate_project(&project);
        if !report.ok {
            return Err(ApiError::validation(&report));
        }
        if self.project_by_slug(&project.slug).is_ok() {
            return Err(ApiError::new(
                axum::http::StatusCode::CONFLICT,
                "already_exists",
                format!("a project with slug {:?} exists", project.slug),
            ));
        }
        project.rev = self.store.put(Collection::Projects, &document(&project)?, None)?;
        Ok(project)
    }

    fn save_project(&self, project: &Project, rev: Option<&str>) -> ApiResult<Project> {
        let report = validate_project(project);
        if !report.ok {
            return Err(ApiError::validation(&report));
        }
        let mut saved = project.clone();
        saved.rev = self.store.put(Collection::Projects, &document(project)?, rev)?;
        Ok(saved)
    }

    /// The slug and membership are not changed here.
    pub fn update_project(&self, access: &Access, update: ProjectUpdate) -> ApiResult<Project> {
        let mut p = access.project.clone();
        if let Some(v) = update.name {
            p.name = v;
        }
        if let Some(v) = update.language_name {
            p.language_name = v;
        }
        if let Some(v) = update.language_code {
            p.language_code = v;
        }
        if let Some(v) = update.alphabet {
            p.alphabet = v;
        }
        if let Some(v) = update.pos_inventory {
            p.pos_inventory = v;
        }
        if let Some(v) = update.metalanguage {
            p.metalanguage = v;
        }
        self.save_project(&p, update.rev.as_deref())
    }

    /// Removes the project and everything it owns. Blobs stay, since other
    /// projects may share them.
    pub fn delete_project(&self, access: &Access, rev: Option<&str>) -> ApiResult<()> {
        let id = access.project.id.as_str();
        self.store.delete(Collection::Projects, id, rev.unwrap_or(""))?;
        for coll in [Collection::Entries, Collection::Texts, Collection::Assets, Collection::Models] {
            for doc in self.store.query_all(coll, &QueryFilter::project(id))? {
                match self.store.delete(coll, &doc.id, &doc.rev) {
                    Ok(()) | Err(StoreError::NotFound) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        self.glossers.write().remove(&access.project.id);
        Ok(())
    }

    // ---- members

    pub fn members(&self, project: &Project) -> ApiResult<Vec<Member>> {
        project
            .members
            .iter()
            .map(|(id, role)| {
                let username = self.user(id).map(|u| u.username).unwrap_or_default();
                Ok(Member { user_id: id.clone(), username, role: *role })
            })
            .collect()
    }

    pub fn set_member(&self, access: &Access, user: &Id, role: Role, rev: Option<&str>) -> ApiResult<Project> {
        self.user(user)?;
        let mut p = access.project.clone();
        p.members.insert(user.clone(), role);
        self.save_project(&p, rev)
    }

    pub fn add_member_by_name(&self, access: &Access, username: &str, role: Role, rev: Option<&str>) -> ApiResult<Project> {
        let user = self.find_user(username)?.ok_or_else(|| ApiError::not_found("user"))?;
        self.set_member(access, &user.id, role, rev)
    }

    pub fn remove_member(&self, access: &Access, user: &Id, rev: Option<&str>) -> ApiResult<Project> {
        let mut p = access.project.clone();
        if p.members.remove(user).is_none() {
            return Err(ApiError::not_found("member"));
        }
        self.save_project(&p, rev)
    }
}
