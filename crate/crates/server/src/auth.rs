//! Passwords, session tokens and the role → action mapping.

use argon2::password_hash::{PasswordHash, PasswordHasher, PasswordVerifier, SaltString};
use argon2::Argon2;
use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use chrono::{DateTime, Utc};
use life_core::{Id, Role};
use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOKEN_BYTES: usize = 32;
pub const MIN_PASSWORD_LEN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Read,
    Write,
    Admin,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Read, Action::Write, Action::Admin];
}

/// viewer → read; editor → read, write; owner → read, write, admin.
pub fn permits(role: Role, action: Action) -> bool {
    match role {
        Role::Owner => true,
        Role::Editor => action != Action::Admin,
        Role::Viewer => action == Action::Read,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionToken {
    pub token: String,
    pub user_id: Id,
    pub expires_at: DateTime<Utc>,
}

/// What the sessions collection keeps: never the token itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub user_id: Id,
    pub expires_at: DateTime<Utc>,
}

pub fn hash_password(password: &str) -> String {
    let mut salt_bytes = [0u8; 16];
    rand::rng().fill_bytes(&mut salt_bytes);
    let salt = SaltString::encode_b64(&salt_bytes).expect("16 bytes is a valid salt length");
    Argon2::default().hash_password(password.as_bytes(), &salt).expect("argon2 with default parameters").to_string()
}

/// Constant-time comparison inside argon2; a malformed hash never verifies.
pub fn verify_password(hash: &str, password: &str) -> bool {
    PasswordHash::new(hash).is_ok_and(|h| Argon2::default().verify_password(password.as_bytes(), &h).is_ok())
}

/// 256 random bits, base64url without padding.
pub fn new_token() -> String {
    let mut bytes = [0u8; TOKEN_BYTES];
    rand::rng().fill_bytes(&mut bytes);
    URL_SAFE_NO_PAD.encode(bytes)
}

/// Storage key of a token: hex sha256 of the server secret followed by the token.
pub fn token_key(secret: &str, token: &str) -> String {
    let mut h = Sha256::new();
    h.update(secret.as_bytes());
    h.update(token.as_bytes());
    hex::encode(h.finalize())
}

/// Users are keyed by a digest of their name, so two concurrent sign-ups
/// of one name collide in the store.
pub fn user_id_for(username: &str) -> Id {
    let digest = Sha256::digest(format!("user:{username}").as_bytes());
    Id::parse(&hex::encode(&digest[..16])).expect("32 hex characters")
}
