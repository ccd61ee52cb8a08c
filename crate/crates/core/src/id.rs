use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A 128-bit random identifier rendered as 32 lowercase hex characters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Id(String);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid identifier {0:?}: expected 32 lowercase hex characters")]
pub struct InvalidId(pub String);

impl Id {
    pub fn generate() -> Id {
        let mut bytes = [0u8; 16];
        rand::rng().fill_bytes(&mut bytes);
        Id(hex::encode(bytes))
    }

    pub fn parse(s: &str) -> Result<Id, InvalidId> {
        if is_valid(s) {
            Ok(Id(s.to_owned()))
        } else {
            Err(InvalidId(s.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_valid(s: &str) -> bool {
    s.len() == 32 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}

impl TryFrom<String> for Id {
    type Error = InvalidId;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        if is_valid(&s) {
            Ok(Id(s))
        } else {
            Err(InvalidId(s))
        }
    }
}

impl From<Id> for String {
    fn from(id: Id) -> String {
        id.0
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Id {
    fn as_ref(&self) -> &str {
        &self.0
    }
}
