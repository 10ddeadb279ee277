//! Globally unique, persistent identifiers.
//!
//! Every unit, class, term, schema and registry record carries a GUPRI of the
//! form `urn:semunit:<authority>:<local>`. The local part is either the
//! unpadded RFC 4648 base32 encoding of a SHA-256 digest (deterministic
//! minting) or a lowercase hyphenated v4 UUID (random minting).

use std::fmt;
use std::str::FromStr;

use data_encoding::BASE32_NOPAD;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEME: &str = "urn:semunit:";
pub const DEFAULT_AUTHORITY: &str = "local";

const DIGEST_LOCAL_LEN: usize = 52;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gupri {
    text: String,
    authority_end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalKind {
    Digest,
    Uuid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MintMode {
    Deterministic,
    Random,
}

pub fn sha256(bytes: &[u8]) -> [u8; 32] {
    let digest = Sha256::digest(bytes);
    let mut out = [0u8; 32];
    out.copy_from_slice(digest.as_slice());
    out
}

impl Gupri {
    /// Deterministic identifier whose local part is the base32 digest of `bytes`.
    pub fn from_content(authority: &str, bytes: &[u8]) -> Result<Self> {
        check_authority(authority)?;
        let local = BASE32_NOPAD.encode(&sha256(bytes));
        Ok(Self::assemble(authority, &local))
    }

    /// A fresh random v4 identifier.
    pub fn random(authority: &str) -> Result<Self> {
        check_authority(authority)?;
        let local = uuid::Uuid::new_v4().hyphenated().to_string();
        Ok(Self::assemble(authority, &local))
    }

    /// Identifier for a named vocabulary or fixture entry.
    ///
    /// Panics if `authority` is malformed; intended for compile-time constants.
    pub fn named(authority: &str, namespace: &str, name: &str) -> Self {
        let seed = format!("name\n{namespace}\n{name}\n");
        Self::from_content(authority, seed.as_bytes()).expect("static authority is well formed")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let invalid = || Error::InvalidGupri(text.to_string());
        let rest = text.strip_prefix(SCHEME).ok_or_else(invalid)?;
        let (authority, local) = rest.split_once(':').ok_or_else(invalid)?;
        check_authority(authority).map_err(|_| invalid())?;
        local_kind(local).ok_or_else(invalid)?;
        Ok(Self::assemble(authority, local))
    }

    fn assemble(authority: &str, local: &str) -> Self {
        let text = format!("{SCHEME}{authority}:{local}");
        Self {
            authority_end: SCHEME.len() + authority.len(),
            text,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn authority(&self) -> &str {
        &self.text[SCHEME.len()..self.authority_end]
    }

    pub fn local(&self) -> &str {
        &self.text[self.authority_end + 1..]
    }

    pub fn local_kind(&self) -> LocalKind {
        local_kind(self.local()).expect("validated at construction")
    }
}

fn check_authority(authority: &str) -> Result<()> {
    let ok = (1..=32).contains(&authority.len())
        && authority
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidGupri(format!("{SCHEME}{authority}:")))
    }
}

fn local_kind(local: &str) -> Option<LocalKind> {
    if local.len() == DIGEST_LOCAL_LEN
        && local
            .bytes()
            .all(|b| b.is_ascii_uppercase() || (b'2'..=b'7').contains(&b))
    {
        // 256 bits in 52 symbols leaves 4 padding bits that must be zero.
        return match BASE32_NOPAD.decode(local.as_bytes()) {
            Ok(bytes) if bytes.len() == 32 && BASE32_NOPAD.encode(&bytes) == local => {
                Some(LocalKind::Digest)
            }
            _ => None,
        };
    }
    let uuid = uuid::Uuid::try_parse(local).ok()?;
    let canonical = uuid.hyphenated().to_string();
    (canonical == local && uuid.get_version_num() == 4).then_some(LocalKind::Uuid)
}

impl fmt::Display for Gupri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Debug for Gupri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.text)
    }
}

impl FromStr for Gupri {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for Gupri {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Gupri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Gupri::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn deterministic_is_stable() {
        let a = Gupri::from_content("local", b"graph\n").unwrap();
        let b = Gupri::from_content("local", b"graph\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.local().len(), 52);
        assert_eq!(a.local_kind(), LocalKind::Digest);
    }

    #[test]
    fn random_is_fresh_and_v4() {
        let a = Gupri::random("local").unwrap();
        let b = Gupri::random("local").unwrap();
        assert_ne!(a, b);
        assert_eq!(a.local_kind(), LocalKind::Uuid);
        assert_eq!(Gupri::parse(a.as_str()).unwrap(), a);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "urn:semunit::AAAA",
            "urn:other:local:x",
            "urn:semunit:UPPER:0b8c7a4e-8f5e-4a8e-9a4e-0b8c7a4e8f5e",
            "urn:semunit:local:0B8C7A4E-8F5E-4A8E-9A4E-0B8C7A4E8F5E",
            "urn:semunit:local:0b8c7a4e-8f5e-1a8e-9a4e-0b8c7a4e8f5e",
            "urn:semunit:local:abc",
            "urn:semunit:a-very-long-authority-name-over-32-chars:abc",
        ] {
            assert!(Gupri::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn accessors() {
        let g = Gupri::named("fixture", "term", "parasite X");
        assert_eq!(g.authority(), "fixture");
        assert!(g.as_str().starts_with("urn:semunit:fixture:"));
    }

    proptest! {
        #[test]
        fn parse_render_is_identity(bytes in proptest::collection::vec(any::<u8>(), 0..64),
                                    authority in "[a-z0-9-]{1,32}") {
            let g = Gupri::from_content(&authority, &bytes).unwrap();
            let reparsed = Gupri::parse(g.as_str()).unwrap();
            prop_assert_eq!(reparsed.as_str(), g.as_str());
            prop_assert_eq!(reparsed.authority(), authority.as_str());
        }
    }
}
