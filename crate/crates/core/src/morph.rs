//! Universal Dependencies style morphological tags.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphTagError {
    #[error("empty morphological tag")]
    Empty,
    #[error("malformed feature `{0}` (expected Key=Value)")]
    BadFeature(String),
}

/// Part of speech plus feature pairs. Features may be separated by spaces or
/// `|`; the canonical form lists them space-separated and sorted by key, or
/// `_` when there are none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphTag {
    pos: String,
    features: BTreeMap<String, String>,
}

/// How a candidate tag relates to a query tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagAgreement {
    DifferentPos,
    Contradicts,
    Agrees(usize),
}

impl MorphTag {
    pub fn new(pos: impl Into<String>) -> Self {
        MorphTag {
            pos: pos.into(),
            features: BTreeMap::new(),
        }
    }

    pub fn with_feature(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.features.insert(key.into(), value.into());
        self
    }

    pub fn pos(&self) -> &str {
        &self.pos
    }

    pub fn feature(&self, key: &str) -> Option<&str> {
        self.features.get(key).map(String::as_str)
    }

    pub fn features(&self) -> impl Iterator<Item = (&str, &str)> {
        self.features.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// Same POS, number of shared feature pairs, and whether any shared key
    /// carries a different value.
    pub fn agreement(&self, other: &MorphTag) -> TagAgreement {
        if self.pos != other.pos {
            return TagAgreement::DifferentPos;
        }
        let mut agree = 0;
        for (k, v) in &self.features {
            match other.features.get(k) {
                Some(ov) if ov == v => agree += 1,
                Some(_) => return TagAgreement::Contradicts,
                None => {}
            }
        }
        TagAgreement::Agrees(agree)
    }
}

impl FromStr for MorphTag {
    type Err = MorphTagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(|c: char| c.is_whitespace() || c == '|').filter(|p| !p.is_empty());
        let pos = parts.next().ok_or(MorphTagError::Empty)?;
        let mut features = BTreeMap::new();
        for part in parts {
            if part == "_" {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .filter(|(k, v)| !k.is_empty() && !v.is_empty())
                .ok_or_else(|| MorphTagError::BadFeature(part.to_string()))?;
            features.insert(k.to_string(), v.to_string());
        }
        Ok(MorphTag {
            pos: pos.to_string(),
            features,
        })
    }
}

impl fmt::Display for MorphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pos)?;
        if self.features.is_empty() {
            return f.write_str(" _");
        }
        for (k, v) in &self.features {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}
