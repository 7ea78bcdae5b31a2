use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::phoneme::{is_russian_letter, is_vowel_letter};

pub const STRESS_MARK: char = '+';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("`{word}`: character {ch:?} is not a lowercase Russian letter")]
    InvalidChar { word: String, ch: char },
    #[error("`{0}`: more than one stress marker")]
    MultipleStress(String),
    #[error("`{0}`: stress marker must follow a vowel letter")]
    StressNotAfterVowel(String),
    #[error("`{0}`: no stress marker")]
    MissingStress(String),
}

/// A lowercase Russian word with at most one `+` placed right after the
/// stressed vowel. Hyphens are allowed between the parts of a compound.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AccentedWord(String);

impl AccentedWord {
    pub fn parse(s: &str) -> Result<Self, WordError> {
        if s.is_empty() {
            return Err(WordError::Empty);
        }
        let mut prev: Option<char> = None;
        let mut marks = 0;
        for ch in s.chars() {
            if ch == STRESS_MARK {
                marks += 1;
                if marks > 1 {
                    return Err(WordError::MultipleStress(s.to_string()));
                }
                if !prev.is_some_and(is_vowel_letter) {
                    return Err(WordError::StressNotAfterVowel(s.to_string()));
                }
            } else if ch != '-' && !(is_russian_letter(ch) && ch.is_lowercase()) {
                return Err(WordError::InvalidChar {
                    word: s.to_string(),
                    ch,
                });
            }
            prev = Some(ch);
        }
        Ok(AccentedWord(s.to_string()))
    }

    /// Like [`AccentedWord::parse`] but requires exactly one stress marker.
    pub fn parse_stressed(s: &str) -> Result<Self, WordError> {
        let word = Self::parse(s)?;
        if !word.has_stress() {
            return Err(WordError::MissingStress(s.to_string()));
        }
        Ok(word)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn has_stress(&self) -> bool {
        self.0.contains(STRESS_MARK)
    }

    /// The word with the stress marker removed.
    pub fn plain(&self) -> String {
        strip_stress(&self.0)
    }

    /// Char index (in [`AccentedWord::plain`]) of the stressed vowel.
    pub fn stressed_index(&self) -> Option<usize> {
        self.0
            .chars()
            .position(|c| c == STRESS_MARK)
            .map(|pos| pos - 1)
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

pub fn strip_stress(s: &str) -> String {
    s.chars().filter(|&c| c != STRESS_MARK).collect()
}

impl fmt::Display for AccentedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for AccentedWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AccentedWord::parse(s)
    }
}

impl Serialize for AccentedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for AccentedWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        AccentedWord::parse_stressed(&s).map_err(serde::de::Error::custom)
    }
}
