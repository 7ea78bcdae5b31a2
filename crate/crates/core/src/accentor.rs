//! Stress placement over tokenized sentences.
//!
//! Each token goes through: pre-accented passthrough, non-Russian passthrough,
//! function-word policy, dictionary (simple forms, then homographs resolved by
//! morphological tag), external provider, and finally gives up, leaving the
//! token unaccented.

use std::fmt;
use std::io::Read;
use std::path::Path;

use log::{debug, warn};
use thiserror::Error;

use crate::accent_dict::{AccentDictionary, AccentEntry, DictError, Homograph};
use crate::morph::{MorphTag, TagAgreement};
use crate::phoneme::{is_russian_letter, is_vowel_letter};
use crate::word::{strip_stress, AccentedWord, STRESS_MARK};

#[derive(Debug, Error)]
pub enum AccentError {
    #[error("{tokens} tokens but {tags} tags")]
    LengthMismatch { tokens: usize, tags: usize },
}

#[derive(Debug, Error)]
#[error("provider lookup failed: {0}")]
pub struct ProviderError(pub String);

/// Source of stress information consulted after a dictionary miss.
pub trait AccentProvider: Send + Sync {
    fn lookup_external(&self, word: &str) -> Result<Option<AccentEntry>, ProviderError>;
}

/// Never finds anything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullProvider;

impl AccentProvider for NullProvider {
    fn lookup_external(&self, _word: &str) -> Result<Option<AccentEntry>, ProviderError> {
        Ok(None)
    }
}

/// Answers from a local file in the accent dictionary format.
#[derive(Debug)]
pub struct FixtureProvider {
    entries: AccentDictionary,
}

impl FixtureProvider {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, DictError> {
        Ok(FixtureProvider {
            entries: AccentDictionary::from_reader(reader)?,
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, DictError> {
        Ok(FixtureProvider {
            entries: AccentDictionary::from_path(path)?,
        })
    }
}

impl AccentProvider for FixtureProvider {
    fn lookup_external(&self, word: &str) -> Result<Option<AccentEntry>, ProviderError> {
        Ok(self.entries.lookup(word))
    }
}

/// How a token's output was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    DictSimple,
    /// `tag` is the dictionary tag of the chosen variant; `None` when all
    /// variants agreed and no tag was needed.
    DictHomograph {
        tag: Option<String>,
    },
    ProviderHit,
    PreAccented,
    NonRussian,
    FunctionWord,
    Unresolved,
    /// Hyphenated compound accentuated part by part.
    Compound(Vec<Outcome>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenDecision {
    pub input: String,
    pub outcome: Outcome,
    pub output: String,
}

impl TokenDecision {
    fn new(input: &str, outcome: Outcome, output: impl Into<String>) -> Self {
        TokenDecision {
            input: input.to_string(),
            outcome,
            output: output.into(),
        }
    }

    fn passthrough(input: &str, outcome: Outcome) -> Self {
        Self::new(input, outcome, input)
    }

    pub fn is_accented(&self) -> bool {
        self.output.contains(STRESS_MARK)
    }
}

impl fmt::Display for TokenDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.output)
    }
}

const FUNCTION_POS: [&str; 4] = ["ADP", "CCONJ", "SCONJ", "PART"];

/// The variant picked for a homograph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub form: AccentedWord,
    pub tag: Option<String>,
}

/// Picks a homograph variant for `tag`.
///
/// An exact canonical tag match wins. Otherwise the variant with the same POS,
/// no conflicting feature and the most shared features is taken (earliest on
/// ties). Without a usable tag the entry resolves only if all variants carry
/// the same stress.
pub fn resolve_homograph(entry: &Homograph, tag: Option<&MorphTag>) -> Option<Resolution> {
    if let Some(query) = tag {
        let wanted = query.canonical();
        let parsed: Vec<(&str, Option<MorphTag>, &AccentedWord)> = entry
            .variants()
            .map(|(t, f)| (t, t.parse::<MorphTag>().ok(), f))
            .collect();

        let exact = parsed.iter().find(|(raw, tag, _)| match tag {
            Some(t) => t.canonical() == wanted,
            None => *raw == wanted,
        });
        if let Some((raw, _, form)) = exact {
            return Some(Resolution {
                form: (*form).clone(),
                tag: Some(raw.to_string()),
            });
        }

        let mut best: Option<(usize, &str, &AccentedWord)> = None;
        for (raw, variant_tag, form) in &parsed {
            let Some(variant_tag) = variant_tag else {
                continue;
            };
            if let TagAgreement::Agrees(score) = query.agreement(variant_tag) {
                if best.is_none_or(|(s, _, _)| score > s) {
                    best = Some((score, raw, form));
                }
            }
        }
        if let Some((_, raw, form)) = best {
            return Some(Resolution {
                form: form.clone(),
                tag: Some(raw.to_string()),
            });
        }
    }
    entry.unanimous().map(|form| Resolution {
        form: form.clone(),
        tag: None,
    })
}

fn is_russian_word(word: &str) -> bool {
    word.chars().any(is_russian_letter)
        && word.chars().all(|c| c == '-' || is_russian_letter(c))
}

fn vowel_count(word: &str) -> usize {
    word.chars().filter(|&c| is_vowel_letter(c)).count()
}

/// Runs the accentuation pipeline against a dictionary and a provider.
pub struct Accentor {
    dict: AccentDictionary,
    provider: Box<dyn AccentProvider>,
}

impl fmt::Debug for Accentor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Accentor").field("dict", &self.dict).finish()
    }
}

impl Accentor {
    pub fn new(dict: AccentDictionary, provider: Box<dyn AccentProvider>) -> Self {
        Accentor { dict, provider }
    }

    pub fn with_dictionary(dict: AccentDictionary) -> Self {
        Self::new(dict, Box::new(NullProvider))
    }

    pub fn dictionary(&self) -> &AccentDictionary {
        &self.dict
    }

    pub fn accentuate_phrase<S: AsRef<str>>(
        &self,
        tokens: &[S],
        tags: Option<&[MorphTag]>,
    ) -> Result<Vec<TokenDecision>, AccentError> {
        if let Some(tags) = tags {
            if tags.len() != tokens.len() {
                return Err(AccentError::LengthMismatch {
                    tokens: tokens.len(),
                    tags: tags.len(),
                });
            }
        }
        Ok(tokens
            .iter()
            .enumerate()
            .map(|(i, token)| self.accentuate_word(token.as_ref(), tags.map(|t| &t[i])))
            .collect())
    }

    pub fn accentuate_word(&self, word: &str, tag: Option<&MorphTag>) -> TokenDecision {
        if word.is_empty() {
            return TokenDecision::passthrough(word, Outcome::Unresolved);
        }
        let mut lower = word.to_lowercase();

        if lower.contains(STRESS_MARK) {
            match AccentedWord::parse(&lower) {
                Ok(form) => return TokenDecision::new(word, Outcome::PreAccented, form.into_string()),
                Err(e) => {
                    warn!("ignoring misplaced stress marker in `{word}`: {e}");
                    lower = strip_stress(&lower);
                }
            }
        }

        if !is_russian_word(&lower) {
            return TokenDecision::passthrough(word, Outcome::NonRussian);
        }

        if lower.contains('-') {
            return self.accentuate_hyphenated(word, &lower, tag);
        }

        if tag.is_some_and(|t| FUNCTION_POS.contains(&t.pos()))
            || (vowel_count(&lower) <= 1 && !self.dict.contains(&lower))
        {
            return TokenDecision::new(word, Outcome::FunctionWord, lower);
        }

        if let Some(decision) = self.lookup_dictionary(word, &lower, tag) {
            return decision;
        }

        match self.provider.lookup_external(&lower) {
            Ok(Some(entry)) => {
                if let Err(e) = self.dict.add_cached_entry(&lower, entry.clone()) {
                    warn!("provider returned an invalid entry for `{lower}`: {e}");
                    return TokenDecision::passthrough(word, Outcome::Unresolved);
                }
                let form = match &entry {
                    AccentEntry::Simple(form) => Some(form.clone()),
                    AccentEntry::Homograph(h) => resolve_homograph(h, tag).map(|r| r.form),
                };
                match form {
                    Some(form) => TokenDecision::new(word, Outcome::ProviderHit, form.into_string()),
                    None => TokenDecision::passthrough(word, Outcome::Unresolved),
                }
            }
            Ok(None) => {
                debug!("no stress found for `{lower}`");
                TokenDecision::passthrough(word, Outcome::Unresolved)
            }
            Err(e) => {
                warn!("`{lower}`: {e}");
                TokenDecision::passthrough(word, Outcome::Unresolved)
            }
        }
    }

    fn lookup_dictionary(&self, word: &str, key: &str, tag: Option<&MorphTag>) -> Option<TokenDecision> {
        match self.dict.lookup(key)? {
            AccentEntry::Simple(form) => {
                Some(TokenDecision::new(word, Outcome::DictSimple, form.into_string()))
            }
            AccentEntry::Homograph(h) => Some(match resolve_homograph(&h, tag) {
                Some(r) => TokenDecision::new(
                    word,
                    Outcome::DictHomograph { tag: r.tag },
                    r.form.into_string(),
                ),
                None => TokenDecision::passthrough(word, Outcome::Unresolved),
            }),
        }
    }

    /// Whole-word lookup first; otherwise each part is accentuated on its own
    /// and only the rightmost stress mark is kept.
    fn accentuate_hyphenated(&self, word: &str, lower: &str, tag: Option<&MorphTag>) -> TokenDecision {
        if let Some(decision) = self.lookup_dictionary(word, lower, tag) {
            return decision;
        }
        let parts: Vec<TokenDecision> = lower
            .split('-')
            .map(|part| self.accentuate_word(part, tag))
            .collect();
        if !parts.iter().any(TokenDecision::is_accented) {
            return TokenDecision::passthrough(word, Outcome::Unresolved);
        }
        let last_stressed = parts.iter().rposition(TokenDecision::is_accented);
        let output = parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if Some(i) == last_stressed {
                    p.output.clone()
                } else {
                    strip_stress(&p.output)
                }
            })
            .collect::<Vec<_>>()
            .join("-");
        let outcomes = parts.into_iter().map(|p| p.outcome).collect();
        TokenDecision::new(word, Outcome::Compound(outcomes), output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dict() -> AccentDictionary {
        let doc = r#"{
            "homonyms": {
                "альплагеря": {
                    "NOUN Animacy=Inan Case=Gen Gender=Masc Number=Sing": "альпла+геря",
                    "NOUN Animacy=Inan Case=Nom Gender=Masc Number=Plur": "альплагеря+"
                },
                "кума": {
                    "NOUN Animacy=Anim Case=Gen Gender=Masc Number=Sing": "ку+ма",
                    "NOUN Animacy=Anim Case=Nom Gender=Fem Number=Sing": "кума+"
                },
                "замок": {
                    "NOUN Case=Nom": "за+мок",
                    "NOUN Case=Acc": "за+мок"
                }
            },
            "non-homonyms": ["пода+рок", "кто+-то", "ко+т", "кра+сный"]
        }"#;
        AccentDictionary::from_reader(doc.as_bytes()).unwrap()
    }

    fn provider() -> Box<dyn AccentProvider> {
        let doc = r#"{"non-homonyms": ["фё+дор", "лю+бит", "ко+фе"]}"#;
        Box::new(FixtureProvider::from_reader(doc.as_bytes()).unwrap())
    }

    fn tag(s: &str) -> MorphTag {
        s.parse().unwrap()
    }

    fn outputs(decisions: &[TokenDecision]) -> Vec<&str> {
        decisions.iter().map(|d| d.output.as_str()).collect()
    }

    #[test]
    fn tagged_sentence() {
        let acc = Accentor::new(dict(), provider());
        let tags = [
            tag("NOUN Animacy=Inan Case=Nom Gender=Masc Number=Sing"),
            tag("ADP _"),
            tag("NOUN Animacy=Anim Case=Gen Gender=Masc Number=Sing"),
        ];
        let out = acc
            .accentuate_phrase(&["подарок", "для", "кума"], Some(&tags))
            .unwrap();
        assert_eq!(outputs(&out), ["пода+рок", "для", "ку+ма"]);
        assert_eq!(out[1].outcome, Outcome::FunctionWord);
    }

    #[test]
    fn provider_sentence_and_write_through() {
        let acc = Accentor::new(dict(), provider());
        let out = acc.accentuate_phrase(&["фёдор", "любит", "кофе"], None).unwrap();
        assert_eq!(outputs(&out), ["фё+дор", "лю+бит", "ко+фе"]);
        assert!(out.iter().all(|d| d.outcome == Outcome::ProviderHit));
        let again = acc.accentuate_word("фёдор", None);
        assert_eq!(again.outcome, Outcome::DictSimple);
        assert_eq!(acc.dictionary().pending_len(), 3);
    }

    #[test]
    fn non_russian_passthrough() {
        let acc = Accentor::with_dictionary(dict());
        let out = acc.accentuate_phrase(&["hello", "мир123"], None).unwrap();
        assert_eq!(outputs(&out), ["hello", "мир123"]);
        assert!(out.iter().all(|d| d.outcome == Outcome::NonRussian));
    }

    #[test]
    fn pipeline_order() {
        let acc = Accentor::with_dictionary(dict());
        let d = acc.accentuate_word("про+сто", Some(&tag("ADV _")));
        assert_eq!((d.outcome, d.output.as_str()), (Outcome::PreAccented, "про+сто"));
        let d = acc.accentuate_word("для", None);
        assert_eq!((d.outcome, d.output.as_str()), (Outcome::FunctionWord, "для"));
        let d = acc.accentuate_word("кот", None);
        assert_eq!((d.outcome, d.output.as_str()), (Outcome::DictSimple, "ко+т"));
        let d = acc.accentuate_word(
            "альплагеря",
            Some(&tag("NOUN Animacy=Inan Case=Nom Gender=Masc Number=Plur")),
        );
        assert_eq!(d.output, "альплагеря+");
        let d = acc.accentuate_word("неведомое", None);
        assert_eq!((d.outcome, d.output.as_str()), (Outcome::Unresolved, "неведомое"));
    }

    #[test]
    fn length_mismatch() {
        let acc = Accentor::with_dictionary(dict());
        assert!(matches!(
            acc.accentuate_phrase(&["кот"], Some(&[])),
            Err(AccentError::LengthMismatch { tokens: 1, tags: 0 })
        ));
    }

    #[test]
    fn homograph_resolution_rules() {
        let d = dict();
        let Some(AccentEntry::Homograph(h)) = d.lookup("альплагеря") else {
            panic!()
        };
        let r = resolve_homograph(&h, Some(&tag("NOUN Number=Sing|Case=Gen"))).unwrap();
        assert_eq!(r.form.as_str(), "альпла+геря");
        assert_eq!(
            r.tag.as_deref(),
            Some("NOUN Animacy=Inan Case=Gen Gender=Masc Number=Sing")
        );
        assert!(resolve_homograph(&h, Some(&tag("VERB _"))).is_none());
        assert!(resolve_homograph(&h, None).is_none());
        // every variant contradicts on Case
        assert!(resolve_homograph(&h, Some(&tag("NOUN Case=Dat"))).is_none());

        let Some(AccentEntry::Homograph(zamok)) = d.lookup("замок") else {
            panic!()
        };
        assert_eq!(resolve_homograph(&zamok, None).unwrap().form.as_str(), "за+мок");
    }

    #[test]
    fn homograph_partial_match_prefers_more_agreement_then_order() {
        let h: Homograph = [
            ("NOUN Case=Gen".to_string(), AccentedWord::parse("о+кна").unwrap()),
            ("NOUN Case=Nom Number=Plur".to_string(), AccentedWord::parse("окна+").unwrap()),
        ]
        .into();
        let r = resolve_homograph(&h, Some(&tag("NOUN Number=Plur"))).unwrap();
        assert_eq!(r.form.as_str(), "окна+");
        let r = resolve_homograph(&h, Some(&tag("NOUN _"))).unwrap();
        assert_eq!(r.form.as_str(), "о+кна");
    }

    #[test]
    fn hyphenated_compounds() {
        let acc = Accentor::with_dictionary(dict());
        let d = acc.accentuate_word("кто-то", None);
        assert_eq!((d.outcome, d.output.as_str()), (Outcome::DictSimple, "кто+-то"));
        let d = acc.accentuate_word("ярко-кра+сный", None);
        assert_eq!(d.outcome, Outcome::PreAccented);
        let d = acc.accentuate_word("абв-где", None);
        assert_eq!((d.outcome, d.output.as_str()), (Outcome::Unresolved, "абв-где"));
        let d = acc.accentuate_word("ярко-красный", None);
        assert_eq!(d.output, "ярко-кра+сный");
        assert_eq!(
            d.outcome,
            Outcome::Compound(vec![Outcome::Unresolved, Outcome::DictSimple])
        );
    }

    #[test]
    fn misplaced_marker_is_dropped() {
        let acc = Accentor::with_dictionary(dict());
        let d = acc.accentuate_word("к+от", None);
        assert_eq!(d.output, "ко+т");
    }

    struct FailingProvider;

    impl AccentProvider for FailingProvider {
        fn lookup_external(&self, _: &str) -> Result<Option<AccentEntry>, ProviderError> {
            Err(ProviderError("offline".into()))
        }
    }

    #[test]
    fn provider_failure_is_a_miss() {
        let acc = Accentor::new(dict(), Box::new(FailingProvider));
        let d = acc.accentuate_word("неведомое", None);
        assert_eq!(d.outcome, Outcome::Unresolved);
    }
}
