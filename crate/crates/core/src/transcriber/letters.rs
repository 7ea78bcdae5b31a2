//! Letter-level rewrites that run before phonemes are assigned: whole-word
//! exclusions, consonant cluster simplification, affricate merging and the
//! `-ого`/`-его` ending.

use std::collections::HashSet;
use std::fmt;

use crate::accent_dict::ExclusionMap;
use crate::phoneme::is_vowel_letter;
use crate::word::{AccentedWord, STRESS_MARK};

/// One letter of a word being transcribed. Stress travels with its vowel so
/// that deletions around it do not need index bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub ch: char,
    pub stressed: bool,
}

impl Letter {
    pub fn plain(ch: char) -> Self {
        Letter { ch, stressed: false }
    }
}

/// Splits an accented word into hyphen-separated segments of letters. With no
/// explicit stress mark, the last `ё` of the word is taken as stressed.
pub fn to_segments(word: &AccentedWord) -> Vec<Vec<Letter>> {
    let stressed = word.stressed_index().or_else(|| {
        word.plain()
            .chars()
            .enumerate()
            .filter(|&(_, c)| c == 'ё')
            .map(|(i, _)| i)
            .last()
    });
    let mut segments = vec![Vec::new()];
    for (i, ch) in word.plain().chars().enumerate() {
        if ch == '-' {
            segments.push(Vec::new());
            continue;
        }
        segments.last_mut().expect("non-empty").push(Letter {
            ch,
            stressed: Some(i) == stressed,
        });
    }
    segments.retain(|s| !s.is_empty());
    segments
}

/// Letters rendered back with a `+` after the stressed vowel.
pub struct Rendered<'a>(pub &'a [Letter]);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.0 {
            write!(f, "{}", l.ch)?;
            if l.stressed {
                write!(f, "{STRESS_MARK}")?;
            }
        }
        Ok(())
    }
}

pub fn letters_of(word: &str) -> Vec<Letter> {
    let word = AccentedWord::parse(word).expect("valid accented word");
    to_segments(&word).into_iter().flatten().collect()
}

/// Replaces the whole word when it has an exclusion entry.
pub fn apply_exclusions(word: &AccentedWord, exclusions: &ExclusionMap) -> AccentedWord {
    exclusions.get(word.as_str()).cloned().unwrap_or_else(|| word.clone())
}

type ClusterRule = (&'static str, &'static str);

/// Т, Д and Л dropped from the listed three-letter clusters.
const SIMPLIFICATIONS: [ClusterRule; 10] = [
    ("стн", "сн"),
    ("стл", "сл"),
    ("нтг", "нг"),
    ("здн", "зн"),
    ("здц", "зц"),
    ("ндц", "нц"),
    ("рдц", "рц"),
    ("ндш", "нш"),
    ("гдт", "гт"),
    ("лнц", "нц"),
];

const AFFRICATES: [ClusterRule; 9] = [
    ("тьс", "ц"),
    ("сч", "щ"),
    ("жч", "щ"),
    ("тс", "ц"),
    ("тц", "ц"),
    ("дс", "ц"),
    ("дц", "ц"),
    ("сш", "ш"),
    ("зж", "ж"),
];

fn matches_at(letters: &[Letter], at: usize, pattern: &str) -> bool {
    let mut i = at;
    for ch in pattern.chars() {
        match letters.get(i) {
            Some(l) if l.ch == ch => i += 1,
            _ => return false,
        }
    }
    true
}

/// Leftmost match first, longest pattern first at a position; the scan
/// restarts from the beginning after every rewrite.
fn rewrite(letters: &[Letter], rules: &[ClusterRule]) -> Vec<Letter> {
    let mut out = letters.to_vec();
    'scan: loop {
        for at in 0..out.len() {
            let mut best: Option<&ClusterRule> = None;
            for rule in rules {
                if matches_at(&out, at, rule.0)
                    && best.is_none_or(|b| rule.0.chars().count() > b.0.chars().count())
                {
                    best = Some(rule);
                }
            }
            if let Some((pattern, replacement)) = best {
                let len = pattern.chars().count();
                out.splice(at..at + len, replacement.chars().map(Letter::plain));
                continue 'scan;
            }
        }
        return out;
    }
}

pub fn simplify_clusters(letters: &[Letter]) -> Vec<Letter> {
    rewrite(letters, &SIMPLIFICATIONS)
}

pub fn merge_affricates(letters: &[Letter]) -> Vec<Letter> {
    rewrite(letters, &AFFRICATES)
}

/// Words in `-ого` whose г is pronounced as written.
pub const DEFAULT_GENITIVE_EXCEPTIONS: [&str; 10] = [
    "много",
    "дорого",
    "строго",
    "немного",
    "недорого",
    "нестрого",
    "убого",
    "полого",
    "отлого",
    "ого",
];

/// Word-final `-ого` / `-его`: г is pronounced в unless the word is an exception.
pub fn rewrite_genitive(letters: &[Letter], exceptions: &HashSet<String>) -> Vec<Letter> {
    let mut out = letters.to_vec();
    let n = out.len();
    if n < 3 {
        return out;
    }
    let plain: String = out.iter().map(|l| l.ch).collect();
    if exceptions.contains(&plain) {
        return out;
    }
    if matches!(out[n - 3].ch, 'о' | 'е') && out[n - 2].ch == 'г' && out[n - 1].ch == 'о' {
        out[n - 2].ch = 'в';
    }
    out
}

pub fn default_genitive_exceptions() -> HashSet<String> {
    DEFAULT_GENITIVE_EXCEPTIONS.iter().map(|s| s.to_string()).collect()
}

pub fn vowel_letters(letters: &[Letter]) -> usize {
    letters.iter().filter(|l| is_vowel_letter(l.ch)).count()
}
