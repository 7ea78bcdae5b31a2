//! Letter-to-phoneme transcription of accented words and whole phrases.
//!
//! Per word: exclusions, cluster simplification, affricate merging and the
//! `-ого` ending rewrite run on letters. The words of one syntagm (a stretch
//! between pauses) are then converted right to left, so every consonant sees
//! the already-final phoneme after it, including across word junctions.
//! Long phonemes are merged last.

mod consonants;
mod letters;
mod merge;
mod vowels;

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use log::warn;
use thiserror::Error;

use crate::accent_dict::ExclusionMap;
use crate::phoneme::{is_russian_letter, is_vowel_letter, Phoneme, Symbol};
use crate::word::{AccentedWord, WordError};

pub use consonants::{
    assimilate_softness, base_consonant, consonant_to_phoneme, softens_preceding,
    ConsonantContext, SoftAssimilation,
};
pub use letters::{
    apply_exclusions, default_genitive_exceptions, letters_of, merge_affricates, rewrite_genitive,
    simplify_clusters, to_segments, vowel_letters, Letter, Rendered, DEFAULT_GENITIVE_EXCEPTIONS,
};
pub use merge::{has_mergeable_pair, merge_long, merge_long_phonemes};
pub use vowels::{unstressed_yo_hits, LeftContext, VowelCell, VowelTable, VowelTableError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranscribeError {
    #[error("`{word}`: cannot transcribe character {ch:?}")]
    InvalidChar { word: String, ch: char },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Soft-assimilation dialect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Modern,
    Classic,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "modern" => Ok(Mode::Modern),
            "classic" => Ok(Mode::Classic),
            other => Err(format!("unknown mode `{other}` (expected modern or classic)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Modern => "modern",
            Mode::Classic => "classic",
        })
    }
}

/// Input unit of a phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Word(AccentedWord),
    Sil,
}

impl Token {
    /// Parses a word token, lowercasing it first.
    pub fn word(s: &str) -> Result<Token, TranscribeError> {
        let lower = s.to_lowercase();
        if let Some(ch) = lower
            .chars()
            .find(|&c| !(is_russian_letter(c) || c == '-' || c == '+'))
        {
            return Err(TranscribeError::InvalidChar {
                word: s.to_string(),
                ch,
            });
        }
        Ok(Token::Word(AccentedWord::parse(&lower)?))
    }
}

/// Phonemes of a phrase together with where each word sits in them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseTranscription {
    unmerged: Vec<Symbol>,
    merged: Vec<Symbol>,
    words: Vec<WordSpan>,
}

/// A word token's slice of the unmerged phoneme sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSpan {
    pub token: usize,
    pub range: Range<usize>,
}

impl PhraseTranscription {
    /// Final output, long phonemes merged.
    pub fn symbols(&self) -> &[Symbol] {
        &self.merged
    }

    /// Output of the per-letter pass, before long phonemes are merged.
    pub fn unmerged(&self) -> &[Symbol] {
        &self.unmerged
    }

    pub fn words(&self) -> &[WordSpan] {
        &self.words
    }

    /// Pronunciation of one word as heard in this phrase. Long phonemes are
    /// merged within the word only.
    pub fn word_pronunciation(&self, span: &WordSpan) -> Vec<Phoneme> {
        let phonemes: Vec<Phoneme> = self.unmerged[span.range.clone()]
            .iter()
            .filter_map(|s| s.phoneme().copied())
            .collect();
        merge_long_phonemes(&phonemes)
    }

    pub fn names(&self) -> Vec<String> {
        self.merged.iter().map(Symbol::name).collect()
    }
}

impl fmt::Display for PhraseTranscription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(" "))
    }
}

/// Letters of one word after the letter-level rules, split at hyphens.
struct Prepared {
    token: usize,
    segments: Vec<Vec<Letter>>,
}

#[derive(Debug, Clone)]
pub struct Transcriber {
    mode: Mode,
    exclusions: ExclusionMap,
    vowels: VowelTable,
    genitive_exceptions: HashSet<String>,
}

impl Default for Transcriber {
    fn default() -> Self {
        Transcriber::new(Mode::Modern)
    }
}

impl Transcriber {
    /// A transcriber with the bundled exclusions and vowel table.
    pub fn new(mode: Mode) -> Self {
        Transcriber {
            mode,
            exclusions: ExclusionMap::builtin(),
            vowels: VowelTable::builtin(),
            genitive_exceptions: default_genitive_exceptions(),
        }
    }

    pub fn with_exclusions(mut self, exclusions: ExclusionMap) -> Self {
        self.exclusions = exclusions;
        self
    }

    pub fn with_vowel_table(mut self, vowels: VowelTable) -> Self {
        self.vowels = vowels;
        self
    }

    pub fn with_genitive_exceptions<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.genitive_exceptions.extend(words.into_iter().map(Into::into));
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    /// Applies the letter-level rules to one word.
    pub fn prepare_word(&self, word: &AccentedWord) -> Result<Vec<Vec<Letter>>, TranscribeError> {
        let word = apply_exclusions(word, &self.exclusions);
        if let Some(ch) = word
            .plain()
            .chars()
            .find(|&c| c != '-' && !is_russian_letter(c))
        {
            return Err(TranscribeError::InvalidChar {
                word: word.to_string(),
                ch,
            });
        }
        let segments: Vec<Vec<Letter>> = to_segments(&word)
            .into_iter()
            .map(|seg| {
                let seg = simplify_clusters(&seg);
                let seg = merge_affricates(&seg);
                rewrite_genitive(&seg, &self.genitive_exceptions)
            })
            .collect();
        let vowel_count: usize = segments.iter().map(|s| vowel_letters(s)).sum();
        if vowel_count > 1 && !segments.iter().flatten().any(|l| l.stressed) {
            warn!("`{word}` has no stress mark; transcribing all vowels as unstressed");
        }
        Ok(segments)
    }

    pub fn word_to_phonemes(&self, word: &AccentedWord) -> Result<Vec<Phoneme>, TranscribeError> {
        let phrase = self.phrase_to_phonemes(&[Token::Word(word.clone())])?;
        Ok(phrase
            .symbols()
            .iter()
            .filter_map(|s| s.phoneme().copied())
            .collect())
    }

    /// Parses and transcribes a single word string.
    pub fn transcribe_word(&self, word: &str) -> Result<Vec<Phoneme>, TranscribeError> {
        match Token::word(word)? {
            Token::Word(w) => self.word_to_phonemes(&w),
            Token::Sil => unreachable!(),
        }
    }

    pub fn phrase_to_phonemes(&self, tokens: &[Token]) -> Result<PhraseTranscription, TranscribeError> {
        let mut unmerged = Vec::new();
        let mut merged = Vec::new();
        let mut words = Vec::new();
        let mut syntagm: Vec<Prepared> = Vec::new();

        for (i, token) in tokens.iter().enumerate() {
            match token {
                Token::Word(w) => syntagm.push(Prepared {
                    token: i,
                    segments: self.prepare_word(w)?,
                }),
                Token::Sil => {
                    self.flush_syntagm(&mut syntagm, &mut unmerged, &mut merged, &mut words);
                    unmerged.push(Symbol::Sil);
                    merged.push(Symbol::Sil);
                }
            }
        }
        self.flush_syntagm(&mut syntagm, &mut unmerged, &mut merged, &mut words);
        Ok(PhraseTranscription {
            unmerged,
            merged,
            words,
        })
    }

    fn flush_syntagm(
        &self,
        syntagm: &mut Vec<Prepared>,
        unmerged: &mut Vec<Symbol>,
        merged: &mut Vec<Symbol>,
        words: &mut Vec<WordSpan>,
    ) {
        if syntagm.is_empty() {
            return;
        }
        let per_word = self.transcribe_syntagm(syntagm);
        let start = unmerged.len();
        for (prepared, phonemes) in syntagm.iter().zip(per_word) {
            let from = unmerged.len();
            unmerged.extend(phonemes.into_iter().map(Symbol::Phone));
            words.push(WordSpan {
                token: prepared.token,
                range: from..unmerged.len(),
            });
        }
        merged.extend(merge_long(&unmerged[start..]));
        syntagm.clear();
    }

    /// Right-to-left pass over every letter of the syntagm.
    fn transcribe_syntagm(&self, syntagm: &[Prepared]) -> Vec<Vec<Phoneme>> {
        let mut next_phone: Option<Phoneme> = None;
        let mut out: Vec<Vec<Phoneme>> = vec![Vec::new(); syntagm.len()];

        for (w, prepared) in syntagm.iter().enumerate().rev() {
            let mut reversed: Vec<Phoneme> = Vec::new();
            for segment in prepared.segments.iter().rev() {
                for i in (0..segment.len()).rev() {
                    let letter = segment[i];
                    let next_letter = segment.get(i + 1).map(|l| l.ch);
                    let emitted: Vec<Phoneme> = if is_vowel_letter(letter.ch) {
                        let left = LeftContext::of(i.checked_sub(1).map(|p| segment[p].ch));
                        self.vowels
                            .vowel_to_phonemes(letter.ch, left, next_letter.is_some(), letter.stressed)
                    } else {
                        let ctx = ConsonantContext {
                            next_letter,
                            word_final: segment[i + 1..].iter().all(|l| matches!(l.ch, 'ь' | 'ъ')),
                            next_phone: next_phone.as_ref(),
                            mode: self.mode,
                        };
                        consonant_to_phoneme(letter.ch, &ctx).into_iter().collect()
                    };
                    if let Some(first) = emitted.first() {
                        next_phone = Some(*first);
                    }
                    reversed.extend(emitted.into_iter().rev());
                }
            }
            reversed.reverse();
            out[w] = reversed;
        }
        out
    }
}

pub fn word_to_phonemes(word: &AccentedWord, mode: Mode) -> Result<Vec<Phoneme>, TranscribeError> {
    Transcriber::new(mode).word_to_phonemes(word)
}

pub fn phrase_to_phonemes(tokens: &[Token], mode: Mode) -> Result<PhraseTranscription, TranscribeError> {
    Transcriber::new(mode).phrase_to_phonemes(tokens)
}
