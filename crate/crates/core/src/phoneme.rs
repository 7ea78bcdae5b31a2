//! Phoneme inventory, letter classes and the naming scheme shared by every
//! other stage.
//!
//! A phoneme name is its quality followed by an optional `0` and an optional
//! `l`. On vowels `0` marks stress, on consonants it marks palatalization.
//! `l` marks a long (geminate) phoneme produced by the merge rules.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhonemeError {
    #[error("unknown phoneme quality `{0}`")]
    UnknownQuality(String),
    #[error("vowel `{0}` cannot be palatalized")]
    PalatalizedVowel(Quality),
    #[error("consonant `{0}` cannot carry stress")]
    StressedConsonant(Quality),
    #[error("`{0}` has no {1} variant")]
    IllegalVariant(Quality, &'static str),
}

/// Orthographic class of a character, as used by the vowel and consonant rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LetterClass {
    Vowel,
    PairedConsonant,
    AlwaysHard,
    AlwaysSoft,
    SoftSign,
    HardSign,
    NonLetter,
}

pub const VOWEL_LETTERS: [char; 10] = ['а', 'е', 'ё', 'и', 'о', 'у', 'ы', 'э', 'ю', 'я'];

pub fn classify_letter(ch: char) -> LetterClass {
    let lower = to_lower_russian(ch);
    match lower {
        'а' | 'е' | 'ё' | 'и' | 'о' | 'у' | 'ы' | 'э' | 'ю' | 'я' => LetterClass::Vowel,
        'ж' | 'ц' | 'ш' => LetterClass::AlwaysHard,
        'й' | 'ч' | 'щ' => LetterClass::AlwaysSoft,
        'ь' => LetterClass::SoftSign,
        'ъ' => LetterClass::HardSign,
        'б' | 'в' | 'г' | 'д' | 'з' | 'к' | 'л' | 'м' | 'н' | 'п' | 'р' | 'с' | 'т' | 'ф'
        | 'х' => LetterClass::PairedConsonant,
        _ => LetterClass::NonLetter,
    }
}

/// Lowercases a letter of the Russian alphabet; anything else is returned as is.
pub fn to_lower_russian(ch: char) -> char {
    match ch {
        'А'..='Я' => char::from_u32(ch as u32 + 0x20).unwrap_or(ch),
        'Ё' => 'ё',
        _ => ch,
    }
}

pub fn is_russian_letter(ch: char) -> bool {
    classify_letter(ch) != LetterClass::NonLetter
}

pub fn is_vowel_letter(ch: char) -> bool {
    classify_letter(ch) == LetterClass::Vowel
}

/// Articulatory quality of a phoneme, without stress/palatalization/length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quality {
    A,
    O,
    U,
    E,
    Y,
    I,
    J,
    B,
    V,
    G,
    D,
    Z,
    K,
    L,
    M,
    N,
    P,
    R,
    S,
    T,
    F,
    Kh,
    Gh,
    Zh,
    Sh,
    Ts,
    Dz,
    Tsh,
    Dzh,
}

/// Whether a consonant quality admits a palatalized variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Softness {
    HardOnly,
    Either,
    SoftOnly,
}

impl Quality {
    pub const ALL: [Quality; 29] = [
        Quality::A,
        Quality::O,
        Quality::U,
        Quality::E,
        Quality::Y,
        Quality::I,
        Quality::J,
        Quality::B,
        Quality::V,
        Quality::G,
        Quality::D,
        Quality::Z,
        Quality::K,
        Quality::L,
        Quality::M,
        Quality::N,
        Quality::P,
        Quality::R,
        Quality::S,
        Quality::T,
        Quality::F,
        Quality::Kh,
        Quality::Gh,
        Quality::Zh,
        Quality::Sh,
        Quality::Ts,
        Quality::Dz,
        Quality::Tsh,
        Quality::Dzh,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Quality::A => "A",
            Quality::O => "O",
            Quality::U => "U",
            Quality::E => "E",
            Quality::Y => "Y",
            Quality::I => "I",
            Quality::J => "J",
            Quality::B => "B",
            Quality::V => "V",
            Quality::G => "G",
            Quality::D => "D",
            Quality::Z => "Z",
            Quality::K => "K",
            Quality::L => "L",
            Quality::M => "M",
            Quality::N => "N",
            Quality::P => "P",
            Quality::R => "R",
            Quality::S => "S",
            Quality::T => "T",
            Quality::F => "F",
            Quality::Kh => "KH",
            Quality::Gh => "GH",
            Quality::Zh => "ZH",
            Quality::Sh => "SH",
            Quality::Ts => "TS",
            Quality::Dz => "DZ",
            Quality::Tsh => "TSH",
            Quality::Dzh => "DZH",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Quality> {
        Quality::ALL.iter().copied().find(|q| q.symbol() == s)
    }

    pub fn is_vowel(self) -> bool {
        matches!(
            self,
            Quality::A | Quality::O | Quality::U | Quality::E | Quality::Y | Quality::I
        )
    }

    pub fn softness(self) -> Softness {
        match self {
            Quality::J | Quality::Ts | Quality::Dz => Softness::HardOnly,
            Quality::Tsh | Quality::Dzh => Softness::SoftOnly,
            q if q.is_vowel() => Softness::HardOnly,
            _ => Softness::Either,
        }
    }

    pub fn is_sonorant(self) -> bool {
        matches!(
            self,
            Quality::L | Quality::M | Quality::N | Quality::R | Quality::J
        )
    }

    pub fn is_obstruent(self) -> bool {
        !self.is_vowel() && !self.is_sonorant()
    }

    /// `(voiceless, voiced)` partner of an obstruent.
    fn voicing_pair(self) -> Option<(Quality, Quality)> {
        let pair = match self {
            Quality::P | Quality::B => (Quality::P, Quality::B),
            Quality::F | Quality::V => (Quality::F, Quality::V),
            Quality::K | Quality::G => (Quality::K, Quality::G),
            Quality::T | Quality::D => (Quality::T, Quality::D),
            Quality::S | Quality::Z => (Quality::S, Quality::Z),
            Quality::Sh | Quality::Zh => (Quality::Sh, Quality::Zh),
            Quality::Kh | Quality::Gh => (Quality::Kh, Quality::Gh),
            Quality::Ts | Quality::Dz => (Quality::Ts, Quality::Dz),
            Quality::Tsh | Quality::Dzh => (Quality::Tsh, Quality::Dzh),
            _ => return None,
        };
        Some(pair)
    }

    pub fn is_voiced_obstruent(self) -> bool {
        self.voicing_pair().is_some_and(|(_, voiced)| voiced == self)
    }

    pub fn is_voiceless_obstruent(self) -> bool {
        self.voicing_pair().is_some_and(|(voiceless, _)| voiceless == self)
    }

    pub fn voiced(self) -> Quality {
        self.voicing_pair().map_or(self, |(_, v)| v)
    }

    pub fn devoiced(self) -> Quality {
        self.voicing_pair().map_or(self, |(u, _)| u)
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One phoneme of the inventory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phoneme {
    quality: Quality,
    stressed: bool,
    palatalized: bool,
    long: bool,
}

impl Phoneme {
    pub fn new(
        quality: Quality,
        stressed: bool,
        palatalized: bool,
        long: bool,
    ) -> Result<Self, PhonemeError> {
        if quality.is_vowel() {
            if palatalized {
                return Err(PhonemeError::PalatalizedVowel(quality));
            }
        } else {
            if stressed {
                return Err(PhonemeError::StressedConsonant(quality));
            }
            match (quality.softness(), palatalized) {
                (Softness::HardOnly, true) => {
                    return Err(PhonemeError::IllegalVariant(quality, "palatalized"))
                }
                (Softness::SoftOnly, false) => {
                    return Err(PhonemeError::IllegalVariant(quality, "non-palatalized"))
                }
                _ => {}
            }
        }
        Ok(Phoneme {
            quality,
            stressed,
            palatalized,
            long,
        })
    }

    pub fn vowel(quality: Quality, stressed: bool) -> Self {
        debug_assert!(quality.is_vowel());
        Phoneme {
            quality,
            stressed,
            palatalized: false,
            long: false,
        }
    }

    /// Builds a consonant, coercing the palatalization flag to whatever the
    /// quality admits.
    pub fn consonant(quality: Quality, palatalized: bool) -> Self {
        debug_assert!(!quality.is_vowel());
        let palatalized = match quality.softness() {
            Softness::HardOnly => false,
            Softness::SoftOnly => true,
            Softness::Either => palatalized,
        };
        Phoneme {
            quality,
            stressed: false,
            palatalized,
            long: false,
        }
    }

    pub fn quality(&self) -> Quality {
        self.quality
    }

    pub fn is_stressed(&self) -> bool {
        self.stressed
    }

    pub fn is_palatalized(&self) -> bool {
        self.palatalized
    }

    pub fn is_long(&self) -> bool {
        self.long
    }

    pub fn is_vowel(&self) -> bool {
        self.quality.is_vowel()
    }

    pub fn lengthened(self) -> Self {
        Phoneme { long: true, ..self }
    }

    /// Same phoneme with a different quality of the same voicing pair.
    pub fn with_quality(self, quality: Quality) -> Self {
        Phoneme::consonant(quality, self.palatalized)
    }

    pub fn name(&self) -> String {
        let mut name = String::from(self.quality.symbol());
        if self.stressed || self.palatalized {
            name.push('0');
        }
        if self.long {
            name.push('l');
        }
        name
    }
}

impl fmt::Display for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Phoneme {
    type Err = PhonemeError;

    /// Parses a canonical name. `J0` is accepted as an alias of `J`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (rest, long) = match s.strip_suffix('l') {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        let (base, marked) = match rest.strip_suffix('0') {
            Some(base) => (base, true),
            None => (rest, false),
        };
        let quality =
            Quality::from_symbol(base).ok_or_else(|| PhonemeError::UnknownQuality(s.to_string()))?;
        if quality == Quality::J {
            return Phoneme::new(quality, false, false, long);
        }
        if quality.is_vowel() {
            Phoneme::new(quality, marked, false, long)
        } else {
            Phoneme::new(quality, false, marked, long)
        }
    }
}

/// A transcription symbol: a phoneme or the `sil` pause marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Phone(Phoneme),
    Sil,
}

pub const SIL: &str = "sil";

impl Symbol {
    pub fn name(&self) -> String {
        match self {
            Symbol::Phone(p) => p.name(),
            Symbol::Sil => SIL.to_string(),
        }
    }

    pub fn phoneme(&self) -> Option<&Phoneme> {
        match self {
            Symbol::Phone(p) => Some(p),
            Symbol::Sil => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Phone(p) => p.fmt(f),
            Symbol::Sil => f.write_str(SIL),
        }
    }
}

impl FromStr for Symbol {
    type Err = PhonemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == SIL {
            Ok(Symbol::Sil)
        } else {
            s.parse().map(Symbol::Phone)
        }
    }
}

pub fn make_phoneme(
    quality: &str,
    stressed: bool,
    palatalized: bool,
    long: bool,
) -> Result<Phoneme, PhonemeError> {
    let q = Quality::from_symbol(quality)
        .ok_or_else(|| PhonemeError::UnknownQuality(quality.to_string()))?;
    Phoneme::new(q, stressed, palatalized, long)
}

/// Every legal phoneme, in a stable order.
pub fn all_phonemes() -> Vec<Phoneme> {
    let mut out = Vec::new();
    for q in Quality::ALL {
        let flags: &[(bool, bool)] = if q.is_vowel() {
            &[(false, false), (true, false)]
        } else {
            match q.softness() {
                Softness::HardOnly => &[(false, false)],
                Softness::SoftOnly => &[(false, true)],
                Softness::Either => &[(false, false), (false, true)],
            }
        };
        for &(stressed, palatalized) in flags {
            for long in [false, true] {
                out.push(Phoneme {
                    quality: q,
                    stressed,
                    palatalized,
                    long,
                });
            }
        }
    }
    out
}

/// Canonical names of the whole inventory, `sil` included.
pub fn inventory() -> &'static BTreeSet<String> {
    static INVENTORY: OnceLock<BTreeSet<String>> = OnceLock::new();
    INVENTORY.get_or_init(|| {
        let mut set: BTreeSet<String> = all_phonemes().iter().map(Phoneme::name).collect();
        set.insert(SIL.to_string());
        set
    })
}

pub fn in_inventory(name: &str) -> bool {
    inventory().contains(name)
}

/// One name per line, newline-terminated.
pub fn dump_inventory() -> String {
    let mut out = String::new();
    for name in inventory() {
        out.push_str(name);
        out.push('\n');
    }
    out
}
