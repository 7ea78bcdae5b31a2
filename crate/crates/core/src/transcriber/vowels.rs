//! Context table for vowel letters.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::phoneme::{classify_letter, LetterClass, Phoneme, Quality, VOWEL_LETTERS};

const BUILTIN_TABLE: &str = include_str!("../../data/vowel_table.tsv");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VowelTableError {
    #[error("vowel table line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("vowel table has no cell for {left:?}/{right}/{stress} `{letter}`")]
    Missing {
        left: LeftContext,
        right: &'static str,
        stress: &'static str,
        letter: char,
    },
    #[error("I/O error reading vowel table: {0}")]
    Io(String),
}

/// What precedes a vowel letter inside its word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeftContext {
    Sign,
    Initial,
    Vowel,
    Soft,
    Hard,
    Paired,
}

impl LeftContext {
    pub const ALL: [LeftContext; 6] = [
        LeftContext::Sign,
        LeftContext::Initial,
        LeftContext::Vowel,
        LeftContext::Soft,
        LeftContext::Hard,
        LeftContext::Paired,
    ];

    pub fn of(prev: Option<char>) -> LeftContext {
        let Some(prev) = prev else {
            return LeftContext::Initial;
        };
        match classify_letter(prev) {
            LetterClass::Vowel => LeftContext::Vowel,
            LetterClass::SoftSign | LetterClass::HardSign => LeftContext::Sign,
            LetterClass::AlwaysSoft => LeftContext::Soft,
            LetterClass::AlwaysHard => LeftContext::Hard,
            LetterClass::PairedConsonant => LeftContext::Paired,
            LetterClass::NonLetter => LeftContext::Initial,
        }
    }

    fn label(self) -> &'static str {
        match self {
            LeftContext::Sign => "sign",
            LeftContext::Initial => "initial",
            LeftContext::Vowel => "vowel",
            LeftContext::Soft => "soft",
            LeftContext::Hard => "hard",
            LeftContext::Paired => "paired",
        }
    }

    fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

/// A table cell: optional iotation plus the vowel quality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VowelCell {
    pub iotated: bool,
    pub quality: Quality,
}

impl VowelCell {
    fn parse(s: &str) -> Option<Self> {
        let (iotated, rest) = match s.strip_prefix('J') {
            Some(rest) if !rest.is_empty() => (true, rest),
            _ => (false, s),
        };
        let quality = Quality::from_symbol(rest).filter(|q| q.is_vowel())?;
        Some(VowelCell { iotated, quality })
    }
}

type Key = (LeftContext, bool, bool, char);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VowelTable {
    cells: HashMap<Key, VowelCell>,
}

static UNSTRESSED_YO_HITS: AtomicUsize = AtomicUsize::new(0);

/// How many times an unstressed `ё` cell has been used in this process.
pub fn unstressed_yo_hits() -> usize {
    UNSTRESSED_YO_HITS.load(Ordering::Relaxed)
}

impl VowelTable {
    /// The bundled table.
    pub fn builtin() -> Self {
        Self::from_reader(BUILTIN_TABLE.as_bytes()).expect("bundled vowel table is valid")
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, VowelTableError> {
        let mut cells = HashMap::new();
        let mut columns: Option<Vec<char>> = None;
        let mut overrides = Vec::new();

        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| VowelTableError::Io(e.to_string()))?;
            let line_no = idx + 1;
            let syntax = |message: String| VowelTableError::Syntax {
                line: line_no,
                message,
            };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields[0] == "left" {
                let letters: Vec<char> = fields[3..]
                    .iter()
                    .map(|f| f.chars().next().unwrap_or(' '))
                    .collect();
                if letters.len() != VOWEL_LETTERS.len()
                    || !VOWEL_LETTERS.iter().all(|v| letters.contains(v))
                {
                    return Err(syntax("header must list the ten vowel letters".into()));
                }
                columns = Some(letters);
                continue;
            }
            if fields[0] == "override" {
                if fields.len() != 6 {
                    return Err(syntax("override needs left, right, stress, letter, cell".into()));
                }
                overrides.push((line_no, fields[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()));
                continue;
            }
            let columns = columns
                .as_ref()
                .ok_or_else(|| syntax("data row before the header".into()))?;
            if fields.len() != 3 + columns.len() {
                return Err(syntax(format!("expected {} fields", 3 + columns.len())));
            }
            let (left, right, stressed) = parse_key(&fields[..3]).map_err(syntax)?;
            for (letter, cell) in columns.iter().zip(&fields[3..]) {
                let cell = VowelCell::parse(cell).ok_or_else(|| syntax(format!("bad cell `{cell}`")))?;
                cells.insert((left, right, stressed, *letter), cell);
            }
        }

        for (line_no, f) in overrides {
            let syntax = |message: String| VowelTableError::Syntax {
                line: line_no,
                message,
            };
            let (left, right, stressed) = parse_key(&f[..3]).map_err(syntax)?;
            let letter = f[3]
                .chars()
                .next()
                .filter(|c| VOWEL_LETTERS.contains(c))
                .ok_or_else(|| syntax(format!("`{}` is not a vowel letter", f[3])))?;
            let cell = VowelCell::parse(&f[4]).ok_or_else(|| syntax(format!("bad cell `{}`", f[4])))?;
            cells.insert((left, right, stressed, letter), cell);
        }

        for left in LeftContext::ALL {
            for right in [true, false] {
                for stressed in [true, false] {
                    for letter in VOWEL_LETTERS {
                        if !cells.contains_key(&(left, right, stressed, letter)) {
                            return Err(VowelTableError::Missing {
                                left,
                                right: if right { "l" } else { "nl" },
                                stress: if stressed { "+" } else { "-" },
                                letter,
                            });
                        }
                    }
                }
            }
        }
        Ok(VowelTable { cells })
    }

    pub fn cell(&self, letter: char, left: LeftContext, next_is_letter: bool, stressed: bool) -> VowelCell {
        self.cells[&(left, next_is_letter, stressed, letter)]
    }

    /// Phonemes for one vowel letter: `J` when iotated, then the vowel.
    pub fn vowel_to_phonemes(
        &self,
        letter: char,
        left: LeftContext,
        next_is_letter: bool,
        stressed: bool,
    ) -> Vec<Phoneme> {
        if letter == 'ё' && !stressed {
            UNSTRESSED_YO_HITS.fetch_add(1, Ordering::Relaxed);
        }
        let cell = self.cell(letter, left, next_is_letter, stressed);
        let mut out = Vec::with_capacity(2);
        if cell.iotated {
            out.push(Phoneme::consonant(Quality::J, false));
        }
        out.push(Phoneme::vowel(cell.quality, stressed));
        out
    }
}

fn parse_key(f: &[impl AsRef<str>]) -> Result<(LeftContext, bool, bool), String> {
    let left = LeftContext::from_label(f[0].as_ref())
        .ok_or_else(|| format!("unknown left context `{}`", f[0].as_ref()))?;
    let right = match f[1].as_ref() {
        "l" => true,
        "nl" => false,
        other => return Err(format!("unknown right context `{other}`")),
    };
    let stressed = match f[2].as_ref() {
        "+" => true,
        "-" => false,
        other => return Err(format!("unknown stress marker `{other}`")),
    };
    Ok((left, right, stressed))
}
