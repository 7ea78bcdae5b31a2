#![allow(dead_code)]

use std::path::{Path, PathBuf};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use ru_g2p::accent_dict::{AccentDictionary, AccentEntry, ExclusionMap};
use ru_g2p::accentor::Accentor;
use ru_g2p::lexicon::Lexicon;
use ru_g2p::phoneme::{in_inventory, is_vowel_letter, Phoneme, Symbol};
use ru_g2p::transcriber::{has_mergeable_pair, Mode, Token, Transcriber};
use ru_g2p::word::AccentedWord;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn data(name: &str) -> PathBuf {
    crate_dir().join("data").join(name)
}

pub fn fixture(name: &str) -> PathBuf {
    crate_dir().join("tests").join("fixtures").join(name)
}

pub fn shipped_dictionary() -> AccentDictionary {
    AccentDictionary::from_path(data("accents.json")).expect("shipped dictionary loads")
}

/// Plain keys and accented forms of every simple entry in the shipped dictionary.
pub fn dictionary_words() -> Vec<(String, String)> {
    let mut words: Vec<(String, String)> = shipped_dictionary()
        .entries()
        .into_iter()
        .filter_map(|(k, e)| match e {
            AccentEntry::Simple(f) => Some((k, f.into_string())),
            AccentEntry::Homograph(_) => None,
        })
        .collect();
    words.sort();
    words
}

pub fn names(symbols: &[Symbol]) -> String {
    symbols.iter().map(Symbol::name).collect::<Vec<_>>().join(" ")
}

// ---- golden oracle

#[derive(Debug, Clone)]
pub struct GoldenCase {
    pub line: usize,
    pub mode: Mode,
    pub input: String,
    pub expected: String,
}

impl GoldenCase {
    pub fn word_count(&self) -> usize {
        self.input.split(' ').filter(|t| *t != "sil").count()
    }

    pub fn tokens(&self) -> Vec<Token> {
        self.input
            .split(' ')
            .map(|t| if t == "sil" { Token::Sil } else { Token::word(t).expect("golden input is valid") })
            .collect()
    }

    pub fn actual(&self) -> String {
        let t = Transcriber::new(self.mode);
        t.phrase_to_phonemes(&self.tokens())
            .expect("golden input transcribes")
            .to_string()
    }
}

pub fn golden_cases(path: &Path) -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(path).expect("golden file readable");
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 3, "golden line {}: expected three columns", i + 1);
            GoldenCase {
                line: i + 1,
                mode: f[0].parse().expect("golden mode"),
                input: f[1].to_string(),
                expected: f[2].to_string(),
            }
        })
        .collect()
}

pub fn golden_path() -> PathBuf {
    crate_dir().join("tests").join("golden").join("transcriptions.tsv")
}

// ---- strategies

pub const LETTERS: &str = "абвгдеёжзийклмнопрстуфхцчшщъыьэюя";

/// Random lowercase Cyrillic letter strings, not necessarily words.
pub fn cyrillic_word() -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(LETTERS.chars().collect::<Vec<_>>()), 1..12)
        .prop_map(|cs| cs.into_iter().collect())
}

/// A random string with a stress mark after one of its vowels, when it has any.
pub fn stressed_word() -> impl Strategy<Value = String> {
    (cyrillic_word(), any::<prop::sample::Index>()).prop_map(|(w, idx)| {
        let vowels: Vec<usize> = w
            .chars()
            .enumerate()
            .filter(|(_, c)| is_vowel_letter(*c))
            .map(|(i, _)| i)
            .collect();
        if vowels.is_empty() {
            return w;
        }
        let at = vowels[idx.index(vowels.len())];
        let mut out = String::new();
        for (i, c) in w.chars().enumerate() {
            out.push(c);
            if i == at {
                out.push('+');
            }
        }
        out
    })
}

/// Accented forms from the shipped dictionary mixed with random stressed strings.
pub fn any_accented_word() -> impl Strategy<Value = String> {
    let dict: Vec<String> = dictionary_words().into_iter().map(|(_, f)| f).collect();
    prop_oneof![proptest::sample::select(dict), stressed_word()]
}

/// Plain dictionary keys mixed with random strings.
pub fn any_input_token() -> impl Strategy<Value = String> {
    let dict: Vec<String> = dictionary_words().into_iter().map(|(k, _)| k).collect();
    prop_oneof![proptest::sample::select(dict), cyrillic_word(), stressed_word()]
}

pub fn phrase() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec(any_accented_word(), 1..5)
}

pub fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Modern), Just(Mode::Classic)]
}

pub fn pronunciation() -> impl Strategy<Value = Vec<Phoneme>> {
    let all = ru_g2p::phoneme::all_phonemes();
    proptest::collection::vec(proptest::sample::select(all), 1..8)
}

pub fn lexicon() -> impl Strategy<Value = Lexicon> {
    proptest::collection::vec((cyrillic_word(), proptest::collection::vec(pronunciation(), 1..4)), 0..12)
        .prop_map(|entries| {
            let mut lex = Lexicon::new();
            for (word, prons) in entries {
                for p in prons {
                    lex.add(word.clone(), p);
                }
            }
            lex
        })
}

// ---- checks

fn words_of(phrase: &[String]) -> Vec<Token> {
    phrase.iter().map(|w| Token::Word(AccentedWord::parse(w).unwrap())).collect()
}

pub fn check_single_stress(acc: &Accentor, token: &str) -> Result<(), TestCaseError> {
    let out = acc.accentuate_word(token, None).output;
    prop_assert!(out.matches('+').count() <= 1, "`{}` -> `{}`", token, out);
    if let Some(i) = out.find('+') {
        let before = out[..i].chars().last();
        prop_assert!(before.is_some_and(is_vowel_letter), "`{}` -> `{}`", token, out);
    }
    Ok(())
}

pub fn check_accent_idempotent(acc: &Accentor, token: &str) -> Result<(), TestCaseError> {
    let once = acc.accentuate_word(token, None).output;
    let twice = acc.accentuate_word(&once, None).output;
    prop_assert_eq!(once, twice);
    Ok(())
}

pub fn check_inventory_closure(phrase: &[String], mode: Mode) -> Result<(), TestCaseError> {
    let t = Transcriber::new(mode);
    let out = t.phrase_to_phonemes(&words_of(phrase)).unwrap();
    for s in out.symbols().iter().chain(out.unmerged()) {
        prop_assert!(in_inventory(&s.name()), "{} not in inventory for {:?}", s.name(), phrase);
    }
    Ok(())
}

pub fn check_vowel_conservation(word: &str, mode: Mode) -> Result<(), TestCaseError> {
    let w = AccentedWord::parse(word).unwrap();
    if ExclusionMap::builtin().get(w.as_str()).is_some() {
        return Ok(());
    }
    let t = Transcriber::new(mode);
    let out = t.phrase_to_phonemes(&[Token::Word(w.clone())]).unwrap();
    let vowels: Vec<&Phoneme> = out
        .unmerged()
        .iter()
        .filter_map(Symbol::phoneme)
        .filter(|p| p.is_vowel())
        .collect();
    let letters = w.plain().chars().filter(|c| is_vowel_letter(*c)).count();
    prop_assert_eq!(vowels.len(), letters, "{}", word);
    let stressed = vowels.iter().filter(|p| p.is_stressed()).count();
    let expected = usize::from(w.has_stress() || w.plain().contains('ё'));
    prop_assert_eq!(stressed, expected, "{}", word);
    Ok(())
}

pub fn check_merge_fixpoint(phrase: &[String], mode: Mode) -> Result<(), TestCaseError> {
    let t = Transcriber::new(mode);
    let out = t.phrase_to_phonemes(&words_of(phrase)).unwrap();
    prop_assert!(!has_mergeable_pair(out.symbols()), "{:?} -> {}", phrase, out);
    Ok(())
}

pub fn check_mode_monotone(phrase: &[String]) -> Result<(), TestCaseError> {
    let tokens = words_of(phrase);
    let modern = Transcriber::new(Mode::Modern).phrase_to_phonemes(&tokens).unwrap();
    let classic = Transcriber::new(Mode::Classic).phrase_to_phonemes(&tokens).unwrap();
    prop_assert_eq!(modern.unmerged().len(), classic.unmerged().len());
    for (m, c) in modern.unmerged().iter().zip(classic.unmerged()) {
        if let (Some(m), Some(c)) = (m.phoneme(), c.phoneme()) {
            prop_assert!(
                !m.is_palatalized() || c.is_palatalized(),
                "{:?}: modern {} vs classic {}",
                phrase,
                m.name(),
                c.name()
            );
        }
    }
    Ok(())
}

pub fn check_sil_reset(a: &[String], b: &[String], mode: Mode) -> Result<(), TestCaseError> {
    let t = Transcriber::new(mode);
    let mut joined = words_of(a);
    joined.push(Token::Sil);
    joined.extend(words_of(b));
    let whole = t.phrase_to_phonemes(&joined).unwrap();
    let left = t.phrase_to_phonemes(&words_of(a)).unwrap();
    let right = t.phrase_to_phonemes(&words_of(b)).unwrap();
    let mut expected = left.symbols().to_vec();
    expected.push(Symbol::Sil);
    expected.extend_from_slice(right.symbols());
    prop_assert_eq!(names(whole.symbols()), names(&expected));
    Ok(())
}

pub fn check_lexicon_round_trip(lex: &Lexicon) -> Result<(), TestCaseError> {
    let text = lex.to_text();
    let back = Lexicon::parse(text.as_bytes()).unwrap();
    prop_assert_eq!(&back, lex);
    for (_, prons) in back.iter() {
        for p in prons {
            prop_assert!(p.iter().all(|ph| in_inventory(&ph.name())));
        }
    }
    Ok(())
}

pub fn check_dictionary_round_trip(forms: &[String]) -> Result<(), TestCaseError> {
    let doc = serde_json::json!({ "non-homonyms": forms });
    let dict = AccentDictionary::from_reader(doc.to_string().as_bytes()).unwrap();
    let mut saved = Vec::new();
    dict.save(&mut saved).unwrap();
    let back = AccentDictionary::from_reader(saved.as_slice()).unwrap();
    prop_assert_eq!(back.entries(), dict.entries());
    let mut again = Vec::new();
    back.save(&mut again).unwrap();
    prop_assert_eq!(saved, again);
    Ok(())
}

/// Stressed forms with at least one vowel, usable as dictionary entries.
pub fn dictionary_forms() -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec(stressed_word().prop_filter("needs a stress mark", |w| w.contains('+')), 0..20)
}
