//! Corpus processing: pause insertion, per-utterance accentuation and
//! transcription, and CMU-style pronunciation lexicons.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use thiserror::Error;

use crate::accentor::Accentor;
use crate::morph::{MorphTag, MorphTagError};
use crate::phoneme::{Phoneme, PhonemeError};
use crate::transcriber::{PhraseTranscription, Token, TranscribeError, Transcriber};
use crate::word::strip_stress;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Phoneme {
        line: usize,
        #[source]
        source: PhonemeError,
    },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("corpus line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("corpus line {line}: duplicate utterance id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("tags line {line}: {source}")]
    Tag {
        line: usize,
        #[source]
        source: MorphTagError,
    },
    #[error("utterance `{id}`: {tokens} tokens but {tags} tags")]
    TagCount { id: String, tokens: usize, tags: usize },
    #[error("tags given for unknown utterance `{0}`")]
    UnknownTagId(String),
}

/// One annotated utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub id: String,
    pub tokens: Vec<String>,
    pub tags: Option<Vec<MorphTag>>,
}

impl Utterance {
    pub fn new(id: impl Into<String>, tokens: Vec<String>) -> Self {
        Utterance {
            id: id.into(),
            tokens,
            tags: None,
        }
    }

    pub fn from_text(id: impl Into<String>, text: &str) -> Self {
        Self::new(id, text.split_whitespace().map(str::to_string).collect())
    }
}

/// Reads `id<TAB>token token ...` lines.
pub fn read_corpus<R: Read>(reader: R) -> Result<Vec<Utterance>, CorpusError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (id, text) = line.split_once('\t').ok_or_else(|| CorpusError::Syntax {
            line: line_no,
            message: "expected `id<TAB>tokens`".into(),
        })?;
        let id = id.trim();
        let utt = Utterance::from_text(id, text);
        if id.is_empty() || utt.tokens.is_empty() {
            return Err(CorpusError::Syntax {
                line: line_no,
                message: "empty id or token list".into(),
            });
        }
        if !seen.insert(id.to_string()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: id.to_string(),
            });
        }
        out.push(utt);
    }
    Ok(out)
}

/// Parses one line of tab-separated tags.
pub fn parse_tag_line(line: &str, line_no: usize) -> Result<Vec<MorphTag>, CorpusError> {
    line.split('\t')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.parse().map_err(|source| CorpusError::Tag {
                line: line_no,
                source,
            })
        })
        .collect()
}

/// Reads `id<TAB>tag<TAB>tag ...` lines and attaches them to the corpus.
pub fn attach_tags<R: Read>(corpus: &mut [Utterance], reader: R) -> Result<(), CorpusError> {
    let index: HashMap<String, usize> = corpus
        .iter()
        .enumerate()
        .map(|(i, u)| (u.id.clone(), i))
        .collect();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, rest) = line.split_once('\t').unwrap_or((line.as_str(), ""));
        let &i = index
            .get(id.trim())
            .ok_or_else(|| CorpusError::UnknownTagId(id.trim().to_string()))?;
        let tags = parse_tag_line(rest, idx + 1)?;
        let utt = &mut corpus[i];
        if tags.len() != utt.tokens.len() {
            return Err(CorpusError::TagCount {
                id: utt.id.clone(),
                tokens: utt.tokens.len(),
                tags: tags.len(),
            });
        }
        utt.tags = Some(tags);
    }
    Ok(())
}

/// Decides which tokens are punctuation.
#[derive(Debug, Clone, Default)]
pub struct Punctuation {
    extra: HashSet<char>,
}

fn punct_class() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[\p{P}…«»—–]$").expect("valid regex"))
}

impl Punctuation {
    pub fn with_extra(chars: impl IntoIterator<Item = char>) -> Self {
        Punctuation {
            extra: chars.into_iter().collect(),
        }
    }

    pub fn is_punct_char(&self, c: char) -> bool {
        let mut buf = [0u8; 4];
        self.extra.contains(&c) || punct_class().is_match(c.encode_utf8(&mut buf))
    }

    pub fn is_punctuation(&self, token: &str) -> bool {
        !token.is_empty() && token.chars().all(|c| self.is_punct_char(c))
    }
}

/// A word or a pause after punctuation has been replaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item<T> {
    Word(T),
    Sil,
}

/// Replaces punctuation with pauses, collapses runs of pauses and brackets
/// the utterance with pauses.
pub fn insert_sil<S: AsRef<str>>(tokens: &[S], punctuation: &Punctuation) -> Vec<Item<String>> {
    let mut out = vec![Item::Sil];
    for token in tokens {
        let token = token.as_ref();
        if punctuation.is_punctuation(token) {
            if out.last() != Some(&Item::Sil) {
                out.push(Item::Sil);
            }
        } else {
            out.push(Item::Word(token.to_string()));
        }
    }
    if out.last() != Some(&Item::Sil) {
        out.push(Item::Sil);
    }
    out
}

/// Why an utterance could not be transcribed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtteranceError {
    pub id: String,
    pub problems: Vec<(String, String)>,
}

impl fmt::Display for UtteranceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        for (word, why) in &self.problems {
            write!(f, "\t{word}: {why}")?;
        }
        Ok(())
    }
}

/// A transcribed utterance.
#[derive(Debug, Clone)]
pub struct ProcessedUtterance {
    pub id: String,
    pub accented: Vec<Item<String>>,
    pub transcription: PhraseTranscription,
    /// Lexicon key and pronunciation for every word, in order.
    pub words: Vec<(String, Vec<Phoneme>)>,
}

impl ProcessedUtterance {
    pub fn transcript(&self) -> String {
        self.transcription.to_string()
    }
}

/// Accentuation plus transcription for whole utterances.
#[derive(Debug)]
pub struct Pipeline {
    pub accentor: Accentor,
    pub transcriber: Transcriber,
    pub punctuation: Punctuation,
    /// Use isolated-word pronunciations in the lexicon instead of in-context ones.
    pub citation_form: bool,
}

pub fn lexicon_key(token: &str) -> String {
    strip_stress(&token.to_lowercase())
}

impl Pipeline {
    pub fn new(accentor: Accentor, transcriber: Transcriber) -> Self {
        Pipeline {
            accentor,
            transcriber,
            punctuation: Punctuation::default(),
            citation_form: false,
        }
    }

    pub fn process(&self, utt: &Utterance) -> Result<ProcessedUtterance, UtteranceError> {
        let mut accented_tokens = Vec::with_capacity(utt.tokens.len());
        let mut keys = Vec::new();
        for (i, token) in utt.tokens.iter().enumerate() {
            if self.punctuation.is_punctuation(token) {
                accented_tokens.push(token.clone());
                continue;
            }
            let tag = utt.tags.as_ref().map(|t| &t[i]);
            let decision = self.accentor.accentuate_word(token, tag);
            keys.push(lexicon_key(token));
            accented_tokens.push(decision.output);
        }
        let items = insert_sil(&accented_tokens, &self.punctuation);

        let mut problems = Vec::new();
        let mut tokens = Vec::with_capacity(items.len());
        for item in &items {
            match item {
                Item::Sil => tokens.push(Token::Sil),
                Item::Word(w) => match Token::word(w) {
                    Ok(t) => tokens.push(t),
                    Err(e) => problems.push((w.clone(), e.to_string())),
                },
            }
        }
        let fail = |problems| UtteranceError {
            id: utt.id.clone(),
            problems,
        };
        if !problems.is_empty() {
            return Err(fail(problems));
        }

        let transcription = self
            .transcriber
            .phrase_to_phonemes(&tokens)
            .map_err(|e: TranscribeError| fail(vec![(String::new(), e.to_string())]))?;

        let mut words = Vec::with_capacity(keys.len());
        for (span, key) in transcription.words().iter().zip(keys) {
            let pron = if self.citation_form {
                let Token::Word(w) = &tokens[span.token] else {
                    unreachable!("spans point at word tokens")
                };
                self.transcriber
                    .word_to_phonemes(w)
                    .map_err(|e| fail(vec![(key.clone(), e.to_string())]))?
            } else {
                transcription.word_pronunciation(span)
            };
            if pron.is_empty() {
                problems.push((key, "no phonemes".to_string()));
                continue;
            }
            words.push((key, pron));
        }
        if !problems.is_empty() {
            return Err(fail(problems));
        }
        Ok(ProcessedUtterance {
            id: utt.id.clone(),
            accented: items,
            transcription,
            words,
        })
    }
}

/// Word → distinct pronunciations in first-seen order; words sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Vec<Phoneme>>>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a pronunciation unless the word already has it.
    pub fn add(&mut self, word: impl Into<String>, pronunciation: Vec<Phoneme>) {
        let prons = self.entries.entry(word.into()).or_default();
        if !prons.contains(&pronunciation) {
            prons.push(pronunciation);
        }
    }

    pub fn get(&self, word: &str) -> Option<&[Vec<Phoneme>]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Vec<Phoneme>])> {
        self.entries.iter().map(|(w, p)| (w.as_str(), p.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn emit<W: Write>(&self, mut sink: W) -> io::Result<()> {
        for (word, prons) in &self.entries {
            for (k, pron) in prons.iter().enumerate() {
                if k == 0 {
                    write!(sink, "{word}")?;
                } else {
                    write!(sink, "{word}({})", k + 1)?;
                }
                for p in pron {
                    write!(sink, " {p}")?;
                }
                writeln!(sink)?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.emit(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("lexicon text is UTF-8")
    }

    pub fn parse<R: Read>(reader: R) -> Result<Lexicon, LexiconError> {
        let mut lexicon = Lexicon::new();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(' ');
            let label = fields.next().unwrap_or_default();
            let word = strip_variant(label).ok_or_else(|| LexiconError::Parse {
                line: line_no,
                message: format!("bad word label `{label}`"),
            })?;
            let pron = fields
                .map(|f| {
                    let p: Phoneme = f.parse().map_err(|source| LexiconError::Phoneme {
                        line: line_no,
                        source,
                    })?;
                    if p.name() != f {
                        return Err(LexiconError::Parse {
                            line: line_no,
                            message: format!("`{f}` is not a canonical phoneme name"),
                        });
                    }
                    Ok(p)
                })
                .collect::<Result<Vec<_>, _>>()?;
            lexicon
                .entries
                .entry(word.to_string())
                .or_default()
                .push(pron);
        }
        Ok(lexicon)
    }
}

fn strip_variant(label: &str) -> Option<&str> {
    if label.is_empty() {
        return None;
    }
    match label.strip_suffix(')').and_then(|l| l.rsplit_once('(')) {
        Some((word, n)) if !word.is_empty() && n.parse::<usize>().is_ok_and(|n| n >= 2) => Some(word),
        Some(_) => None,
        None => Some(label),
    }
}

pub fn emit_lexicon<W: Write>(lexicon: &Lexicon, sink: W) -> io::Result<()> {
    lexicon.emit(sink)
}

/// Result of a lexicon run over a corpus.
#[derive(Debug, Default)]
pub struct LexiconReport {
    pub lexicon: Lexicon,
    /// `(id, phone string)` per transcribed utterance, in corpus order.
    pub transcripts: Vec<(String, String)>,
    pub errors: Vec<UtteranceError>,
}

impl LexiconReport {
    pub fn is_partial(&self) -> bool {
        !self.errors.is_empty()
    }
}

/// Processes utterances in parallel and merges them in corpus order.
pub fn build_lexicon(corpus: &[Utterance], pipeline: &Pipeline) -> LexiconReport {
    let results: Vec<Result<ProcessedUtterance, UtteranceError>> =
        corpus.par_iter().map(|u| pipeline.process(u)).collect();
    let mut report = LexiconReport::default();
    for result in results {
        match result {
            Ok(done) => {
                for (word, pron) in &done.words {
                    report.lexicon.add(word.clone(), pron.clone());
                }
                report.transcripts.push((done.id.clone(), done.transcript()));
            }
            Err(e) => report.errors.push(e),
        }
    }
    report
}
