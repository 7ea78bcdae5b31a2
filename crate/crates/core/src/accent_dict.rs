//! The layered accent dictionary and the transcription exclusion list.
//!
//! File layout (UTF-8 JSON):
//!
//! ```json
//! {
//!   "homonyms": {
//!     "альплагеря": {
//!       "NOUN Animacy=Inan Case=Gen Gender=Masc Number=Sing": "альпла+геря",
//!       "NOUN Animacy=Inan Case=Nom Gender=Masc Number=Plur": "альплагеря+"
//!     }
//!   },
//!   "non-homonyms": ["проистека+л", "проистека+ла"]
//! }
//! ```
//!
//! A cache file in the same format may be layered on top; its entries win.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Read, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use indexmap::IndexMap;
use log::warn;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::word::{AccentedWord, WordError};

#[derive(Debug, Error)]
pub enum DictError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Stream(#[from] io::Error),
    #[error("malformed dictionary at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("record `{key}`: {source}")]
    InvalidForm {
        key: String,
        #[source]
        source: WordError,
    },
    #[error("record `{key}`: form `{form}` does not spell the key")]
    KeyMismatch { key: String, form: String },
    #[error("record `{key}`: a homograph needs at least two variants")]
    DegenerateHomograph { key: String },
    #[error("exclusions line {line}: {message}")]
    Exclusion { line: usize, message: String },
    #[error("no cache file configured")]
    NoCachePath,
}

impl From<serde_json::Error> for DictError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return DictError::Stream(e.into());
        }
        DictError::Malformed {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// Accented variants of one spelling, keyed by morphological tag string in
/// dictionary order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homograph {
    variants: IndexMap<String, AccentedWord>,
}

impl Homograph {
    pub fn new(variants: IndexMap<String, AccentedWord>) -> Self {
        Homograph { variants }
    }

    pub fn variants(&self) -> impl Iterator<Item = (&str, &AccentedWord)> {
        self.variants.iter().map(|(t, f)| (t.as_str(), f))
    }

    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    /// The common form if every variant is accented the same way.
    pub fn unanimous(&self) -> Option<&AccentedWord> {
        let mut forms = self.variants.values();
        let first = forms.next()?;
        forms.all(|f| f == first).then_some(first)
    }
}

impl<I: IntoIterator<Item = (String, AccentedWord)>> From<I> for Homograph {
    fn from(iter: I) -> Self {
        Homograph::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccentEntry {
    Simple(AccentedWord),
    Homograph(Homograph),
}

impl AccentEntry {
    /// Checks the entry against its lookup key.
    pub fn validate(&self, key: &str) -> Result<(), DictError> {
        let check = |form: &AccentedWord| {
            if !form.has_stress() {
                return Err(DictError::InvalidForm {
                    key: key.to_string(),
                    source: WordError::MissingStress(form.to_string()),
                });
            }
            if form.plain() != key {
                return Err(DictError::KeyMismatch {
                    key: key.to_string(),
                    form: form.to_string(),
                });
            }
            Ok(())
        };
        match self {
            AccentEntry::Simple(form) => check(form),
            AccentEntry::Homograph(h) => {
                if h.len() < 2 {
                    return Err(DictError::DegenerateHomograph {
                        key: key.to_string(),
                    });
                }
                h.variants.values().try_for_each(check)
            }
        }
    }
}

/// Key/value pairs of a JSON object in document order, duplicates kept.
struct Pairs<V>(Vec<(String, V)>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Pairs<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairsVisitor<V>(PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for PairsVisitor<V> {
            type Value = Pairs<V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, V>()? {
                    out.push((k, v));
                }
                Ok(Pairs(out))
            }
        }

        deserializer.deserialize_map(PairsVisitor(PhantomData))
    }
}

impl<V> Default for Pairs<V> {
    fn default() -> Self {
        Pairs(Vec::new())
    }
}

#[derive(Deserialize)]
struct RawDictionary {
    #[serde(default)]
    homonyms: Pairs<Pairs<String>>,
    #[serde(default, rename = "non-homonyms")]
    non_homonyms: Vec<String>,
}

#[derive(Serialize)]
struct RawDictionaryOut<'a> {
    homonyms: BTreeMap<&'a str, IndexMap<&'a str, &'a str>>,
    #[serde(rename = "non-homonyms")]
    non_homonyms: Vec<&'a str>,
}

fn parse_form(key: &str, form: &str) -> Result<AccentedWord, DictError> {
    AccentedWord::parse_stressed(form).map_err(|source| DictError::InvalidForm {
        key: key.to_string(),
        source,
    })
}

/// Parses one dictionary document into validated entries. Later duplicates
/// replace earlier ones; a simple form beats a homograph for the same key.
fn parse_entries<R: Read>(reader: R) -> Result<HashMap<String, AccentEntry>, DictError> {
    let raw: RawDictionary = serde_json::from_reader(reader)?;
    let mut entries: HashMap<String, AccentEntry> = HashMap::new();

    for (key, variants) in raw.homonyms.0 {
        let mut map = IndexMap::new();
        for (tag, form) in variants.0 {
            let form = parse_form(&key, &form)?;
            if map.insert(tag.clone(), form).is_some() {
                warn!("homograph `{key}`: duplicate tag `{tag}`, keeping the last one");
            }
        }
        let entry = AccentEntry::Homograph(Homograph::new(map));
        entry.validate(&key)?;
        if entries.insert(key.clone(), entry).is_some() {
            warn!("duplicate homograph record `{key}`, keeping the last one");
        }
    }

    for form in raw.non_homonyms {
        let word = parse_form(&form, &form)?;
        let key = word.plain();
        match entries.insert(key.clone(), AccentEntry::Simple(word)) {
            Some(AccentEntry::Homograph(_)) => {
                warn!("`{key}` is listed as both homograph and simple form, using the simple form")
            }
            Some(AccentEntry::Simple(_)) => {
                warn!("duplicate simple form for `{key}`, keeping the last one")
            }
            None => {}
        }
    }
    Ok(entries)
}

fn write_entries<'a, W, I>(writer: W, entries: I) -> Result<(), DictError>
where
    W: Write,
    I: IntoIterator<Item = (&'a String, &'a AccentEntry)>,
{
    let mut out = RawDictionaryOut {
        homonyms: BTreeMap::new(),
        non_homonyms: Vec::new(),
    };
    let mut simple: Vec<(&str, &str)> = Vec::new();
    for (key, entry) in entries {
        match entry {
            AccentEntry::Simple(form) => simple.push((key, form.as_str())),
            AccentEntry::Homograph(h) => {
                let variants = h.variants().map(|(t, f)| (t, f.as_str())).collect();
                out.homonyms.insert(key, variants);
            }
        }
    }
    simple.sort_unstable();
    out.non_homonyms = simple.into_iter().map(|(_, f)| f).collect();
    let mut writer = io::BufWriter::new(writer);
    serde_json::to_writer_pretty(&mut writer, &out).map_err(io::Error::from)?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

fn open(path: &Path) -> Result<File, DictError> {
    File::open(path).map_err(|source| DictError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Default)]
struct CacheState {
    path: Option<PathBuf>,
    pending: IndexMap<String, AccentEntry>,
}

/// Accent dictionary with a write-through cache layer.
///
/// Lookups take a shared lock; cache writes go through one mutex so a reader
/// sees either the old state or the fully inserted entry.
pub struct AccentDictionary {
    entries: RwLock<HashMap<String, AccentEntry>>,
    cache: Mutex<CacheState>,
}

impl AccentDictionary {
    pub fn empty() -> Self {
        AccentDictionary {
            entries: RwLock::new(HashMap::new()),
            cache: Mutex::new(CacheState::default()),
        }
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, DictError> {
        let entries = parse_entries(reader)?;
        Ok(AccentDictionary {
            entries: RwLock::new(entries),
            cache: Mutex::new(CacheState::default()),
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, DictError> {
        let path = path.as_ref();
        Self::from_reader(BufReader::new(open(path)?)).map_err(|e| match e {
            DictError::Stream(source) => DictError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    /// Attaches a cache file: existing cached entries are merged over the
    /// current contents and later [`flush`](Self::flush) calls write there.
    pub fn with_cache(self, path: impl Into<PathBuf>) -> Result<Self, DictError> {
        let path = path.into();
        if path.exists() {
            let cached = parse_entries(BufReader::new(open(&path)?))?;
            let mut entries = self.entries.write().expect("dictionary lock poisoned");
            entries.extend(cached);
        }
        self.cache.lock().expect("cache lock poisoned").path = Some(path);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("dictionary lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, word: &str) -> Option<AccentEntry> {
        self.entries
            .read()
            .expect("dictionary lock poisoned")
            .get(word)
            .cloned()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries
            .read()
            .expect("dictionary lock poisoned")
            .contains_key(word)
    }

    /// Makes `entry` visible to later lookups and queues it for the cache file.
    pub fn add_cached_entry(&self, word: &str, entry: AccentEntry) -> Result<(), DictError> {
        entry.validate(word)?;
        let mut cache = self.cache.lock().expect("cache lock poisoned");
        self.entries
            .write()
            .expect("dictionary lock poisoned")
            .insert(word.to_string(), entry.clone());
        cache.pending.insert(word.to_string(), entry);
        Ok(())
    }

    pub fn pending_len(&self) -> usize {
        self.cache.lock().expect("cache lock poisoned").pending.len()
    }

    /// Merges queued entries into the cache file. Returns how many were written.
    pub fn flush(&self) -> Result<usize, DictError> {
        let mut cache = self.cache.lock().expect("cache lock poisoned");
        let path = cache.path.clone().ok_or(DictError::NoCachePath)?;
        if cache.pending.is_empty() {
            return Ok(0);
        }
        let mut on_disk = if path.exists() {
            parse_entries(BufReader::new(open(&path)?))?
        } else {
            HashMap::new()
        };
        let written = cache.pending.len();
        on_disk.extend(cache.pending.iter().map(|(k, v)| (k.clone(), v.clone())));

        let tmp = path.with_extension("tmp");
        let file = File::create(&tmp).map_err(|source| DictError::Io {
            path: tmp.clone(),
            source,
        })?;
        write_entries(file, &on_disk)?;
        fs::rename(&tmp, &path).map_err(|source| DictError::Io {
            path: path.clone(),
            source,
        })?;
        cache.pending.clear();
        Ok(written)
    }

    /// Writes every entry (base and cache) in the dictionary file format.
    pub fn save<W: Write>(&self, writer: W) -> Result<(), DictError> {
        let entries = self.entries.read().expect("dictionary lock poisoned");
        write_entries(writer, entries.iter())
    }

    /// A snapshot of all entries, for inspection and tests.
    pub fn entries(&self) -> HashMap<String, AccentEntry> {
        self.entries.read().expect("dictionary lock poisoned").clone()
    }
}

impl fmt::Debug for AccentDictionary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AccentDictionary")
            .field("entries", &self.len())
            .finish()
    }
}

/// Whole-word respellings applied before transcription, keyed by accented form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExclusionMap(HashMap<String, AccentedWord>);

const BUILTIN_EXCLUSIONS: &str = include_str!("../data/exclusions.txt");

impl ExclusionMap {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, DictError> {
        let mut map = HashMap::new();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [source, replacement] = fields[..] else {
                return Err(DictError::Exclusion {
                    line: line_no,
                    message: format!("expected two forms, found {}", fields.len()),
                });
            };
            let to_err = |e: WordError| DictError::Exclusion {
                line: line_no,
                message: e.to_string(),
            };
            let source = AccentedWord::parse_stressed(source).map_err(to_err)?;
            let replacement = AccentedWord::parse_stressed(replacement).map_err(to_err)?;
            map.insert(source.into_string(), replacement);
        }
        Ok(ExclusionMap(map))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, DictError> {
        Self::from_reader(open(path.as_ref())?)
    }

    /// The exclusion list bundled with the crate.
    pub fn builtin() -> Self {
        Self::from_reader(BUILTIN_EXCLUSIONS.as_bytes()).expect("bundled exclusions are valid")
    }

    pub fn get(&self, word: &str) -> Option<&AccentedWord> {
        self.0.get(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn load_accent_dictionary<R: Read>(source: R) -> Result<AccentDictionary, DictError> {
    AccentDictionary::from_reader(source)
}

pub fn load_exclusions<R: Read>(source: R) -> Result<ExclusionMap, DictError> {
    ExclusionMap::from_reader(source)
}
