//! Russian grapheme-to-phoneme conversion: stress placement from an accent
//! dictionary, rule-based phonemic transcription and lexicon building.

pub mod accent_dict;
pub mod accentor;
pub mod lexicon;
pub mod morph;
pub mod phoneme;
pub mod transcriber;
pub mod word;

pub use accent_dict::{load_accent_dictionary, load_exclusions, AccentDictionary, AccentEntry, ExclusionMap, Homograph};
pub use accentor::{AccentProvider, Accentor, FixtureProvider, NullProvider, Outcome, TokenDecision};
pub use lexicon::{build_lexicon, emit_lexicon, insert_sil, Lexicon, Pipeline, Utterance};
pub use morph::MorphTag;
pub use phoneme::{Phoneme, Symbol};
pub use transcriber::{merge_long, phrase_to_phonemes, word_to_phonemes, Mode, Token, Transcriber};
pub use word::AccentedWord;
