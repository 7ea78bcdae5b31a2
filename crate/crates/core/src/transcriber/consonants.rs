//! Consonant letters: base phoneme, softening, soft assimilation and voicing.

use crate::phoneme::{classify_letter, LetterClass, Phoneme, Quality};

use super::Mode;

/// Phoneme a consonant letter starts from, before any context applies.
pub fn base_consonant(letter: char) -> Option<Phoneme> {
    let (quality, soft) = match letter {
        'б' => (Quality::B, false),
        'в' => (Quality::V, false),
        'г' => (Quality::G, false),
        'д' => (Quality::D, false),
        'ж' => (Quality::Zh, false),
        'з' => (Quality::Z, false),
        'й' => (Quality::J, false),
        'к' => (Quality::K, false),
        'л' => (Quality::L, false),
        'м' => (Quality::M, false),
        'н' => (Quality::N, false),
        'п' => (Quality::P, false),
        'р' => (Quality::R, false),
        'с' => (Quality::S, false),
        'т' => (Quality::T, false),
        'ф' => (Quality::F, false),
        'х' => (Quality::Kh, false),
        'ц' => (Quality::Ts, false),
        'ч' => (Quality::Tsh, true),
        'ш' => (Quality::Sh, false),
        'щ' => (Quality::Sh, true),
        _ => return None,
    };
    Some(Phoneme::consonant(quality, soft))
}

/// Letters after which a paired consonant is pronounced soft.
pub fn softens_preceding(letter: char) -> bool {
    matches!(letter, 'ь' | 'е' | 'ё' | 'и' | 'ю' | 'я')
}

/// Outcome of soft assimilation for one consonant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoftAssimilation {
    None,
    Palatalize,
    PalatalizeVoiced,
    PalatalizeVoiceless,
}

const N_TRIGGERS_MODERN: [&str; 9] = ["J", "TSH0", "SH0", "DZH0", "ZH0", "D0", "T0", "Z0", "S0"];
const N_TRIGGERS_CLASSIC: [&str; 7] = ["L0", "M0", "P0", "B0", "V0", "F0", "N0"];

/// Soft assimilation of `letter` to the phoneme that follows it in the word.
pub fn assimilate_softness(letter: char, next: &Phoneme, mode: Mode) -> SoftAssimilation {
    let next = next.name();
    let next = next.as_str();
    if letter == 'н' {
        let fires = N_TRIGGERS_MODERN.contains(&next)
            || (mode == Mode::Classic && N_TRIGGERS_CLASSIC.contains(&next));
        return if fires {
            SoftAssimilation::Palatalize
        } else {
            SoftAssimilation::None
        };
    }
    match mode {
        Mode::Modern if matches!(letter, 'с' | 'з') => match next {
            "D0" | "Z0" => SoftAssimilation::PalatalizeVoiced,
            "T0" | "S0" => SoftAssimilation::PalatalizeVoiceless,
            "N0" => SoftAssimilation::Palatalize,
            _ => SoftAssimilation::None,
        },
        Mode::Classic if matches!(letter, 'т' | 'с' | 'д' | 'з' | 'п' | 'б' | 'в' | 'ф') => {
            match next {
                "D0" | "Z0" | "B0" => SoftAssimilation::PalatalizeVoiced,
                "T0" | "S0" | "P0" => SoftAssimilation::PalatalizeVoiceless,
                "N0" | "L0" | "M0" | "V0" | "F0" => SoftAssimilation::Palatalize,
                _ => SoftAssimilation::None,
            }
        }
        _ => SoftAssimilation::None,
    }
}

/// Context of one consonant letter during the right-to-left pass.
pub struct ConsonantContext<'a> {
    /// Next letter in the same word, if any.
    pub next_letter: Option<char>,
    /// Only ь/ъ (or nothing) follow in the word.
    pub word_final: bool,
    /// First phoneme after this letter within the syntagm, possibly in the next word.
    pub next_phone: Option<&'a Phoneme>,
    pub mode: Mode,
}

fn voice(p: Phoneme) -> Phoneme {
    p.with_quality(p.quality().voiced())
}

fn devoice(p: Phoneme) -> Phoneme {
    p.with_quality(p.quality().devoiced())
}

/// Phoneme for a consonant letter, or `None` for the silent signs.
pub fn consonant_to_phoneme(letter: char, ctx: &ConsonantContext) -> Option<Phoneme> {
    let mut ph = base_consonant(letter)?;
    if ph.quality() == Quality::J {
        return Some(ph);
    }

    if classify_letter(letter) == LetterClass::PairedConsonant
        && ctx.next_letter.is_some_and(softens_preceding)
    {
        ph = Phoneme::consonant(ph.quality(), true);
    }

    let assimilates = !ctx.word_final && !matches!(ctx.next_letter, Some('ь' | 'ъ') | None);
    if assimilates {
        if let Some(next) = ctx.next_phone {
            match assimilate_softness(letter, next, ctx.mode) {
                SoftAssimilation::None => {}
                SoftAssimilation::Palatalize => ph = Phoneme::consonant(ph.quality(), true),
                SoftAssimilation::PalatalizeVoiced => ph = voice(Phoneme::consonant(ph.quality(), true)),
                SoftAssimilation::PalatalizeVoiceless => {
                    ph = devoice(Phoneme::consonant(ph.quality(), true))
                }
            }
        }
    }

    if ph.quality().is_obstruent() {
        let next = ctx.next_phone.map(Phoneme::quality);
        ph = match next {
            Some(q) if q.is_voiced_obstruent() && q != Quality::V => voice(ph),
            Some(q) if q.is_voiceless_obstruent() => devoice(ph),
            // a following в neither voices nor lets the word-final sound devoice
            Some(Quality::V) => ph,
            _ if ctx.word_final => devoice(ph),
            _ => ph,
        };
    }
    Some(ph)
}
