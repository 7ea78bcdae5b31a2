use crate::phoneme::{Phoneme, Symbol};

/// Long variant of the pair if the two phonemes merge: identical phonemes,
/// or the first name being a proper prefix of the second (`S` + `S0`).
fn merged(a: &Phoneme, b: &Phoneme) -> Option<Phoneme> {
    if a == b {
        return Some(b.lengthened());
    }
    let (an, bn) = (a.name(), b.name());
    (bn.len() > an.len() && bn.starts_with(&an)).then(|| b.lengthened())
}

/// Merges adjacent phonemes into long ones, sweeping left to right until
/// nothing changes. `sil` never merges.
pub fn merge_long(symbols: &[Symbol]) -> Vec<Symbol> {
    let mut current = symbols.to_vec();
    loop {
        let mut out: Vec<Symbol> = Vec::with_capacity(current.len());
        let mut changed = false;
        let mut i = 0;
        while i < current.len() {
            if let (Symbol::Phone(a), Some(Symbol::Phone(b))) = (&current[i], current.get(i + 1)) {
                if let Some(m) = merged(a, b) {
                    out.push(Symbol::Phone(m));
                    changed = true;
                    i += 2;
                    continue;
                }
            }
            out.push(current[i]);
            i += 1;
        }
        if !changed {
            return out;
        }
        current = out;
    }
}

/// Convenience wrapper over [`merge_long`] for a single word.
pub fn merge_long_phonemes(phonemes: &[Phoneme]) -> Vec<Phoneme> {
    let symbols: Vec<Symbol> = phonemes.iter().copied().map(Symbol::Phone).collect();
    merge_long(&symbols)
        .into_iter()
        .filter_map(|s| s.phoneme().copied())
        .collect()
}

/// True when some adjacent pair would still merge.
pub fn has_mergeable_pair(symbols: &[Symbol]) -> bool {
    symbols.windows(2).any(|w| match (&w[0], &w[1]) {
        (Symbol::Phone(a), Symbol::Phone(b)) => merged(a, b).is_some(),
        _ => false,
    })
}
