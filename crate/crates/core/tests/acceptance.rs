mod common;

use std::collections::HashSet;
use std::fmt::Debug;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::*;
use ru_g2p::accent_dict::ExclusionMap;
use ru_g2p::accentor::{Accentor, FixtureProvider};
use ru_g2p::lexicon::{read_corpus, Lexicon};
use ru_g2p::morph::MorphTag;
use ru_g2p::phoneme::{in_inventory, Symbol};
use ru_g2p::transcriber::has_mergeable_pair;

const CASES: u32 = 1000;

type SentenceCase<'a> = (&'a [&'a str], Option<Vec<MorphTag>>, &'a [&'a str]);

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, n: u32, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS criterion {n}: {name} ({detail})"),
            Err(why) => {
                self.failed += 1;
                println!("FAIL criterion {n}: {name} ({why})");
            }
        }
    }
}

fn tags(raw: &[&str]) -> Vec<MorphTag> {
    raw.iter().map(|t| t.parse().unwrap()).collect()
}

fn accentuation_exactness() -> Result<String, String> {
    let start = Instant::now();
    let provider = FixtureProvider::from_path(data("provider_fixture.json")).map_err(|e| e.to_string())?;
    let acc = Accentor::new(shipped_dictionary(), Box::new(provider));
    let cases: [SentenceCase; 2] = [
        (
            &["подарок", "для", "кума"],
            Some(tags(&[
                "NOUN Animacy=Inan Case=Nom Gender=Masc Number=Sing",
                "ADP _",
                "NOUN Animacy=Anim Case=Gen Gender=Masc Number=Sing",
            ])),
            &["пода+рок", "для", "ку+ма"],
        ),
        (&["фёдор", "любит", "кофе"], None, &["фё+дор", "лю+бит", "ко+фе"]),
    ];
    for (tokens, tags, expected) in cases {
        let got: Vec<String> = acc
            .accentuate_phrase(tokens, tags.as_deref())
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|d| d.output)
            .collect();
        if got != expected {
            return Err(format!("{tokens:?} gave {got:?}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("2 sentences in {elapsed:?}"))
}

fn homograph_exactness() -> Result<String, String> {
    let acc = Accentor::with_dictionary(shipped_dictionary());
    let cases = [
        ("NOUN Animacy=Inan Case=Gen Gender=Masc Number=Sing", "альпла+геря"),
        ("NOUN Animacy=Inan Case=Nom Gender=Masc Number=Plur", "альплагеря+"),
    ];
    for (tag, expected) in cases {
        let tag: MorphTag = tag.parse().map_err(|e| format!("{e}"))?;
        let got = acc.accentuate_word("альплагеря", Some(&tag)).output;
        if got != expected {
            return Err(format!("{tag} gave {got}"));
        }
    }
    Ok("both variants".into())
}

fn exclusion_rewrites() -> Result<String, String> {
    let ex = ExclusionMap::builtin();
    let pairs = [
        ("автоби+знесу", "автоби+знэсу"),
        ("оттого+", "оттово+"),
        ("здра+вствуй", "здра+ствуй"),
    ];
    for (from, to) in pairs {
        match ex.get(from) {
            Some(w) if w.as_str() == to => {}
            other => return Err(format!("{from} -> {other:?}")),
        }
    }
    Ok("3 pairs".into())
}

fn golden_set() -> Result<String, String> {
    let cases = golden_cases(&golden_path());
    let words = cases.iter().filter(|c| c.word_count() == 1).count();
    let phrases = cases.iter().filter(|c| c.word_count() >= 2).count();
    if words < 40 || phrases < 10 {
        return Err(format!("only {words} words and {phrases} phrases"));
    }
    let wrong: Vec<String> = cases
        .iter()
        .filter(|c| c.actual() != c.expected)
        .map(|c| format!("line {}", c.line))
        .collect();
    if !wrong.is_empty() {
        return Err(format!("mismatches at {}", wrong.join(", ")));
    }
    Ok(format!("{words} words, {phrases} phrases, all match"))
}

fn property<S, F>(name: &str, strategy: S, check: F) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, check).map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Result<String, String> {
    let acc = Accentor::with_dictionary(shipped_dictionary());
    let results = [
        property("single stress", any_input_token(), |t| check_single_stress(&acc, &t)),
        property("inventory closure", (phrase(), mode()), |(p, m)| check_inventory_closure(&p, m)),
        property("vowel conservation", (any_accented_word(), mode()), |(w, m)| {
            check_vowel_conservation(&w, m)
        }),
        property("merge fixpoint", (phrase(), mode()), |(p, m)| check_merge_fixpoint(&p, m)),
        property("accentuation idempotence", any_input_token(), |t| check_accent_idempotent(&acc, &t)),
        property("mode monotonicity", phrase(), |p| check_mode_monotone(&p)),
        property("sil context reset", (phrase(), phrase(), mode()), |(a, b, m)| {
            check_sil_reset(&a, &b, m)
        }),
        property("lexicon round trip", lexicon(), |l| check_lexicon_round_trip(&l)),
        property("dictionary round trip", dictionary_forms(), |f| check_dictionary_round_trip(&f)),
    ];
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    if failures.is_empty() {
        Ok(format!("9 properties x {CASES} cases"))
    } else {
        Err(failures.join("; "))
    }
}

fn run_lexicon(dir: &std::path::Path, tag: &str) -> Result<(Vec<u8>, String, String, Duration), String> {
    let out = dir.join(format!("lexicon{tag}.txt"));
    let transcript = dir.join(format!("transcript{tag}.txt"));
    let errors = dir.join(format!("errors{tag}.txt"));
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_ru-g2p"))
        .env("RUST_LOG", "error")
        .arg("lexicon")
        .arg(fixture("corpus100.txt"))
        .arg("--tags")
        .arg(fixture("corpus100.tags"))
        .arg("--dict")
        .arg(data("accents.json"))
        .arg("--out")
        .arg(&out)
        .arg("--transcript")
        .arg(&transcript)
        .arg("--errors")
        .arg(&errors)
        .status()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if status.code() != Some(0) {
        return Err(format!("exit status {status}"));
    }
    let read = |p: &std::path::Path| std::fs::read_to_string(p).map_err(|e| e.to_string());
    let lexicon = std::fs::read(&out).map_err(|e| e.to_string())?;
    Ok((lexicon, read(&transcript)?, read(&errors)?, elapsed))
}

fn end_to_end_run() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (lexicon, transcript, errors, elapsed) = run_lexicon(dir.path(), "1")?;
    if elapsed >= Duration::from_secs(5) {
        return Err(format!("took {elapsed:?}"));
    }
    let (again, transcript2, _, _) = run_lexicon(dir.path(), "2")?;
    if lexicon != again || transcript != transcript2 {
        return Err("reruns differ".into());
    }

    let corpus = read_corpus(std::fs::File::open(fixture("corpus100.txt")).unwrap()).map_err(|e| e.to_string())?;
    let ids: Vec<&str> = corpus.iter().map(|u| u.id.as_str()).collect();
    let transcribed: Vec<&str> = transcript.lines().map(|l| l.split('\t').next().unwrap_or("")).collect();
    let failed: Vec<&str> = errors.lines().map(|l| l.split('\t').next().unwrap_or("")).collect();
    let mut accounted: Vec<&str> = transcribed.iter().chain(&failed).copied().collect();
    accounted.sort_unstable();
    let mut expected = ids.clone();
    expected.sort_unstable();
    if accounted != expected {
        return Err("some utterance is missing from or repeated in the outputs".into());
    }

    let parsed = Lexicon::parse(lexicon.as_slice()).map_err(|e| e.to_string())?;
    if parsed.to_text().as_bytes() != lexicon.as_slice() {
        return Err("lexicon does not round-trip".into());
    }
    let mut violations = 0;
    for line in transcript.lines() {
        let phones = line.split('\t').nth(1).unwrap_or("");
        let symbols: Vec<Symbol> = match phones.split(' ').map(str::parse).collect::<Result<_, _>>() {
            Ok(s) => s,
            Err(_) => {
                violations += 1;
                continue;
            }
        };
        if !phones.split(' ').all(in_inventory)
            || has_mergeable_pair(&symbols)
            || symbols.first() != Some(&Symbol::Sil)
            || symbols.last() != Some(&Symbol::Sil)
        {
            violations += 1;
        }
    }
    let words: HashSet<&str> = parsed.iter().map(|(w, _)| w).collect();
    if violations > 0 {
        return Err(format!("{violations} invariant violations"));
    }
    Ok(format!(
        "{} utterances, {} lexicon words, {} failed, {elapsed:?}; corpus WER/PER and word accuracy need the audio corpus and are not reproduced",
        ids.len(),
        words.len(),
        failed.len()
    ))
}

fn main() {
    let mut report = Report { failed: 0 };
    report.line(1, "accentuation exactness", accentuation_exactness());
    report.line(2, "homograph resolution exactness", homograph_exactness());
    report.line(3, "exclusion rewrites", exclusion_rewrites());
    report.line(4, "golden transcription set", golden_set());
    report.line(5, "property suites", property_suites());
    report.line(6, "end-to-end lexicon run", end_to_end_run());
    if report.failed > 0 {
        std::process::exit(1);
    }
}
