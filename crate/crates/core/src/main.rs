use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use ru_g2p::accent_dict::{AccentDictionary, ExclusionMap};
use ru_g2p::accentor::{AccentProvider, Accentor, FixtureProvider, NullProvider, Outcome};
use ru_g2p::lexicon::{attach_tags, build_lexicon, parse_tag_line, read_corpus, Pipeline, Punctuation, Utterance};
use ru_g2p::phoneme::dump_inventory;
use ru_g2p::transcriber::{Mode, Transcriber, VowelTable};

#[derive(Parser)]
#[command(name = "ru-g2p", version, about = "Russian stress placement and phonemic transcription")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Put stress marks on tokenized text, one sentence per line.
    Accent {
        #[command(flatten)]
        common: Common,
        /// Tab-separated tags, one line per input line.
        #[arg(long)]
        tags: Option<PathBuf>,
    },
    /// Turn text into phone strings, one utterance per line.
    Transcribe {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        phonetic: Phonetic,
    },
    /// Build a pronunciation lexicon from an `id<TAB>tokens` corpus.
    Lexicon {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        phonetic: Phonetic,
        /// `id<TAB>tag<TAB>tag ...` lines.
        #[arg(long)]
        tags: Option<PathBuf>,
        /// Where to write `id<TAB>phones` lines.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Use isolated-word pronunciations instead of in-context ones.
        #[arg(long)]
        citation_form: bool,
    },
    /// List the phoneme inventory.
    DumpPhones {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Input file; standard input when omitted or `-`.
    input: Option<PathBuf>,
    /// Accent dictionary (JSON).
    #[arg(long, required = true)]
    dict: PathBuf,
    /// Cache file that provider answers are written back to.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// `fixture:PATH` or `none`.
    #[arg(long, default_value = "none")]
    provider: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Error report; standard error when omitted.
    #[arg(long)]
    errors: Option<PathBuf>,
}

#[derive(Args)]
struct Phonetic {
    #[arg(long, default_value = "modern")]
    mode: Mode,
    /// Replacement exclusion list.
    #[arg(long)]
    exclusions: Option<PathBuf>,
    /// Replacement vowel table.
    #[arg(long)]
    vowel_table: Option<PathBuf>,
    /// Extra characters treated as punctuation.
    #[arg(long, default_value = "")]
    punctuation: String,
}

/// Bad input or configuration, reported with exit status 2.
#[derive(Debug)]
struct Invalid(anyhow::Error);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| Invalid(e).into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<Invalid>() { 2 } else { 1 })
        }
    }
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn Read>> {
    match path {
        None => Ok(Box::new(io::stdin())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdin())),
        Some(p) => Ok(Box::new(
            File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
        )),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => Ok(Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        ))),
    }
}

fn open_errors(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(io::stderr())),
        Some(p) => open_output(Some(p)),
    }
}

fn read_lines(path: Option<&Path>) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for line in BufReader::new(open_input(path)?).lines() {
        lines.push(line.context("reading input")?);
    }
    Ok(lines)
}

fn accentor(common: &Common) -> Result<Accentor> {
    let mut dict = AccentDictionary::from_path(&common.dict)
        .with_context(|| format!("loading dictionary {}", common.dict.display()))?;
    if let Some(cache) = &common.cache {
        dict = dict
            .with_cache(cache)
            .with_context(|| format!("loading cache {}", cache.display()))?;
    }
    let provider: Box<dyn AccentProvider> = match common.provider.split_once(':') {
        _ if common.provider == "none" => Box::new(NullProvider),
        Some(("fixture", path)) => Box::new(
            FixtureProvider::from_path(path).with_context(|| format!("loading provider fixture {path}"))?,
        ),
        _ => bail!("unknown provider `{}`; expected fixture:PATH or none", common.provider),
    };
    Ok(Accentor::new(dict, provider))
}

fn pipeline(common: &Common, phonetic: &Phonetic) -> Result<Pipeline> {
    let mut transcriber = Transcriber::new(phonetic.mode);
    if let Some(path) = &phonetic.exclusions {
        let ex = ExclusionMap::from_path(path).with_context(|| format!("loading exclusions {}", path.display()))?;
        transcriber = transcriber.with_exclusions(ex);
    }
    if let Some(path) = &phonetic.vowel_table {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let table = VowelTable::from_reader(file).with_context(|| format!("loading vowel table {}", path.display()))?;
        transcriber = transcriber.with_vowel_table(table);
    }
    let mut p = Pipeline::new(accentor(common)?, transcriber);
    p.punctuation = Punctuation::with_extra(phonetic.punctuation.chars());
    Ok(p)
}

fn flush_cache(common: &Common, acc: &Accentor) -> Result<()> {
    if common.cache.is_some() && acc.dictionary().pending_len() > 0 {
        let n = acc.dictionary().flush().context("writing accent cache")?;
        info!("wrote {n} new entries to the accent cache");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::DumpPhones { out } => {
            let mut sink = open_output(out.as_deref())?;
            sink.write_all(dump_inventory().as_bytes())?;
            sink.flush()?;
            Ok(true)
        }
        Command::Accent { common, tags } => run_accent(&common, tags.as_deref()),
        Command::Transcribe { common, phonetic } => run_transcribe(&common, &phonetic),
        Command::Lexicon {
            common,
            phonetic,
            tags,
            transcript,
            citation_form,
        } => run_lexicon(&common, &phonetic, tags.as_deref(), transcript.as_deref(), citation_form),
    }
}

fn run_accent(common: &Common, tags: Option<&Path>) -> Result<bool> {
    let acc = invalid(accentor(common))?;
    let lines = invalid(read_lines(common.input.as_deref()))?;
    let tag_lines = match tags {
        Some(p) => Some(invalid(read_lines(Some(p)))?),
        None => None,
    };
    let mut out = open_output(common.out.as_deref())?;
    let mut errors = open_errors(common.errors.as_deref())?;
    let mut complete = true;
    for (i, line) in lines.iter().enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let tags = match &tag_lines {
            Some(t) => match t.get(i).map(String::as_str).filter(|raw| !raw.trim().is_empty()) {
                Some(raw) => Some(invalid(parse_tag_line(raw, i + 1).map_err(Into::into))?),
                None => None,
            },
            None => None,
        };
        let decisions = invalid(acc.accentuate_phrase(&tokens, tags.as_deref()).map_err(|e| anyhow::anyhow!("line {}: {e}", i + 1)))?;
        let unresolved: Vec<&str> = decisions
            .iter()
            .filter(|d| d.outcome == Outcome::Unresolved)
            .map(|d| d.input.as_str())
            .collect();
        if !unresolved.is_empty() {
            complete = false;
            writeln!(errors, "line {}\tunresolved: {}", i + 1, unresolved.join(" "))?;
        }
        let words: Vec<&str> = decisions.iter().map(|d| d.output.as_str()).collect();
        writeln!(out, "{}", words.join(" "))?;
    }
    out.flush()?;
    flush_cache(common, &acc)?;
    Ok(complete)
}

fn run_transcribe(common: &Common, phonetic: &Phonetic) -> Result<bool> {
    let pipeline = invalid(pipeline(common, phonetic))?;
    let lines = invalid(read_lines(common.input.as_deref()))?;
    let mut out = open_output(common.out.as_deref())?;
    let mut errors = open_errors(common.errors.as_deref())?;
    let mut complete = true;
    for (i, line) in lines.iter().enumerate() {
        let utt = Utterance::from_text(format!("line {}", i + 1), line);
        match pipeline.process(&utt) {
            Ok(done) => writeln!(out, "{}", done.transcript())?,
            Err(e) => {
                complete = false;
                writeln!(errors, "{e}")?;
            }
        }
    }
    out.flush()?;
    flush_cache(common, &pipeline.accentor)?;
    Ok(complete)
}

fn run_lexicon(
    common: &Common,
    phonetic: &Phonetic,
    tags: Option<&Path>,
    transcript: Option<&Path>,
    citation_form: bool,
) -> Result<bool> {
    let mut pipeline = invalid(pipeline(common, phonetic))?;
    pipeline.citation_form = citation_form;
    let mut corpus = invalid(read_corpus(open_input(common.input.as_deref())?).map_err(Into::into))?;
    if let Some(path) = tags {
        let file = invalid(File::open(path).with_context(|| format!("cannot open {}", path.display())))?;
        invalid(attach_tags(&mut corpus, file).map_err(Into::into))?;
    }

    let report = build_lexicon(&corpus, &pipeline);
    info!(
        "{} utterances, {} transcribed, {} failed, {} words",
        corpus.len(),
        report.transcripts.len(),
        report.errors.len(),
        report.lexicon.len()
    );

    let mut out = open_output(common.out.as_deref())?;
    report.lexicon.emit(&mut out)?;
    out.flush()?;
    if let Some(path) = transcript {
        let mut text = String::new();
        for (id, phones) in &report.transcripts {
            text.push_str(&format!("{id}\t{phones}\n"));
        }
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut errors = open_errors(common.errors.as_deref())?;
    for e in &report.errors {
        writeln!(errors, "{e}")?;
    }
    errors.flush()?;
    flush_cache(common, &pipeline.accentor)?;
    Ok(!report.is_partial())
}
