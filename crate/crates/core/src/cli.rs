//! Command-line surface: `transcribe`, `evaluate`, `ipa normalize`,
//! `ipa validate`, and `lexicon check`. All I/O is UTF-8 and line-oriented;
//! diagnostics go to stderr, never to the output stream.
//!
//! Exit codes: 0 success, 1 failed validation or warnings under `--strict`,
//! 2 usage errors (from the argument parser), 3 I/O errors.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eval::{self, EvalReport};
use crate::g2p::{SentenceTranscription, Transcriber, TranscriptionOptions};
use crate::lexicon::Lexicon;
use crate::normalize::NumberReadingPolicy;
use crate::phoneset;

/// Environment variable naming a directory of default lexicon overlays
/// (every `*.tsv` in it, in name order).
pub const LEXICON_DIR_ENV: &str = "BANGLA_IPA_LEXICON_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "bangla-ipa",
    version,
    about = "Rule-based Bengali-to-IPA transcription and evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transcribe Bengali text, one IPA line per input line
    Transcribe(TranscribeArgs),
    /// Score the engine against a parallel corpus
    Evaluate(EvaluateArgs),
    /// IPA stream filters
    Ipa {
        #[command(subcommand)]
        command: IpaCommand,
    },
    /// Lexicon tooling
    Lexicon {
        #[command(subcommand)]
        command: LexiconCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NumbersArg {
    Cardinal,
    Digits,
    Auto,
}

impl From<NumbersArg> for NumberReadingPolicy {
    fn from(v: NumbersArg) -> Self {
        match v {
            NumbersArg::Cardinal => NumberReadingPolicy::Cardinal,
            NumbersArg::Digits => NumberReadingPolicy::DigitByDigit,
            NumbersArg::Auto => NumberReadingPolicy::Auto,
        }
    }
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Lexicon overlay files, applied left to right
    #[arg(long = "lexicon", value_name = "FILE")]
    pub lexicons: Vec<PathBuf>,
    /// Start from an empty lexicon instead of the built-in one
    #[arg(long)]
    pub no_default_lexicon: bool,
    /// Number reading policy
    #[arg(long = "numbers", value_enum, default_value = "auto")]
    pub numbers: NumbersArg,
    /// Careful-speech register for word-initial হ
    #[arg(long)]
    pub careful_speech: bool,
    /// Disable morphological length marking
    #[arg(long)]
    pub no_morph_length: bool,
    /// Emit display-only syllable dots
    #[arg(long)]
    pub syllable_dots: bool,
}

#[derive(Debug, Args)]
pub struct TranscribeArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Input file (default: standard input)
    #[arg(short, long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file (default: standard output)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Append the rule trace as a tab-separated annex column
    #[arg(long)]
    pub trace: bool,
    /// Exit 1 if any warning was emitted
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Parallel corpus TSV: id<TAB>text<TAB>ipa
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    /// Vocabulary file (one word per line) for the OOV rate
    #[arg(long, value_name = "FILE")]
    pub vocab: Option<PathBuf>,
    /// Write the full report here
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum IpaCommand {
    /// Canonicalize IPA lines (æ→ɛ, ASCII colon, mark order)
    Normalize {
        #[arg(short, long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Report out-of-inventory symbols and exit 1 if any
        #[arg(long)]
        strict: bool,
    },
    /// Check diacritic placement; lines pass through unchanged
    Validate {
        #[arg(short, long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Exit 1 if any violation was found
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    /// Validate a lexicon file; exit 1 on any error
    Check {
        file: PathBuf,
    },
}

enum CliError {
    Io(io::Error),
    Data(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<i32, CliError>;

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Transcribe(args) => transcribe(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Ipa { command } => ipa(command),
        Command::Lexicon { command } => lexicon(command),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(CliError::Io(e)) => {
            eprintln!("bangla-ipa: i/o error: {e}");
            3
        }
        Err(CliError::Data(msg)) => {
            eprintln!("bangla-ipa: {msg}");
            1
        }
    }
}

fn open_input(path: &Option<PathBuf>) -> io::Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(File::open(p)?)),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn build_engine(args: &EngineArgs) -> Result<Transcriber, CliError> {
    let mut lexicon = if args.no_default_lexicon {
        Lexicon::new("empty")
    } else {
        Lexicon::builtin()
    };
    let mut overlay_paths: Vec<PathBuf> = Vec::new();
    if let Ok(dir) = std::env::var(LEXICON_DIR_ENV) {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(Path::new(&dir))
            .map_err(CliError::Io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "tsv"))
            .collect();
        entries.sort();
        overlay_paths.extend(entries);
    }
    overlay_paths.extend(args.lexicons.iter().cloned());
    for path in &overlay_paths {
        let loaded = Lexicon::load_path(path, true).map_err(CliError::Io)?;
        let (overlay, _) =
            loaded.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        lexicon = Lexicon::merge(lexicon, overlay);
    }
    let opts = TranscriptionOptions {
        careful_speech: args.careful_speech,
        number_policy: args.numbers.into(),
        mark_morph_length: !args.no_morph_length,
        emit_syllable_dots: args.syllable_dots,
        ..Default::default()
    };
    Ok(Transcriber::new(lexicon, opts))
}

fn format_trace(sentence: &SentenceTranscription) -> String {
    let words: Vec<String> = sentence
        .words
        .iter()
        .map(|w| {
            let entries: Vec<String> = w
                .trace
                .iter()
                .map(|e| {
                    let phones: String = e.phones.iter().map(|p| p.to_string()).collect();
                    format!("{}:{}:{}", e.rule, e.grapheme, phones)
                })
                .collect();
            format!("{}={}", w.surface, entries.join("+"))
        })
        .collect();
    words.join(" | ")
}

fn transcribe(args: TranscribeArgs) -> CliResult {
    let engine = build_engine(&args.engine)?;
    let reader = open_input(&args.input)?;
    let mut out = open_output(&args.output)?;
    let mut any_warning = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let sentence = engine.transcribe_sentence(&line);
        for w in &sentence.warnings {
            any_warning = true;
            eprintln!("bangla-ipa: line {}: {w}", idx + 1);
        }
        if args.trace {
            writeln!(out, "{}\t{}", sentence.rendered(), format_trace(&sentence))?;
        } else {
            writeln!(out, "{}", sentence.rendered())?;
        }
    }
    out.flush()?;
    Ok(if args.strict && any_warning { 1 } else { 0 })
}

fn load_vocab(path: &Path) -> Result<HashSet<String>, CliError> {
    let mut vocab = HashSet::new();
    let file = File::open(path)?;
    for line in BufReader::new(file).lines() {
        let line = line?;
        let word = line.trim();
        if !word.is_empty() && !word.starts_with('#') {
            vocab.insert(crate::script::nfc(word).into_owned());
        }
    }
    Ok(vocab)
}

fn evaluate(args: EvaluateArgs) -> CliResult {
    let engine = build_engine(&args.engine)?;
    let file = File::open(&args.corpus)?;
    let split = args
        .corpus
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    let (corpus, warnings) = eval::load_corpus(BufReader::new(file), split)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.corpus.display())))?;
    for w in &warnings {
        eprintln!("bangla-ipa: {}: line {}: {}", args.corpus.display(), w.line, w.message);
    }
    let vocab = match &args.vocab {
        Some(p) => Some(load_vocab(p)?),
        None => None,
    };
    let report: EvalReport = eval::evaluate_corpus(&corpus, &engine, vocab.as_ref());
    if let Some(path) = &args.report {
        let mut f = BufWriter::new(File::create(path)?);
        f.write_all(report.render().as_bytes())?;
        f.flush()?;
    }
    let mut out = BufWriter::new(io::stdout());
    writeln!(out, "WER {}", report.wer)?;
    writeln!(out, "PER {}", report.per)?;
    writeln!(out, "CER {}", report.cer)?;
    if let Some(oov) = report.oov_rate {
        writeln!(out, "OOV {oov}")?;
    }
    out.flush()?;
    Ok(0)
}

fn ipa(command: IpaCommand) -> CliResult {
    match command {
        IpaCommand::Normalize { input, output, strict } => {
            let reader = open_input(&input)?;
            let mut out = open_output(&output)?;
            let mut any_error = false;
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                if strict {
                    match phoneset::normalize_ipa_strict(&line) {
                        Ok(normalized) => writeln!(out, "{normalized}")?,
                        Err(e) => {
                            any_error = true;
                            eprintln!("bangla-ipa: line {}: {e}", idx + 1);
                            writeln!(out, "{}", phoneset::normalize_ipa(&line))?;
                        }
                    }
                } else {
                    writeln!(out, "{}", phoneset::normalize_ipa(&line))?;
                }
            }
            out.flush()?;
            Ok(if strict && any_error { 1 } else { 0 })
        }
        IpaCommand::Validate { input, output, strict } => {
            let reader = open_input(&input)?;
            let mut out = open_output(&output)?;
            let mut any_violation = false;
            for (idx, line) in reader.lines().enumerate() {
                let line = line?;
                let (seq, _) = phoneset::parse_ipa_lenient(&line);
                for v in phoneset::validate_phoneseq(&seq) {
                    any_violation = true;
                    eprintln!("bangla-ipa: line {}: {v}", idx + 1);
                }
                writeln!(out, "{line}")?;
            }
            out.flush()?;
            Ok(if strict && any_violation { 1 } else { 0 })
        }
    }
}

fn lexicon(command: LexiconCommand) -> CliResult {
    match command {
        LexiconCommand::Check { file } => {
            // Lenient load so every bad line is reported, not just the first.
            let loaded = Lexicon::load_path(&file, false)?;
            match loaded {
                Ok((lex, warnings)) if warnings.is_empty() => {
                    println!("ok: {} entries", lex.len());
                    Ok(0)
                }
                Ok((_, warnings)) => {
                    for w in &warnings {
                        eprintln!("bangla-ipa: {}: {}", file.display(), w.message);
                    }
                    Ok(1)
                }
                Err(e) => {
                    eprintln!("bangla-ipa: {}: {e}", file.display());
                    Ok(1)
                }
            }
        }
    }
}
