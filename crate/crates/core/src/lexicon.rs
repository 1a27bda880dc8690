//! Exception dictionary: loanwords, abbreviations, acronyms, homograph
//! overrides, and number words, validated against the phoneset.
//!
//! File format: UTF-8 TSV, `surface<TAB>ipa<TAB>tag[<TAB>expansion words]`,
//! `#` comments, no header. The ipa column is canonicalized on load and must
//! then parse in strict mode with zero placement violations.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::phoneset::{self, PhoneSeq};
use crate::script;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Loan,
    Abbrev,
    Acronym,
    Proper,
    Number,
    Override,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Loan => "loan",
            Tag::Abbrev => "abbrev",
            Tag::Acronym => "acronym",
            Tag::Proper => "proper",
            Tag::Number => "number",
            Tag::Override => "override",
        }
    }

    fn parse(s: &str) -> Option<Tag> {
        Some(match s {
            "loan" => Tag::Loan,
            "abbrev" => Tag::Abbrev,
            "acronym" => Tag::Acronym,
            "proper" => Tag::Proper,
            "number" => Tag::Number,
            "override" => Tag::Override,
            _ => return None,
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    /// Canonical-composition surface form.
    pub surface: String,
    /// Canonicalized IPA string.
    pub ipa: String,
    /// Parsed form of `ipa`.
    pub seq: PhoneSeq,
    pub tag: Tag,
    /// Full-form words; non-empty exactly when `tag == Abbrev`.
    pub expansion: Vec<String>,
    pub priority: i32,
    /// 1-based source line, 0 for programmatic entries.
    pub line: usize,
}

impl LexiconEntry {
    /// Builds and validates an entry from raw columns.
    pub fn new(
        surface: &str,
        ipa: &str,
        tag: Tag,
        expansion: Vec<String>,
    ) -> Result<Self, LexiconError> {
        let surface = script::nfc(surface).into_owned();
        let canonical = phoneset::normalize_ipa(ipa);
        let seq = phoneset::parse_ipa(&canonical).map_err(|e| LexiconError::InvalidIpa {
            line: 0,
            surface: surface.clone(),
            message: e.to_string(),
        })?;
        let violations = phoneset::validate_phoneseq(&seq);
        if let Some(v) = violations.first() {
            return Err(LexiconError::InvalidIpa {
                line: 0,
                surface,
                message: v.to_string(),
            });
        }
        if (tag == Tag::Abbrev) != !expansion.is_empty() {
            return Err(LexiconError::Parse {
                line: 0,
                message: if tag == Tag::Abbrev {
                    "abbrev entry requires an expansion column".into()
                } else {
                    format!("{tag} entry must not carry an expansion")
                },
            });
        }
        Ok(LexiconEntry {
            surface,
            ipa: canonical,
            seq,
            tag,
            expansion,
            priority: 0,
            line: 0,
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: invalid IPA for '{surface}': {message}")]
    InvalidIpa {
        line: usize,
        surface: String,
        message: String,
    },
    #[error("line {line}: duplicate surface '{surface}'")]
    DuplicateSurface { line: usize, surface: String },
}

/// A skipped-entry report from lenient loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadWarning {
    pub line: usize,
    pub message: String,
}

/// Surface-form → entry table. Immutable once loaded; lookups are exact
/// match on the canonical-composition key.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    pub name: String,
    entries: HashMap<String, LexiconEntry>,
}

impl Lexicon {
    pub fn new(name: impl Into<String>) -> Self {
        Lexicon {
            name: name.into(),
            entries: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn insert(&mut self, entry: LexiconEntry) -> Result<(), LexiconError> {
        if self.entries.contains_key(&entry.surface) {
            return Err(LexiconError::DuplicateSurface {
                line: entry.line,
                surface: entry.surface.clone(),
            });
        }
        self.entries.insert(entry.surface.clone(), entry);
        Ok(())
    }

    /// Exact-match lookup with canonical-composition key normalization.
    pub fn lookup(&self, surface: &str) -> Option<&LexiconEntry> {
        self.entries.get(script::nfc(surface).as_ref())
    }

    /// Loads a lexicon from a TSV stream. In strict mode the first error
    /// aborts; in lenient mode bad lines are skipped and reported.
    pub fn load(
        reader: impl BufRead,
        name: impl Into<String>,
        strict: bool,
    ) -> Result<(Lexicon, Vec<LoadWarning>), LexiconError> {
        let mut lex = Lexicon::new(name);
        let mut warnings = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| LexiconError::Parse {
                line: line_no,
                message: format!("read error: {e}"),
            })?;
            match parse_line(&line, line_no) {
                Ok(None) => {}
                Ok(Some(entry)) => {
                    if let Err(e) = lex.insert(entry) {
                        let e = with_line(e, line_no);
                        if strict {
                            return Err(e);
                        }
                        warnings.push(LoadWarning {
                            line: line_no,
                            message: e.to_string(),
                        });
                    }
                }
                Err(e) => {
                    if strict {
                        return Err(e);
                    }
                    warnings.push(LoadWarning {
                        line: line_no,
                        message: e.to_string(),
                    });
                }
            }
        }
        Ok((lex, warnings))
    }

    pub fn load_str(
        s: &str,
        name: impl Into<String>,
        strict: bool,
    ) -> Result<(Lexicon, Vec<LoadWarning>), LexiconError> {
        Lexicon::load(s.as_bytes(), name, strict)
    }

    pub fn load_path(path: &Path, strict: bool) -> io::Result<Result<(Lexicon, Vec<LoadWarning>), LexiconError>> {
        let file = File::open(path)?;
        let name = path.display().to_string();
        Ok(Lexicon::load(BufReader::new(file), name, strict))
    }

    /// Writes the lexicon in the TSV format, sorted by surface so diffs are
    /// reproducible.
    pub fn save(&self, mut w: impl Write) -> io::Result<()> {
        let mut entries: Vec<&LexiconEntry> = self.entries.values().collect();
        entries.sort_by(|a, b| a.surface.cmp(&b.surface));
        for e in entries {
            if e.expansion.is_empty() {
                writeln!(w, "{}\t{}\t{}", e.surface, e.ipa, e.tag)?;
            } else {
                writeln!(w, "{}\t{}\t{}\t{}", e.surface, e.ipa, e.tag, e.expansion.join(" "))?;
            }
        }
        Ok(())
    }

    /// Overlay merge: on a surface collision the higher-priority entry
    /// wins; at equal priority the overlay wins.
    pub fn merge(mut base: Lexicon, overlay: Lexicon) -> Lexicon {
        for (surface, entry) in overlay.entries {
            match base.entries.get(&surface) {
                Some(existing) if existing.priority > entry.priority => {}
                _ => {
                    base.entries.insert(surface, entry);
                }
            }
        }
        base
    }

    /// The shipped default lexicon: the framework's worked loanwords,
    /// abbreviations, and acronyms, plus the number-word table.
    pub fn builtin() -> Lexicon {
        let (default, warnings) = Lexicon::load_str(DEFAULT_LEXICON_TSV, "builtin:default", true)
            .expect("embedded default lexicon must be valid");
        debug_assert!(warnings.is_empty());
        let (numbers, warnings) = Lexicon::load_str(NUMBER_LEXICON_TSV, "builtin:numbers", true)
            .expect("embedded number lexicon must be valid");
        debug_assert!(warnings.is_empty());
        let mut merged = Lexicon::merge(default, numbers);
        merged.name = "builtin".into();
        merged
    }
}

/// The shipped exception entries.
pub const DEFAULT_LEXICON_TSV: &str = include_str!("../data/default.tsv");
/// The number-word table in lexicon form.
pub const NUMBER_LEXICON_TSV: &str = include_str!("../data/numbers.tsv");

fn with_line(e: LexiconError, line: usize) -> LexiconError {
    match e {
        LexiconError::Parse { message, .. } => LexiconError::Parse { line, message },
        LexiconError::InvalidIpa { surface, message, .. } => LexiconError::InvalidIpa {
            line,
            surface,
            message,
        },
        LexiconError::DuplicateSurface { surface, .. } => {
            LexiconError::DuplicateSurface { line, surface }
        }
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Option<LexiconEntry>, LexiconError> {
    let trimmed = line.trim_end_matches(['\r', '\n']);
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let cols: Vec<&str> = trimmed.split('\t').collect();
    if !(3..=4).contains(&cols.len()) {
        return Err(LexiconError::Parse {
            line: line_no,
            message: format!("expected 3 or 4 tab-separated columns, got {}", cols.len()),
        });
    }
    let tag = Tag::parse(cols[2]).ok_or_else(|| LexiconError::Parse {
        line: line_no,
        message: format!("unknown tag '{}'", cols[2]),
    })?;
    let expansion: Vec<String> = cols
        .get(3)
        .map(|s| s.split_whitespace().map(str::to_string).collect())
        .unwrap_or_default();
    let mut entry =
        LexiconEntry::new(cols[0], cols[1], tag, expansion).map_err(|e| with_line(e, line_no))?;
    entry.line = line_no;
    Ok(Some(entry))
}
