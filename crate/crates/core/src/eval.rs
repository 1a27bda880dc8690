//! Parallel-corpus evaluation: minimal edit-distance alignment, word /
//! phone / character error rates, out-of-vocabulary statistics, and a
//! stable-format report.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;

use thiserror::Error;

use crate::g2p::Transcriber;
use crate::phoneset;
use crate::script::{self, TokenKind};

/// One alignment operation with the indices it pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignOp {
    Match { ref_idx: usize, hyp_idx: usize },
    Substitute { ref_idx: usize, hyp_idx: usize },
    Delete { ref_idx: usize },
    Insert { hyp_idx: usize },
}

/// A minimal-cost alignment between two symbol lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub ops: Vec<AlignOp>,
    /// Count of non-Match operations; Levenshtein-minimal.
    pub distance: usize,
}

impl Alignment {
    /// Applies the ops to `reference`, reconstructing the hypothesis.
    pub fn apply<'a, T: Clone>(&self, reference: &'a [T], hypothesis: &'a [T]) -> Vec<T> {
        let mut out = Vec::with_capacity(hypothesis.len());
        for op in &self.ops {
            match *op {
                AlignOp::Match { ref_idx, .. } => out.push(reference[ref_idx].clone()),
                AlignOp::Substitute { hyp_idx, .. } | AlignOp::Insert { hyp_idx } => {
                    out.push(hypothesis[hyp_idx].clone())
                }
                AlignOp::Delete { .. } => {}
            }
        }
        out
    }
}

/// Unit-cost minimal alignment with a deterministic backtrace: ties prefer
/// Match over Substitute over Delete over Insert.
pub fn edit_distance_alignment<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Alignment {
    let m = reference.len();
    let n = hypothesis.len();
    let width = n + 1;
    let mut d = vec![0usize; (m + 1) * width];
    for i in 0..=m {
        d[i * width] = i;
    }
    for (j, cell) in d.iter_mut().enumerate().take(n + 1) {
        *cell = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let eq = reference[i - 1] == hypothesis[j - 1];
            let diag = d[(i - 1) * width + (j - 1)] + usize::from(!eq);
            let del = d[(i - 1) * width + j] + 1;
            let ins = d[i * width + (j - 1)] + 1;
            d[i * width + j] = diag.min(del).min(ins);
        }
    }

    let mut ops = Vec::with_capacity(m.max(n));
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        let here = d[i * width + j];
        if i > 0 && j > 0 {
            let eq = reference[i - 1] == hypothesis[j - 1];
            let diag = d[(i - 1) * width + (j - 1)];
            if eq && here == diag {
                ops.push(AlignOp::Match { ref_idx: i - 1, hyp_idx: j - 1 });
                i -= 1;
                j -= 1;
                continue;
            }
            if !eq && here == diag + 1 {
                ops.push(AlignOp::Substitute { ref_idx: i - 1, hyp_idx: j - 1 });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * width + j] + 1 {
            ops.push(AlignOp::Delete { ref_idx: i - 1 });
            i -= 1;
            continue;
        }
        ops.push(AlignOp::Insert { hyp_idx: j - 1 });
        j -= 1;
    }
    ops.reverse();
    let distance = ops
        .iter()
        .filter(|op| !matches!(op, AlignOp::Match { .. }))
        .count();
    debug_assert_eq!(distance, d[m * width + n]);
    Alignment { ops, distance }
}

/// An exact error ratio. Values can exceed 1 when insertions outnumber the
/// reference length.
#[derive(Debug, Clone, Copy)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub const ZERO: Rate = Rate { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Rate {
        assert!(den > 0, "rate denominator must be positive");
        Rate { num, den }
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Rate {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Rate {}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.value())
    }
}

/// One metric computation: the exact rate plus its raw counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricOutcome {
    pub rate: Rate,
    pub edits: usize,
    pub ref_len: usize,
    /// Reference side was empty while the hypothesis was not.
    pub degenerate: bool,
}

fn outcome(edits: usize, ref_len: usize, hyp_len: usize) -> MetricOutcome {
    if ref_len == 0 {
        if hyp_len == 0 {
            MetricOutcome { rate: Rate::ZERO, edits, ref_len, degenerate: false }
        } else {
            MetricOutcome {
                rate: Rate::new(hyp_len as u64, 1),
                edits,
                ref_len,
                degenerate: true,
            }
        }
    } else {
        MetricOutcome {
            rate: Rate::new(edits as u64, ref_len as u64),
            edits,
            ref_len,
            degenerate: false,
        }
    }
}

/// Word error rate over whitespace-separated tokens: (S+D+I) / N.
pub fn wer(ref_ipa: &str, hyp_ipa: &str) -> MetricOutcome {
    let r: Vec<&str> = ref_ipa.split_whitespace().collect();
    let h: Vec<&str> = hyp_ipa.split_whitespace().collect();
    let a = edit_distance_alignment(&r, &h);
    outcome(a.distance, r.len(), h.len())
}

/// Phone error rate: units are phones with their diacritics bound, from the
/// lenient parser.
pub fn per(ref_ipa: &str, hyp_ipa: &str) -> MetricOutcome {
    let r = phoneset::parse_ipa_lenient(ref_ipa).0.alignment_units();
    let h = phoneset::parse_ipa_lenient(hyp_ipa).0.alignment_units();
    let a = edit_distance_alignment(&r, &h);
    outcome(a.distance, r.len(), h.len())
}

/// Character error rate over raw scalar values.
pub fn cer(ref_ipa: &str, hyp_ipa: &str) -> MetricOutcome {
    let r: Vec<char> = ref_ipa.chars().collect();
    let h: Vec<char> = hyp_ipa.chars().collect();
    let a = edit_distance_alignment(&r, &h);
    outcome(a.distance, r.len(), h.len())
}

/// One `id<TAB>text<TAB>ipa` record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub id: String,
    pub text: String,
    pub ref_ipa: String,
    pub line: usize,
}

/// A parallel corpus with unique record ids.
#[derive(Debug, Clone, Default)]
pub struct ParallelCorpus {
    pub split: String,
    pub records: Vec<CorpusRecord>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate id '{id}'")]
    DuplicateId { line: usize, id: String },
}

/// A non-fatal observation while loading a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusWarning {
    pub line: usize,
    pub message: String,
}

/// Loads a corpus TSV (`id<TAB>text<TAB>ipa`, `#` comments). Reference IPA
/// is parsed leniently; out-of-inventory symbols become warnings.
pub fn load_corpus(
    reader: impl BufRead,
    split: impl Into<String>,
) -> Result<(ParallelCorpus, Vec<CorpusWarning>), CorpusError> {
    let mut corpus = ParallelCorpus {
        split: split.into(),
        records: Vec::new(),
    };
    let mut warnings = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CorpusError::Parse {
            line: line_no,
            message: format!("read error: {e}"),
        })?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = trimmed.split('\t').collect();
        if cols.len() != 3 {
            return Err(CorpusError::Parse {
                line: line_no,
                message: format!("expected 3 tab-separated columns, got {}", cols.len()),
            });
        }
        if !seen.insert(cols[0].to_string()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: cols[0].to_string(),
            });
        }
        let (_, ipa_warnings) = phoneset::parse_ipa_lenient(cols[2]);
        for w in ipa_warnings {
            warnings.push(CorpusWarning {
                line: line_no,
                message: format!("reference IPA: {} ('{}')", w.message, w.glyph),
            });
        }
        corpus.records.push(CorpusRecord {
            id: cols[0].to_string(),
            text: cols[1].to_string(),
            ref_ipa: cols[2].to_string(),
            line: line_no,
        });
    }
    Ok((corpus, warnings))
}

/// Per-sentence evaluation detail.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceEval {
    pub id: String,
    pub ref_words: usize,
    pub word_edits: usize,
    pub wer: Rate,
    pub per: Rate,
    pub cer: Rate,
}

/// Micro-averaged corpus metrics: total edits over total reference units,
/// not the mean of per-sentence rates.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub split: String,
    pub n_sentences: usize,
    pub n_ref_words: usize,
    pub word_edits: usize,
    pub phone_edits: usize,
    pub ref_phones: usize,
    pub char_edits: usize,
    pub ref_chars: usize,
    pub wer: Rate,
    pub per: Rate,
    pub cer: Rate,
    pub oov_rate: Option<Rate>,
    pub per_sentence: Vec<SentenceEval>,
    pub warnings: Vec<String>,
}

/// Evaluates an engine against a corpus: each sentence is transcribed, both
/// sides canonicalized, and scored at word, phone, and character level. The
/// optional vocabulary yields the out-of-vocabulary token rate of the text
/// side.
pub fn evaluate_corpus(
    corpus: &ParallelCorpus,
    engine: &Transcriber,
    vocabulary: Option<&HashSet<String>>,
) -> EvalReport {
    let mut report = EvalReport {
        split: corpus.split.clone(),
        n_sentences: corpus.records.len(),
        n_ref_words: 0,
        word_edits: 0,
        phone_edits: 0,
        ref_phones: 0,
        char_edits: 0,
        ref_chars: 0,
        wer: Rate::ZERO,
        per: Rate::ZERO,
        cer: Rate::ZERO,
        oov_rate: None,
        per_sentence: Vec::with_capacity(corpus.records.len()),
        warnings: Vec::new(),
    };
    let mut oov_tokens = 0usize;
    let mut word_tokens = 0usize;

    for record in &corpus.records {
        let transcription = engine.transcribe_sentence(&record.text);
        for warning in &transcription.warnings {
            report.warnings.push(format!("{}: {warning}", record.id));
        }
        let hyp = transcription.rendered();
        let reference = phoneset::normalize_ipa(&record.ref_ipa);

        let w = wer(&reference, &hyp);
        let p = per(&reference, &hyp);
        let c = cer(&reference, &hyp);
        if w.degenerate {
            report
                .warnings
                .push(format!("{}: empty reference with non-empty hypothesis", record.id));
        }
        report.n_ref_words += w.ref_len;
        report.word_edits += w.edits;
        report.ref_phones += p.ref_len;
        report.phone_edits += p.edits;
        report.ref_chars += c.ref_len;
        report.char_edits += c.edits;
        report.per_sentence.push(SentenceEval {
            id: record.id.clone(),
            ref_words: w.ref_len,
            word_edits: w.edits,
            wer: w.rate,
            per: p.rate,
            cer: c.rate,
        });

        if let Some(vocab) = vocabulary {
            for token in script::tokenize(&record.text) {
                if token.kind == TokenKind::Word {
                    word_tokens += 1;
                    if !vocab.contains(script::nfc(&token.text).as_ref()) {
                        oov_tokens += 1;
                    }
                }
            }
        }
    }

    report.wer = micro(report.word_edits, report.n_ref_words);
    report.per = micro(report.phone_edits, report.ref_phones);
    report.cer = micro(report.char_edits, report.ref_chars);
    if vocabulary.is_some() {
        report.oov_rate = Some(if word_tokens == 0 {
            Rate::ZERO
        } else {
            Rate::new(oov_tokens as u64, word_tokens as u64)
        });
    }
    report
}

fn micro(edits: usize, total: usize) -> Rate {
    if total == 0 {
        Rate::ZERO
    } else {
        Rate::new(edits as u64, total as u64)
    }
}

impl EvalReport {
    /// Renders the report as a key-value block plus a per-sentence table,
    /// with a stable field order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("# bangla-ipa evaluation report\n");
        out.push_str(&format!("split\t{}\n", self.split));
        out.push_str(&format!("n_sentences\t{}\n", self.n_sentences));
        out.push_str(&format!("n_ref_words\t{}\n", self.n_ref_words));
        out.push_str(&format!("wer\t{}\n", self.wer));
        out.push_str(&format!("per\t{}\n", self.per));
        out.push_str(&format!("cer\t{}\n", self.cer));
        if let Some(oov) = self.oov_rate {
            out.push_str(&format!("oov_rate\t{oov}\n"));
        }
        out.push_str("averaging\tmicro\n");
        out.push_str(&format!("word_edits\t{}\n", self.word_edits));
        out.push_str(&format!("phone_edits\t{}\n", self.phone_edits));
        out.push_str(&format!("char_edits\t{}\n", self.char_edits));
        out.push_str("# per-sentence\n");
        out.push_str("id\tref_words\tword_edits\twer\tper\tcer\n");
        for s in &self.per_sentence {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                s.id, s.ref_words, s.word_edits, s.wer, s.per, s.cer
            ));
        }
        if !self.warnings.is_empty() {
            out.push_str("# warnings\n");
            for w in &self.warnings {
                out.push_str(w);
                out.push('\n');
            }
        }
        out
    }
}
