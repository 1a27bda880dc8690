//! The rule engine: maps tokenized Bengali words onto the phoneset through
//! base mapping, inherent-vowel resolution, glide and diacritic rules,
//! diphthong detection, and morphological length marking. Lexicon entries
//! override the rules; every emitted phone is attributable to one rule or
//! to a lexicon entry through the trace.

use std::fmt;
use std::ops::Range;

use crate::lexicon::Lexicon;
use crate::normalize::{self, NormalizeWarning, NumberReadingPolicy};
use crate::phoneset::{Diacritic, Phone, PhoneBase, PhoneSeq, Segment};
use crate::script::{self, ClusterKind, GraphemeCluster, Token, TokenKind};

/// Stable identifier of one rewrite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleId(pub &'static str);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

pub mod rules {
    use super::RuleId;

    pub const LEXICON: RuleId = RuleId("lexicon");
    pub const BASE_MAP: RuleId = RuleId("base-map");
    pub const INHERENT_DELETE: RuleId = RuleId("inherent-final-delete");
    pub const INHERENT_CONJUNCT: RuleId = RuleId("inherent-conjunct-o");
    pub const INHERENT_RAISE: RuleId = RuleId("inherent-o-raising");
    pub const INHERENT_DEFAULT: RuleId = RuleId("inherent-default-aw");
    pub const YA_PHALA_FRONT: RuleId = RuleId("ya-phala-front");
    pub const YA_PHALA_GEMINATE: RuleId = RuleId("ya-phala-geminate");
    pub const BO_PHALA_SILENT: RuleId = RuleId("bo-phala-silent");
    pub const BO_PHALA_GEMINATE: RuleId = RuleId("bo-phala-geminate");
    pub const CODA_YA: RuleId = RuleId("coda-ya-diphthong");
    pub const MIDDLE_YA: RuleId = RuleId("middle-ya-palatal");
    pub const YA_APPROXIMANT: RuleId = RuleId("ya-approximant");
    pub const OWA_LABIAL: RuleId = RuleId("owa-labial");
    pub const CHANDRABINDU: RuleId = RuleId("chandrabindu-nasal");
    pub const ANUSVARA: RuleId = RuleId("anusvara-velar");
    pub const VISARGA: RuleId = RuleId("visarga");
    pub const DIPHTHONG: RuleId = RuleId("diphthong-glide");
    pub const SUFFIX_LENGTH: RuleId = RuleId("suffix-length");
    pub const CAREFUL_H: RuleId = RuleId("careful-h");
    pub const PASS_THROUGH: RuleId = RuleId("pass-through");
}

/// Options controlling the pipeline; the defaults reproduce the dataset
/// conventions.
#[derive(Debug, Clone)]
pub struct TranscriptionOptions {
    /// Word-initial হ is guaranteed h and marked in the trace.
    pub careful_speech: bool,
    pub number_policy: NumberReadingPolicy,
    /// Mark morphological suffix vowels with the length diacritic.
    pub mark_morph_length: bool,
    /// Insert display-only syllable dots.
    pub emit_syllable_dots: bool,
    /// Conjunct sub-rules (the phala rules) switched off by id; disabled
    /// rules fall back to plain base mapping.
    pub disabled_rules: Vec<RuleId>,
}

impl TranscriptionOptions {
    fn rule_enabled(&self, rule: RuleId) -> bool {
        !self.disabled_rules.contains(&rule)
    }
}

impl Default for TranscriptionOptions {
    fn default() -> Self {
        TranscriptionOptions {
            careful_speech: false,
            number_policy: NumberReadingPolicy::Auto,
            mark_morph_length: true,
            emit_syllable_dots: false,
            disabled_rules: Vec::new(),
        }
    }
}

/// Where a word's transcription came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Lexicon,
    Rules,
    /// Expansion chosen by the lexicon or the number table, segments by the
    /// rules.
    Mixed,
}

/// One trace record: a rule, the grapheme span it consumed, and the phones
/// it produced. Several records may share one span (one per rule that fired
/// on the cluster); the distinct spans partition the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: RuleId,
    pub span: Range<usize>,
    pub grapheme: String,
    pub phones: Vec<Phone>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranscriptionWarning {
    UnmappableGrapheme { grapheme: String },
    NasalDropped { cluster: String },
    MalformedOrthography { byte_offset: usize, message: String },
    UnknownAbbreviation { surface: String },
    NumberOutOfRange { token: String },
}

impl fmt::Display for TranscriptionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranscriptionWarning::UnmappableGrapheme { grapheme } => {
                write!(f, "unmappable grapheme '{grapheme}' passed through")
            }
            TranscriptionWarning::NasalDropped { cluster } => {
                write!(f, "chandrabindu on '{cluster}' has no vowel to nasalize")
            }
            TranscriptionWarning::MalformedOrthography { byte_offset, message } => {
                write!(f, "malformed orthography at byte {byte_offset}: {message}")
            }
            TranscriptionWarning::UnknownAbbreviation { surface } => {
                write!(f, "no expansion for abbreviation '{surface}'")
            }
            TranscriptionWarning::NumberOutOfRange { token } => {
                write!(f, "number '{token}' out of cardinal range, read digit by digit")
            }
        }
    }
}

/// Transcription of one word with its provenance trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptionResult {
    /// The (normalized) surface form that was transcribed.
    pub surface: String,
    pub ipa: PhoneSeq,
    pub source: Source,
    pub trace: Vec<TraceEntry>,
    pub warnings: Vec<TranscriptionWarning>,
}

impl TranscriptionResult {
    pub fn rendered(&self) -> String {
        crate::phoneset::render_ipa(&self.ipa)
    }
}

/// Transcription of a whole input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceTranscription {
    pub words: Vec<TranscriptionResult>,
    /// Word transcriptions joined with word boundaries; punctuation dropped.
    pub ipa: PhoneSeq,
    /// All warnings, word-level and token-level, in input order.
    pub warnings: Vec<TranscriptionWarning>,
}

impl SentenceTranscription {
    pub fn rendered(&self) -> String {
        crate::phoneset::render_ipa(&self.ipa)
    }
}

/// The engine: a frozen lexicon plus options. Construction is cheap and the
/// value is immutable afterwards, so it can be shared across threads.
#[derive(Debug, Clone)]
pub struct Transcriber {
    lexicon: Lexicon,
    opts: TranscriptionOptions,
}

// ---------------------------------------------------------------------------
// Internal draft representation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VowelKind {
    /// Spelled with a vowel sign or an independent vowel letter.
    Written,
    /// The inherent vowel of a bare consonant (or of অ).
    Inherent,
}

#[derive(Debug, Clone)]
struct Unit {
    phone: Phone,
    cluster: usize,
    rule: RuleId,
    vowel: Option<VowelKind>,
    /// Deleted units stay in the draft so the trace can show the deletion.
    deleted: bool,
    /// An out-of-inventory character carried through verbatim.
    passthrough: Option<char>,
}

impl Unit {
    fn phone(cluster: usize, rule: RuleId, phone: Phone) -> Self {
        Unit {
            phone,
            cluster,
            rule,
            vowel: None,
            deleted: false,
            passthrough: None,
        }
    }

    fn vowel(cluster: usize, rule: RuleId, base: PhoneBase, kind: VowelKind) -> Self {
        Unit {
            phone: Phone::new(base),
            cluster,
            rule,
            vowel: Some(kind),
            deleted: false,
            passthrough: None,
        }
    }

    fn is_live_vowel(&self) -> bool {
        !self.deleted && self.vowel.is_some()
    }
}

fn consonant_base(letter: char) -> Option<(PhoneBase, Option<Diacritic>)> {
    use Diacritic::{AspVoiced, AspVoiceless};
    use PhoneBase::*;
    Some(match letter {
        'ক' => (K, None),
        'খ' => (K, Some(AspVoiceless)),
        'গ' => (G, None),
        'ঘ' => (G, Some(AspVoiced)),
        'ঙ' | 'ঞ' => (Ng, None),
        'চ' => (CPal, None),
        'ছ' => (CPal, Some(AspVoiceless)),
        'জ' | 'য' => (JPal, None),
        'ঝ' => (JPal, Some(AspVoiced)),
        'ট' => (TRetro, None),
        'ঠ' => (TRetro, Some(AspVoiceless)),
        'ড' => (DRetro, None),
        'ঢ' => (DRetro, Some(AspVoiced)),
        'ণ' | 'ন' => (N, None),
        'ত' | 'ৎ' => (TDental, None),
        'থ' => (TDental, Some(AspVoiceless)),
        'দ' => (DDental, None),
        'ধ' => (DDental, Some(AspVoiced)),
        'প' => (P, None),
        'ফ' => (P, Some(AspVoiceless)),
        'ব' => (B, None),
        'ভ' => (B, Some(AspVoiced)),
        'ম' => (M, None),
        'র' | '\u{09F0}' => (Tap, None),
        'ল' => (L, None),
        'শ' | 'ষ' | 'স' => (Sh, None),
        'হ' => (H, None),
        '\u{09DC}' => (Flap, None),
        '\u{09DD}' => (Flap, Some(AspVoiced)),
        '\u{09F1}' => (B, None),
        _ => return None,
    })
}

/// Phones for an independent vowel letter; `None` marks the inherent-vowel
/// letter অ, which resolves contextually.
fn independent_vowel_phones(letter: char) -> Option<Vec<PhoneBase>> {
    use PhoneBase::*;
    Some(match letter {
        'অ' => return None,
        'আ' => vec![A],
        'ই' | 'ঈ' => vec![I],
        'উ' | 'ঊ' => vec![U],
        'ঋ' | 'ৠ' => vec![Tap, I],
        'ঌ' | 'ৡ' => vec![L, I],
        'এ' => vec![E],
        'ঐ' => vec![O, I],
        'ও' => vec![O],
        'ঔ' => vec![O, U],
        _ => vec![A], // unreachable for real text; safe fallback
    })
}

fn vowel_sign_phones(sign: char) -> Vec<PhoneBase> {
    use PhoneBase::*;
    match sign {
        '\u{09BE}' => vec![A],              // া
        '\u{09BF}' | '\u{09C0}' => vec![I], // ি ী
        '\u{09C1}' | '\u{09C2}' => vec![U], // ু ূ
        '\u{09C3}' | '\u{09C4}' => vec![Tap, I], // ৃ ৄ
        '\u{09C7}' => vec![E],              // ে
        '\u{09C8}' => vec![O, I],           // ৈ
        '\u{09CB}' => vec![O],              // ো
        '\u{09CC}' => vec![O, U],           // ৌ
        '\u{09D7}' => vec![U],              // dangling au mark
        '\u{09E2}' | '\u{09E3}' => vec![L, I],
        _ => vec![A],
    }
}

/// The letters whose aspiration is voiced; they may never surface with ʰ.
pub fn is_voiced_aspirate_letter(letter: char) -> bool {
    matches!(letter, 'ঘ' | 'ঝ' | 'ঢ' | 'ধ' | 'ভ' | '\u{09DD}')
}

// Diphthong table. The offglide inventory is ɪ ʊ e o; ɐ has no semi-vowel
// counterpart and never takes the non-syllabic mark, and identical pairs
// are vowel clusters, not diphthongs.
const REGULAR_DIPHTHONGS: [(PhoneBase, PhoneBase); 19] = {
    use PhoneBase::*;
    [
        (A, I), (A, U), (A, E), (A, O),
        (Aw, I), (Aw, U), (Aw, E), (Aw, O),
        (O, I), (O, U), (O, E),
        (E, I), (E, U),
        (Ae, I), (Ae, U),
        (U, I), (U, E),
        (I, U), (I, E),
    ]
};

/// Rarer combinations; detected only when both vowels sit inside one
/// grapheme cluster. Pairs gliding toward ɐ are listed for completeness but
/// can never be marked.
const IRREGULAR_DIPHTHONGS: [(PhoneBase, PhoneBase); 11] = {
    use PhoneBase::*;
    [
        (E, O), (Ae, E), (Ae, O), (U, O), (I, O),
        (I, A), (E, A), (Ae, A), (Aw, A), (O, A), (U, A),
    ]
};

/// Vowel pairs read as a morphological length suffix rather than a
/// diphthong when the word ends in an emphatic ও / ই / এ letter: identical
/// qualities can only be a suffix, and the common e+ই case follows the
/// dataset convention.
fn is_length_pair(prev: PhoneBase, suffix: PhoneBase) -> bool {
    prev == suffix || (prev == PhoneBase::E && suffix == PhoneBase::I)
}

struct WordPipeline<'a> {
    opts: &'a TranscriptionOptions,
    clusters: Vec<GraphemeCluster>,
    units: Vec<Unit>,
    warnings: Vec<TranscriptionWarning>,
    /// Unit index of a detected morphological length-suffix vowel.
    suffix_unit: Option<usize>,
}

impl<'a> WordPipeline<'a> {
    fn run(word: &str, opts: &'a TranscriptionOptions) -> TranscriptionResult {
        let seg = script::segment_graphemes(word);
        let surface: String = seg.clusters.iter().map(|c| c.text.as_str()).collect();
        let mut p = WordPipeline {
            opts,
            clusters: seg.clusters,
            units: Vec::new(),
            warnings: seg
                .warnings
                .into_iter()
                .map(|w| TranscriptionWarning::MalformedOrthography {
                    byte_offset: w.byte_offset,
                    message: w.message,
                })
                .collect(),
            suffix_unit: None,
        };
        p.map_bases();
        p.apply_visarga();
        p.resolve_inherents();
        p.apply_glides();
        p.apply_nasalization();
        p.detect_length_suffix();
        p.detect_diphthongs();
        p.mark_suffix_length();
        p.apply_careful_h();
        p.finish(surface)
    }

    fn last_phonetic_cluster(&self) -> Option<usize> {
        (0..self.clusters.len()).rev().find(|&i| {
            matches!(
                self.clusters[i].kind,
                ClusterKind::Consonant | ClusterKind::IndependentVowel
            ) && !self.clusters[i].degenerate
        })
    }

    fn first_phonetic_cluster(&self) -> Option<usize> {
        (0..self.clusters.len()).find(|&i| {
            matches!(
                self.clusters[i].kind,
                ClusterKind::Consonant | ClusterKind::IndependentVowel
            ) && !self.clusters[i].degenerate
        })
    }

    // -- Stage 1: Table 1 / Table 2 base mapping ---------------------------

    fn map_bases(&mut self) {
        let first = self.first_phonetic_cluster();
        for idx in 0..self.clusters.len() {
            let cluster = self.clusters[idx].clone();
            match cluster.kind {
                ClusterKind::Consonant => {
                    self.map_consonant_cluster(idx, &cluster, first == Some(idx))
                }
                ClusterKind::IndependentVowel => {
                    self.map_vowel_cluster(idx, &cluster, first == Some(idx))
                }
                ClusterKind::Digit | ClusterKind::Symbol => {
                    self.map_symbol_cluster(idx, &cluster)
                }
            }
        }
    }

    fn push_consonant(&mut self, idx: usize, rule: RuleId, base: PhoneBase, asp: Option<Diacritic>) {
        let mut phone = Phone::new(base);
        if let Some(d) = asp {
            phone.add(d);
        }
        self.units.push(Unit::phone(idx, rule, phone));
    }

    fn map_consonant_cluster(&mut self, idx: usize, cluster: &GraphemeCluster, word_initial: bool) {
        let mut bases = cluster.bases.clone();
        let mut vowel_rule = rules::BASE_MAP;
        let mut force_front = false; // ya-phala coloring

        // Conjunct adjustments on the final phala, innermost first.
        loop {
            let n = bases.len();
            if n >= 2 && bases[n - 1] == 'য' {
                if word_initial && self.opts.rule_enabled(rules::YA_PHALA_FRONT) {
                    bases.pop();
                    force_front = true;
                    vowel_rule = rules::YA_PHALA_FRONT;
                    if bases.is_empty() {
                        break;
                    }
                    continue;
                }
                if !word_initial && self.opts.rule_enabled(rules::YA_PHALA_GEMINATE) {
                    bases.pop();
                    vowel_rule = rules::YA_PHALA_GEMINATE;
                    self.push_phala_bases(idx, rules::YA_PHALA_GEMINATE, &bases, true);
                    bases.clear();
                    break;
                }
            }
            if n >= 2 && bases[n - 1] == 'ব' && bases[n - 2] != 'ম' {
                if word_initial && self.opts.rule_enabled(rules::BO_PHALA_SILENT) {
                    bases.pop();
                    self.push_phala_bases(idx, rules::BO_PHALA_SILENT, &bases, false);
                    bases.clear();
                    break;
                }
                if !word_initial && self.opts.rule_enabled(rules::BO_PHALA_GEMINATE) {
                    bases.pop();
                    self.push_phala_bases(idx, rules::BO_PHALA_GEMINATE, &bases, true);
                    bases.clear();
                    break;
                }
            }
            break;
        }
        if !bases.is_empty() {
            self.push_phala_bases(idx, rules::BASE_MAP, &bases, false);
        }

        // The vowel slot. Ya-phala fronting recolors only the inherent
        // vowel and the া / ে signs; other signs keep their value.
        let frontable = matches!(cluster.vowel_sign, None | Some('\u{09BE}') | Some('\u{09C7}'));
        if cluster.has_virama_final || cluster.bases == ['ৎ'] {
            // suppressed
        } else if force_front && frontable {
            self.units
                .push(Unit::vowel(idx, rules::YA_PHALA_FRONT, PhoneBase::Ae, VowelKind::Written));
        } else if let Some(sign) = cluster.vowel_sign {
            for base in vowel_sign_phones(sign) {
                self.units.push(Unit::vowel(idx, rules::BASE_MAP, base, VowelKind::Written));
            }
        } else {
            self.units
                .push(Unit::vowel(idx, vowel_rule, PhoneBase::Aw, VowelKind::Inherent));
        }

        self.push_trailing_marks(idx, cluster);
    }

    /// Emits the phones for a run of conjunct bases. With `geminate_last`
    /// the final base doubles, unaspirated first half (খ্য → kkʰ).
    fn push_phala_bases(&mut self, idx: usize, rule: RuleId, bases: &[char], geminate_last: bool) {
        for (i, &b) in bases.iter().enumerate() {
            let last = i + 1 == bases.len();
            match consonant_base(b) {
                Some((base, asp)) => {
                    if last && geminate_last {
                        self.push_consonant(idx, rule, base, None);
                    }
                    self.push_consonant(idx, rule, base, asp);
                }
                None if b == '\u{09DF}' => {
                    // Glide letter inside a conjunct: realized by the glide
                    // rules later; keep a j placeholder.
                    self.push_consonant(idx, rules::YA_APPROXIMANT, PhoneBase::Glide, None)
                }
                None => self.pass_through(idx, b),
            }
        }
    }

    fn map_vowel_cluster(&mut self, idx: usize, cluster: &GraphemeCluster, word_initial: bool) {
        let _ = word_initial;
        let letter = cluster.independent_vowel.unwrap_or('অ');
        if cluster.has_ya_phala {
            // অ্যা / এ্যা: front low-mid vowel regardless of the sign.
            self.units
                .push(Unit::vowel(idx, rules::YA_PHALA_FRONT, PhoneBase::Ae, VowelKind::Written));
        } else {
            match independent_vowel_phones(letter) {
                Some(bases) => {
                    for base in bases {
                        self.units
                            .push(Unit::vowel(idx, rules::BASE_MAP, base, VowelKind::Written));
                    }
                }
                None => {
                    // অ resolves like an inherent vowel but is never deleted.
                    self.units
                        .push(Unit::vowel(idx, rules::BASE_MAP, PhoneBase::Aw, VowelKind::Inherent));
                }
            }
            if let Some(sign) = cluster.vowel_sign {
                // Degenerate spelling; still voiced.
                for base in vowel_sign_phones(sign) {
                    self.units
                        .push(Unit::vowel(idx, rules::BASE_MAP, base, VowelKind::Written));
                }
            }
        }
        self.push_trailing_marks(idx, cluster);
    }

    fn map_symbol_cluster(&mut self, idx: usize, cluster: &GraphemeCluster) {
        if let Some(sign) = cluster.vowel_sign {
            for base in vowel_sign_phones(sign) {
                self.units
                    .push(Unit::vowel(idx, rules::BASE_MAP, base, VowelKind::Written));
            }
        }
        self.push_trailing_marks(idx, cluster);
        if cluster.vowel_sign.is_none()
            && cluster.trailing_marks.is_empty()
            && !cluster.has_chandrabindu
        {
            for c in cluster.text.chars() {
                match script::classify_codepoint(c) {
                    script::CodepointClass::Virama
                    | script::CodepointClass::Nukta
                    | script::CodepointClass::Joiner
                    | script::CodepointClass::Punctuation
                    | script::CodepointClass::Whitespace => {}
                    _ => self.pass_through(idx, c),
                }
            }
        }
    }

    fn pass_through(&mut self, idx: usize, c: char) {
        self.warnings.push(TranscriptionWarning::UnmappableGrapheme {
            grapheme: c.to_string(),
        });
        let mut unit = Unit::phone(idx, rules::PASS_THROUGH, Phone::new(PhoneBase::A));
        unit.passthrough = Some(c);
        self.units.push(unit);
    }

    fn push_trailing_marks(&mut self, idx: usize, cluster: &GraphemeCluster) {
        for &mark in &cluster.trailing_marks {
            match script::classify_codepoint(mark) {
                script::CodepointClass::Anusvara => {
                    self.push_consonant(idx, rules::ANUSVARA, PhoneBase::Ng, None)
                }
                script::CodepointClass::Visarga => {
                    // Placeholder; resolved by apply_visarga once the next
                    // cluster's onset is known.
                    let mut unit = Unit::phone(idx, rules::VISARGA, Phone::new(PhoneBase::H));
                    unit.passthrough = Some('\u{0983}');
                    self.units.push(unit);
                }
                _ => {}
            }
        }
    }

    // -- Stage 1b: visarga --------------------------------------------------

    /// Word-final visarga surfaces as h; elsewhere it geminates the next
    /// onset (দুঃখ → d̪ʊkkʰo).
    fn apply_visarga(&mut self) {
        for i in 0..self.units.len() {
            if self.units[i].rule != rules::VISARGA || self.units[i].passthrough.is_none() {
                continue;
            }
            self.units[i].passthrough = None;
            let next_onset = self.units[i + 1..]
                .iter()
                .find(|u| !u.deleted && u.vowel.is_none())
                .filter(|u| u.phone.base != PhoneBase::H)
                .map(|u| u.phone.clone());
            if let Some(mut onset) = next_onset {
                // The first half of a geminate is unaspirated (দুঃখ d̪ʊkkʰo).
                onset.remove(Diacritic::AspVoiceless);
                onset.remove(Diacritic::AspVoiced);
                self.units[i].phone = onset;
            }
        }
    }

    // -- Stage 2: inherent-vowel resolution ---------------------------------

    fn resolve_inherents(&mut self) {
        let last_cluster = self.last_phonetic_cluster();

        // Deletion first: a word-final inherent vowel after a simple
        // consonant is dropped, unless it is the word's only vowel or the
        // cluster carries trailing marks.
        if let Some(last) = last_cluster {
            let cluster = &self.clusters[last];
            let live_vowels = self.units.iter().filter(|u| u.is_live_vowel()).count();
            if cluster.kind == ClusterKind::Consonant
                && cluster.trailing_marks.is_empty()
                && live_vowels > 1
            {
                // A visarga on the previous cluster geminates this onset,
                // which keeps the final vowel like a conjunct does.
                let geminated = (0..last).rev().find_map(|i| {
                    let c = &self.clusters[i];
                    match c.kind {
                        ClusterKind::Consonant | ClusterKind::IndependentVowel => {
                            Some(c.trailing_marks.iter().any(|&m| {
                                script::classify_codepoint(m) == script::CodepointClass::Visarga
                            }))
                        }
                        _ => None,
                    }
                });
                let conjunct = cluster.is_conjunct() || geminated == Some(true);
                for u in self.units.iter_mut().rev() {
                    if u.cluster == last && u.vowel == Some(VowelKind::Inherent) && !u.deleted {
                        if conjunct {
                            u.phone = Phone::new(PhoneBase::O);
                            u.rule = rules::INHERENT_CONJUNCT;
                        } else {
                            u.deleted = true;
                            u.rule = rules::INHERENT_DELETE;
                        }
                        break;
                    }
                }
            }
        }

        // Raising: right to left so each lookahead sees resolved values.
        for i in (0..self.units.len()).rev() {
            if self.units[i].vowel != Some(VowelKind::Inherent)
                || self.units[i].deleted
                || self.units[i].rule != rules::BASE_MAP && self.units[i].rule != rules::YA_PHALA_GEMINATE
            {
                continue;
            }
            let next_vowel = self.units[i + 1..]
                .iter()
                .find(|u| u.is_live_vowel())
                .map(|u| u.phone.base);
            let (base, rule) = match next_vowel {
                Some(PhoneBase::I) | Some(PhoneBase::U) => (PhoneBase::O, rules::INHERENT_RAISE),
                _ => (PhoneBase::Aw, rules::INHERENT_DEFAULT),
            };
            self.units[i].phone = Phone::new(base);
            self.units[i].rule = rule;
        }
    }

    // -- Stage 3: glides ----------------------------------------------------

    fn is_ya_cluster(&self, idx: usize) -> bool {
        self.clusters[idx].kind == ClusterKind::Consonant && self.clusters[idx].bases == ['\u{09DF}']
    }

    fn cluster_units(&self, idx: usize) -> Range<usize> {
        let start = self.units.iter().position(|u| u.cluster == idx);
        match start {
            None => 0..0,
            Some(s) => {
                let e = self.units[s..]
                    .iter()
                    .position(|u| u.cluster != idx)
                    .map_or(self.units.len(), |off| s + off);
                s..e
            }
        }
    }

    fn last_live_phone_before(&self, unit_idx: usize) -> Option<usize> {
        self.units[..unit_idx]
            .iter()
            .rposition(|u| !u.deleted && u.passthrough.is_none())
    }

    fn apply_glides(&mut self) {
        let mut consumed_ya: Vec<usize> = Vec::new();

        // ওয়া-type labialization: ও (or a bare ব between vowels) followed by
        // a য়-cluster that carries a vowel.
        for idx in 0..self.clusters.len() {
            let next = idx + 1;
            if next >= self.clusters.len() || !self.is_ya_cluster(next) {
                continue;
            }
            let ya_range = self.cluster_units(next);
            let ya_has_vowel = self.units[ya_range.clone()].iter().any(|u| u.is_live_vowel());
            if !ya_has_vowel {
                continue;
            }
            let is_o_letter = self.clusters[idx].kind == ClusterKind::IndependentVowel
                && self.clusters[idx].independent_vowel == Some('ও')
                && !self.clusters[idx].has_ya_phala;
            let is_bare_bo = self.clusters[idx].kind == ClusterKind::Consonant
                && self.clusters[idx].bases == ['ব']
                && self.clusters[idx].vowel_sign.is_none();
            let prev_is_vowel = self
                .cluster_units(idx)
                .start
                .checked_sub(1)
                .and_then(|i| self.last_live_phone_before(i + 1))
                .map(|i| self.units[i].is_live_vowel())
                .unwrap_or(false);
            if !(is_o_letter || (is_bare_bo && prev_is_vowel)) {
                continue;
            }

            let range = self.cluster_units(idx);
            let transition = self.units[range]
                .iter()
                .rposition(|u| !u.deleted)
                .map(|off| self.cluster_units(idx).start + off);
            if let Some(t) = transition {
                self.units[t].phone.add(Diacritic::Labialized);
                self.units[t].rule = rules::OWA_LABIAL;
                // Drop the glide consonant of the য় cluster; its vowel stays.
                for u in &mut self.units[ya_range.clone()] {
                    if u.phone.base == PhoneBase::Glide && u.vowel.is_none() {
                        u.deleted = true;
                        u.rule = rules::OWA_LABIAL;
                    }
                }
                consumed_ya.push(next);
            }
        }

        // Middle and coda য়.
        for idx in 0..self.clusters.len() {
            if !self.is_ya_cluster(idx) || consumed_ya.contains(&idx) {
                continue;
            }
            let range = self.cluster_units(idx);
            let glide_pos = self.units[range.clone()]
                .iter()
                .position(|u| u.phone.base == PhoneBase::Glide && !u.deleted)
                .map(|off| range.start + off);
            let Some(g) = glide_pos else { continue };
            let has_vowel = self.units[range.clone()].iter().any(|u| u.is_live_vowel());
            let prev = self.last_live_phone_before(g);
            let prev_is_vowel = prev.map(|i| self.units[i].is_live_vowel()).unwrap_or(false);

            if has_vowel {
                if prev_is_vowel {
                    // Middle case: the transition palatalizes the preceding
                    // vowel; the glide's own inherent vowel surfaces as o.
                    let p = prev.unwrap();
                    self.units[p].phone.add(Diacritic::Palatalized);
                    self.units[g].deleted = true;
                    self.units[g].rule = rules::MIDDLE_YA;
                    for u in &mut self.units[range.clone()] {
                        if u.vowel == Some(VowelKind::Inherent) && !u.deleted {
                            u.phone = Phone::new(PhoneBase::O);
                            u.rule = rules::MIDDLE_YA;
                        }
                    }
                }
                // Otherwise (word-initial য়া etc.): the approximant stands.
            } else if prev_is_vowel {
                // Coda case: non-syllabic offglide.
                let mut offglide = Phone::new(PhoneBase::E);
                offglide.add(Diacritic::NonSyllabic);
                self.units[g].phone = offglide;
                self.units[g].vowel = Some(VowelKind::Written);
                self.units[g].rule = rules::CODA_YA;
            }
        }
    }

    // -- Stage 4: nasalization ----------------------------------------------

    fn apply_nasalization(&mut self) {
        for idx in 0..self.clusters.len() {
            if !self.clusters[idx].has_chandrabindu {
                continue;
            }
            let range = self.cluster_units(idx);
            let vowel = self.units[range]
                .iter()
                .rposition(|u| u.is_live_vowel())
                .map(|off| self.cluster_units(idx).start + off);
            match vowel {
                Some(v) => {
                    self.units[v].phone.add(Diacritic::Nasal);
                    self.units[v].rule = rules::CHANDRABINDU;
                }
                None => self.warnings.push(TranscriptionWarning::NasalDropped {
                    cluster: self.clusters[idx].text.clone(),
                }),
            }
        }
    }

    // -- Stage 5: morphological length suffix detection ----------------------

    fn detect_length_suffix(&mut self) {
        if !self.opts.mark_morph_length {
            return;
        }
        let Some(last) = self.last_phonetic_cluster() else { return };
        let cluster = &self.clusters[last];
        if cluster.kind != ClusterKind::IndependentVowel
            || cluster.has_ya_phala
            || !cluster.trailing_marks.is_empty()
            || !matches!(cluster.independent_vowel, Some('ও') | Some('ই') | Some('এ'))
        {
            return;
        }
        let phonetic_clusters = self
            .clusters
            .iter()
            .filter(|c| {
                matches!(c.kind, ClusterKind::Consonant | ClusterKind::IndependentVowel)
                    && !c.degenerate
            })
            .count();
        if phonetic_clusters < 2 {
            return;
        }
        let range = self.cluster_units(last);
        let Some(suffix_off) = self.units[range.clone()].iter().position(|u| u.is_live_vowel())
        else {
            return;
        };
        let suffix_idx = range.start + suffix_off;
        let suffix_base = self.units[suffix_idx].phone.base;
        let Some(prev) = self.last_live_phone_before(suffix_idx) else { return };
        let prev_unit = &self.units[prev];
        let qualifies = if prev_unit.is_live_vowel() {
            is_length_pair(prev_unit.phone.base, suffix_base)
                && !prev_unit.phone.has(Diacritic::NonSyllabic)
        } else {
            prev_unit.phone.base == PhoneBase::Ng
        };
        if qualifies {
            self.suffix_unit = Some(suffix_idx);
        }
    }

    // -- Stage 6: diphthongs --------------------------------------------------

    fn detect_diphthongs(&mut self) {
        let live: Vec<usize> = (0..self.units.len())
            .filter(|&i| !self.units[i].deleted && self.units[i].passthrough.is_none())
            .collect();
        let mut skip_next = false;
        for w in live.windows(2) {
            let (a, b) = (w[0], w[1]);
            if skip_next {
                skip_next = false;
                continue;
            }
            if Some(b) == self.suffix_unit {
                continue; // never merge across the morpheme boundary
            }
            let (ua, ub) = (&self.units[a], &self.units[b]);
            if !(ua.is_live_vowel() && ub.is_live_vowel()) {
                continue;
            }
            let (va, vb) = (ua.phone.base, ub.phone.base);
            if va == vb || vb == PhoneBase::A {
                continue;
            }
            if ua.phone.has(Diacritic::NonSyllabic)
                || ua.phone.has(Diacritic::Long)
                || ub.phone.has(Diacritic::NonSyllabic)
                || ub.phone.has(Diacritic::Long)
            {
                continue;
            }
            let regular = REGULAR_DIPHTHONGS.contains(&(va, vb));
            let irregular = IRREGULAR_DIPHTHONGS.contains(&(va, vb))
                && ua.cluster == ub.cluster;
            if regular || irregular {
                self.units[b].phone.add(Diacritic::NonSyllabic);
                self.units[b].rule = rules::DIPHTHONG;
                skip_next = true; // the offglide cannot start another pair
            }
        }
    }

    // -- Stage 7: suffix length ------------------------------------------------

    fn mark_suffix_length(&mut self) {
        if let Some(i) = self.suffix_unit {
            self.units[i].phone.add(Diacritic::Long);
            self.units[i].rule = rules::SUFFIX_LENGTH;
        }
    }

    // -- Stage 8: careful-speech হ ----------------------------------------------

    fn apply_careful_h(&mut self) {
        if !self.opts.careful_speech {
            return;
        }
        if let Some(first) = self.first_phonetic_cluster() {
            if self.clusters[first].bases == ['হ'] {
                let range = self.cluster_units(first);
                for u in &mut self.units[range] {
                    if u.phone.base == PhoneBase::H && !u.deleted {
                        u.rule = rules::CAREFUL_H;
                    }
                }
            }
        }
    }

    // -- Assembly ------------------------------------------------------------

    fn finish(self, surface: String) -> TranscriptionResult {
        let mut seq = PhoneSeq::new();
        for u in &self.units {
            if u.deleted {
                continue;
            }
            match u.passthrough {
                Some(c) => seq.segments.push(Segment::Unknown(c)),
                None => seq.push(u.phone.clone()),
            }
        }
        if self.opts.emit_syllable_dots {
            seq = insert_syllable_breaks(seq);
        }
        debug_assert!(
            self.units.iter().any(|u| u.passthrough.is_some())
                || crate::phoneset::validate_phoneseq(&seq).is_empty(),
            "rule output violated phone invariants for {surface:?}"
        );

        let mut trace: Vec<TraceEntry> = Vec::new();
        for (idx, cluster) in self.clusters.iter().enumerate() {
            let mut any = false;
            for u in self.units.iter().filter(|u| u.cluster == idx) {
                any = true;
                let phones = if u.deleted || u.passthrough.is_some() {
                    vec![]
                } else {
                    vec![u.phone.clone()]
                };
                match trace.last_mut() {
                    Some(last) if last.rule == u.rule && last.span == cluster.span => {
                        last.phones.extend(phones)
                    }
                    _ => trace.push(TraceEntry {
                        rule: u.rule,
                        span: cluster.span.clone(),
                        grapheme: cluster.text.clone(),
                        phones,
                    }),
                }
            }
            if !any {
                trace.push(TraceEntry {
                    rule: rules::PASS_THROUGH,
                    span: cluster.span.clone(),
                    grapheme: cluster.text.clone(),
                    phones: vec![],
                });
            }
        }

        TranscriptionResult {
            surface,
            ipa: seq,
            source: Source::Rules,
            trace,
            warnings: self.warnings,
        }
    }
}

/// Display-only syllabification: one onset consonant per nucleus, the rest
/// closing the previous syllable.
fn insert_syllable_breaks(seq: PhoneSeq) -> PhoneSeq {
    let segments = seq.segments;
    let is_nucleus = |s: &Segment| match s {
        Segment::Phone(p) => p.is_vowel() && !p.has(Diacritic::NonSyllabic),
        _ => false,
    };
    let mut nuclei_seen = 0usize;
    let mut breaks: Vec<usize> = Vec::new();
    for i in 0..segments.len() {
        if !is_nucleus(&segments[i]) {
            continue;
        }
        nuclei_seen += 1;
        if nuclei_seen == 1 {
            continue;
        }
        // Walk back over at most one onset consonant.
        let mut at = i;
        if at > 0 {
            if let Segment::Phone(p) = &segments[at - 1] {
                if !p.is_vowel() {
                    at -= 1;
                }
            }
        }
        if at > 0 && !matches!(segments[at - 1], Segment::WordBoundary | Segment::SyllableBreak) {
            breaks.push(at);
        }
    }
    let mut out = PhoneSeq::new();
    for (i, seg) in segments.into_iter().enumerate() {
        if breaks.contains(&i) {
            out.segments.push(Segment::SyllableBreak);
        }
        out.segments.push(seg);
    }
    out
}

impl Transcriber {
    pub fn new(lexicon: Lexicon, opts: TranscriptionOptions) -> Self {
        Transcriber { lexicon, opts }
    }

    /// Engine with the shipped default lexicon and default options.
    pub fn with_defaults() -> Self {
        Transcriber::new(Lexicon::builtin(), TranscriptionOptions::default())
    }

    pub fn options(&self) -> &TranscriptionOptions {
        &self.opts
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// Transcribes one word: lexicon hit or the full rule pipeline.
    pub fn transcribe_word(&self, word: &str) -> TranscriptionResult {
        let surface = script::nfc(word).into_owned();
        if surface.is_empty() {
            return TranscriptionResult {
                surface,
                ipa: PhoneSeq::new(),
                source: Source::Rules,
                trace: vec![],
                warnings: vec![],
            };
        }
        if let Some(entry) = self.lexicon.lookup(&surface) {
            return TranscriptionResult {
                surface: surface.clone(),
                ipa: entry.seq.clone(),
                source: Source::Lexicon,
                trace: vec![TraceEntry {
                    rule: rules::LEXICON,
                    span: 0..surface.len(),
                    grapheme: surface,
                    phones: entry.seq.phones().cloned().collect(),
                }],
                warnings: vec![],
            };
        }
        WordPipeline::run(&surface, &self.opts)
    }

    /// Transcribes a line of text: tokenization, number/abbreviation
    /// expansion, word transcription, and separator-joined output.
    pub fn transcribe_sentence(&self, text: &str) -> SentenceTranscription {
        let mut words: Vec<TranscriptionResult> = Vec::new();
        let mut sentence_warnings: Vec<TranscriptionWarning> = Vec::new();

        for token in script::tokenize(text) {
            self.transcribe_token(&token, &mut words, &mut sentence_warnings);
        }

        let mut ipa = PhoneSeq::new();
        let mut warnings = sentence_warnings;
        for w in &words {
            ipa.join(w.ipa.clone());
            warnings.extend(w.warnings.iter().cloned());
        }
        SentenceTranscription { words, ipa, warnings }
    }

    fn transcribe_token(
        &self,
        token: &Token,
        words: &mut Vec<TranscriptionResult>,
        sentence_warnings: &mut Vec<TranscriptionWarning>,
    ) {
        match token.kind {
            TokenKind::Word => {
                // Lexicon-tagged abbreviations expand even without a dot.
                let expansion = self.lexicon.lookup(&token.text).and_then(|e| {
                    (e.tag == crate::lexicon::Tag::Abbrev && !e.expansion.is_empty())
                        .then(|| e.expansion.clone())
                });
                match expansion {
                    Some(expanded) => self.push_expanded(expanded, words),
                    None => words.push(self.transcribe_word(&token.text)),
                }
            }
            TokenKind::Punct => {}
            TokenKind::Number => {
                let mut norm_warnings = Vec::new();
                let digit_len = token.text.chars().count();
                let mode = self.opts.number_policy.resolve(digit_len, false);
                let expanded = normalize::read_digit_run(&token.text, mode, &mut norm_warnings);
                self.push_expanded(expanded, words);
                convert_warnings(norm_warnings, sentence_warnings);
            }
            TokenKind::Mixed => {
                let mut norm_warnings = Vec::new();
                let expanded =
                    normalize::expand_mixed(&token.text, self.opts.number_policy, &mut norm_warnings);
                self.push_expanded(expanded, words);
                convert_warnings(norm_warnings, sentence_warnings);
            }
            TokenKind::Abbreviation => {
                let mut norm_warnings = Vec::new();
                let expanded =
                    normalize::expand_abbreviation(&token.text, &self.lexicon, &mut norm_warnings);
                self.push_expanded(expanded, words);
                convert_warnings(norm_warnings, sentence_warnings);
            }
        }
    }

    /// Builds the number-word table as a lexicon by transcribing every word
    /// form with this engine. The shipped numbers.tsv is this output for the
    /// default lexicon; a test keeps the file in sync.
    pub fn build_number_lexicon(&self) -> Lexicon {
        use crate::lexicon::{LexiconEntry, Tag};
        let mut lex = Lexicon::new("numbers");
        let mut add = |word: &str| {
            let ipa = self.transcribe_word(word).rendered();
            let entry = LexiconEntry::new(word, &ipa, Tag::Number, vec![])
                .expect("number words transcribe to valid IPA");
            let _ = lex.insert(entry);
        };
        for w in normalize::UNITS {
            add(w);
        }
        for h in 1..=9usize {
            add(&format!("{}{}", normalize::UNITS[h], normalize::SCALE_HUNDRED_SUFFIX));
        }
        add(normalize::SCALE_THOUSAND);
        add(normalize::SCALE_LAKH);
        add(normalize::SCALE_CRORE);
        for w in normalize::ORDINALS_1_10 {
            add(w);
        }
        lex
    }

    fn push_expanded(&self, expanded: Vec<String>, words: &mut Vec<TranscriptionResult>) {
        for word in expanded {
            let mut result = self.transcribe_word(&word);
            if result.source == Source::Rules {
                // The word itself came from a table or an expansion.
                result.source = Source::Mixed;
            }
            words.push(result);
        }
    }
}

fn convert_warnings(from: Vec<NormalizeWarning>, into: &mut Vec<TranscriptionWarning>) {
    for w in from {
        into.push(match w {
            NormalizeWarning::OutOfRange { token } => {
                TranscriptionWarning::NumberOutOfRange { token }
            }
            NormalizeWarning::UnknownAbbreviation { surface } => {
                TranscriptionWarning::UnknownAbbreviation { surface }
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phoneset::validate_phoneseq;

    fn engine() -> Transcriber {
        Transcriber::with_defaults()
    }

    fn bare_engine() -> Transcriber {
        Transcriber::new(Lexicon::new("empty"), TranscriptionOptions::default())
    }

    fn word(s: &str) -> String {
        engine().transcribe_word(s).rendered()
    }

    #[test]
    fn base_mapping_examples() {
        assert_eq!(word("আ"), "ɐ");
        assert_eq!(word("ই"), "ɪ");
        // র is the tap, never a trill.
        assert_eq!(word("রাগ"), "ɾɐg");
    }

    #[test]
    fn inherent_vowel_resolution() {
        // Raising before a high vowel.
        assert_eq!(word("হলুদ"), "holʊd\u{32a}");
        // Final deletion plus the default low-mid vowel.
        assert_eq!(word("জল"), "ɟɔl");
        // Conjunct-final retention as o.
        assert_eq!(word("রাষ্ট্র"), "ɾɐʃʈɾo");
        // A single-cluster word keeps its only vowel.
        assert_eq!(word("ক"), "kɔ");
        // Trailing anusvara blocks deletion.
        assert_eq!(word("রং"), "ɾɔŋ");
    }

    #[test]
    fn acronym_by_rules() {
        assert_eq!(word("মুসক"), "mʊʃɔk");
    }

    #[test]
    fn glide_rules() {
        // Coda য়: offglide after a vowel.
        let r = word("মামলায়");
        assert!(r.ends_with("ɐe\u{32f}"), "got {r}");
        assert_eq!(word("ছয়"), "cʰɔe\u{32f}");
        // Middle য়: palatalized transition, o on the glide's inherent slot.
        assert_eq!(word("নিয়ম"), "nɪʲom");
        // ওয়া: labialized transition.
        assert_eq!(word("দেওয়া"), "d\u{32a}eoʷɐ");
    }

    #[test]
    fn flap_and_coda_glide_words() {
        // ড় is the flap; the inherent vowel raises before high ɪ.
        assert_eq!(word("ফড়িং"), "pʰoɽɪŋ");
        // Bare ভ plus coda য়.
        assert_eq!(word("ভয়"), "bʱɔe\u{32f}");
    }

    #[test]
    fn aspirated_hosts_geminate_unaspirated_first() {
        assert_eq!(word("সংখ্যা"), "ʃɔŋkkʰɐ");
        assert_eq!(word("মধ্য"), "mɔd\u{32a}d\u{32a}ʱo");
    }

    #[test]
    fn nasalization() {
        assert_eq!(word("চাঁদ"), "cɐ\u{303}d\u{32a}");
        assert_eq!(word("পাঁচ"), "pɐ\u{303}c");
        // No chandrabindu, no nasal.
        assert_eq!(word("পাচ"), "pɐc");
    }

    #[test]
    fn diphthongs() {
        assert_eq!(word("দুই"), "d\u{32a}ʊɪ\u{32f}");
        let r = word("যাচাই");
        assert!(r.ends_with("ɐɪ\u{32f}"), "got {r}");
    }

    #[test]
    fn suffix_length() {
        let r = word("গরুগুলোও");
        assert_eq!(r, "goɾʊgʊlooː");
        let r = word("মেক্সিকোও");
        assert!(r.ends_with("kooː"), "got {r}");
        let r = word("আজকেই");
        assert!(r.ends_with("eɪː"), "got {r}");
        let r = word("শুটিংও");
        assert!(r.ends_with("ŋoː"), "got {r}");
    }

    #[test]
    fn suffix_length_obeys_option() {
        let opts = TranscriptionOptions {
            mark_morph_length: false,
            ..Default::default()
        };
        let t = Transcriber::new(Lexicon::new("empty"), opts);
        let r = t.transcribe_word("গরুগুলোও").rendered();
        assert!(!r.contains('ː'), "got {r}");
    }

    #[test]
    fn ya_phala() {
        // Medial য-phala geminates its host (printed ʃunno shape).
        assert_eq!(word("শূন্য"), "ʃʊnno");
        // Word-initial য-phala fronts the vowel.
        assert_eq!(word("ব্যাংক"), "bɛŋk");
        assert_eq!(word("অ্যাপ"), "ɛp");
    }

    #[test]
    fn bo_phala() {
        // Word-initial ব-phala is silent.
        let r = word("স্বাদ");
        assert_eq!(r, "ʃɐd\u{32a}");
        // Medial ব-phala geminates.
        let r = word("বিশ্ব");
        assert_eq!(r, "bɪʃʃo");
        // ম্ব is a true cluster, not a phala.
        let r = word("লম্বা");
        assert_eq!(r, "lɔmbɐ");
    }

    #[test]
    fn voiced_aspirates_always_voiced() {
        for (letter, expect) in [
            ("ভ", "bʱɔ"),
            ("ধ", "d\u{32a}ʱɔ"),
            ("ঢ", "ɖʱɔ"),
            ("ঝ", "ɟʱɔ"),
            ("ঘ", "gʱɔ"),
            ("ঢ়", "ɽʱɔ"),
        ] {
            assert_eq!(word(letter), expect);
        }
    }

    #[test]
    fn lexicon_precedence_is_exact() {
        let t = engine();
        let r = t.transcribe_word("ফেইক");
        assert_eq!(r.source, Source::Lexicon);
        assert_eq!(r.rendered(), "feɪk");
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.trace[0].rule, rules::LEXICON);

        let r = t.transcribe_word("ফজর");
        assert_eq!(r.rendered(), "fɔzɔɾ");
    }

    #[test]
    fn empty_word() {
        let r = engine().transcribe_word("");
        assert!(r.ipa.is_empty());
        assert_eq!(r.source, Source::Rules);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn trace_spans_partition_word() {
        let r = bare_engine().transcribe_word("রাষ্ট্র");
        let surface_len = r.surface.len();
        let mut spans: Vec<Range<usize>> = r.trace.iter().map(|t| t.span.clone()).collect();
        spans.sort_by_key(|s| (s.start, s.end));
        spans.dedup();
        assert_eq!(spans.first().map(|s| s.start), Some(0));
        assert_eq!(spans.last().map(|s| s.end), Some(surface_len));
        for w in spans.windows(2) {
            assert_eq!(w[0].end, w[1].start, "spans must tile the word");
        }
    }

    #[test]
    fn engine_output_validates_clean() {
        for text in ["হলুদ", "রাষ্ট্র", "নিয়ম", "গরুগুলোও", "চাঁদ", "ব্যাংক", "দুঃখ"] {
            let r = bare_engine().transcribe_word(text);
            assert!(
                validate_phoneseq(&r.ipa).is_empty(),
                "violations for {text}: {:?}",
                validate_phoneseq(&r.ipa)
            );
        }
    }

    #[test]
    fn visarga_handling() {
        assert_eq!(word("দুঃখ"), "d\u{32a}ʊkkʰo");
    }

    #[test]
    fn unmappable_grapheme_passes_through() {
        let r = engine().transcribe_word("Xক");
        assert!(r
            .warnings
            .iter()
            .any(|w| matches!(w, TranscriptionWarning::UnmappableGrapheme { .. })));
        assert_eq!(r.rendered(), "Xkɔ");
    }

    #[test]
    fn sentence_number_cardinal() {
        let s = engine().transcribe_sentence("২০৬");
        assert_eq!(s.rendered(), "d\u{32a}ʊɪ\u{32f}ʃo cʰɔe\u{32f}");
        assert_eq!(s.words.len(), 2);
        assert!(s.words.iter().all(|w| w.source != Source::Rules));
    }

    #[test]
    fn sentence_number_digits() {
        let opts = TranscriptionOptions {
            number_policy: NumberReadingPolicy::DigitByDigit,
            ..Default::default()
        };
        let t = Transcriber::new(Lexicon::builtin(), opts);
        let s = t.transcribe_sentence("২০৫০");
        assert_eq!(s.words.len(), 4);
        assert_eq!(s.rendered(), "d\u{32a}ʊɪ\u{32f} ʃʊnno pɐ\u{303}c ʃʊnno");
    }

    #[test]
    fn sentence_abbreviation() {
        let s = engine().transcribe_sentence("মো. করিম");
        assert_eq!(s.words.len(), 2);
        assert_eq!(s.words[0].surface, "মোহাম্মদ");
        assert_eq!(s.words[0].source, Source::Lexicon);
        assert_eq!(s.words[1].surface, "করিম");
    }

    #[test]
    fn sentence_punctuation_only() {
        let s = engine().transcribe_sentence("।");
        assert!(s.words.is_empty());
        assert!(s.ipa.is_empty());
    }

    #[test]
    fn sentence_long_run_reads_digit_by_digit() {
        let s = engine().transcribe_sentence("০১৭১২৩৪৫৬৭৮");
        assert_eq!(s.words.len(), 11);
    }

    #[test]
    fn careful_speech_marks_trace() {
        let opts = TranscriptionOptions {
            careful_speech: true,
            ..Default::default()
        };
        let t = Transcriber::new(Lexicon::new("empty"), opts);
        let r = t.transcribe_word("হলুদ");
        assert_eq!(r.rendered(), "holʊd\u{32a}");
        assert!(r.trace.iter().any(|e| e.rule == rules::CAREFUL_H));
    }

    #[test]
    fn syllable_dots_mode() {
        let opts = TranscriptionOptions {
            emit_syllable_dots: true,
            ..Default::default()
        };
        let t = Transcriber::new(Lexicon::new("empty"), opts);
        let r = t.transcribe_word("গরুগুলোও").rendered();
        assert_eq!(r, "go.ɾʊ.gʊ.lo.oː");
    }

    #[test]
    fn determinism() {
        let t = engine();
        let a = t.transcribe_sentence("মো. করিম ১৯টা চাঁদ দেখলেন।");
        let b = t.transcribe_sentence("মো. করিম ১৯টা চাঁদ দেখলেন।");
        assert_eq!(a, b);
    }

    #[test]
    fn disabled_phala_rules_fall_back_to_base_map() {
        let opts = TranscriptionOptions {
            disabled_rules: vec![rules::YA_PHALA_GEMINATE],
            ..Default::default()
        };
        let t = Transcriber::new(Lexicon::new("empty"), opts);
        // Without gemination the conjunct maps base by base.
        assert_eq!(t.transcribe_word("শূন্য").rendered(), "ʃʊnɟo");
        assert_eq!(word("শূন্য"), "ʃʊnno");
    }

    #[test]
    fn dotless_lexicon_abbreviation_expands() {
        let (lex, _) = Lexicon::load_str(
            "ডাঃ\tɖɐktɐr\tabbrev\tডাক্তার\n",
            "t",
            true,
        )
        .unwrap();
        let t = Transcriber::new(lex, TranscriptionOptions::default());
        let s = t.transcribe_sentence("ডাঃ করিম");
        assert_eq!(s.words[0].surface, "ডাক্তার");
    }

    #[test]
    fn number_words_are_all_transcribable() {
        let t = bare_engine();
        let all = normalize::UNITS
            .iter()
            .chain(normalize::ORDINALS_1_10.iter())
            .chain([normalize::SCALE_THOUSAND, normalize::SCALE_LAKH, normalize::SCALE_CRORE].iter());
        for w in all {
            let r = t.transcribe_word(w);
            assert!(
                !r.warnings
                    .iter()
                    .any(|w| matches!(w, TranscriptionWarning::UnmappableGrapheme { .. })),
                "number word {w} not transcribable"
            );
            assert!(!r.ipa.is_empty());
        }
    }

    #[test]
    fn transcriber_is_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Transcriber>();
    }

    fn generated_numbers_tsv() -> String {
        let (default, _) =
            Lexicon::load_str(crate::lexicon::DEFAULT_LEXICON_TSV, "default", true).unwrap();
        let t = Transcriber::new(default, TranscriptionOptions::default());
        let mut buf = Vec::new();
        t.build_number_lexicon().save(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn shipped_numbers_tsv_matches_engine() {
        let shipped: String = crate::lexicon::NUMBER_LEXICON_TSV
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(
            shipped,
            generated_numbers_tsv(),
            "data/numbers.tsv is stale; regenerate with \
             `cargo test -p bangla-ipa print_numbers_tsv -- --ignored --nocapture`"
        );
    }

    /// Regeneration helper: prints the canonical numbers.tsv body.
    #[test]
    #[ignore]
    fn print_numbers_tsv() {
        print!("{}", generated_numbers_tsv());
    }
}
