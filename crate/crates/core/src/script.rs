//! Unicode-level analysis of Bengali text: codepoint classification,
//! grapheme-cluster segmentation, and tokenization into words, numbers,
//! mixed tokens, abbreviations, and punctuation.
//!
//! Everything here is tolerant of the noisy orthography found in scraped
//! newspaper text: dangling signs and double viramas are flagged, not fatal.

use std::borrow::Cow;
use std::fmt;
use std::ops::Range;

use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

/// Classification of one scalar value. Total over all of Unicode; every
/// codepoint in the Bengali block maps to a non-`Other` class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodepointClass {
    IndependentVowel,
    ConsonantLetter,
    VowelSign,
    Virama,
    Chandrabindu,
    Anusvara,
    Visarga,
    Nukta,
    BengaliDigit,
    LatinDigit,
    Joiner,
    Punctuation,
    Whitespace,
    Other,
}

/// Classifies any scalar value. Deterministic and total.
pub fn classify_codepoint(cp: char) -> CodepointClass {
    use CodepointClass::*;
    match cp {
        '\u{0981}' => Chandrabindu,
        '\u{0982}' => Anusvara,
        '\u{0983}' => Visarga,
        // অ..ঔ and ক..হ, skipping the unassigned gaps so they fall to the
        // block arm below.
        '\u{0985}'..='\u{0994}'
            if !matches!(cp, '\u{098D}' | '\u{098E}' | '\u{0991}' | '\u{0992}') =>
        {
            IndependentVowel
        }
        '\u{0995}'..='\u{09B9}'
            if !matches!(cp, '\u{09A9}' | '\u{09B1}' | '\u{09B3}'..='\u{09B5}') =>
        {
            ConsonantLetter
        }
        '\u{09BC}' => Nukta,
        '\u{09BE}'..='\u{09C4}' => VowelSign,
        '\u{09C7}' | '\u{09C8}' | '\u{09CB}' | '\u{09CC}' => VowelSign,
        '\u{09CD}' => Virama,
        '\u{09CE}' => ConsonantLetter, // khanda ta
        '\u{09D7}' => VowelSign,       // au length mark
        '\u{09DC}' | '\u{09DD}' | '\u{09DF}' => ConsonantLetter, // ড় ঢ় য়
        '\u{09E0}' | '\u{09E1}' => IndependentVowel, // vocalic rr/ll
        '\u{09E2}' | '\u{09E3}' => VowelSign,        // vocalic r/l signs
        '\u{09E6}'..='\u{09EF}' => BengaliDigit,
        '\u{09F0}' | '\u{09F1}' => ConsonantLetter, // Assamese ra/wa forms
        '\u{09FC}' => Anusvara,                     // vedic anusvara
        '\u{09FE}' => Nukta,                        // sandhi mark, combining
        // Remaining Bengali-block values (currency and section signs,
        // unassigned points, the abbreviation sign U+09FD) behave as
        // symbols so the block never classifies as Other.
        '\u{0980}'..='\u{09FF}' => Punctuation,
        '0'..='9' => LatinDigit,
        '\u{200C}' | '\u{200D}' => Joiner, // ZWNJ / ZWJ
        '\u{0964}' | '\u{0965}' => Punctuation, // danda, double danda
        c if c.is_whitespace() => Whitespace,
        c if c.is_alphabetic() => Other,
        c if c.is_ascii_punctuation() => Punctuation,
        c if !c.is_alphanumeric() && !c.is_control() => Punctuation,
        _ => Other,
    }
}

/// The Bengali abbreviation dot: ASCII full stop or U+09FD.
pub fn is_abbreviation_dot(cp: char) -> bool {
    cp == '.' || cp == '\u{09FD}'
}

/// Broad shape of one grapheme cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterKind {
    /// One or more consonant bases joined by virama, plus attached signs.
    Consonant,
    /// An independent vowel letter, plus attached signs.
    IndependentVowel,
    /// A single digit.
    Digit,
    /// Anything else: punctuation, dangling signs, foreign letters.
    Symbol,
}

/// One orthographic unit of Bengali script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphemeCluster {
    /// The exact slice of the (NFC-normalized) source this cluster covers.
    pub text: String,
    /// Byte range in the normalized source string.
    pub span: Range<usize>,
    pub kind: ClusterKind,
    /// Consonant bases in order; empty unless `kind == Consonant`.
    pub bases: Vec<char>,
    /// The letter of an independent-vowel cluster.
    pub independent_vowel: Option<char>,
    pub vowel_sign: Option<char>,
    pub has_virama_final: bool,
    pub has_chandrabindu: bool,
    /// A virama+য attached to an independent vowel (the অ্যা spelling).
    pub has_ya_phala: bool,
    /// Anusvara / visarga, in order of appearance.
    pub trailing_marks: Vec<char>,
    /// Set when the orthography was malformed (dangling sign, double
    /// virama, sign on a vowel); the cluster is still emitted.
    pub degenerate: bool,
}

impl GraphemeCluster {
    fn new(kind: ClusterKind, span_start: usize) -> Self {
        GraphemeCluster {
            text: String::new(),
            span: span_start..span_start,
            kind,
            bases: Vec::new(),
            independent_vowel: None,
            vowel_sign: None,
            has_virama_final: false,
            has_chandrabindu: false,
            has_ya_phala: false,
            trailing_marks: Vec::new(),
            degenerate: false,
        }
    }

    pub fn is_conjunct(&self) -> bool {
        self.bases.len() > 1
    }
}

/// A malformed-orthography report; segmentation always continues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedSequence {
    pub byte_offset: usize,
    pub message: String,
}

impl fmt::Display for MalformedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed sequence at byte {}: {}", self.byte_offset, self.message)
    }
}

/// Output of [`segment_graphemes`]: the clusters cover the normalized input
/// exactly, in order.
#[derive(Debug, Clone, Default)]
pub struct Segmentation {
    pub clusters: Vec<GraphemeCluster>,
    pub warnings: Vec<MalformedSequence>,
}

/// Canonical-composition normalization, borrowing when already composed.
pub fn nfc(text: &str) -> Cow<'_, str> {
    match is_nfc_quick(text.chars()) {
        IsNormalized::Yes => Cow::Borrowed(text),
        _ => Cow::Owned(text.nfc().collect()),
    }
}

/// Segments text into grapheme clusters. Input is NFC-normalized first;
/// concatenating the cluster texts reproduces the normalized input exactly.
pub fn segment_graphemes(text: &str) -> Segmentation {
    let text = nfc(text);
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let total_len = text.len();
    let byte_end = |i: usize| chars.get(i).map_or(total_len, |&(p, _)| p);

    let mut seg = Segmentation::default();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        use CodepointClass::*;
        match classify_codepoint(c) {
            ConsonantLetter => i = consume_consonant(&chars, i, &mut seg),
            IndependentVowel => i = consume_independent_vowel(&chars, i, &mut seg),
            BengaliDigit | LatinDigit => {
                let mut cl = GraphemeCluster::new(ClusterKind::Digit, start);
                cl.text.push(c);
                cl.span = start..byte_end(i + 1);
                seg.clusters.push(cl);
                i += 1;
            }
            Joiner => {
                // Invisible; keep it attached to the previous cluster so the
                // round-trip holds.
                match seg.clusters.last_mut() {
                    Some(prev) => {
                        prev.text.push(c);
                        prev.span.end = byte_end(i + 1);
                    }
                    None => {
                        let mut cl = GraphemeCluster::new(ClusterKind::Symbol, start);
                        cl.text.push(c);
                        cl.span = start..byte_end(i + 1);
                        seg.clusters.push(cl);
                    }
                }
                i += 1;
            }
            VowelSign | Virama | Chandrabindu | Anusvara | Visarga | Nukta => {
                seg.warnings.push(MalformedSequence {
                    byte_offset: start,
                    message: format!("dangling sign '{c}' with no preceding consonant"),
                });
                let mut cl = GraphemeCluster::new(ClusterKind::Symbol, start);
                cl.text.push(c);
                cl.span = start..byte_end(i + 1);
                cl.degenerate = true;
                match classify_codepoint(c) {
                    VowelSign => cl.vowel_sign = Some(c),
                    Chandrabindu => cl.has_chandrabindu = true,
                    Anusvara | Visarga => cl.trailing_marks.push(c),
                    _ => {}
                }
                seg.clusters.push(cl);
                i += 1;
            }
            Punctuation | Whitespace | Other => {
                let mut cl = GraphemeCluster::new(ClusterKind::Symbol, start);
                cl.text.push(c);
                cl.span = start..byte_end(i + 1);
                seg.clusters.push(cl);
                i += 1;
            }
        }
    }
    debug_assert_eq!(
        seg.clusters.iter().map(|c| c.text.as_str()).collect::<String>(),
        text.as_ref()
    );
    seg
}

fn consume_consonant(chars: &[(usize, char)], mut i: usize, seg: &mut Segmentation) -> usize {
    let total = chars.len();
    let (start, first) = chars[i];
    let mut cl = GraphemeCluster::new(ClusterKind::Consonant, start);
    cl.text.push(first);
    cl.bases.push(first);
    i += 1;

    use CodepointClass::*;
    while i < total {
        let (pos, c) = chars[i];
        match classify_codepoint(c) {
            Nukta => {
                // ড় ঢ় য় are composition exclusions, so NFC keeps them
                // decomposed; fold the pair in `bases` while the text keeps
                // the canonical byte sequence.
                if let Some(last) = cl.bases.last_mut() {
                    if let Some(folded) = fold_nukta(*last) {
                        *last = folded;
                    }
                }
                cl.text.push(c);
                i += 1;
            }
            Virama => {
                // Look past joiners for a consonant to merge.
                let mut j = i + 1;
                while j < total && classify_codepoint(chars[j].1) == Joiner {
                    j += 1;
                }
                if j < total && classify_codepoint(chars[j].1) == ConsonantLetter {
                    for &(_, joined) in &chars[i..=j] {
                        cl.text.push(joined);
                    }
                    cl.bases.push(chars[j].1);
                    i = j + 1;
                } else {
                    if cl.has_virama_final {
                        cl.degenerate = true;
                        seg.warnings.push(MalformedSequence {
                            byte_offset: pos,
                            message: "double virama".into(),
                        });
                    }
                    cl.has_virama_final = true;
                    cl.text.push(c);
                    i += 1;
                }
            }
            VowelSign => {
                if cl.vowel_sign.is_some() {
                    cl.degenerate = true;
                    seg.warnings.push(MalformedSequence {
                        byte_offset: pos,
                        message: format!("second vowel sign '{c}' on one cluster"),
                    });
                } else {
                    if cl.has_virama_final {
                        cl.degenerate = true;
                        seg.warnings.push(MalformedSequence {
                            byte_offset: pos,
                            message: "vowel sign after virama".into(),
                        });
                    }
                    cl.vowel_sign = Some(c);
                }
                cl.text.push(c);
                i += 1;
            }
            Chandrabindu => {
                cl.has_chandrabindu = true;
                cl.text.push(c);
                i += 1;
            }
            Anusvara | Visarga => {
                cl.trailing_marks.push(c);
                cl.text.push(c);
                i += 1;
            }
            _ => break,
        }
    }
    cl.span = start..chars.get(i).map_or_else(|| last_byte_end(chars), |&(p, _)| p);
    seg.clusters.push(cl);
    i
}

fn consume_independent_vowel(chars: &[(usize, char)], mut i: usize, seg: &mut Segmentation) -> usize {
    let total = chars.len();
    let (start, letter) = chars[i];
    let mut cl = GraphemeCluster::new(ClusterKind::IndependentVowel, start);
    cl.text.push(letter);
    cl.independent_vowel = Some(letter);
    i += 1;

    use CodepointClass::*;
    while i < total {
        let (pos, c) = chars[i];
        match classify_codepoint(c) {
            Chandrabindu => {
                cl.has_chandrabindu = true;
                cl.text.push(c);
                i += 1;
            }
            Anusvara | Visarga => {
                cl.trailing_marks.push(c);
                cl.text.push(c);
                i += 1;
            }
            Virama => {
                // The অ্যা spelling: vowel + virama + য (+ sign) is one unit.
                if i + 1 < total && chars[i + 1].1 == 'য' {
                    cl.has_ya_phala = true;
                    cl.text.push(c);
                    cl.text.push('য');
                    i += 2;
                } else {
                    cl.degenerate = true;
                    cl.text.push(c);
                    seg.warnings.push(MalformedSequence {
                        byte_offset: pos,
                        message: "virama on an independent vowel".into(),
                    });
                    i += 1;
                }
            }
            VowelSign => {
                if cl.has_ya_phala && cl.vowel_sign.is_none() {
                    cl.vowel_sign = Some(c);
                } else {
                    cl.degenerate = true;
                    seg.warnings.push(MalformedSequence {
                        byte_offset: pos,
                        message: format!("vowel sign '{c}' on an independent vowel"),
                    });
                    if cl.vowel_sign.is_none() {
                        cl.vowel_sign = Some(c);
                    }
                }
                cl.text.push(c);
                i += 1;
            }
            _ => break,
        }
    }
    cl.span = start..chars.get(i).map_or_else(|| last_byte_end(chars), |&(p, _)| p);
    seg.clusters.push(cl);
    i
}

fn last_byte_end(chars: &[(usize, char)]) -> usize {
    chars.last().map_or(0, |&(p, c)| p + c.len_utf8())
}

/// The three nukta letters with dedicated codepoints.
fn fold_nukta(base: char) -> Option<char> {
    match base {
        'ড' => Some('\u{09DC}'),
        'ঢ' => Some('\u{09DD}'),
        'য' => Some('\u{09DF}'),
        _ => None,
    }
}

/// Token kinds produced by [`tokenize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Mixed,
    Abbreviation,
    Punct,
}

/// A tokenizer unit with its byte span in the original input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub span: Range<usize>,
}

fn is_word_char(class: CodepointClass, c: char) -> bool {
    use CodepointClass::*;
    matches!(
        class,
        ConsonantLetter
            | IndependentVowel
            | VowelSign
            | Virama
            | Chandrabindu
            | Anusvara
            | Visarga
            | Nukta
            | Joiner
    ) || (class == Other && c.is_alphabetic())
}

fn is_digit_char(class: CodepointClass) -> bool {
    matches!(class, CodepointClass::BengaliDigit | CodepointClass::LatinDigit)
}

/// Splits text into word / number / mixed / abbreviation / punctuation
/// tokens. Spans are disjoint, ordered, and cover all non-whitespace input.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let total_len = text.len();
    let byte_end = |i: usize| chars.get(i).map_or(total_len, |&(p, _)| p);

    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let class = classify_codepoint(c);

        if class == CodepointClass::Whitespace {
            i += 1;
            continue;
        }

        if is_word_char(class, c) || is_digit_char(class) {
            let mut saw_letter = false;
            let mut saw_digit = false;
            let mut j = i;
            while j < chars.len() {
                let (_, cj) = chars[j];
                let cl = classify_codepoint(cj);
                if is_digit_char(cl) {
                    saw_digit = true;
                } else if is_word_char(cl, cj) {
                    saw_letter = true;
                } else {
                    break;
                }
                j += 1;
            }
            let run_end = byte_end(j);
            let run_text = &text[start..run_end];

            let kind = match (saw_letter, saw_digit) {
                (true, true) => TokenKind::Mixed,
                (false, true) => TokenKind::Number,
                _ => TokenKind::Word,
            };

            // A short letter run followed directly by the abbreviation dot
            // is an abbreviation; the danda never qualifies.
            if kind == TokenKind::Word
                && j < chars.len()
                && is_abbreviation_dot(chars[j].1)
                && cluster_count(run_text) <= 2
            {
                let tok_end = byte_end(j + 1);
                tokens.push(Token {
                    text: text[start..tok_end].to_string(),
                    kind: TokenKind::Abbreviation,
                    span: start..tok_end,
                });
                i = j + 1;
                continue;
            }

            tokens.push(Token {
                text: run_text.to_string(),
                kind,
                span: start..run_end,
            });
            i = j;
            continue;
        }

        // Everything else: one punctuation/symbol token per scalar value.
        let end = byte_end(i + 1);
        tokens.push(Token {
            text: text[start..end].to_string(),
            kind: TokenKind::Punct,
            span: start..end,
        });
        i += 1;
    }
    tokens
}

/// Number of letter-bearing clusters in a run (digits and symbols count
/// too; abbreviation detection only cares that the run is short).
fn cluster_count(run: &str) -> usize {
    segment_graphemes(run).clusters.len()
}
