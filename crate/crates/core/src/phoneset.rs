//! The proposed Bengali IPA inventory and the operations over it: parsing
//! IPA strings into structured phone sequences, rendering them back in a
//! canonical form, normalizing variant spellings, and validating diacritic
//! placement.
//!
//! The vowel space is {ɪ e ɛ ɐ ɔ o ʊ}; the consonant inventory keeps the
//! dental/retroflex stop contrast (t̪ vs ʈ), uses the tap ɾ for র and the
//! flap ɽ for ড়, palatal plosives ɟ/ɟʱ for জ/ঝ, and admits the loan
//! fricatives f, v, z plus the s/ʃ contrast for borrowed words. The trill
//! r and the schwa ə are deliberately outside the inventory.

use std::fmt;

use thiserror::Error;

/// Broad manner class of a phone base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Vowel,
    Stop,
    Nasal,
    Tap,
    Flap,
    Fricative,
    Lateral,
    Approximant,
}

/// Place of articulation (consonants).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Bilabial,
    LabioDental,
    Dental,
    Alveolar,
    Retroflex,
    Palatal,
    Velar,
    Glottal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VowelHeight {
    High,
    HighMid,
    LowMid,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VowelBackness {
    Front,
    Central,
    Back,
}

/// A base segment of the inventory, before any diacritics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhoneBase {
    // Vowels: ɪ e ɛ ɐ ɔ o ʊ
    I,
    E,
    Ae,
    A,
    Aw,
    O,
    U,
    // Stops
    P,
    B,
    TDental,
    DDental,
    TRetro,
    DRetro,
    CPal,
    JPal,
    K,
    G,
    // Nasals
    M,
    N,
    Ng,
    // Tap and flap
    Tap,
    Flap,
    // Fricatives
    Sh,
    S,
    H,
    F,
    V,
    Z,
    // Lateral
    L,
    // Approximant (only ever produced by glide rules or the lexicon)
    Glide,
}

/// Static description of a base: canonical glyph and features.
#[derive(Debug, Clone, Copy)]
pub struct BaseInfo {
    pub symbol: &'static str,
    pub category: Category,
    pub voiced: bool,
    pub place: Option<Place>,
    pub height: Option<VowelHeight>,
    pub backness: Option<VowelBackness>,
    /// Admitted for loanwords / contextual use only (f v z, and the s of
    /// the s/ʃ contrast).
    pub loan_or_contextual: bool,
}

impl PhoneBase {
    pub const ALL: [PhoneBase; 29] = [
        PhoneBase::I,
        PhoneBase::E,
        PhoneBase::Ae,
        PhoneBase::A,
        PhoneBase::Aw,
        PhoneBase::O,
        PhoneBase::U,
        PhoneBase::P,
        PhoneBase::B,
        PhoneBase::TDental,
        PhoneBase::DDental,
        PhoneBase::TRetro,
        PhoneBase::DRetro,
        PhoneBase::CPal,
        PhoneBase::JPal,
        PhoneBase::K,
        PhoneBase::G,
        PhoneBase::M,
        PhoneBase::N,
        PhoneBase::Ng,
        PhoneBase::Tap,
        PhoneBase::Flap,
        PhoneBase::Sh,
        PhoneBase::S,
        PhoneBase::H,
        PhoneBase::F,
        PhoneBase::V,
        PhoneBase::Z,
        PhoneBase::L,
    ];

    pub fn info(self) -> BaseInfo {
        use Category::{Approximant, Fricative, Lateral, Nasal, Stop};
        use PhoneBase::*;
        use Place::*;
        use VowelBackness as VB;
        use VowelHeight as VH;

        const fn vowel(symbol: &'static str, h: VowelHeight, b: VowelBackness) -> BaseInfo {
            BaseInfo {
                symbol,
                category: Category::Vowel,
                voiced: true,
                place: None,
                height: Some(h),
                backness: Some(b),
                loan_or_contextual: false,
            }
        }
        const fn cons(
            symbol: &'static str,
            category: Category,
            voiced: bool,
            place: Place,
            loan: bool,
        ) -> BaseInfo {
            BaseInfo {
                symbol,
                category,
                voiced,
                place: Some(place),
                height: None,
                backness: None,
                loan_or_contextual: loan,
            }
        }

        match self {
            I => vowel("ɪ", VH::High, VB::Front),
            E => vowel("e", VH::HighMid, VB::Front),
            Ae => vowel("ɛ", VH::LowMid, VB::Front),
            A => vowel("ɐ", VH::Low, VB::Central),
            Aw => vowel("ɔ", VH::LowMid, VB::Back),
            O => vowel("o", VH::HighMid, VB::Back),
            U => vowel("ʊ", VH::High, VB::Back),
            P => cons("p", Stop, false, Bilabial, false),
            B => cons("b", Stop, true, Bilabial, false),
            TDental => cons("t\u{32a}", Stop, false, Dental, false),
            DDental => cons("d\u{32a}", Stop, true, Dental, false),
            TRetro => cons("ʈ", Stop, false, Retroflex, false),
            DRetro => cons("ɖ", Stop, true, Retroflex, false),
            CPal => cons("c", Stop, false, Palatal, false),
            JPal => cons("ɟ", Stop, true, Palatal, false),
            K => cons("k", Stop, false, Velar, false),
            G => cons("g", Stop, true, Velar, false),
            M => cons("m", Nasal, true, Bilabial, false),
            N => cons("n", Nasal, true, Alveolar, false),
            Ng => cons("ŋ", Nasal, true, Velar, false),
            Tap => cons("ɾ", Category::Tap, true, Alveolar, false),
            Flap => cons("ɽ", Category::Flap, true, Retroflex, false),
            Sh => cons("ʃ", Fricative, false, Palatal, false),
            S => cons("s", Fricative, false, Alveolar, true),
            H => cons("h", Fricative, false, Glottal, false),
            F => cons("f", Fricative, false, LabioDental, true),
            V => cons("v", Fricative, true, LabioDental, true),
            Z => cons("z", Fricative, true, Alveolar, true),
            L => cons("l", Lateral, true, Alveolar, false),
            Glide => cons("j", Approximant, true, Palatal, false),
        }
    }

    pub fn symbol(self) -> &'static str {
        self.info().symbol
    }

    pub fn is_vowel(self) -> bool {
        self.info().category == Category::Vowel
    }

    pub fn is_stop(self) -> bool {
        self.info().category == Category::Stop
    }

    pub fn is_voiced(self) -> bool {
        self.info().voiced
    }
}

/// A diacritic or secondary-articulation mark attached to one phone.
///
/// The discriminant order is the canonical rendering order on a phone:
/// base, aspiration, nasal, length, non-syllabic, then ʲ/ʷ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Diacritic {
    AspVoiceless,
    AspVoiced,
    Nasal,
    Long,
    NonSyllabic,
    Palatalized,
    Labialized,
}

impl Diacritic {
    pub fn glyph(self) -> &'static str {
        match self {
            Diacritic::AspVoiceless => "ʰ",
            Diacritic::AspVoiced => "ʱ",
            Diacritic::Nasal => "\u{303}",
            Diacritic::Long => "ː",
            Diacritic::NonSyllabic => "\u{32f}",
            Diacritic::Palatalized => "ʲ",
            Diacritic::Labialized => "ʷ",
        }
    }
}

/// One IPA segment: a base plus its diacritics in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phone {
    pub base: PhoneBase,
    pub diacritics: Vec<Diacritic>,
}

impl Phone {
    pub fn new(base: PhoneBase) -> Self {
        Phone {
            base,
            diacritics: Vec::new(),
        }
    }

    pub fn with(base: PhoneBase, diacritics: &[Diacritic]) -> Self {
        let mut p = Phone::new(base);
        for &d in diacritics {
            p.add(d);
        }
        p
    }

    /// Inserts a diacritic, keeping canonical order and dropping duplicates.
    pub fn add(&mut self, d: Diacritic) {
        if let Err(pos) = self.diacritics.binary_search(&d) {
            self.diacritics.insert(pos, d);
        }
    }

    pub fn has(&self, d: Diacritic) -> bool {
        self.diacritics.contains(&d)
    }

    pub fn remove(&mut self, d: Diacritic) {
        self.diacritics.retain(|&x| x != d);
    }

    pub fn is_vowel(&self) -> bool {
        self.base.is_vowel()
    }

    fn render_into(&self, out: &mut String) {
        out.push_str(self.base.symbol());
        for d in &self.diacritics {
            out.push_str(d.glyph());
        }
    }
}

impl fmt::Display for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render_into(&mut s);
        f.write_str(&s)
    }
}

/// One element of a transcription stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Phone(Phone),
    /// Rendered as a single space.
    WordBoundary,
    /// Rendered as a dot; display-only syllable separator.
    SyllableBreak,
    /// A glyph outside the inventory, kept verbatim by the lenient parser.
    Unknown(char),
}

/// An ordered phone sequence with word-boundary and syllable markers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhoneSeq {
    pub segments: Vec<Segment>,
}

impl PhoneSeq {
    pub fn new() -> Self {
        PhoneSeq::default()
    }

    pub fn from_phones<I: IntoIterator<Item = Phone>>(phones: I) -> Self {
        PhoneSeq {
            segments: phones.into_iter().map(Segment::Phone).collect(),
        }
    }

    pub fn push(&mut self, phone: Phone) {
        self.segments.push(Segment::Phone(phone));
    }

    pub fn push_word_boundary(&mut self) {
        self.segments.push(Segment::WordBoundary);
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Iterator over the phones, skipping separators and unknowns.
    pub fn phones(&self) -> impl Iterator<Item = &Phone> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Phone(p) => Some(p),
            _ => None,
        })
    }

    /// Appends another sequence, inserting a word boundary when both sides
    /// are non-empty.
    pub fn join(&mut self, other: PhoneSeq) {
        if !self.segments.is_empty() && !other.segments.is_empty() {
            self.push_word_boundary();
        }
        self.segments.extend(other.segments);
    }

    /// Alignment units for phone-level scoring: each phone (diacritics
    /// bound to its base) or unknown glyph rendered as one symbol.
    pub fn alignment_units(&self) -> Vec<String> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Phone(p) => Some(p.to_string()),
                Segment::Unknown(c) => Some(c.to_string()),
                Segment::WordBoundary | Segment::SyllableBreak => None,
            })
            .collect()
    }
}

impl fmt::Display for PhoneSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ipa(self))
    }
}

/// Violation codes reported by [`validate_phoneseq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    BadAspiration,
    DiacriticOnWrongBase,
    UnknownSymbol,
    NonCanonicalOrder,
    SchwaForbidden,
}

/// A diacritic-placement or inventory violation at one phone position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    /// Index among the sequence's phone/unknown units.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at phone {}: {}", self.code, self.position, self.message)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IpaParseError {
    #[error("unknown IPA symbol '{glyph}' at byte {byte_pos}")]
    UnknownSymbol { glyph: char, byte_pos: usize },
    #[error("diacritic '{glyph}' at byte {byte_pos} has no preceding base")]
    DanglingDiacritic { glyph: char, byte_pos: usize },
}

/// A non-fatal observation from the lenient parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpaWarning {
    pub glyph: char,
    pub byte_pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ParseMode {
    Strict,
    Lenient,
}

/// Maps a glyph to its base in strict mode. Aliases forced by the framework
/// (æ for ɛ, the plosive readings of ʒ, the ASCII g) are accepted here; the
/// vowels the framework replaced (a i u), the trill r, and the schwa are not.
fn strict_base(c: char) -> Option<PhoneBase> {
    use PhoneBase::*;
    Some(match c {
        'ɪ' => I,
        'e' => E,
        'ɛ' | 'æ' => Ae,
        'ɐ' => A,
        'ɔ' => Aw,
        'o' => O,
        'ʊ' => U,
        'p' => P,
        'b' => B,
        'ʈ' => TRetro,
        'ɖ' => DRetro,
        'c' => CPal,
        'ɟ' | 'ʒ' => JPal,
        'k' => K,
        'g' | 'ɡ' => G,
        'm' => M,
        'n' => N,
        'ŋ' => Ng,
        'ɾ' => Tap,
        'ɽ' => Flap,
        'ʃ' => Sh,
        's' => S,
        'h' => H,
        'f' => F,
        'v' => V,
        'z' => Z,
        'l' => L,
        'j' => Glide,
        _ => return None,
    })
}

/// Extra folding applied only in lenient mode: published transcriptions
/// often mix a/i/u/r/t/d with the chart's ɐ/ɪ/ʊ/ɾ/t̪/d̪, so reference
/// material is folded onto the canonical glyphs.
fn lenient_base(c: char) -> Option<PhoneBase> {
    use PhoneBase::*;
    strict_base(c).or(match c {
        'a' => Some(A),
        'i' => Some(I),
        'u' => Some(U),
        'r' => Some(Tap),
        't' => Some(TDental),
        'd' => Some(DDental),
        'ɕ' => Some(Sh),
        'y' => Some(Glide),
        _ => None,
    })
}

fn diacritic_of(c: char) -> Option<Diacritic> {
    Some(match c {
        'ʰ' => Diacritic::AspVoiceless,
        'ʱ' => Diacritic::AspVoiced,
        '\u{303}' => Diacritic::Nasal,
        'ː' | ':' => Diacritic::Long,
        // The inverted breve below; U+0324 appears in print for the same
        // mark and is folded onto it.
        '\u{32f}' | '\u{324}' => Diacritic::NonSyllabic,
        'ʲ' => Diacritic::Palatalized,
        'ʷ' => Diacritic::Labialized,
        _ => return None,
    })
}

struct Parser {
    mode: ParseMode,
    seq: PhoneSeq,
    warnings: Vec<IpaWarning>,
    pending_boundary: bool,
}

impl Parser {
    fn new(mode: ParseMode) -> Self {
        Parser {
            mode,
            seq: PhoneSeq::new(),
            warnings: Vec::new(),
            pending_boundary: false,
        }
    }

    fn flush_boundary(&mut self) {
        if self.pending_boundary && !self.seq.segments.is_empty() {
            self.seq.push_word_boundary();
        }
        self.pending_boundary = false;
    }

    fn current_phone(&mut self) -> Option<&mut Phone> {
        match self.seq.segments.last_mut() {
            Some(Segment::Phone(p)) => Some(p),
            _ => None,
        }
    }

    fn run(mut self, s: &str) -> Result<(PhoneSeq, Vec<IpaWarning>), IpaParseError> {
        // Split just the precomposed nasal vowels; a full NFD would reorder
        // combining marks and break idempotence on mixed input. Offsets of
        // split-off marks point at the original composed character.
        let mut chars: Vec<(usize, char)> = Vec::with_capacity(s.len());
        for (pos, c) in s.char_indices() {
            let (base, nasal) = match c {
                'ã' => ('a', true),
                'ẽ' => ('e', true),
                'ĩ' => ('i', true),
                'õ' => ('o', true),
                'ũ' => ('u', true),
                _ => (c, false),
            };
            chars.push((pos, base));
            if nasal {
                chars.push((pos, '\u{303}'));
            }
        }
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            let next = chars.get(i + 1).map(|&(_, c)| c);

            if c.is_whitespace() {
                self.pending_boundary = true;
                i += 1;
                continue;
            }
            if c == '.' {
                self.flush_boundary();
                self.seq.segments.push(Segment::SyllableBreak);
                i += 1;
                continue;
            }

            // Two-glyph bases and affricate aliases, longest match first.
            let two = match (c, next) {
                ('t', Some('\u{32a}')) => Some(PhoneBase::TDental),
                ('d', Some('\u{32a}')) => Some(PhoneBase::DDental),
                ('d', Some('ʒ')) => Some(PhoneBase::JPal),
                ('t', Some('ʃ')) => Some(PhoneBase::CPal),
                _ => None,
            };
            if let Some(base) = two {
                self.flush_boundary();
                self.seq.push(Phone::new(base));
                i += 2;
                continue;
            }

            let single = match self.mode {
                ParseMode::Strict => strict_base(c),
                ParseMode::Lenient => lenient_base(c),
            };
            if let Some(base) = single {
                self.flush_boundary();
                self.seq.push(Phone::new(base));
                i += 1;
                continue;
            }

            if let Some(d) = diacritic_of(c) {
                let lenient = self.mode == ParseMode::Lenient;
                match self.current_phone() {
                    Some(p) => {
                        p.add(d);
                        // The coda-glide alias: printed ɛ̯ stands for the e̯
                        // the framework emits.
                        if lenient && d == Diacritic::NonSyllabic && p.base == PhoneBase::Ae {
                            p.base = PhoneBase::E;
                        }
                    }
                    None => {
                        if lenient {
                            self.warnings.push(IpaWarning {
                                glyph: c,
                                byte_pos: pos,
                                message: "diacritic with no preceding base".into(),
                            });
                            self.seq.segments.push(Segment::Unknown(c));
                        } else {
                            return Err(IpaParseError::DanglingDiacritic { glyph: c, byte_pos: pos });
                        }
                    }
                }
                i += 1;
                continue;
            }

            match self.mode {
                ParseMode::Strict => {
                    return Err(IpaParseError::UnknownSymbol { glyph: c, byte_pos: pos });
                }
                ParseMode::Lenient => {
                    self.flush_boundary();
                    self.warnings.push(IpaWarning {
                        glyph: c,
                        byte_pos: pos,
                        message: "symbol outside the inventory, passed through".into(),
                    });
                    self.seq.segments.push(Segment::Unknown(c));
                    i += 1;
                }
            }
        }
        Ok((self.seq, self.warnings))
    }
}

/// Strict parse: every glyph must be in the inventory ∪ diacritics ∪
/// separators. Unknown glyphs (including ə and the trill r) are errors.
pub fn parse_ipa(s: &str) -> Result<PhoneSeq, IpaParseError> {
    Parser::new(ParseMode::Strict).run(s).map(|(seq, _)| seq)
}

/// Lenient parse: unknown glyphs become [`Segment::Unknown`] and are
/// reported as warnings; common variant vowel/consonant glyphs are folded
/// onto the canonical chart.
pub fn parse_ipa_lenient(s: &str) -> (PhoneSeq, Vec<IpaWarning>) {
    Parser::new(ParseMode::Lenient)
        .run(s)
        .expect("lenient parse is total")
}

/// Renders a sequence with diacritics in canonical order. The output of
/// [`parse_ipa`] on the result reproduces the sequence.
pub fn render_ipa(seq: &PhoneSeq) -> String {
    let mut out = String::new();
    for seg in &seq.segments {
        match seg {
            Segment::Phone(p) => p.render_into(&mut out),
            Segment::WordBoundary => out.push(' '),
            Segment::SyllableBreak => out.push('.'),
            Segment::Unknown(c) => out.push(*c),
        }
    }
    out
}

/// Canonicalizes an IPA string: æ→ɛ, ASCII colon → ː, variant glyphs folded
/// per the chart, combining-mark order fixed. Unknown symbols pass through
/// unchanged, so the function is total and idempotent.
pub fn normalize_ipa(s: &str) -> String {
    render_ipa(&parse_ipa_lenient(s).0)
}

/// As [`normalize_ipa`] but refuses glyphs outside the inventory.
pub fn normalize_ipa_strict(s: &str) -> Result<String, IpaParseError> {
    parse_ipa(s).map(|seq| render_ipa(&seq))
}

/// Checks every phone against the placement rules. An empty result means
/// the sequence satisfies all of them.
pub fn validate_phoneseq(seq: &PhoneSeq) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut idx = 0usize;
    for seg in &seq.segments {
        match seg {
            Segment::Phone(p) => {
                validate_phone(p, idx, &mut violations);
                idx += 1;
            }
            Segment::Unknown(c) => {
                let code = if *c == 'ə' {
                    ViolationCode::SchwaForbidden
                } else {
                    ViolationCode::UnknownSymbol
                };
                violations.push(Violation {
                    code,
                    position: idx,
                    message: format!("'{c}' is not in the inventory"),
                });
                idx += 1;
            }
            Segment::WordBoundary | Segment::SyllableBreak => {}
        }
    }
    violations
}

fn validate_phone(p: &Phone, idx: usize, out: &mut Vec<Violation>) {
    let info = p.base.info();

    let mut sorted = p.diacritics.clone();
    sorted.sort();
    sorted.dedup();
    if sorted != p.diacritics {
        out.push(Violation {
            code: ViolationCode::NonCanonicalOrder,
            position: idx,
            message: format!("diacritics on {} are out of canonical order", info.symbol),
        });
    }

    let asp_less = p.has(Diacritic::AspVoiceless);
    let asp_full = p.has(Diacritic::AspVoiced);
    if asp_less && asp_full {
        out.push(Violation {
            code: ViolationCode::BadAspiration,
            position: idx,
            message: "at most one aspiration mark per phone".into(),
        });
    }
    if asp_less && !(info.category == Category::Stop && !info.voiced) {
        out.push(Violation {
            code: ViolationCode::BadAspiration,
            position: idx,
            message: format!("ʰ on {}: voiceless aspiration belongs on voiceless stops", info.symbol),
        });
    }
    if asp_full {
        let voiced_stop = info.category == Category::Stop && info.voiced;
        let voiced_flap = p.base == PhoneBase::Flap;
        if !(voiced_stop || voiced_flap) {
            out.push(Violation {
                code: ViolationCode::BadAspiration,
                position: idx,
                message: format!("ʱ on {}: voiced aspiration belongs on voiced stops or ɽ", info.symbol),
            });
        }
    }

    for d in [Diacritic::Nasal, Diacritic::Long, Diacritic::NonSyllabic] {
        if p.has(d) && info.category != Category::Vowel {
            out.push(Violation {
                code: ViolationCode::DiacriticOnWrongBase,
                position: idx,
                message: format!("{:?} on {}: vowels only", d, info.symbol),
            });
        }
    }
    if p.has(Diacritic::Long) && p.has(Diacritic::NonSyllabic) {
        out.push(Violation {
            code: ViolationCode::DiacriticOnWrongBase,
            position: idx,
            message: "a phone cannot be both long and non-syllabic".into(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phone(base: PhoneBase, ds: &[Diacritic]) -> Phone {
        Phone::with(base, ds)
    }

    #[test]
    fn parse_rejects_out_of_inventory_vowel() {
        // "u" is not in the vowel chart; strict parsing refuses it.
        let err = parse_ipa("holud").unwrap_err();
        assert_eq!(err, IpaParseError::UnknownSymbol { glyph: 'u', byte_pos: 3 });
    }

    #[test]
    fn parse_attaches_aspiration() {
        let seq = parse_ipa("kʰ").unwrap();
        assert_eq!(
            seq.segments,
            vec![Segment::Phone(phone(PhoneBase::K, &[Diacritic::AspVoiceless]))]
        );
        let seq = parse_ipa("bʱ").unwrap();
        assert_eq!(
            seq.segments,
            vec![Segment::Phone(phone(PhoneBase::B, &[Diacritic::AspVoiced]))]
        );
    }

    #[test]
    fn parse_rejects_schwa() {
        assert!(matches!(
            parse_ipa("ə"),
            Err(IpaParseError::UnknownSymbol { glyph: 'ə', .. })
        ));
    }

    #[test]
    fn render_empty_and_diacritics() {
        assert_eq!(render_ipa(&PhoneSeq::new()), "");
        let seq = PhoneSeq::from_phones([phone(PhoneBase::Aw, &[Diacritic::Nasal])]);
        assert_eq!(render_ipa(&seq), "ɔ\u{303}");
        let seq = PhoneSeq::from_phones([phone(PhoneBase::O, &[Diacritic::Long])]);
        assert_eq!(render_ipa(&seq), "oː");
    }

    #[test]
    fn normalize_folds_ae_and_colon() {
        assert_eq!(normalize_ipa("æ"), "ɛ");
        assert_eq!(normalize_ipa("ɛ"), "ɛ");
        assert_eq!(normalize_ipa("goruguloo:"), "goɾʊgʊlooː");
    }

    #[test]
    fn normalize_folds_common_variants() {
        assert_eq!(normalize_ipa("muʃɔk"), "mʊʃɔk");
        assert_eq!(normalize_ipa("feik"), "feɪk");
        assert_eq!(normalize_ipa("duɪʃo"), "d\u{32a}ʊɪʃo");
        // Loan s survives: it is in the inventory, not an alias of ʃ.
        assert_eq!(normalize_ipa("esessi"), "esessɪ");
    }

    #[test]
    fn normalize_passes_unknowns_through() {
        let s = "xɔq";
        assert_eq!(normalize_ipa(s), "xɔq");
    }

    #[test]
    fn dental_two_glyph_bases_round_trip() {
        let seq = parse_ipa("t\u{32a}ɐd\u{32a}").unwrap();
        assert_eq!(seq.phones().count(), 3);
        assert_eq!(render_ipa(&seq), "t\u{32a}ɐd\u{32a}");
    }

    #[test]
    fn affricate_aliases_fold_to_plosives() {
        assert_eq!(normalize_ipa("dʒ"), "ɟ");
        assert_eq!(normalize_ipa("tʃ"), "c");
        assert_eq!(normalize_ipa("ʒ"), "ɟ");
    }

    #[test]
    fn validate_flags_bad_aspiration() {
        let seq = PhoneSeq::from_phones([phone(PhoneBase::B, &[Diacritic::AspVoiceless])]);
        let v = validate_phoneseq(&seq);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, ViolationCode::BadAspiration);
        assert_eq!(v[0].position, 0);

        let ok = PhoneSeq::from_phones([phone(PhoneBase::P, &[Diacritic::AspVoiceless])]);
        assert!(validate_phoneseq(&ok).is_empty());
    }

    #[test]
    fn validate_flags_nasal_on_consonant() {
        let seq = PhoneSeq::from_phones([phone(PhoneBase::K, &[Diacritic::Nasal])]);
        let v = validate_phoneseq(&seq);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].code, ViolationCode::DiacriticOnWrongBase);
    }

    #[test]
    fn validate_allows_voiced_aspirated_flap() {
        let seq = PhoneSeq::from_phones([phone(PhoneBase::Flap, &[Diacritic::AspVoiced])]);
        assert!(validate_phoneseq(&seq).is_empty());
    }

    #[test]
    fn validate_flags_long_nonsyllabic_conflict() {
        let seq = PhoneSeq::from_phones([phone(
            PhoneBase::O,
            &[Diacritic::Long, Diacritic::NonSyllabic],
        )]);
        assert!(!validate_phoneseq(&seq).is_empty());
    }

    #[test]
    fn validate_flags_schwa_passthrough() {
        let (seq, warnings) = parse_ipa_lenient("ə");
        assert_eq!(warnings.len(), 1);
        let v = validate_phoneseq(&seq);
        assert_eq!(v[0].code, ViolationCode::SchwaForbidden);
    }

    #[test]
    fn lenient_folds_eps_offglide() {
        assert_eq!(normalize_ipa("ɛ\u{32f}"), "e\u{32f}");
    }

    #[test]
    fn word_boundaries_collapse_and_trim() {
        assert_eq!(normalize_ipa("  kɔ   lɔm  "), "kɔ lɔm");
    }

    // Generators for property tests: arbitrary valid phones.
    fn arb_valid_phone() -> impl Strategy<Value = Phone> {
        (0..PhoneBase::ALL.len(), any::<u8>(), any::<bool>(), any::<bool>()).prop_map(
            |(i, marks, second_pal, second_lab)| {
                let base = PhoneBase::ALL[i];
                let info = base.info();
                let mut p = Phone::new(base);
                if info.category == Category::Vowel {
                    if marks & 1 != 0 {
                        p.add(Diacritic::Nasal);
                    }
                    match marks & 0b110 {
                        0b010 => p.add(Diacritic::Long),
                        0b100 => p.add(Diacritic::NonSyllabic),
                        _ => {}
                    }
                } else if info.category == Category::Stop {
                    if marks & 1 != 0 {
                        p.add(if info.voiced {
                            Diacritic::AspVoiced
                        } else {
                            Diacritic::AspVoiceless
                        });
                    }
                } else if base == PhoneBase::Flap && marks & 1 != 0 {
                    p.add(Diacritic::AspVoiced);
                }
                if second_pal {
                    p.add(Diacritic::Palatalized);
                }
                if second_lab {
                    p.add(Diacritic::Labialized);
                }
                p
            },
        )
    }

    fn arb_valid_seq() -> impl Strategy<Value = PhoneSeq> {
        proptest::collection::vec(arb_valid_phone(), 0..24).prop_map(|phones| {
            let mut seq = PhoneSeq::new();
            for (i, p) in phones.into_iter().enumerate() {
                // Sprinkle separators between phones, never at the edges.
                if i > 0 && i % 5 == 0 {
                    seq.push_word_boundary();
                } else if i > 0 && i % 7 == 0 {
                    seq.segments.push(Segment::SyllableBreak);
                }
                seq.push(p);
            }
            seq
        })
    }

    proptest! {
        #[test]
        fn parse_render_round_trips(seq in arb_valid_seq()) {
            let rendered = render_ipa(&seq);
            let reparsed = parse_ipa(&rendered).expect("rendered output must parse");
            prop_assert_eq!(reparsed, seq);
        }

        #[test]
        fn valid_sequences_validate_clean(seq in arb_valid_seq()) {
            prop_assert!(validate_phoneseq(&seq).is_empty());
        }

        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,40}") {
            let once = normalize_ipa(&s);
            prop_assert_eq!(normalize_ipa(&once), once.clone());
        }

        #[test]
        fn corrupted_placement_is_flagged(seq in arb_valid_seq(), pick: u16) {
            // Inject one placement fault into a random phone and expect at
            // least one violation.
            let mut seq = seq;
            let phone_slots: Vec<usize> = seq
                .segments
                .iter()
                .enumerate()
                .filter_map(|(i, s)| matches!(s, Segment::Phone(_)).then_some(i))
                .collect();
            prop_assume!(!phone_slots.is_empty());
            let slot = phone_slots[pick as usize % phone_slots.len()];
            if let Segment::Phone(p) = &mut seq.segments[slot] {
                if p.is_vowel() {
                    p.add(Diacritic::AspVoiceless);
                } else {
                    p.add(Diacritic::Nasal);
                }
            }
            prop_assert!(!validate_phoneseq(&seq).is_empty());
        }
    }

    #[test]
    fn rendered_output_never_contains_banned_glyphs() {
        // Spot-check over the whole inventory with every legal diacritic.
        for base in PhoneBase::ALL {
            let s = Phone::new(base).to_string();
            assert!(!s.contains('r'), "trill in {s}");
            assert!(!s.contains('ə'), "schwa in {s}");
            assert!(!s.contains('æ'), "ash in {s}");
        }
    }
}
