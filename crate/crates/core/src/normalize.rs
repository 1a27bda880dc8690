//! Verbalization of number, mixed, and abbreviation tokens into plain
//! Bengali word sequences ready for the transcription pipeline.

use crate::lexicon::{Lexicon, Tag};
use crate::script::{self, CodepointClass};

/// How a digit run should be read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberReadingMode {
    Cardinal,
    DigitByDigit,
}

/// Caller-selected number policy; `Auto` picks per token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberReadingPolicy {
    Cardinal,
    DigitByDigit,
    #[default]
    Auto,
}

impl NumberReadingPolicy {
    /// Resolution is a pure function of run length and the per-token flag.
    /// Long runs read like phone or house numbers.
    pub fn resolve(self, digit_run_len: usize, flagged_digit_by_digit: bool) -> NumberReadingMode {
        match self {
            NumberReadingPolicy::Cardinal => NumberReadingMode::Cardinal,
            NumberReadingPolicy::DigitByDigit => NumberReadingMode::DigitByDigit,
            NumberReadingPolicy::Auto => {
                if digit_run_len >= 7 || flagged_digit_by_digit {
                    NumberReadingMode::DigitByDigit
                } else {
                    NumberReadingMode::Cardinal
                }
            }
        }
    }
}

/// Bengali cardinal words for 0–99. The teens and decades are irregular,
/// so the whole range is tabulated.
pub const UNITS: [&str; 100] = [
    "শূন্য", "এক", "দুই", "তিন", "চার", "পাঁচ", "ছয়", "সাত", "আট", "নয়",
    "দশ", "এগারো", "বারো", "তেরো", "চৌদ্দ", "পনেরো", "ষোলো", "সতেরো", "আঠারো", "উনিশ",
    "বিশ", "একুশ", "বাইশ", "তেইশ", "চব্বিশ", "পঁচিশ", "ছাব্বিশ", "সাতাশ", "আটাশ", "ঊনত্রিশ",
    "ত্রিশ", "একত্রিশ", "বত্রিশ", "তেত্রিশ", "চৌত্রিশ", "পঁয়ত্রিশ", "ছত্রিশ", "সাঁইত্রিশ", "আটত্রিশ", "ঊনচল্লিশ",
    "চল্লিশ", "একচল্লিশ", "বিয়াল্লিশ", "তেতাল্লিশ", "চুয়াল্লিশ", "পঁয়তাল্লিশ", "ছেচল্লিশ", "সাতচল্লিশ", "আটচল্লিশ", "ঊনপঞ্চাশ",
    "পঞ্চাশ", "একান্ন", "বাহান্ন", "তিপ্পান্ন", "চুয়ান্ন", "পঞ্চান্ন", "ছাপ্পান্ন", "সাতান্ন", "আটান্ন", "ঊনষাট",
    "ষাট", "একষট্টি", "বাষট্টি", "তেষট্টি", "চৌষট্টি", "পঁয়ষট্টি", "ছেষট্টি", "সাতষট্টি", "আটষট্টি", "ঊনসত্তর",
    "সত্তর", "একাত্তর", "বাহাত্তর", "তিয়াত্তর", "চুয়াত্তর", "পঁচাত্তর", "ছিয়াত্তর", "সাতাত্তর", "আটাত্তর", "ঊনআশি",
    "আশি", "একাশি", "বিরাশি", "তিরাশি", "চুরাশি", "পঁচাশি", "ছিয়াশি", "সাতাশি", "আটাশি", "ঊননব্বই",
    "নব্বই", "একানব্বই", "বিরানব্বই", "তিরানব্বই", "চুরানব্বই", "পঁচানব্বই", "ছিয়ানব্বই", "সাতানব্বই", "আটানব্বই", "নিরানব্বই",
];

/// Hundreds fuse with the multiplier (দুইশো); the larger scales stand alone.
pub const SCALE_HUNDRED_SUFFIX: &str = "শো";
pub const SCALE_THOUSAND: &str = "হাজার";
pub const SCALE_LAKH: &str = "লাখ";
pub const SCALE_CRORE: &str = "কোটি";

/// Ordinal words for 1–10; beyond that, cardinal + suffix.
pub const ORDINALS_1_10: [&str; 10] = [
    "প্রথম", "দ্বিতীয়", "তৃতীয়", "চতুর্থ", "পঞ্চম", "ষষ্ঠ", "সপ্তম", "অষ্টম", "নবম", "দশম",
];

/// Largest value the cardinal reader covers (exclusive): beyond কোটি-scale
/// compositions, reading falls back to digit-by-digit.
pub const CARDINAL_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizeWarning {
    /// Cardinal reading out of range; fell back to digit-by-digit.
    OutOfRange { token: String },
    /// Dotted abbreviation with no lexicon expansion; letters read as-is.
    UnknownAbbreviation { surface: String },
}

/// Numeric value of a Bengali or ASCII digit.
pub fn digit_value(c: char) -> Option<u64> {
    match c {
        '0'..='9' => Some(c as u64 - '0' as u64),
        '\u{09E6}'..='\u{09EF}' => Some(c as u64 - 0x09E6),
        _ => None,
    }
}

/// Parses a digit run (Bengali or ASCII) into its value.
pub fn parse_digit_run(s: &str) -> Option<u64> {
    let mut value: u64 = 0;
    let mut any = false;
    for c in s.chars() {
        let d = digit_value(c)?;
        value = value.checked_mul(10)?.checked_add(d)?;
        any = true;
    }
    any.then_some(value)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
#[error("value {0} is out of cardinal range")]
pub struct OutOfRange(pub u64);

/// South-Asian scale decomposition: crore, lakh, thousand, fused hundreds,
/// then the irregular 0–99 tail. Zero-valued groups are skipped.
pub fn number_to_words_cardinal(value: u64) -> Result<Vec<String>, OutOfRange> {
    if value >= CARDINAL_LIMIT {
        return Err(OutOfRange(value));
    }
    if value == 0 {
        return Ok(vec![UNITS[0].to_string()]);
    }
    let mut words = Vec::new();
    let mut rest = value;
    let mut scale = |div: u64, word: &str, words: &mut Vec<String>| {
        let group = rest / div;
        rest %= div;
        if group > 0 {
            words.push(UNITS[group as usize].to_string());
            words.push(word.to_string());
        }
    };
    scale(10_000_000, SCALE_CRORE, &mut words);
    scale(100_000, SCALE_LAKH, &mut words);
    scale(1_000, SCALE_THOUSAND, &mut words);
    let hundred = rest / 100;
    let tail = rest % 100;
    if hundred > 0 {
        words.push(format!("{}{}", UNITS[hundred as usize], SCALE_HUNDRED_SUFFIX));
    }
    if tail > 0 {
        words.push(UNITS[tail as usize].to_string());
    }
    Ok(words)
}

/// One word per digit, preserving length.
pub fn number_to_words_digits(digits: &str) -> Vec<String> {
    digits
        .chars()
        .filter_map(digit_value)
        .map(|d| UNITS[d as usize].to_string())
        .collect()
}

/// Reads a digit run under the resolved mode, falling back to digit-by-digit
/// beyond the cardinal range.
pub fn read_digit_run(
    digits: &str,
    mode: NumberReadingMode,
    warnings: &mut Vec<NormalizeWarning>,
) -> Vec<String> {
    match mode {
        NumberReadingMode::DigitByDigit => number_to_words_digits(digits),
        NumberReadingMode::Cardinal => match parse_digit_run(digits) {
            Some(v) => match number_to_words_cardinal(v) {
                Ok(words) => words,
                Err(_) => {
                    warnings.push(NormalizeWarning::OutOfRange {
                        token: digits.to_string(),
                    });
                    number_to_words_digits(digits)
                }
            },
            None => {
                warnings.push(NormalizeWarning::OutOfRange {
                    token: digits.to_string(),
                });
                number_to_words_digits(digits)
            }
        },
    }
}

/// Suffixes that turn a number into an ordinal (১ম, ২য়, ৪র্থ, ৬ষ্ঠ, ১১ই).
const ORDINAL_SUFFIXES: [&str; 5] = ["ম", "য়", "ই", "র্থ", "ষ্ঠ"];

/// Expands a mixed digit+letter token into a flat word list. Digit runs are
/// verbalized under the policy; an ordinal suffix on a small number selects
/// the ordinal word.
pub fn expand_mixed(
    text: &str,
    policy: NumberReadingPolicy,
    warnings: &mut Vec<NormalizeWarning>,
) -> Vec<String> {
    // Canonical composition so suffix matching is encoding-proof.
    let text = &*script::nfc(text);
    // Ordinal shape: one digit run plus one known suffix.
    for suffix in ORDINAL_SUFFIXES {
        if let Some(run) = text.strip_suffix(suffix) {
            if !run.is_empty() && run.chars().all(|c| digit_value(c).is_some()) {
                if let Some(v) = parse_digit_run(run) {
                    if (1..=10).contains(&v) {
                        return vec![ORDINALS_1_10[v as usize - 1].to_string()];
                    }
                    // Beyond the ordinal table: cardinal plus the suffix.
                    let mut words = read_digit_run(
                        run,
                        policy.resolve(run.chars().count(), false),
                        warnings,
                    );
                    words.push(suffix.to_string());
                    return words;
                }
            }
        }
    }

    let mut words = Vec::new();
    let mut run = String::new();
    let mut run_is_digit = None::<bool>;
    let flush = |run: &mut String, is_digit: Option<bool>, words: &mut Vec<String>,
                     warnings: &mut Vec<NormalizeWarning>| {
        if run.is_empty() {
            return;
        }
        if is_digit == Some(true) {
            let mode = policy.resolve(run.chars().count(), false);
            words.extend(read_digit_run(run, mode, warnings));
        } else {
            words.push(run.clone());
        }
        run.clear();
    };
    for c in text.chars() {
        let is_digit = digit_value(c).is_some();
        if run_is_digit != Some(is_digit) {
            flush(&mut run, run_is_digit, &mut words, warnings);
            run_is_digit = Some(is_digit);
        }
        run.push(c);
    }
    flush(&mut run, run_is_digit, &mut words, warnings);
    words
}

/// Expands a dotted abbreviation via the lexicon. Unknown abbreviations
/// pass through as a letter reading of the run, with a warning.
pub fn expand_abbreviation(
    text: &str,
    lexicon: &Lexicon,
    warnings: &mut Vec<NormalizeWarning>,
) -> Vec<String> {
    if let Some(entry) = lexicon.lookup(text) {
        if entry.tag == Tag::Abbrev && !entry.expansion.is_empty() {
            return entry.expansion.clone();
        }
    }
    let stripped: String = text
        .chars()
        .filter(|&c| !script::is_abbreviation_dot(c))
        .collect();
    // A second chance for entries keyed without the dot.
    if let Some(entry) = lexicon.lookup(&stripped) {
        if entry.tag == Tag::Abbrev && !entry.expansion.is_empty() {
            return entry.expansion.clone();
        }
    }
    warnings.push(NormalizeWarning::UnknownAbbreviation {
        surface: text.to_string(),
    });
    if stripped.is_empty() {
        vec![]
    } else {
        vec![stripped]
    }
}

/// True when every scalar value of the word is a digit.
pub fn is_all_digits(text: &str) -> bool {
    !text.is_empty()
        && text.chars().all(|c| {
            matches!(
                script::classify_codepoint(c),
                CodepointClass::BengaliDigit | CodepointClass::LatinDigit
            )
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent inverse of the cardinal reader, used as a test oracle.
    pub(crate) fn words_to_value(words: &[String]) -> Option<u64> {
        let mut total: u64 = 0;
        let mut group: u64 = 0;
        for w in words {
            if let Some(i) = UNITS.iter().position(|u| u == w) {
                group += i as u64;
            } else if let Some(prefix) = w.strip_suffix(SCALE_HUNDRED_SUFFIX) {
                let i = UNITS.iter().position(|u| *u == prefix)?;
                group += i as u64 * 100;
            } else if w == SCALE_THOUSAND {
                total += group * 1_000;
                group = 0;
            } else if w == SCALE_LAKH {
                total += group * 100_000;
                group = 0;
            } else if w == SCALE_CRORE {
                total += group * 10_000_000;
                group = 0;
            } else {
                return None;
            }
        }
        Some(total + group)
    }

    #[test]
    fn cardinal_examples() {
        let w = number_to_words_cardinal(206).unwrap();
        assert_eq!(w, vec!["দুইশো", "ছয়"]);
        assert_eq!(number_to_words_cardinal(0).unwrap(), vec!["শূন্য"]);
        assert_eq!(number_to_words_cardinal(1000).unwrap(), vec!["এক", "হাজার"]);
        assert_eq!(number_to_words_cardinal(100).unwrap(), vec!["একশো"]);
        assert_eq!(
            number_to_words_cardinal(10_000_000).unwrap(),
            vec!["এক", "কোটি"]
        );
    }

    #[test]
    fn cardinal_rejects_out_of_range() {
        assert!(number_to_words_cardinal(CARDINAL_LIMIT).is_err());
        assert!(number_to_words_cardinal(CARDINAL_LIMIT - 1).is_ok());
    }

    #[test]
    fn digits_examples() {
        let w = number_to_words_digits("২০৫০");
        assert_eq!(w, vec!["দুই", "শূন্য", "পাঁচ", "শূন্য"]);
        assert_eq!(number_to_words_digits("৭"), vec!["সাত"]);
        assert_eq!(number_to_words_digits("০০"), vec!["শূন্য", "শূন্য"]);
    }

    #[test]
    fn auto_policy_resolution() {
        use NumberReadingMode::*;
        let auto = NumberReadingPolicy::Auto;
        assert_eq!(auto.resolve(6, false), Cardinal);
        assert_eq!(auto.resolve(7, false), DigitByDigit);
        assert_eq!(auto.resolve(3, true), DigitByDigit);
        assert_eq!(NumberReadingPolicy::Cardinal.resolve(9, true), Cardinal);
        assert_eq!(NumberReadingPolicy::DigitByDigit.resolve(1, false), DigitByDigit);
    }

    #[test]
    fn mixed_examples() {
        let mut w = Vec::new();
        assert_eq!(
            expand_mixed("19টা", NumberReadingPolicy::Auto, &mut w),
            vec!["উনিশ", "টা"]
        );
        assert_eq!(
            expand_mixed("1ম", NumberReadingPolicy::Auto, &mut w),
            vec!["প্রথম"]
        );
        assert_eq!(
            expand_mixed("২য়", NumberReadingPolicy::Auto, &mut w),
            vec!["দ্বিতীয়"]
        );
        assert_eq!(
            expand_mixed("ক৫", NumberReadingPolicy::Auto, &mut w),
            vec!["ক", "পাঁচ"]
        );
        assert!(w.is_empty());
    }

    #[test]
    fn mixed_large_ordinal_falls_back() {
        let mut w = Vec::new();
        assert_eq!(
            expand_mixed("১১ই", NumberReadingPolicy::Auto, &mut w),
            vec!["এগারো", "ই"]
        );
    }

    #[test]
    fn mixed_ordinal_suffix_matches_precomposed_spelling() {
        // The same token with য় as the single U+09DF codepoint.
        let mut w = Vec::new();
        assert_eq!(
            expand_mixed("২\u{09DF}", NumberReadingPolicy::Auto, &mut w),
            vec!["দ্বিতীয়"]
        );
    }

    #[test]
    fn out_of_range_falls_back_to_digits() {
        let mut w = Vec::new();
        let digits = "1234567890";
        let words = read_digit_run(digits, NumberReadingMode::Cardinal, &mut w);
        assert_eq!(words.len(), 10);
        assert_eq!(w.len(), 1);
        assert!(matches!(w[0], NormalizeWarning::OutOfRange { .. }));
    }

    #[test]
    fn abbreviation_expansion() {
        let (lex, _) = crate::lexicon::Lexicon::load_str(
            "মো.\tmohɛmmɔ̃d\tabbrev\tমোহাম্মদ\nডা.\tɖɐktɐr\tabbrev\tডাক্তার\n",
            "t",
            true,
        )
        .unwrap();
        let mut w = Vec::new();
        assert_eq!(expand_abbreviation("মো.", &lex, &mut w), vec!["মোহাম্মদ"]);
        assert_eq!(expand_abbreviation("ডা.", &lex, &mut w), vec!["ডাক্তার"]);
        assert!(w.is_empty());

        let words = expand_abbreviation("সস.", &lex, &mut w);
        assert_eq!(words, vec!["সস"]);
        assert_eq!(w.len(), 1);
        assert!(matches!(w[0], NormalizeWarning::UnknownAbbreviation { .. }));
    }

    #[test]
    fn exhaustive_small_round_trip() {
        for n in 0..=9_999u64 {
            let words = number_to_words_cardinal(n).unwrap();
            assert_eq!(words_to_value(&words), Some(n), "round trip failed at {n}");
        }
    }

    proptest! {
        #[test]
        fn cardinal_round_trips(n in 0u64..CARDINAL_LIMIT) {
            let words = number_to_words_cardinal(n).unwrap();
            prop_assert_eq!(words_to_value(&words), Some(n));
        }

        #[test]
        fn digit_length_law(digits in proptest::collection::vec(0u8..10, 1..20)) {
            let s: String = digits
                .iter()
                .map(|&d| char::from_u32(0x09E6 + d as u32).unwrap())
                .collect();
            let words = number_to_words_digits(&s);
            prop_assert_eq!(words.len(), digits.len());
        }

        #[test]
        fn no_zero_groups_emitted(n in 1u64..CARDINAL_LIMIT) {
            let words = number_to_words_cardinal(n).unwrap();
            prop_assert!(!words.iter().any(|w| w == UNITS[0]));
        }
    }
}
