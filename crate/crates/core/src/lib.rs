//! Rule-based Bengali-to-IPA transcription: Unicode-level script analysis,
//! the proposed phone inventory with a validator and normalizer, the rule
//! engine with an exception lexicon, number and abbreviation verbalization,
//! and WER/PER/CER evaluation over parallel corpora.
//!
//! The [`g2p::Transcriber`] ties everything together:
//!
//! ```
//! use bangla_ipa::g2p::Transcriber;
//!
//! let engine = Transcriber::with_defaults();
//! assert_eq!(engine.transcribe_word("জল").rendered(), "ɟɔl");
//! ```

pub mod cli;
pub mod eval;
pub mod g2p;
pub mod lexicon;
pub mod normalize;
pub mod phoneset;
pub mod script;

pub use g2p::{Transcriber, TranscriptionOptions, TranscriptionResult};
pub use phoneset::{parse_ipa, render_ipa, normalize_ipa, validate_phoneseq, PhoneSeq};
