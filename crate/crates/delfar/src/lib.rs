//! Codec toolkit for binary channels with deletable errors.
//!
//! Each transmitted bit can survive, be substituted, be erased or be deleted.
//! When corrupted positions sit far enough apart (pairwise distance at least
//! three times the block length), a block construction over modified
//! Varshamov-Tenengolts classes corrects every error sequentially, and a
//! streaming front end recovers the source in real time with a delay of at
//! most four block lengths.
//!
//! The crate is organized around the pipeline:
//!
//! * [`bitword`]: words, received symbols, error patterns and the channel
//!   operator, plus seeded pattern samplers and an exhaustive enumerator.
//! * [`vt`]: per-block codes with modulus `2m+1`, their checksums, codebooks
//!   and the three single-error correctors.
//! * [`farcode`]: the block-code construction, message encoding and
//!   redundancy accounting.
//! * [`decoder`]: the sequential corrector and the streaming decoder.
//! * [`analysis`]: exact pattern counting, bound calculators and the
//!   exhaustive/sampled verification harness.

pub mod analysis;
pub mod bitword;
pub mod decoder;
mod error;
pub mod farcode;
pub mod vt;

pub use bitword::{ErrorPattern, ErrorType, ReceivedWord, Symbol, Word};
pub use decoder::{DecodeReport, DecodeStatus, StreamDecoder};
pub use error::Error;
pub use farcode::{make_code, FarCode, FarCodeParams};
