use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("word must contain at least one bit")]
    EmptyWord,
    #[error("invalid bit value {value} at position {position}")]
    InvalidBit { position: usize, value: u8 },
    #[error("invalid character '{ch}' at position {position}")]
    InvalidChar { position: usize, ch: char },
    #[error("pattern position {position} outside word length {n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("duplicate pattern position {position}")]
    DuplicatePosition { position: usize },
    #[error("malformed pattern token '{token}'")]
    BadPatternToken { token: String },
    #[error("pattern length {pattern} does not match word length {word}")]
    LengthMismatch { word: usize, pattern: usize },
    #[error("prefix length {t} outside 1..={n}")]
    PrefixOutOfRange { t: usize, n: usize },
    #[error("error budget {t} exceeds word length {n}")]
    TooManyErrors { t: usize, n: usize },
    #[error("enumerating {count} patterns exceeds budget {budget}")]
    EnumerationBudget { count: String, budget: u64 },
    #[error("far gap must be at least 1")]
    ZeroGap,
    #[error("residue {residue} not below modulus {modulus}")]
    ResidueRange { residue: u64, modulus: u64 },
    #[error("block length {len} outside supported range 1..={max}")]
    BlockLength { len: usize, max: usize },
    #[error("codebook for m={m} is over the materialization budget")]
    CodebookBudget { m: usize },
    #[error("{count} erasures in one block, at most one supported")]
    TooManyErasures { count: usize },
    #[error("expected exactly one erasure, found {count}")]
    ErasureCount { count: usize },
    #[error("block of length {len} does not fit expected length {expected}")]
    BlockSize { len: usize, expected: usize },
    #[error("no insertion completes the block to a codeword")]
    NoDeletionCandidate,
    #[error("multiple distinct codewords complete the block; single-deletion correction violated")]
    AmbiguousDeletion,
    #[error("checksum difference {difference} does not indicate a valid flip")]
    InconsistentFlip { difference: u64 },
    #[error("erasure fix inconsistent with checksum difference {difference}")]
    InconsistentErasure { difference: u64 },
    #[error("block length P must be at least 2, got {p}")]
    BlockTooSmall { p: usize },
    #[error("code needs n >= 2P, got n={n} P={p}")]
    CodeTooShort { n: usize, p: usize },
    #[error("interior codebook empty after removing constant words")]
    EmptyCodebook,
    #[error("message {message} outside capacity of {capacity} bits")]
    MessageOutOfRange { message: String, capacity: u64 },
    #[error("block {block} is not a codeword")]
    NotACodeword { block: usize },
    #[error("received word shorter than one block: {len} < {p}")]
    WordTooShort { len: usize, p: usize },
    #[error("word contains an erasure at position {position}")]
    ErasurePresent { position: usize },
    #[error("parameter file: {0}")]
    ParamsFile(String),
    #[error("delay d={d} must be divisible by 4")]
    DelayNotDivisible { d: u64 },
}
