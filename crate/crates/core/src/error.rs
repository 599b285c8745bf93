use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed line in one of the text formats. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty inventory")]
    EmptyInventory,

    #[error("line {line}: duplicate symbol {symbol:?}")]
    DuplicateSymbol { symbol: String, line: usize },

    #[error("phoneme {symbol:?}: {reason}")]
    InvalidFeatures { symbol: String, reason: String },

    /// `position` is 1-based.
    #[error("unknown symbol {token:?} at position {position}")]
    UnknownSymbol { token: String, position: usize },

    #[error("token {token:?} at position {position}: {reason}")]
    InvalidMarker {
        token: String,
        position: usize,
        reason: String,
    },

    #[error("name {name:?} contains no letters")]
    NoLetters { name: String },

    #[error("name {name:?} contains non-ASCII letter {letter:?}")]
    NonAsciiLetter { name: String, letter: char },

    #[error("invalid soundex code {0:?}")]
    InvalidCode(String),

    #[error(
        "length mismatch ({left} vs {right} phonemes); use word alignment for unequal lengths"
    )]
    LengthMismatch { left: usize, right: usize },

    #[error("sequences come from different inventories")]
    MixedInventory,

    #[error("invalid weight profile: {0}")]
    InvalidWeights(String),

    #[error("line {line}: unknown weight key {key:?}")]
    UnknownWeightKey { key: String, line: usize },

    #[error("cannot build an automaton from an empty sequence")]
    EmptySequence,

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("dangling pinning: {0}")]
    DanglingPinning(String),

    #[error("tier mismatch: {0}")]
    TierMismatch(String),

    #[error("product-state budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("empty lexicon")]
    EmptyLexicon,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
