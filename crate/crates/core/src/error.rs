use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A word contained a symbol outside the automaton's alphabet.
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),

    /// Two automata were combined over different alphabets.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// An automaton violated a structural invariant.
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    /// A text-format file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A caller-supplied argument was out of range or malformed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exploration exceeded its state cap.
    #[error("state cap of {cap} exceeded (frontier holds {frontier} unexplored states)")]
    StateCapExceeded { cap: usize, frontier: usize },

    /// The request lies outside the supported regime.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
