use thiserror::Error;

/// Errors produced by automaton constructions and decision procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol '{0}' is not in the alphabet")]
    SymbolOutsideAlphabet(char),
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,
    #[error("invalid state id {0}")]
    InvalidState(usize),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("capacity exceeded: {0} (limit {1})")]
    Capacity(String, usize),
    #[error("operation requires {0}")]
    Precondition(String),
    #[error("language is not in the required Borel class: {0}")]
    Classification(String),
    #[error("internal invariant violated during construction: {0}")]
    Construction(String),
    #[error("word is outside the domain of the function")]
    OutsideDomain,
    #[error("relation is not functional: two outputs found for one input")]
    NonFunctional,
    #[error("accepting computation consumes infinite input but only finite output")]
    NonOmegaOutput,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Exit status encoding used by the command-line tools.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_, _) => 3,
            Error::Parse { .. } => 2,
            _ => 2,
        }
    }
}
