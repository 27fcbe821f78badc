use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unsupported acceptance: {0}")]
    UnsupportedAcceptance(String),
    #[error("too many atomic propositions: {0} (at most {max})", max = crate::automaton::MAX_APS)]
    TooManyAps(usize),
    #[error("parity automaton is not deterministic: state {state} has several successors on one symbol")]
    NotDeterministic { state: usize },
    #[error("parity automaton is not complete: state {state} lacks a successor")]
    Incomplete { state: usize },
    #[error("expected a {expected} automaton")]
    WrongKind { expected: &'static str },
    #[error("state cap of {0} macrostates exceeded")]
    CapExceeded(usize),
    #[error("time limit exceeded")]
    Timeout,
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("malformed set sequence: {0}")]
    MalformedSequence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
