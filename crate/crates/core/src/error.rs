use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter index {0} out of range (letters are 1..=255)")]
    InvalidLetter(usize),
    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    LetterOutsideAlphabet { letter: usize, alphabet: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("word {word} needs Hall words of degree {needed}, above the bound {bound}")]
    DegreeBoundExceeded { word: String, needed: usize, bound: usize },
    #[error("{0} is not a Hall word for this Hall set")]
    NotHallWord(String),
    #[error("tree {0} is not in the Hall set")]
    NotHallTree(String),
    #[error("a letter has no Lazard decomposition")]
    LetterHasNoLazard,
    #[error("the empty word cannot be factorized")]
    EmptyWord,
    #[error("unknown product {0:?}")]
    UnknownProduct(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("identity {identity} expects {expected} arguments, got {got}")]
    Arity {
        identity: String,
        expected: String,
        got: usize,
    },
    #[error("identity {0} requires arguments without empty-word component")]
    NotPositive(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("element needs truncation level {needed}, signature has {level}")]
    TruncationTooLow { needed: usize, level: usize },
    #[error("a path needs at least two points")]
    PathTooShort,
    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
}
