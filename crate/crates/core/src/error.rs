use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{line}: {message}")]
    Load {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("invalid resource {resource}: {message}")]
    InvalidResource { resource: String, message: String },

    #[error("template {template}: empty slot domain for {slot}")]
    EmptySlotDomain { template: String, slot: String },

    #[error("template {template}: {message}")]
    InvalidTemplate { template: String, message: String },

    #[error("token granularity mismatch: premise is {premise}, hypothesis is {hypothesis}")]
    GranularityMismatch {
        premise: &'static str,
        hypothesis: &'static str,
    },

    #[error("no pronunciation for {0:?}")]
    NoPronunciation(char),

    #[error("no numeral in {0:?}")]
    NoNumeral(String),

    #[error("not a numeric pair: {0}")]
    NotNumericPair(String),

    #[error("inconsistent premises")]
    InconsistentPremises,

    #[error("too large to enumerate: {0}")]
    TooLargeToEnumerate(String),

    #[error("oracle disagrees with template {template}: expected {expected}, oracle says {actual} for {premise} / {hypothesis}")]
    OracleDisagreement {
        template: String,
        expected: crate::Label,
        actual: crate::Label,
        premise: String,
        hypothesis: String,
    },

    #[error("cannot parse fragment text {0:?}")]
    FragmentParse(String),

    #[error("{0}")]
    Generation(String),

    #[error("missing predictions for {} ids: {}", .0.len(), .0.join(", "))]
    MissingPredictions(Vec<String>),

    #[error("duplicate id {0}")]
    DuplicateId(String),

    #[error("no non-entailment pairs in the gold set")]
    NoNonEntailment,

    #[error("id {id}: expected 5 annotator labels, found {found}")]
    AnnotatorCount { id: String, found: usize },

    #[error("cannot sample {requested} pairs from a dataset of {available}")]
    SampleTooLarge { requested: usize, available: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn load(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Load {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }
}
