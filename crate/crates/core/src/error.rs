use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed post record: {message}")]
    MalformedPost { line: usize, message: String },

    #[error("line {line}: unparseable timestamp {value:?}")]
    Timestamp { line: usize, value: String },

    #[error("duplicate post_id {0:?}")]
    DuplicatePost(String),

    #[error("citations file is missing the `src_post_id,dst_post_id` header")]
    MissingHeader,

    #[error("citations row {row}: expected 2 columns, found {found}")]
    ColumnCount { row: usize, found: usize },

    #[error("citations row {row}: {message}")]
    MalformedCitation { row: usize, message: String },

    #[error("topics line {line}: {message}")]
    MalformedTopic { line: usize, message: String },

    #[error("post {0:?} is both labeled and marked unavailable")]
    TopicConflict(String),

    #[error("invalid window: start {start} is not before end {end}")]
    InvalidWindow { start: String, end: String },

    #[error("post {0} is not a cascade origin")]
    NotAnOrigin(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("too few samples: {have} at or above xmin, need {need}")]
    TooFewSamples { have: u64, need: u64 },

    #[error("degenerate sample: every value equals {0}")]
    DegenerateSample(u64),

    #[error("statistic undefined: {0}")]
    Undefined(&'static str),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("canonicalization caps differ: real census {real}, model {model}")]
    CapMismatch { real: usize, model: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
