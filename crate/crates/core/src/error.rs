use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum GsoError {
    #[error("index {index} out of range for ground set of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("type {q} out of range for k = {k}")]
    TypeOutOfRange { q: usize, k: usize },

    #[error("item {0} is already assigned a type")]
    AlreadyAssigned(usize),

    #[error("entry {index} = {value} lies outside [{lo}, {hi}]")]
    EntryOutOfRange {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what}: enumeration size {size} exceeds cap {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative capacity {capacity} on arc ({from}, {to})")]
    NegativeCapacity { from: usize, to: usize, capacity: f64 },

    #[error("readings table has no column for location {location}, type {mtype}")]
    MissingColumn { location: usize, mtype: usize },

    #[error("property {property} is not defined for {oracle} oracles")]
    UnsupportedProperty {
        property: &'static str,
        oracle: &'static str,
    },

    #[error("unknown kind `{0}`")]
    UnknownKind(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("model is infeasible")]
    Infeasible,

    #[error("schema error in {path}: {message}")]
    Schema { path: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, GsoError>;

impl GsoError {
    /// Wraps an I/O error with the path it concerns.
    pub fn file(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> GsoError + '_ {
        move |source| GsoError::File {
            path: path.to_path_buf(),
            source,
        }
    }
}
