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

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("label column {0:?} absent from header")]
    MissingLabelColumn(String),

    #[error("non-numeric feature cell at row {row}, column {column:?}: {value:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("more than two classes: {0:?}")]
    TooManyClasses(Vec<String>),

    #[error("dataset needs exactly two classes, found {0}")]
    NotBinary(usize),

    #[error("minority label {0:?} not present")]
    UnknownMinority(String),

    #[error("minority label {label:?} has {minority} rows but the other class only {majority}")]
    MinorityNotRarer {
        label: String,
        minority: usize,
        majority: usize,
    },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("malformed KEEL file: {0}")]
    Keel(String),

    #[error("non-numeric feature unsupported: attribute {0:?}")]
    NominalAttribute(String),

    #[error("class {class:?} has {count} instances, needs at least {needed}")]
    InsufficientClass {
        class: String,
        count: usize,
        needed: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
