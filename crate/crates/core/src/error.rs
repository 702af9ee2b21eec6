use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate point id {0}")]
    DuplicateId(u64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("point {id} is not alone in its cell (occupancy {occupancy})")]
    NotAlone { id: u64, occupancy: usize },

    #[error("dataset file not found: {0}")]
    MissingDataset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
