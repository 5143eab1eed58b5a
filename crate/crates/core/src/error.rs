use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parity check matrix not full rank: rank {rank} < {rows} rows")]
    NotFullRank { rank: usize, rows: usize },

    #[error("generator matrix not full rank: rank {rank} < {rows} rows")]
    GeneratorNotFullRank { rank: usize, rows: usize },

    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("oracle enumeration limit: k = {k} exceeds {limit}")]
    OracleLimit { k: usize, limit: usize },

    #[error("invalid channel parameters: {0}")]
    Channel(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
