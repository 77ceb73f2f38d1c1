use crate::grid::{CellId, Rect};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point ({x}, {y}) lies outside the {n}x{n} grid")]
    OutOfGrid { x: u32, y: u32, n: u32 },

    #[error(
        "no verified net after {attempts} attempts; {count} points in {witness} avoid the net"
    )]
    NetConstruction {
        attempts: u32,
        witness: Rect,
        count: usize,
    },

    #[error("level {level} slab {slab}: full chunk {chunk} holds no net point")]
    NetViolation {
        level: u32,
        slab: usize,
        chunk: usize,
    },

    #[error("not a binary net: cell {0} does not hold exactly one point")]
    InvalidNet(CellId),

    #[error("malformed sketch: {0}")]
    Format(String),

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },

    #[error("search failed: {0}")]
    Search(String),

    #[error("code construction stopped at {achieved} of {requested} vectors")]
    CodeBudget { achieved: usize, requested: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
