use thiserror::Error;

use crate::grid::LineId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid letter {letter:?} at position {position}; words contain only '0' and '1'")]
    InvalidLetter { position: usize, letter: char },

    #[error("empty word cannot be used as a period")]
    EmptyWord,

    #[error("invalid order {0}")]
    InvalidOrder(i64),

    #[error("line {0} carries no stitching under this convention")]
    NotAStitchLine(LineId),

    #[error("invalid window {0}")]
    InvalidWindow(String),

    #[error("window too large: {vertices} vertices exceeds the limit of {limit}")]
    WindowTooLarge { vertices: u128, limit: u128 },

    #[error("window overlap too small: {0}")]
    OverlapTooSmall(String),

    #[error("invalid grid convention: {0}")]
    InvalidConvention(String),

    #[error("calibration failed: no phase convention reproduces the hexagram design")]
    CalibrationFailed,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
