use std::path::PathBuf;

use thiserror::Error;

use crate::vlm::ApiError;

#[derive(Debug, Error)]
pub enum AltTextError {
    #[error("no current figure in the plotting environment")]
    NoFigure,

    #[error("malformed host figure: {0}")]
    HostFormat(String),

    #[error("statistic {stat} cannot be computed: {reason}")]
    InapplicableStat { stat: String, reason: String },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("subplot has no tabular data")]
    NoTabularData,

    #[error("augmentation requires {0} text, but none was provided")]
    MissingAugmentation(&'static str),

    #[error("figure has no rendered image")]
    MissingImage,

    #[error("description level {0} is out of range")]
    InvalidLevel(u8),

    #[error(transparent)]
    Api(#[from] ApiError),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{method} output requires a notebook display context")]
    Environment { method: String },

    #[error("cannot parse {path}: {message} (at byte {offset})")]
    Parse {
        path: PathBuf,
        message: String,
        offset: usize,
    },

    #[error("cell {cell} failed: {ename}: {evalue}")]
    CellExecution { cell: usize, ename: String, evalue: String },

    #[error("kernel process error: {0}")]
    Kernel(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("duplicate annotation for figure {figure_id} and method {method_id}")]
    DuplicateRecord { figure_id: String, method_id: String },

    #[error("invalid PNG data: {0}")]
    Png(String),
}

impl AltTextError {
    pub(crate) fn inapplicable(stat: impl Into<String>, reason: impl Into<String>) -> Self {
        AltTextError::InapplicableStat {
            stat: stat.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, AltTextError>;
