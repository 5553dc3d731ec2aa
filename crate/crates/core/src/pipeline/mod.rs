//! File ingestion, batch evaluation, reports and synthetic fixtures.

mod evaluate;
mod report;
mod scores;
mod synth;

use std::path::PathBuf;

use thiserror::Error;

use crate::error::DstError;

pub use evaluate::{evaluate, evaluate_with, FusionReport, SampleRecord};
pub use report::{emit_report, render_table, to_canonical_json};
pub use scores::{load_labels, load_scores, LabelSet, ScoreFormat, ScoreMatrix};
pub use synth::{generate_fixture, FixtureFiles, FixtureSpec};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Schema {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: non-finite score")]
    NonFiniteScore { path: PathBuf, line: usize },

    #[error("{path}: duplicate sample id `{id}`")]
    DuplicateSampleId { path: PathBuf, id: String },

    #[error("{0}: file has no data rows")]
    EmptyFile(PathBuf),

    #[error("no sample id is present in every input")]
    NoCommonSamples,

    #[error("model `{model_id}` has {found} classes, expected {expected}")]
    ClassCountMismatch {
        model_id: String,
        expected: usize,
        found: usize,
    },

    #[error("model `{model_id}` column labels differ from model `{reference}`")]
    HeaderMismatch { model_id: String, reference: String },

    #[error("model id `{0}` appears more than once")]
    DuplicateModelId(String),

    #[error("no models supplied")]
    NoModels,

    #[error("sample `{sample_id}` has label {label}, frame has {classes} classes")]
    LabelOutOfRange {
        sample_id: String,
        label: usize,
        classes: usize,
    },

    #[error("bad fixture dimension: {0}")]
    BadDimension(String),

    #[error("sample `{sample_id}`: {source}")]
    Fusion {
        sample_id: String,
        #[source]
        source: DstError,
    },

    #[error(transparent)]
    Dst(#[from] DstError),
}

impl PipelineError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;
