use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing file `{}`", .0.display())]
    MissingFile(PathBuf),
    #[error("{}:{line}: {message}", path.display())]
    SchemaError { path: PathBuf, line: usize, message: String },
    #[error("{}:{line}:{column}: {message}", path.display())]
    ParseError { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{}:{line}: expected {expected} values, found {found}", path.display())]
    RaggedRows { path: PathBuf, line: usize, expected: usize, found: usize },
    #[error("participant `{0}` listed more than once")]
    DuplicateParticipant(String),
    #[error("{}: unsupported format version `{found}`", path.display())]
    VersionMismatch { path: PathBuf, found: String },
    #[error("{}: corrupt model file: {message}", path.display())]
    CorruptModel { path: PathBuf, message: String },
    #[error("no model for task `{task}` at electrode `{electrode}`")]
    ModelMissing { task: String, electrode: String },
    #[error("model trained at `{model}` used for electrode `{requested}`")]
    ElectrodeMismatch { model: String, requested: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("participant `{participant}`: {source}")]
    Participant {
        participant: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Core(#[from] hazard_eeg_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        let path = path.into();
        if source.kind() == io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub fn in_participant(self, participant: &str) -> Self {
        Error::Participant { participant: participant.to_string(), source: Box::new(self) }
    }

    /// Process exit code: 2 for configuration and usage problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Core(hazard_eeg_core::Error::InvalidConfig(_)) => 2,
            Error::Participant { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}
