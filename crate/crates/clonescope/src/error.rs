use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] clonescope_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}:{line}: unknown account id {id:?}")]
    UnknownId { path: PathBuf, line: usize, id: String },
    #[error("unknown account id {0:?}")]
    UnknownAccount(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("label pair ({0:?}, {0:?}) joins an account to itself")]
    SelfLabel(String),
    #[error("graph recovered no labeled pairs; lower delta")]
    NoLabeledPairs,
    #[error("no unlabeled candidate pairs to use as negatives")]
    NoNegativePairs,
    #[error("unsupported version {found} (this build reads version {supported})")]
    UnsupportedVersion { found: String, supported: u32 },
    #[error("corrupt bundle: {0}")]
    CorruptBundle(String),
    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}
