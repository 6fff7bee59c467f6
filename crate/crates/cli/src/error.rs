use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// A problem in the input document, located by line and field.
    #[error("line {line}, {field}: {message}")]
    Input { line: usize, field: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Engine(#[from] rpgroup::Error),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
