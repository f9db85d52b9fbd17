use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the library.
///
/// Variants split into two families: input validation problems (bad files,
/// bad parameters, wrong regime for a requested curve) and numerical
/// failures (instability, singular modes, eigensolver trouble). The CLI maps
/// the two families to distinct exit codes via [`Error::is_numerical`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Load { line: usize, message: String },

    #[error("graph is disconnected: node `{unreachable}` cannot be reached from `{root}`")]
    Disconnected { root: String, unreachable: String },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate: at threshold ({0})")]
    Degenerate(String),

    #[error("regime {found} does not support {what}")]
    WrongRegime { what: &'static str, found: String },

    #[error("singular mode {mode} (eigenvalue gap {gap:e})")]
    SingularMode { mode: usize, gap: f64 },

    #[error("resolvent out of convergence region: alpha = {alpha}, 1/lambda1 = {limit}")]
    ResolventDivergent { alpha: f64, limit: f64 },

    #[error("integrator instability: reduce dt (t = {time}, node {node}, value {value})")]
    Instability { time: f64, node: usize, value: f64 },

    #[error("eigensolver did not converge (residual {residual:e})")]
    EigenFailure { residual: f64 },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Instability { .. }
            | Error::SingularMode { .. }
            | Error::ResolventDivergent { .. }
            | Error::EigenFailure { .. }
            | Error::LinearSolve(_)
            | Error::Degenerate(_) => true,
            Error::File { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn load(line: usize, message: impl Into<String>) -> Self {
        Error::Load {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
