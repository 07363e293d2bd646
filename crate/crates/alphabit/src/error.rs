use thiserror::Error;

/// Errors produced by state, channel and code constructors and by the
/// expression parser.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("state is not normalised: |norm - 1| = {0:.3e}")]
    NotNormalised(f64),

    #[error("operator is not hermitian: max |M - M†| = {0:.3e}")]
    NotHermitian(f64),

    #[error("operator trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("kraus completeness violated: |sum K†K - I| = {residual:.3e}")]
    KrausCompleteness { residual: f64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("infeasible code spec: {0}")]
    InfeasibleCode(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
