use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {dim} exceeds the configured maximum {max} (set TCCLI_MAX_DIM to raise it)")]
    DimensionLimit { dim: usize, max: usize },

    #[error("matrix is not Hermitian: relative anti-Hermitian part {defect:.3e} exceeds {threshold:.1e}")]
    NotHermitian { defect: f64, threshold: f64 },

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystem(String),

    #[error("cutoff escalation for ratio {ratio} would exceed dimension limit {max} (last cutoff {cutoff}, change {change:.3e})")]
    CutoffEscalation { ratio: f64, cutoff: usize, change: f64, max: usize },

    #[error("trace drift {drift:.3e} at t = {time_ns} ns exceeds {limit:.0e}; reduce dt")]
    TraceDrift { drift: f64, time_ns: f64, limit: f64 },

    #[error("density matrix lost positivity at t = {time_ns} ns (min eigenvalue {min_eigenvalue:.3e})")]
    Positivity { min_eigenvalue: f64, time_ns: f64 },

    #[error("invalid probability table: {0}")]
    InvalidTable(String),

    #[error("minimizer failed: {0}")]
    Minimizer(String),

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
