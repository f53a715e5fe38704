use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument or configuration violates a precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation horizon leaves no room for two windows.
    #[error("horizon t = {t} too small for window k_n = {k_n} at n = {n}; minimal feasible t is {t_min}")]
    HorizonTooSmall { t: f64, n: usize, k_n: usize, t_min: f64 },

    #[error("estimated conditional variance is not positive ({0})")]
    NonPositiveVariance(f64),

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("no admissible grid point for studentization")]
    DegenerateStudentization,

    #[error("bootstrap cannot be formed: theta_hat = {0} is not positive")]
    BootstrapDegenerate(f64),

    #[error("ingest error at row {row}: {msg}")]
    Ingest { row: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures caused by degenerate statistics rather than bad input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NonPositiveVariance(_)
                | Error::DegenerateDesign(_)
                | Error::DegenerateStudentization
                | Error::BootstrapDegenerate(_)
        )
    }
}
