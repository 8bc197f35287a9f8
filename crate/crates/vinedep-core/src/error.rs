//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, VineError>;

#[derive(Debug, Error)]
pub enum VineError {
    /// All samples in a column are identical, so the probability integral
    /// transform would be constant.
    #[error("degenerate column {name:?}: all samples identical")]
    DegenerateColumn { name: String },

    #[error("input out of range: {0}")]
    InputOutOfRange(String),

    #[error("invalid parameter for {family}: {detail}")]
    InvalidParameter {
        family: &'static str,
        detail: String,
    },

    /// Copula evaluation left the numerically supported region; callers are
    /// expected to clamp inputs to [1e-10, 1-1e-10].
    #[error("numerical overflow in copula evaluation")]
    NumericalOverflow,

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("tau {tau} is not attainable by family {family}")]
    UnattainableTau { family: &'static str, tau: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("all candidate copula families failed to fit")]
    AllCandidatesFailed,

    /// The Hessian at the reported optimum is not negative semidefinite,
    /// which signals a non-converged fit.
    #[error("hessian is not negative semidefinite at the fitted parameters")]
    SingularCurvature,

    #[error("white test unreliable: {failed} of {total} bootstrap replicates failed")]
    TestUnreliable { failed: usize, total: usize },

    #[error("regressor matrix is rank deficient")]
    CollinearDesign,

    #[error("singular coefficient covariance in Wald test")]
    SingularCovariance,

    #[error("channel has no off-schedule uploads")]
    NoOffScheduleUploads,

    #[error("model format error: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
