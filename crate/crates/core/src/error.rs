use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    Domain(String),

    #[error("{0}")]
    Validation(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "coupled term `{0}` present; only uncoupled modes are supported (cross-mode couplings are an open problem)"
    )]
    UnsupportedCoupling(String),

    #[error("n = {0} is a harmonic case; use the exact harmonic solution")]
    HarmonicCase(u32),

    #[error("generator coefficient for {0} has not been solved")]
    UnsolvedGenerator(String),

    #[error(
        "closure insufficient: off-diagonal monomial {monomial} at λ^{order} has no generator; raise the algebra order"
    )]
    ClosureInsufficient { order: usize, monomial: String },

    #[error("algebra not closed: [{left}, {right}] leaves residual {residual}")]
    NotClosed { left: String, right: String, residual: String },

    #[error("spectrum collapses for λ = {0} (requires λ > -1/2)")]
    SpectrumCollapse(f64),

    #[error("dimension {dim} too small: need more than {required}")]
    Dimension { dim: usize, required: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
