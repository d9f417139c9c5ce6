//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. The CLI maps error kinds to
//! process exit codes (see [`Error::exit_code`]): validation problems exit
//! with 2, numerical failures with 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Root finding (or another iteration) hit its iteration cap without
    /// meeting the residual target.
    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    /// A non-finite value (NaN/inf coefficient or intermediate) made the
    /// computation meaningless.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// Numerator and denominator share a root (resultant collapse), or the
    /// map is constant: not a degree-d rational map.
    #[error("degenerate rational map: {0}")]
    DegenerateMap(String),

    /// A formal iterate or root-finding degree exceeded the configured cap.
    #[error("degree cap exceeded: needed {needed}, cap {cap}")]
    DegreeCapExceeded { needed: usize, cap: usize },

    /// multiplier() was asked for a point that does not return to itself.
    #[error("point is not periodic of the requested period (chordal displacement {0:.3e})")]
    NotPeriodic(f64),

    /// The holomorphic index check is ill-conditioned near multiplier 1.
    #[error("fixed-point multiplier within {0:.1e} of 1; index sum is ill-conditioned")]
    NearParabolic(f64),

    /// Two spectrum tables with different degree or truncation order were
    /// compared.
    #[error("spectrum shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Conjugacy testing needs three distinguishable periodic markers.
    #[error("fewer than three distinct periodic markers of period <= 2")]
    InsufficientMarkers,

    /// Parameters (a, b) with 4a^3 + 27b^2 = 0 do not define an elliptic
    /// curve, so no Lattes map exists.
    #[error("singular curve: 4a^3 + 27b^2 vanishes (|disc| = {0:.3e})")]
    SingularCurve(f64),

    /// A family evaluated at a parameter where the resultant collapses or
    /// the degree drops.
    #[error("degenerate parameter t = {re}{im:+}i: {reason}")]
    DegenerateParameter { re: f64, im: f64, reason: String },

    /// A derivative along the orbit is exactly zero, so the Lyapunov-type
    /// estimate is undefined (the orbit hits a critical point).
    #[error("derivative vanishes along the orbit at step {0}")]
    DerivativeVanishes(usize),

    /// The parametric derivative is too small for the similarity rescaling
    /// rho_n = 1/|dxi/dt| to be meaningful; the frame is skipped.
    #[error("parametric derivative too small at period {period}: |dxi/dt| = {magnitude:.3e} below floor {floor:.3e}")]
    DerivativeTooSmall {
        period: usize,
        magnitude: f64,
        floor: f64,
    },

    /// Malformed input: bad JSON, inconsistent degrees, empty polynomials,
    /// out-of-range options, and similar contract violations.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI: 2 for validation errors, 3 for numerical
    /// failures, 1 for anything else (I/O).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateMap(_)
            | Error::ShapeMismatch(_)
            | Error::InsufficientMarkers
            | Error::SingularCurve(_)
            | Error::DegenerateParameter { .. }
            | Error::NotPeriodic(_)
            | Error::NearParabolic(_)
            | Error::InvalidInput(_)
            | Error::Json(_) => 2,
            Error::NonConvergence(_)
            | Error::NonFinite(_)
            | Error::DegreeCapExceeded { .. }
            | Error::DerivativeVanishes(_)
            | Error::DerivativeTooSmall { .. } => 3,
            Error::Io(_) => 1,
        }
    }
}
