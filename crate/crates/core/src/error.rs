use crate::exprlang::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Every message starts with the module that
/// produced it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("timescale: no points left after canonicalization")]
    EmptyTimeScale,
    #[error("timescale: invalid piece: {0}")]
    InvalidPiece(String),
    #[error("timescale: invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("timescale: point {t} is not in the time scale")]
    PointNotInScale { t: f64 },

    #[error("exprlang: {0}")]
    Expr(#[from] ExprError),

    #[error("calculus: point {t} is not in T^kappa")]
    NotInKappa { t: f64 },
    #[error("calculus: delta derivative at {t} did not settle (spread {spread:e})")]
    NoConvergence { t: f64, spread: f64 },
    #[error(
        "calculus: quadrature on [{lo}, {hi}] missed its tolerance after {subdivisions} \
         subdivisions (estimate {estimate}, error {error:e})"
    )]
    QuadratureFailure {
        lo: f64,
        hi: f64,
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("calculus: invalid quadrature settings: {0}")]
    InvalidQuadrature(String),
    #[error("calculus: function decreases between {s1} and {s2}")]
    NotIncreasing { s1: f64, s2: f64 },

    #[error("fracops: order {alpha} is outside (0, 1)")]
    InvalidOrder { alpha: f64 },
    #[error("fracops: weight function is not strictly increasing near t = {t}")]
    NonMonotoneWeight { t: f64 },
    #[error("fracops: weight derivative {value:e} at t = {t} is too close to zero")]
    ZeroWeightDerivative { t: f64, value: f64 },

    #[error("{context}: non-finite value at t = {t}")]
    NonFiniteValue { context: &'static str, t: f64 },
    #[error("{module}: {message}")]
    InvalidArgument {
        module: &'static str,
        message: String,
    },

    #[error("oracle: time scale has a continuous part on [{lo}, {hi}]")]
    ScaleHasContinuousPart { lo: f64, hi: f64 },
    #[error("oracle: {0}")]
    OracleDomain(String),
}

impl Error {
    pub(crate) fn invalid(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            module,
            message: message.into(),
        }
    }
}
