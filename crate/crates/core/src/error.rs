use thiserror::Error;

use crate::element::TripleSpace;

pub type Result<T> = std::result::Result<T, JbError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JbError {
    #[error("invalid triple space: {0}")]
    InvalidSpace(String),

    #[error("entries do not match the space: {0}")]
    ShapeMismatch(String),

    #[error("elements live in different spaces: {left} vs {right}")]
    SpaceMismatch {
        left: TripleSpace,
        right: TripleSpace,
    },

    #[error("operation requires a rectangular factor, got {0}")]
    UnsupportedSpace(TripleSpace),

    #[error("element is not a tripotent: residual {residual:e} exceeds {tol:e}")]
    NotATripotent { residual: f64, tol: f64 },

    #[error("element is zero")]
    ZeroElement,

    #[error("invalid Peirce index {0}, expected 0, 1 or 2")]
    InvalidPeirceIndex(u8),

    #[error("norm {norm} exceeds 1 (+{tol:e}); the element is outside the closed unit ball")]
    NormExceedsOne { norm: f64, tol: f64 },

    #[error("element is not Brown-Pedersen quasi-invertible (numerical rank {rank} < {full})")]
    NotQuasiInvertible { rank: usize, full: usize },

    #[error(
        "lambda {requested} exceeds the bound (1 + m_q)/2 = {bound}; \
         no convex decomposition into extreme points exists at this weight"
    )]
    LambdaTooLarge { requested: f64, bound: f64 },

    #[error("lambda {0} is outside [1/2, 1]")]
    InvalidLambda(f64),

    #[error("cannot split t = {t} with weight {lambda}: need 2*lambda - 1 <= t <= 1")]
    InfeasibleSplit { t: f64, lambda: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
