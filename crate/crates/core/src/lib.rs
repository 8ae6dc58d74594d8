//! Numerical toolkit for finite-dimensional JB*-triples.
//!
//! Two concrete models are supported: the rectangular factor `M_{m,n}(C)` with
//! triple product `{x,y,z} = (x y* z + z y* x) / 2`, and a commutative grid
//! model `C_0(S ∪ {0})` realised as complex vectors indexed by a finite set of
//! points, pinned to zero at the origin.
//!
//! On top of the Jordan-triple algebra the crate computes Brown–Pedersen
//! quasi-invertibility, the quadratic conorm, the distance to the extreme
//! points of the closed unit ball and the λ-function, and builds explicit
//! convex decompositions into extreme points. Every statement has a
//! brute-force counterpart in [`oracle`] and a randomized suite in
//! [`verify`].

// `!(x <= t)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod decompose;
pub mod element;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod spectral;
mod svd;
pub mod verify;

pub use num_complex::Complex64;

pub use algebra::{
    apply_l, apply_q, are_orthogonal, bergmann_apply, classify_tripotent, is_tripotent,
    peirce_project, triple_product, Tripotent,
};
pub use decompose::{
    lambda_decompose, mean_of_two_extremals, perturb_to_quasi_invertible, scalar_circle_split,
    DecompositionCertificate, PerturbationCertificate,
};
pub use element::{MatrixElement, TripleSpace};
pub use error::{JbError, Result};
pub use geometry::{
    alpha_q, dist_to_extremals, dist_to_non_quasi_invertible, is_bp_quasi_invertible,
    lambda_value, AlphaQ, DistanceResult, QuasiInvertibilityReport, TheoremTag,
};
pub use spectral::{
    compute_svd, generalized_inverse, m_q, odd_calculus, quadratic_conorm, range_tripotent,
    triple_spectrum, Conorm, SpectralData,
};

/// Default absolute tolerance for algebraic residuals on unit-norm inputs.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default relative threshold for the numerical rank: `σ_i > rank_tol · σ_max`.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Tolerances shared by the spectral, geometric and decomposition layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Residual tolerance used when validating tripotents and certificates.
    pub tol: f64,
    /// Relative singular-value cut-off deciding the numerical rank.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

impl Tolerances {
    pub fn new(tol: f64, rank_tol: f64) -> Self {
        Self { tol, rank_tol }
    }
}
