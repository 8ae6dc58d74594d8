//! Brown–Pedersen quasi-invertibility, `α_q`, distances to the extreme points
//! of the closed unit ball and the λ-function.

use std::fmt;

use num_complex::Complex64;

use crate::algebra::{bergmann, max_on_basis};
use crate::element::{MatrixElement, TripleSpace};
use crate::error::{JbError, Result};
use crate::spectral::{compute_svd, generalized_inverse, m_q, numerical_rank, range_tripotent};
use crate::Tolerances;

/// Slack on `‖a‖ ≤ 1` absorbing roundoff on the unit sphere.
pub const UNIT_BALL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct QuasiInvertibilityReport {
    pub is_bp_quasi_invertible: bool,
    /// `b = a†`, satisfying `B(a, b) = 0`, when `a` is quasi-invertible.
    pub witness_b: Option<MatrixElement>,
    /// Largest `‖B(a, a†) z‖` over the real basis.
    pub witness_residual: Option<f64>,
    pub range_tripotent_complete: bool,
    pub m_q: f64,
    pub alpha_q: f64,
}

/// Quasi-invertibility test: full numerical rank (matrices) or no vanishing
/// non-trivial grid point.
pub fn is_bp_quasi_invertible(a: &MatrixElement, tols: Tolerances) -> QuasiInvertibilityReport {
    let rank = numerical_rank(a, tols.rank_tol);
    let qi = rank == a.space().full_rank();
    let range_tripotent_complete = range_tripotent(a, tols)
        .map(|r| r.is_complete())
        .unwrap_or(false);
    let (witness_b, witness_residual) = if qi {
        let b = generalized_inverse(a, tols.rank_tol).expect("non-zero");
        let res = max_on_basis(a.space(), |z| bergmann(a, &b, z));
        (Some(b), Some(res))
    } else {
        (None, None)
    };
    QuasiInvertibilityReport {
        is_bp_quasi_invertible: qi,
        witness_b,
        witness_residual,
        range_tripotent_complete,
        m_q: m_q(a, tols.rank_tol),
        alpha_q: 0.0,
    }
}

/// `α_q(a) = dist(a, E_q^{-1})` together with an explicit approximant.
#[derive(Debug, Clone)]
pub struct AlphaQ {
    /// Always 0: quasi-invertible elements are dense in finite dimension.
    pub value: f64,
    /// Quasi-invertible element at distance at most `epsilon / 2` from `a`
    /// (provided `epsilon / 2` clears the rank threshold). The phase on the
    /// kernel block depends on the singular bases.
    pub witness: MatrixElement,
    pub epsilon: f64,
}

/// Distance to the quasi-invertible elements. The value is 0 in every finite
/// model; the witness replaces each insignificant singular value (or grid
/// value) by `epsilon / 2`.
pub fn alpha_q(a: &MatrixElement, epsilon: f64, tols: Tolerances) -> AlphaQ {
    let half = epsilon / 2.0;
    let witness = match a.space() {
        TripleSpace::Rectangular { .. } => {
            let sd = compute_svd(a, tols.rank_tol).expect("rectangular");
            let d: Vec<Complex64> = sd
                .sigma
                .iter()
                .enumerate()
                .map(|(i, &s)| Complex64::new(if sd.is_significant(i) { s } else { half }, 0.0))
                .collect();
            a.with_entries(sd.compose(&d))
        }
        TripleSpace::Grid { .. } => {
            let max = a.norm();
            a.map_entries(|z| {
                if max > 0.0 && z.norm() > tols.rank_tol * max {
                    z
                } else {
                    Complex64::new(half, 0.0)
                }
            })
        }
    };
    AlphaQ {
        value: 0.0,
        witness,
        epsilon,
    }
}

/// `dist(a, E \ E_q^{-1}) = m_q(a)`, with the nearest non-quasi-invertible
/// element `y0 = a − m_q(a) r(a)` (or `a` itself when already singular).
pub fn dist_to_non_quasi_invertible(
    a: &MatrixElement,
    tols: Tolerances,
) -> (f64, MatrixElement) {
    let value = m_q(a, tols.rank_tol);
    if value == 0.0 {
        return (0.0, a.clone());
    }
    let r = range_tripotent(a, tols).expect("quasi-invertible implies non-zero");
    let witness = a - &r.element().scale_real(value);
    (value, witness)
}

/// Which statement justifies a [`DistanceResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremTag {
    /// `a` quasi-invertible: `max{1 − m_q(a), ‖a‖ − 1}`.
    QuasiInvertible,
    /// `a` not quasi-invertible, `‖a‖ ≤ 1`: `1 + α_q(a)`.
    SingularUnitBall,
    /// `a` not quasi-invertible, `‖a‖ > 1`: only the bounds
    /// `max{1 + α_q(a), ‖a‖ − 1} ≤ dist ≤ 1 + ‖a‖` are established.
    SingularOutsideBall,
    /// Commutative triple: `max{1 + α_q(a), ‖a‖ − 1}` for every singular `a`.
    Commutative,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::QuasiInvertible => "quasi-invertible-distance",
            TheoremTag::SingularUnitBall => "singular-unit-ball-distance",
            TheoremTag::SingularOutsideBall => "singular-distance-bounds",
            TheoremTag::Commutative => "commutative-singular-distance",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceResult {
    Exact {
        value: f64,
        theorem: TheoremTag,
    },
    /// Certified bounds. `conjectured` is `max{1 + α_q(a), ‖a‖ − 1}`, the
    /// value expected if the lower bound is attained; it is not a theorem in
    /// the rectangular factor.
    Interval {
        lower: f64,
        upper: f64,
        conjectured: f64,
        theorem: TheoremTag,
    },
}

impl DistanceResult {
    pub fn lower(&self) -> f64 {
        match *self {
            DistanceResult::Exact { value, .. } => value,
            DistanceResult::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            DistanceResult::Exact { value, .. } => value,
            DistanceResult::Interval { upper, .. } => upper,
        }
    }

    pub fn theorem(&self) -> TheoremTag {
        match *self {
            DistanceResult::Exact { theorem, .. } | DistanceResult::Interval { theorem, .. } => {
                theorem
            }
        }
    }

    pub fn exact(&self) -> Option<f64> {
        match *self {
            DistanceResult::Exact { value, .. } => Some(value),
            DistanceResult::Interval { .. } => None,
        }
    }
}

/// Distance from `a` to the extreme points of the closed unit ball.
pub fn dist_to_extremals(a: &MatrixElement, tols: Tolerances) -> DistanceResult {
    let norm = a.norm();
    let mq = m_q(a, tols.rank_tol);
    if mq > 0.0 {
        return DistanceResult::Exact {
            value: (1.0 - mq).max(norm - 1.0),
            theorem: TheoremTag::QuasiInvertible,
        };
    }
    let alpha = 0.0;
    if norm <= 1.0 {
        return DistanceResult::Exact {
            value: 1.0 + alpha,
            theorem: TheoremTag::SingularUnitBall,
        };
    }
    let lower = (1.0 + alpha).max(norm - 1.0);
    match a.space() {
        TripleSpace::Grid { .. } => DistanceResult::Exact {
            value: lower,
            theorem: TheoremTag::Commutative,
        },
        TripleSpace::Rectangular { .. } => DistanceResult::Interval {
            lower,
            upper: 1.0 + norm,
            conjectured: lower,
            theorem: TheoremTag::SingularOutsideBall,
        },
    }
}

/// The λ-function on the closed unit ball: `(1 + m_q(a)) / 2` for
/// quasi-invertible `a`, `1/2` otherwise.
pub fn lambda_value(a: &MatrixElement, tols: Tolerances) -> Result<f64> {
    let norm = a.norm();
    if norm > 1.0 + UNIT_BALL_SLACK {
        return Err(JbError::NormExceedsOne {
            norm,
            tol: UNIT_BALL_SLACK,
        });
    }
    let mq = m_q(a, tols.rank_tol);
    Ok(if mq > 0.0 { (1.0 + mq.min(1.0)) / 2.0 } else { 0.5 })
}
