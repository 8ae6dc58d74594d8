//! SVD-backed triple functional calculus.
//!
//! In the matrix model the subtriple generated by `a` is `C_0(S_a)` where
//! `S_a` is the set of distinct non-zero singular values, and the continuous
//! triple functional calculus acts on the singular values while keeping the
//! singular vectors. Every quantity exported here is a function of `a` alone,
//! never of the particular singular bases the factorization happens to pick.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{classify_tripotent, Tripotent};
use crate::element::{MatrixElement, TripleSpace};
use crate::error::{JbError, Result};
use crate::Tolerances;

/// Thin singular value decomposition with rank and triple-spectrum data.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Singular values, descending, `min(m, n)` of them.
    pub sigma: Vec<f64>,
    /// `m × k` matrix with orthonormal columns `u_i`.
    pub left_vectors: DMatrix<Complex64>,
    /// `n × k` matrix with orthonormal columns `v_i`.
    pub right_vectors: DMatrix<Complex64>,
    /// `#{σ_i > rank_tol · σ_max}`.
    pub numerical_rank: usize,
    /// Distinct singular values above the rank threshold, ascending.
    pub triple_spectrum: Vec<f64>,
    /// Squares of `triple_spectrum`: the spectrum of `L(a,a)` restricted to
    /// the subtriple generated by `a`.
    pub sigma_sq: Vec<f64>,
    pub norm: f64,
    pub rank_tol: f64,
}

impl SpectralData {
    /// `Σ_i d_i u_i v_i*` over the `k = min(m,n)` singular pairs.
    pub fn compose(&self, diag: &[Complex64]) -> DMatrix<Complex64> {
        assert_eq!(diag.len(), self.sigma.len());
        let mut scaled = self.left_vectors.clone();
        for (j, d) in diag.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= *d;
            }
        }
        scaled * self.right_vectors.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d: Vec<Complex64> = self.sigma.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        self.compose(&d)
    }

    /// Whether `σ_i` counts towards the numerical rank.
    pub fn is_significant(&self, i: usize) -> bool {
        i < self.numerical_rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.numerical_rank == self.sigma.len()
    }
}

/// Singular values at or below `rank_tol · max` are treated as zero.
fn threshold(max: f64, rank_tol: f64) -> f64 {
    rank_tol * max
}

/// Distinct values of an ascending list, merging neighbours closer than
/// `merge_tol`. Each cluster is represented by its largest member so that the
/// maximum of the result equals the maximum of the input.
fn distinct_ascending(sorted: &[f64], merge_tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    for &s in sorted {
        match out.last_mut() {
            Some(last) if s - *last <= merge_tol => *last = s,
            _ => out.push(s),
        }
    }
    out
}

fn merge_tol(max: f64, rank_tol: f64) -> f64 {
    rank_tol.max(1e-12) * max
}

/// Thin SVD of a matrix element.
///
/// The zero matrix has rank 0 and an empty triple spectrum.
pub fn compute_svd(a: &MatrixElement, rank_tol: f64) -> Result<SpectralData> {
    let TripleSpace::Rectangular { .. } = a.space() else {
        return Err(JbError::UnsupportedSpace(a.space().clone()));
    };
    let crate::svd::Thin { sigma, u: left, v: right } = crate::svd::thin_svd(a.entries());

    let norm = sigma.first().copied().unwrap_or(0.0);
    let thr = threshold(norm, rank_tol);
    let numerical_rank = if norm > 0.0 {
        sigma.iter().filter(|&&s| s > thr).count()
    } else {
        0
    };
    let mut significant: Vec<f64> = sigma[..numerical_rank].to_vec();
    significant.reverse();
    let triple_spectrum = distinct_ascending(&significant, merge_tol(norm, rank_tol));
    let sigma_sq = triple_spectrum.iter().map(|s| s * s).collect();

    Ok(SpectralData {
        sigma,
        left_vectors: left,
        right_vectors: right,
        numerical_rank,
        triple_spectrum,
        sigma_sq,
        norm,
        rank_tol,
    })
}

/// Moduli of the grid values with their significance flags.
fn grid_profile(a: &MatrixElement, rank_tol: f64) -> (Vec<f64>, f64, f64) {
    let moduli: Vec<f64> = a
        .grid_values()
        .expect("grid element")
        .iter()
        .map(|z| z.norm())
        .collect();
    let max = moduli.iter().copied().fold(0.0, f64::max);
    (moduli, max, threshold(max, rank_tol))
}

fn grid_significant(modulus: f64, max: f64, thr: f64) -> bool {
    max > 0.0 && modulus > thr
}

/// Number of significant singular values (matrices) or significant grid
/// values.
pub fn numerical_rank(a: &MatrixElement, rank_tol: f64) -> usize {
    match a.space() {
        TripleSpace::Rectangular { .. } => {
            compute_svd(a, rank_tol).expect("rectangular").numerical_rank
        }
        TripleSpace::Grid { .. } => {
            let (moduli, max, thr) = grid_profile(a, rank_tol);
            moduli.iter().filter(|&&m| grid_significant(m, max, thr)).count()
        }
    }
}

/// `S_a`: the distinct strictly positive points of the triple spectrum,
/// ascending. For `a ≠ 0` its maximum is `‖a‖`.
pub fn triple_spectrum(a: &MatrixElement, rank_tol: f64) -> Vec<f64> {
    match a.space() {
        TripleSpace::Rectangular { .. } => {
            compute_svd(a, rank_tol).expect("rectangular").triple_spectrum
        }
        TripleSpace::Grid { .. } => {
            let (moduli, max, thr) = grid_profile(a, rank_tol);
            let mut sig: Vec<f64> = moduli
                .into_iter()
                .filter(|&m| grid_significant(m, max, thr))
                .collect();
            sig.sort_by(f64::total_cmp);
            distinct_ascending(&sig, merge_tol(max, rank_tol))
        }
    }
}

/// `f_t(a)`: applies the odd function `f` (with `f(0) = 0`) to the triple
/// spectrum. For `f(s) = s^{1/(2n-1)}` this is the odd root `a^{[1/(2n-1)]}`.
pub fn odd_calculus(
    a: &MatrixElement,
    f: impl Fn(f64) -> f64,
    rank_tol: f64,
) -> MatrixElement {
    match a.space() {
        TripleSpace::Rectangular { .. } => {
            let sd = compute_svd(a, rank_tol).expect("rectangular");
            let d: Vec<Complex64> = sd
                .sigma
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    if sd.is_significant(i) {
                        Complex64::new(f(s), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            a.with_entries(sd.compose(&d))
        }
        TripleSpace::Grid { .. } => {
            let (_, max, thr) = grid_profile(a, rank_tol);
            a.map_entries(|z| {
                let m = z.norm();
                if grid_significant(m, max, thr) {
                    z * (f(m) / m)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
    }
}

/// The range tripotent `r(a)`: the partial isometry of the reduced polar
/// decomposition, `Σ_{σ_i significant} u_i v_i*`.
pub fn range_tripotent(a: &MatrixElement, tols: Tolerances) -> Result<Tripotent> {
    if numerical_rank(a, tols.rank_tol) == 0 {
        return Err(JbError::ZeroElement);
    }
    let r = odd_calculus(a, |_| 1.0, tols.rank_tol);
    classify_tripotent(&r, tols.tol)
}

/// Generalized inverse `a†` in the triple sense: the unique `b` in the same
/// space with `Q(a) b = a`, `Q(b) a = b` and `[Q(a), Q(b)] = 0`.
///
/// For matrices this is `U Σ⁺ V*`, the adjoint of the Moore–Penrose inverse.
pub fn generalized_inverse(a: &MatrixElement, rank_tol: f64) -> Result<MatrixElement> {
    if numerical_rank(a, rank_tol) == 0 {
        return Err(JbError::ZeroElement);
    }
    Ok(odd_calculus(a, |s| 1.0 / s, rank_tol))
}

/// Quadratic conorm `γ^q(a)`, the reduced minimum modulus of `Q(a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conorm {
    Finite(f64),
    /// `γ^q(0) = ∞`.
    Infinite,
}

impl Conorm {
    pub fn value(self) -> f64 {
        match self {
            Conorm::Finite(v) => v,
            Conorm::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Conorm::Infinite)
    }
}

impl fmt::Display for Conorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conorm::Finite(v) => write!(f, "{v}"),
            Conorm::Infinite => f.write_str("inf"),
        }
    }
}

/// `γ^q(a) = min Σ(a) = min {s² : s ∈ S_a}`; infinite at `a = 0`.
pub fn quadratic_conorm(a: &MatrixElement, rank_tol: f64) -> Conorm {
    match triple_spectrum(a, rank_tol).first() {
        Some(s) => Conorm::Finite(s * s),
        None => Conorm::Infinite,
    }
}

/// `m_q(a)`: `√γ^q(a)` if `a` is Brown–Pedersen quasi-invertible, else 0.
///
/// Equals the distance from `a` to the set of non-quasi-invertible elements.
pub fn m_q(a: &MatrixElement, rank_tol: f64) -> f64 {
    let full = a.space().full_rank();
    match a.space() {
        TripleSpace::Rectangular { .. } => {
            let sd = compute_svd(a, rank_tol).expect("rectangular");
            if sd.numerical_rank == full {
                sd.sigma[full - 1]
            } else {
                0.0
            }
        }
        TripleSpace::Grid { .. } => {
            let (moduli, max, thr) = grid_profile(a, rank_tol);
            if moduli.iter().all(|&m| grid_significant(m, max, thr)) {
                moduli.iter().copied().fold(f64::INFINITY, f64::min)
            } else {
                0.0
            }
        }
    }
}
