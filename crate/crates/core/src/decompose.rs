//! Convex decompositions into extreme points of the closed unit ball.
//!
//! Both constructions work singular value by singular value: each `σ_i` is
//! written as a convex combination of two unimodular scalars, and the
//! resulting diagonals are transported back with the singular bases. Since
//! the thin factors have `min(m, n)` orthonormal columns on both sides, the
//! outputs are co-isometries (`m ≤ n`) or isometries (`m > n`), i.e. complete
//! tripotents.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{classify_tripotent, q_op, tripotency_residual, Tripotent};
use crate::element::{MatrixElement, TripleSpace};
use crate::error::{JbError, Result};
use crate::spectral::{compute_svd, m_q, range_tripotent};
use crate::Tolerances;

/// Relative slack on the feasibility boundary `t = 2λ − 1`.
pub const BOUNDARY_SLACK: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn unimodular(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        ONE
    } else {
        z / n
    }
}

/// Writes `t ∈ [0, 1]` as `λ u1 + (1 − λ) u2` with `|u1| = |u2| = 1`.
///
/// Feasible iff `2λ − 1 ≤ t ≤ 1`. The `+√` branch is taken for the imaginary
/// part of `u1`.
pub fn scalar_circle_split(t: f64, lambda: f64) -> Result<(Complex64, Complex64)> {
    if !(0.5 - BOUNDARY_SLACK..=1.0 + BOUNDARY_SLACK).contains(&lambda) {
        return Err(JbError::InvalidLambda(lambda));
    }
    if !(0.0..=1.0 + BOUNDARY_SLACK).contains(&t) || t < 2.0 * lambda - 1.0 - BOUNDARY_SLACK {
        return Err(JbError::InfeasibleSplit { t, lambda });
    }
    if 1.0 - lambda <= BOUNDARY_SLACK {
        return Ok((ONE, ONE));
    }
    if t == 0.0 {
        return Ok((I, -I));
    }
    let x = ((t * t + 2.0 * lambda - 1.0) / (2.0 * t)).clamp(-lambda, lambda);
    let y = (lambda * lambda - x * x).max(0.0).sqrt();
    let w = Complex64::new(x, y);
    let u1 = unimodular(w / lambda);
    let u2 = unimodular((Complex64::new(t, 0.0) - w) / (1.0 - lambda));
    Ok((u1, u2))
}

/// Witness of `a = λ e + (1 − λ) u` with `e`, `u` extreme points.
#[derive(Debug, Clone)]
pub struct DecompositionCertificate {
    pub lambda: f64,
    pub e: Tripotent,
    pub u: Tripotent,
    /// `‖a − (λ e + (1 − λ) u)‖`.
    pub reconstruction_residual: f64,
    /// `‖{e,e,e} − e‖` and `‖{u,u,u} − u‖`.
    pub tripotency_residuals: (f64, f64),
    pub tol: f64,
}

impl DecompositionCertificate {
    fn build(a: &MatrixElement, lambda: f64, e: MatrixElement, u: MatrixElement, tol: f64) -> Result<Self> {
        let combo = &e.scale_real(lambda) + &u.scale_real(1.0 - lambda);
        let reconstruction_residual = a.distance(&combo);
        let tripotency_residuals = (tripotency_residual(&e), tripotency_residual(&u));
        Ok(Self {
            lambda,
            e: classify_tripotent(&e, tol)?,
            u: classify_tripotent(&u, tol)?,
            reconstruction_residual,
            tripotency_residuals,
            tol,
        })
    }

    /// Both factors complete and the residual within `tol`.
    pub fn is_valid(&self) -> bool {
        self.e.is_complete() && self.u.is_complete() && self.reconstruction_residual <= self.tol
    }

    /// Recomputes the reconstruction residual against `a`.
    pub fn residual_for(&self, a: &MatrixElement) -> f64 {
        let combo = &self.e.element().scale_real(self.lambda)
            + &self.u.element().scale_real(1.0 - self.lambda);
        a.distance(&combo)
    }
}

fn check_unit_ball(a: &MatrixElement, tol: f64) -> Result<f64> {
    let norm = a.norm();
    if norm > 1.0 + tol {
        return Err(JbError::NormExceedsOne { norm, tol });
    }
    Ok(norm)
}

/// Applies a per-singular-value pair of unimodular scalars and returns the
/// two transported elements.
fn transport(
    a: &MatrixElement,
    rank_tol: f64,
    split: impl Fn(f64) -> Result<(Complex64, Complex64)>,
) -> Result<(MatrixElement, MatrixElement)> {
    match a.space() {
        TripleSpace::Rectangular { .. } => {
            let sd = compute_svd(a, rank_tol)?;
            let mut d1 = Vec::with_capacity(sd.sigma.len());
            let mut d2 = Vec::with_capacity(sd.sigma.len());
            for &s in &sd.sigma {
                let (u1, u2) = split(s.min(1.0))?;
                d1.push(u1);
                d2.push(u2);
            }
            Ok((a.with_entries(sd.compose(&d1)), a.with_entries(sd.compose(&d2))))
        }
        TripleSpace::Grid { .. } => {
            let values = a.grid_values().expect("grid element");
            let mut e = DMatrix::zeros(values.len() + 1, 1);
            let mut u = DMatrix::zeros(values.len() + 1, 1);
            for (i, z) in values.iter().enumerate() {
                let phase = unimodular(*z);
                let (u1, u2) = split(z.norm().min(1.0))?;
                e[(i + 1, 0)] = phase * u1;
                u[(i + 1, 0)] = phase * u2;
            }
            Ok((a.with_entries(e), a.with_entries(u)))
        }
    }
}

/// Decomposes a quasi-invertible unit-ball element as `λ e + (1 − λ) u` with
/// complete tripotents `e`, `u`, for any `1/2 ≤ λ ≤ (1 + m_q(a)) / 2`.
///
/// Beyond that bound no such decomposition exists.
pub fn lambda_decompose(
    a: &MatrixElement,
    lambda: f64,
    tols: Tolerances,
) -> Result<DecompositionCertificate> {
    check_unit_ball(a, tols.tol)?;
    let mq = m_q(a, tols.rank_tol);
    if mq == 0.0 {
        return Err(JbError::NotQuasiInvertible {
            rank: crate::spectral::numerical_rank(a, tols.rank_tol),
            full: a.space().full_rank(),
        });
    }
    let bound = (1.0 + mq.min(1.0)) / 2.0;
    if !(lambda <= bound * (1.0 + BOUNDARY_SLACK)) {
        return Err(JbError::LambdaTooLarge {
            requested: lambda,
            bound,
        });
    }
    if lambda < 0.5 {
        return Err(JbError::InvalidLambda(lambda));
    }
    let (e, u) = transport(a, tols.rank_tol, |t| scalar_circle_split(t, lambda))?;
    DecompositionCertificate::build(a, lambda, e, u, tols.tol)
}

/// `a = (e1 + e2) / 2` with complete tripotents, for any `‖a‖ ≤ 1`.
///
/// Each singular value `σ` is split as `σ ± i √(1 − σ²)`.
pub fn mean_of_two_extremals(a: &MatrixElement, tols: Tolerances) -> Result<DecompositionCertificate> {
    check_unit_ball(a, tols.tol)?;
    let (e1, e2) = transport(a, tols.rank_tol, |s| {
        let h = (1.0 - s * s).max(0.0).sqrt();
        Ok((Complex64::new(s, h), Complex64::new(s, -h)))
    })?;
    DecompositionCertificate::build(a, 0.5, e1, e2, tols.tol)
}

/// Outcome of pushing `a` into the quasi-invertible set along `r(b)`.
#[derive(Debug, Clone)]
pub struct PerturbationCertificate {
    pub beta: f64,
    /// `‖b − a‖`.
    pub distance_ab: f64,
    pub z_quasi_invertible: bool,
    pub m_q_z: f64,
    /// `β − ‖b − a‖`.
    pub lower_bound: f64,
    /// Smallest singular value of the square compression of
    /// `P_2(r(b)) a + β r(b)`.
    pub peirce2_min_singular: f64,
    pub peirce2_invertible: bool,
    pub tol: f64,
}

impl PerturbationCertificate {
    pub fn holds(&self) -> bool {
        self.z_quasi_invertible
            && self.m_q_z >= self.lower_bound - self.tol
            && self.peirce2_invertible
    }
}

/// Square matrix representing `y ∈ E_2(e)` for a complete tripotent `e`:
/// `y e*` when `e` is a co-isometry, `e* y` otherwise.
fn peirce2_compression(y: &MatrixElement, e: &Tripotent) -> DMatrix<Complex64> {
    let (m, n) = y.shape();
    let ee = e.element().entries();
    if m <= n {
        y.entries() * ee.adjoint()
    } else {
        ee.adjoint() * y.entries()
    }
}

/// Returns `z = a + β r(b)` for a quasi-invertible `b` with `‖a − b‖ < β`,
/// together with the certificate `m_q(z) ≥ β − ‖b − a‖` and invertibility of
/// `P_2(r(b)) a + β r(b)` in the Peirce-2 algebra of `r(b)`.
pub fn perturb_to_quasi_invertible(
    a: &MatrixElement,
    b: &MatrixElement,
    beta: f64,
    tols: Tolerances,
) -> Result<(MatrixElement, PerturbationCertificate)> {
    a.check_same_space(b)?;
    if !(beta > 0.0) {
        return Err(JbError::PreconditionViolated(format!("beta = {beta} must be positive")));
    }
    if m_q(b, tols.rank_tol) == 0.0 {
        return Err(JbError::PreconditionViolated("b is not quasi-invertible".into()));
    }
    let distance_ab = a.distance(b);
    if !(distance_ab < beta) {
        return Err(JbError::PreconditionViolated(format!(
            "‖a − b‖ = {distance_ab} is not below beta = {beta}"
        )));
    }
    let r = range_tripotent(b, tols)?;
    let shift = r.element().scale_real(beta);
    let z = a + &shift;
    let m_q_z = m_q(&z, tols.rank_tol);

    let p2a = q_op(r.element(), &q_op(r.element(), a));
    let y = &p2a + &shift;
    let (min_sv, max_sv) = match y.space() {
        TripleSpace::Rectangular { .. } => {
            let sv = crate::svd::singular_values(&peirce2_compression(&y, &r));
            (sv.last().copied().unwrap_or(0.0), sv.first().copied().unwrap_or(0.0))
        }
        TripleSpace::Grid { .. } => {
            let mods: Vec<f64> = y.grid_values().expect("grid").iter().map(|v| v.norm()).collect();
            (
                mods.iter().copied().fold(f64::INFINITY, f64::min),
                mods.iter().copied().fold(0.0, f64::max),
            )
        }
    };
    let cert = PerturbationCertificate {
        beta,
        distance_ab,
        z_quasi_invertible: m_q_z > 0.0,
        m_q_z,
        lower_bound: beta - distance_ab,
        peirce2_min_singular: min_sv,
        peirce2_invertible: max_sv > 0.0 && min_sv > tols.rank_tol * max_sv,
        tol: tols.tol,
    };
    Ok((z, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn check_split(t: f64, lambda: f64) {
        let (u1, u2) = scalar_circle_split(t, lambda).unwrap();
        assert!((u1.norm() - 1.0).abs() < 1e-14);
        assert!((u2.norm() - 1.0).abs() < 1e-14);
        let combo = u1 * lambda + u2 * (1.0 - lambda);
        assert!((combo - c(t, 0.0)).norm() < 1e-14, "t={t} lambda={lambda} combo={combo}");
    }

    #[test]
    fn split_examples() {
        assert_eq!(scalar_circle_split(1.0, 0.75).unwrap(), (c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(scalar_circle_split(0.0, 0.5).unwrap(), (c(0.0, 1.0), c(0.0, -1.0)));
        let (u1, u2) = scalar_circle_split(0.5, 0.5).unwrap();
        let h = 0.75f64.sqrt();
        assert!((u1 - c(0.5, h)).norm() < 1e-15);
        assert!((u2 - c(0.5, -h)).norm() < 1e-15);
        assert_eq!(scalar_circle_split(1.0, 1.0).unwrap(), (c(1.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn split_is_exact_on_the_feasible_region() {
        for i in 0..=20 {
            let lambda = 0.5 + 0.5 * i as f64 / 20.0;
            for j in 0..=20 {
                let t = (2.0 * lambda - 1.0) + (2.0 - 2.0 * lambda) * j as f64 / 20.0;
                if t > 0.0 && lambda < 1.0 {
                    check_split(t, lambda);
                }
            }
        }
    }

    #[test]
    fn split_rejects_infeasible_inputs() {
        assert!(matches!(
            scalar_circle_split(0.4, 0.75),
            Err(JbError::InfeasibleSplit { .. })
        ));
        assert!(matches!(scalar_circle_split(1.2, 0.6), Err(JbError::InfeasibleSplit { .. })));
        assert!(matches!(scalar_circle_split(0.5, 0.4), Err(JbError::InvalidLambda(_))));
        assert!(matches!(scalar_circle_split(0.5, 1.1), Err(JbError::InvalidLambda(_))));
    }

    #[test]
    fn lambda_decomposition_at_the_boundary() {
        let a = MatrixElement::diag(&[0.5, 1.0]).unwrap();
        let cert = lambda_decompose(&a, 0.75, tols()).unwrap();
        assert!(cert.is_valid());
        assert!(cert.reconstruction_residual < 1e-15);
        assert!(cert.e.element().max_abs_diff(&MatrixElement::diag(&[1.0, 1.0]).unwrap()) < 1e-15);
        assert!(cert.u.element().max_abs_diff(&MatrixElement::diag(&[-1.0, 1.0]).unwrap()) < 1e-15);

        assert!(matches!(
            lambda_decompose(&a, 0.76, tols()),
            Err(JbError::LambdaTooLarge { .. })
        ));
    }

    #[test]
    fn extreme_point_decomposes_trivially() {
        let e0 = MatrixElement::from_real(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let cert = lambda_decompose(&e0, 1.0, tols()).unwrap();
        assert!(cert.e.element().max_abs_diff(&e0) < 1e-14);
        assert!(cert.u.element().max_abs_diff(&e0) < 1e-14);
    }

    #[test]
    fn lambda_decomposition_errors() {
        let singular = MatrixElement::diag(&[0.5, 0.0]).unwrap();
        assert!(matches!(
            lambda_decompose(&singular, 0.5, tols()),
            Err(JbError::NotQuasiInvertible { rank: 1, full: 2 })
        ));
        let big = MatrixElement::diag(&[1.5, 1.0]).unwrap();
        assert!(matches!(lambda_decompose(&big, 0.5, tols()), Err(JbError::NormExceedsOne { .. })));
        let a = MatrixElement::diag(&[0.5, 1.0]).unwrap();
        assert!(matches!(lambda_decompose(&a, 0.3, tols()), Err(JbError::InvalidLambda(_))));
    }

    #[test]
    fn tall_matrices_decompose_into_isometries() {
        let a = MatrixElement::from_real(3, 2, &[0.3, 0.1, -0.2, 0.5, 0.1, 0.2]).unwrap();
        let bound = (1.0 + m_q(&a, tols().rank_tol)) / 2.0;
        let cert = lambda_decompose(&a, bound, tols()).unwrap();
        assert!(cert.is_valid());
        let e = cert.e.element().entries();
        assert!((e.adjoint() * e - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn mean_decomposition_examples() {
        let zero = MatrixElement::zeros(&TripleSpace::rectangular(2, 2).unwrap());
        let cert = mean_of_two_extremals(&zero, tols()).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.lambda, 0.5);
        // antipodal unitaries
        assert!((cert.e.element() + cert.u.element()).norm() < 1e-15);

        let a = MatrixElement::diag(&[1.0, 0.0]).unwrap();
        let cert = mean_of_two_extremals(&a, tols()).unwrap();
        let e1 = MatrixElement::diag_complex(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let e2 = MatrixElement::diag_complex(&[c(1.0, 0.0), c(0.0, -1.0)]).unwrap();
        // the kernel block is gauge dependent up to a phase
        let e = cert.e.element().entries();
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((e[(1, 1)].norm() - 1.0).abs() < 1e-15);
        assert!(cert.e.is_unitary() && cert.u.is_unitary());
        assert!(cert.residual_for(&a) < 1e-15);
        assert!((&e1.scale_real(0.5) + &e2.scale_real(0.5)).max_abs_diff(&a) < 1e-15);

        let wide = MatrixElement::from_real(2, 3, &[0.6, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let cert = mean_of_two_extremals(&wide, tols()).unwrap();
        assert!(cert.is_valid());
        assert!(cert.reconstruction_residual <= 1e-12);
        assert!(!cert.e.is_unitary());

        assert!(matches!(
            mean_of_two_extremals(&a.scale_real(2.0), tols()),
            Err(JbError::NormExceedsOne { .. })
        ));
    }

    #[test]
    fn grid_decompositions() {
        let space = TripleSpace::integer_grid(3).unwrap();
        let a = MatrixElement::grid(space, &[c(0.0, 0.5), c(-0.6, 0.0), c(0.3, 0.4)]).unwrap();
        let cert = lambda_decompose(&a, 0.75, tols()).unwrap();
        assert!(cert.is_valid() && cert.reconstruction_residual < 1e-15);
        let cert = mean_of_two_extremals(&a, tols()).unwrap();
        assert!(cert.is_valid());
    }

    #[test]
    fn perturbation_examples() {
        let a = MatrixElement::diag(&[1.0, 0.0]).unwrap();
        let b = MatrixElement::diag(&[1.0, 0.1]).unwrap();
        let (z, cert) = perturb_to_quasi_invertible(&a, &b, 0.2, tols()).unwrap();
        assert!(z.max_abs_diff(&MatrixElement::diag(&[1.2, 0.2]).unwrap()) < 1e-15);
        assert!((cert.m_q_z - 0.2).abs() < 1e-15);
        assert!((cert.lower_bound - 0.1).abs() < 1e-15);
        assert!(cert.holds());

        let a = MatrixElement::from_real(2, 3, &[0.3, 0.1, -0.2, 0.5, 0.1, 0.2]).unwrap();
        let (_, cert) = perturb_to_quasi_invertible(&a, &a, 0.25, tols()).unwrap();
        assert!(cert.m_q_z >= 0.25 + m_q(&a, 1e-9) - 1e-14);
        assert!(cert.holds());
    }

    #[test]
    fn perturbation_preconditions() {
        let a = MatrixElement::diag(&[1.0, 0.0]).unwrap();
        let b = MatrixElement::diag(&[1.0, 0.1]).unwrap();
        assert!(matches!(
            perturb_to_quasi_invertible(&a, &b, 0.05, tols()),
            Err(JbError::PreconditionViolated(_))
        ));
        assert!(matches!(
            perturb_to_quasi_invertible(&b, &a, 1.0, tols()),
            Err(JbError::PreconditionViolated(_))
        ));
    }
}
