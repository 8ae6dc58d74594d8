//! Jordan triple product, the `L`, `Q` and Bergmann operators, Peirce
//! projections and tripotents.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::element::{MatrixElement, TripleSpace};
use crate::error::{JbError, Result};

fn check3(x: &MatrixElement, y: &MatrixElement, z: &MatrixElement) -> Result<()> {
    x.check_same_space(y)?;
    x.check_same_space(z)
}

/// Triple product without the space check.
pub(crate) fn tp(x: &MatrixElement, y: &MatrixElement, z: &MatrixElement) -> MatrixElement {
    let (xe, ye, ze) = (x.entries(), y.entries(), z.entries());
    let out = match x.space() {
        TripleSpace::Rectangular { .. } => {
            let ys = ye.adjoint();
            (xe * &ys * ze + ze * &ys * xe) * Complex64::new(0.5, 0.0)
        }
        TripleSpace::Grid { .. } => {
            DMatrix::from_fn(xe.nrows(), 1, |i, _| xe[(i, 0)] * ye[(i, 0)].conj() * ze[(i, 0)])
        }
    };
    x.with_entries(out)
}

pub(crate) fn q_op(x: &MatrixElement, y: &MatrixElement) -> MatrixElement {
    match x.space() {
        TripleSpace::Rectangular { .. } => {
            let xe = x.entries();
            x.with_entries(xe * y.entries().adjoint() * xe)
        }
        TripleSpace::Grid { .. } => tp(x, y, x),
    }
}

/// `{x,y,z} = (x y* z + z y* x) / 2`; pointwise `x · conj(y) · z` on grids.
///
/// Linear in `x` and `z`, conjugate-linear in `y`.
pub fn triple_product(
    x: &MatrixElement,
    y: &MatrixElement,
    z: &MatrixElement,
) -> Result<MatrixElement> {
    check3(x, y, z)?;
    Ok(tp(x, y, z))
}

/// `L(x,y) z = {x,y,z}`.
pub fn apply_l(x: &MatrixElement, y: &MatrixElement, z: &MatrixElement) -> Result<MatrixElement> {
    triple_product(x, y, z)
}

/// `Q(x) y = {x,y,x}`, conjugate-linear in `y`.
pub fn apply_q(x: &MatrixElement, y: &MatrixElement) -> Result<MatrixElement> {
    x.check_same_space(y)?;
    Ok(q_op(x, y))
}

pub(crate) fn bergmann(x: &MatrixElement, y: &MatrixElement, z: &MatrixElement) -> MatrixElement {
    let two_l = tp(x, y, z).scale_real(2.0);
    let qq = q_op(x, &q_op(y, z));
    &(z - &two_l) + &qq
}

/// Bergmann operator `B(x,y) z = z − 2{x,y,z} + Q(x)Q(y) z`.
pub fn bergmann_apply(
    x: &MatrixElement,
    y: &MatrixElement,
    z: &MatrixElement,
) -> Result<MatrixElement> {
    check3(x, y, z)?;
    Ok(bergmann(x, y, z))
}

/// `‖{e,e,e} − e‖`.
pub fn tripotency_residual(e: &MatrixElement) -> f64 {
    tp(e, e, e).distance(e)
}

/// True iff `‖{e,e,e} − e‖ ≤ tol`. For matrices this says `e` is a partial
/// isometry.
pub fn is_tripotent(e: &MatrixElement, tol: f64) -> bool {
    tripotency_residual(e) <= tol
}

/// A validated tripotent together with its completeness classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Tripotent {
    element: MatrixElement,
    is_complete: bool,
    is_unitary: bool,
    validation_tol: f64,
}

impl Tripotent {
    pub fn element(&self) -> &MatrixElement {
        &self.element
    }

    pub fn into_element(self) -> MatrixElement {
        self.element
    }

    /// `E_0(e) = {0}`; equivalently `e` is an extreme point of the closed unit ball.
    pub fn is_complete(&self) -> bool {
        self.is_complete
    }

    /// `L(e,e) = Id`.
    pub fn is_unitary(&self) -> bool {
        self.is_unitary
    }

    pub fn validation_tol(&self) -> f64 {
        self.validation_tol
    }

    pub fn space(&self) -> &TripleSpace {
        self.element.space()
    }
}

/// Validates `e` as a tripotent and decides completeness and unitarity.
///
/// Matrices: complete iff `e e* = I_m` or `e* e = I_n`, unitary iff both.
/// Grids: complete (and unitary) iff every non-trivial point carries a
/// unimodular value.
pub fn classify_tripotent(e: &MatrixElement, tol: f64) -> Result<Tripotent> {
    let residual = tripotency_residual(e);
    if !(residual <= tol) {
        return Err(JbError::NotATripotent { residual, tol });
    }
    let (is_complete, is_unitary) = match e.space() {
        TripleSpace::Rectangular { rows, cols } => {
            let m = e.entries();
            let left = m * m.adjoint() - DMatrix::<Complex64>::identity(*rows, *rows);
            let right = m.adjoint() * m - DMatrix::<Complex64>::identity(*cols, *cols);
            let co_isometry = crate::element::spectral_norm(&left) <= tol;
            let isometry = crate::element::spectral_norm(&right) <= tol;
            (co_isometry || isometry, co_isometry && isometry)
        }
        TripleSpace::Grid { .. } => {
            let unimodular = e
                .grid_values()
                .expect("grid element")
                .iter()
                .all(|z| (z.norm() - 1.0).abs() <= tol);
            (unimodular, unimodular)
        }
    };
    Ok(Tripotent {
        element: e.clone(),
        is_complete,
        is_unitary,
        validation_tol: tol,
    })
}

/// Peirce projection `P_k(e) x`:
/// `P_2 = Q(e)²`, `P_1 = 2(L(e,e) − Q(e)²)`, `P_0 = Id − 2L(e,e) + Q(e)²`.
pub fn peirce_project(e: &Tripotent, k: u8, x: &MatrixElement) -> Result<MatrixElement> {
    let e = e.element();
    e.check_same_space(x)?;
    let q2 = || q_op(e, &q_op(e, x));
    match k {
        2 => Ok(q2()),
        1 => Ok((&tp(e, e, x) - &q2()).scale_real(2.0)),
        0 => Ok(bergmann(e, e, x)),
        other => Err(JbError::InvalidPeirceIndex(other)),
    }
}

/// `a ⊥ b` iff `‖{a,a,b}‖ ≤ tol · ‖a‖² ‖b‖`.
pub fn are_orthogonal(a: &MatrixElement, b: &MatrixElement, tol: f64) -> bool {
    if a.check_same_space(b).is_err() {
        return false;
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return true;
    }
    tp(a, a, b).norm() <= tol * na * na * nb
}

/// Largest image norm of a real-linear (or conjugate-linear) operator over
/// the real basis of `space`. Zero iff the operator vanishes.
pub fn max_on_basis(
    space: &TripleSpace,
    mut op: impl FnMut(&MatrixElement) -> MatrixElement,
) -> f64 {
    space
        .real_basis()
        .iter()
        .map(|b| op(b).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &MatrixElement, b: &MatrixElement) -> bool {
        a.max_abs_diff(b) < 1e-12
    }

    #[test]
    fn row_tripotent_is_fixed_point() {
        let e = MatrixElement::from_real(1, 2, &[1.0, 0.0]).unwrap();
        assert!(close(&triple_product(&e, &e, &e).unwrap(), &e));
    }

    #[test]
    fn scalar_triple_product() {
        let x = MatrixElement::scalar(c(2.0, 0.0));
        let y = MatrixElement::scalar(c(0.0, 1.0));
        let z = MatrixElement::scalar(c(3.0, 0.0));
        let p = triple_product(&x, &y, &z).unwrap();
        assert!(close(&p, &MatrixElement::scalar(c(0.0, -6.0))));
    }

    #[test]
    fn diagonal_triple_product() {
        let x = MatrixElement::diag(&[1.0, 2.0]).unwrap();
        let y = MatrixElement::diag(&[1.0, 1.0]).unwrap();
        let z = MatrixElement::diag(&[1.0, 3.0]).unwrap();
        let p = triple_product(&x, &y, &z).unwrap();
        assert!(close(&p, &MatrixElement::diag(&[1.0, 6.0]).unwrap()));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let x = MatrixElement::diag(&[1.0, 2.0]).unwrap();
        let y = MatrixElement::from_real(2, 3, &[0.0; 6]).unwrap();
        assert!(matches!(
            triple_product(&x, &y, &x),
            Err(JbError::SpaceMismatch { .. })
        ));
        assert!(apply_q(&x, &y).is_err());
        assert!(bergmann_apply(&x, &x, &y).is_err());
    }

    #[test]
    fn l_operator_examples() {
        let e = MatrixElement::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(close(&apply_l(&e, &e, &e).unwrap(), &e));

        let a = MatrixElement::diag(&[2.0, 0.0]).unwrap();
        let x = MatrixElement::diag(&[1.0, 1.0]).unwrap();
        assert!(close(
            &apply_l(&a, &a, &x).unwrap(),
            &MatrixElement::diag(&[4.0, 0.0]).unwrap()
        ));

        let e11 = MatrixElement::diag(&[1.0, 0.0]).unwrap();
        let e22 = MatrixElement::diag(&[0.0, 1.0]).unwrap();
        let space = e11.space().clone();
        let worst = max_on_basis(&space, |z| apply_l(&e11, &e22, z).unwrap());
        assert_eq!(worst, 0.0);
    }

    #[test]
    fn q_operator_examples() {
        let e = MatrixElement::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(close(&apply_q(&e, &e).unwrap(), &e));

        let x = MatrixElement::scalar(c(0.0, 2.0));
        let b = MatrixElement::scalar(c(1.0, 0.0));
        assert!(close(&apply_q(&x, &b).unwrap(), &MatrixElement::scalar(c(-4.0, 0.0))));
    }

    #[test]
    fn fundamental_identity_spot_value() {
        let x = MatrixElement::diag(&[1.0, 2.0]).unwrap();
        let y = MatrixElement::diag(&[3.0, 1.0]).unwrap();
        let z = MatrixElement::diag(&[1.0, 1.0]).unwrap();
        let lhs = apply_q(&x, &apply_q(&y, &apply_q(&x, &z).unwrap()).unwrap()).unwrap();
        let rhs = apply_q(&apply_q(&x, &y).unwrap(), &z).unwrap();
        let expected = MatrixElement::diag(&[9.0, 16.0]).unwrap();
        assert!(close(&lhs, &expected));
        assert!(close(&rhs, &expected));
    }

    #[test]
    fn bergmann_examples() {
        let x = MatrixElement::from_real(2, 3, &[1.0, 2.0, 0.0, -1.0, 0.5, 3.0]).unwrap();
        let zero = MatrixElement::zeros(x.space());
        for z in x.space().real_basis() {
            assert!(close(&bergmann_apply(&x, &zero, &z).unwrap(), &z));
        }

        let e = classify_tripotent(&MatrixElement::diag(&[1.0, 0.0]).unwrap(), 1e-12).unwrap();
        for z in e.space().real_basis() {
            let b = bergmann_apply(e.element(), e.element(), &z).unwrap();
            assert!(close(&b, &peirce_project(&e, 0, &z).unwrap()));
        }
    }

    #[test]
    fn tripotent_recognition() {
        assert!(is_tripotent(&MatrixElement::diag(&[1.0, 1.0]).unwrap(), 1e-12));
        assert!(!is_tripotent(&MatrixElement::diag(&[0.5, 1.0]).unwrap(), 1e-9));
        assert!(is_tripotent(
            &MatrixElement::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn tripotent_classification() {
        let row = classify_tripotent(&MatrixElement::from_real(1, 2, &[1.0, 0.0]).unwrap(), 1e-12)
            .unwrap();
        assert!(row.is_complete() && !row.is_unitary());

        let partial = classify_tripotent(&MatrixElement::diag(&[1.0, 0.0]).unwrap(), 1e-12).unwrap();
        assert!(!partial.is_complete() && !partial.is_unitary());

        let id = classify_tripotent(&MatrixElement::diag(&[1.0, 1.0]).unwrap(), 1e-12).unwrap();
        assert!(id.is_complete() && id.is_unitary());

        let bad = classify_tripotent(&MatrixElement::diag(&[0.5, 1.0]).unwrap(), 1e-9);
        assert!(matches!(bad, Err(JbError::NotATripotent { .. })));
    }

    #[test]
    fn grid_tripotents() {
        let space = TripleSpace::integer_grid(3).unwrap();
        let full = MatrixElement::grid(space.clone(), &[c(1.0, 0.0), c(0.0, -1.0), c(0.6, 0.8)])
            .unwrap();
        let t = classify_tripotent(&full, 1e-12).unwrap();
        assert!(t.is_complete() && t.is_unitary());
        let partial = MatrixElement::grid(space, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(!classify_tripotent(&partial, 1e-12).unwrap().is_complete());
    }

    #[test]
    fn peirce_projections_of_diagonal_tripotent() {
        let e = classify_tripotent(&MatrixElement::diag(&[1.0, 0.0]).unwrap(), 1e-12).unwrap();
        let x = MatrixElement::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let p2 = peirce_project(&e, 2, &x).unwrap();
        let p1 = peirce_project(&e, 1, &x).unwrap();
        let p0 = peirce_project(&e, 0, &x).unwrap();
        assert!(close(&p2, &MatrixElement::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap()));
        assert!(close(&p1, &MatrixElement::from_real(2, 2, &[0.0, 2.0, 3.0, 0.0]).unwrap()));
        assert!(close(&p0, &MatrixElement::from_real(2, 2, &[0.0, 0.0, 0.0, 4.0]).unwrap()));
        assert!(close(&peirce_project(&e, 2, e.element()).unwrap(), e.element()));
        assert!(matches!(
            peirce_project(&e, 3, &x),
            Err(JbError::InvalidPeirceIndex(3))
        ));
    }

    #[test]
    fn complete_tripotent_has_trivial_peirce_zero_space() {
        let e = classify_tripotent(
            &MatrixElement::from_real(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap(),
            1e-12,
        )
        .unwrap();
        assert!(e.is_complete());
        let worst = max_on_basis(e.space(), |x| peirce_project(&e, 0, x).unwrap());
        assert!(worst < 1e-15);
    }

    #[test]
    fn orthogonality_examples() {
        let e11 = MatrixElement::diag(&[1.0, 0.0]).unwrap();
        let e22 = MatrixElement::diag(&[0.0, 1.0]).unwrap();
        assert!(are_orthogonal(&e11, &e22, 1e-12));
        let a = MatrixElement::from_real(2, 2, &[1.0, 2.0, -1.0, 0.5]).unwrap();
        assert!(!are_orthogonal(&a, &a, 1e-9));
        let a = MatrixElement::diag(&[1.0, 0.0, 0.0]).unwrap();
        let b = MatrixElement::diag(&[0.0, 0.0, 5.0]).unwrap();
        assert!(are_orthogonal(&a, &b, 1e-12));
        assert!(are_orthogonal(&b, &a, 1e-12));
    }
}
