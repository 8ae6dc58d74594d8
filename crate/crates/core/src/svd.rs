//! Thin SVD backend.
//!
//! nalgebra's complex SVD can converge to inaccurate factors on
//! rank-deficient input (reconstruction errors around 1e-2 were observed),
//! so factorisations go through faer.

use faer::{c64, Mat};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) struct Thin {
    /// Descending.
    pub sigma: Vec<f64>,
    /// `m × k`, `k = min(m, n)`.
    pub u: DMatrix<Complex64>,
    /// `n × k`, so that `a = U diag(σ) V*`.
    pub v: DMatrix<Complex64>,
}

impl Thin {
    /// `U diag(s) V*`.
    pub fn compose(&self, s: &[f64]) -> DMatrix<Complex64> {
        let mut left = self.u.clone();
        for (mut col, &x) in left.column_iter_mut().zip(s) {
            col *= Complex64::new(x, 0.0);
        }
        left * self.v.adjoint()
    }
}

fn to_faer(a: &DMatrix<Complex64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

pub(crate) fn thin_svd(a: &DMatrix<Complex64>) -> Thin {
    let (m, n) = a.shape();
    let k = m.min(n);
    let svd = to_faer(a).thin_svd().expect("SVD failed to converge");
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let mut sigma: Vec<f64> = (0..k).map(|i| s[i].re).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    sigma = order.iter().map(|&i| sigma[i]).collect();
    Thin {
        sigma,
        u: DMatrix::from_fn(m, k, |i, c| u[(i, order[c])]),
        v: DMatrix::from_fn(n, k, |i, c| v[(i, order[c])]),
    }
}

/// Descending singular values.
pub(crate) fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    let (m, n) = a.shape();
    let s = to_faer(a).singular_values().expect("SVD failed to converge");
    let mut s: Vec<f64> = s.into_iter().take(m.min(n)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}
