//! Ambient spaces and their elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{JbError, Result};

/// The concrete JB*-triple an element lives in.
#[derive(Debug, Clone, PartialEq)]
pub enum TripleSpace {
    /// The Cartan factor of type I, `M_{m,n}(C)`.
    Rectangular { rows: usize, cols: usize },
    /// `C_0(S ∪ {0})` on a finite grid. `points[0] == 0.0` is the pinned
    /// point where every function vanishes.
    Grid { points: Vec<f64> },
}

impl TripleSpace {
    pub fn rectangular(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(JbError::InvalidSpace(format!(
                "rectangular factor needs positive dimensions, got {rows}x{cols}"
            )));
        }
        Ok(TripleSpace::Rectangular { rows, cols })
    }

    pub fn grid(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(JbError::InvalidSpace(
                "grid needs the origin and at least one further point".into(),
            ));
        }
        if points[0] != 0.0 {
            return Err(JbError::InvalidSpace("first grid point must be 0".into()));
        }
        if points.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(JbError::InvalidSpace(
                "grid points must be finite and non-negative".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(JbError::InvalidSpace(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(TripleSpace::Grid { points })
    }

    /// Grid `{0, 1, ..., k}`; the `k` non-trivial points carry the data.
    pub fn integer_grid(k: usize) -> Result<Self> {
        Self::grid((0..=k).map(|p| p as f64).collect())
    }

    /// Shape of the backing storage. Grid elements are column vectors.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            TripleSpace::Rectangular { rows, cols } => (*rows, *cols),
            TripleSpace::Grid { points } => (points.len(), 1),
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, TripleSpace::Grid { .. })
    }

    /// Size of a maximal family of mutually orthogonal minimal tripotents:
    /// `min(m, n)` for matrices, the number of non-trivial points for grids.
    pub fn full_rank(&self) -> usize {
        match self {
            TripleSpace::Rectangular { rows, cols } => (*rows).min(*cols),
            TripleSpace::Grid { points } => points.len() - 1,
        }
    }

    /// Real dimension-spanning family `{E_ij, i E_ij}` (or `{δ_p, i δ_p}`).
    /// Real-linear and conjugate-linear operators are determined by their
    /// values on it.
    pub fn real_basis(&self) -> Vec<MatrixElement> {
        let (r, c) = self.shape();
        let first_row = usize::from(self.is_grid());
        let mut basis = Vec::with_capacity(2 * r * c);
        for i in first_row..r {
            for j in 0..c {
                for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                    let mut m = DMatrix::zeros(r, c);
                    m[(i, j)] = unit;
                    basis.push(MatrixElement {
                        space: self.clone(),
                        entries: m,
                    });
                }
            }
        }
        basis
    }
}

impl fmt::Display for TripleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleSpace::Rectangular { rows, cols } => write!(f, "M_{{{rows},{cols}}}"),
            TripleSpace::Grid { points } => write!(f, "C_0 on {} grid points", points.len()),
        }
    }
}

/// An element of a [`TripleSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElement {
    space: TripleSpace,
    entries: DMatrix<Complex64>,
}

impl MatrixElement {
    pub fn new(space: TripleSpace, entries: DMatrix<Complex64>) -> Result<Self> {
        let shape = space.shape();
        if entries.shape() != shape {
            return Err(JbError::ShapeMismatch(format!(
                "expected {}x{}, got {}x{}",
                shape.0,
                shape.1,
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(JbError::ShapeMismatch("entries must be finite".into()));
        }
        if space.is_grid() && entries[(0, 0)] != Complex64::new(0.0, 0.0) {
            return Err(JbError::ShapeMismatch(
                "grid element must vanish at the origin".into(),
            ));
        }
        Ok(Self { space, entries })
    }

    /// Wraps a matrix as an element of `M_{m,n}`.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        let space = TripleSpace::rectangular(entries.nrows(), entries.ncols())?;
        Self::new(space, entries)
    }

    /// Row-major real data.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        let vals: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &vals)
    }

    /// Row-major complex data.
    pub fn from_row_major(rows: usize, cols: usize, data: &[Complex64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(JbError::ShapeMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, data))
    }

    /// Square diagonal matrix with complex diagonal.
    pub fn diag_complex(values: &[Complex64]) -> Result<Self> {
        let k = values.len();
        let mut m = DMatrix::zeros(k, k);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Self::from_matrix(m)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let vals: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag_complex(&vals)
    }

    /// Element of `M_{1,1} = C`.
    pub fn scalar(value: Complex64) -> Self {
        Self::diag_complex(&[value]).expect("1x1 is a valid shape")
    }

    /// Grid element on `space`; `values` lists the entries at the non-zero
    /// points in order.
    pub fn grid(space: TripleSpace, values: &[Complex64]) -> Result<Self> {
        let TripleSpace::Grid { points } = &space else {
            return Err(JbError::InvalidSpace(format!("{space} is not a grid")));
        };
        if values.len() + 1 != points.len() {
            return Err(JbError::ShapeMismatch(format!(
                "{} values for {} non-zero grid points",
                values.len(),
                points.len() - 1
            )));
        }
        let mut m = DMatrix::zeros(points.len(), 1);
        for (i, v) in values.iter().enumerate() {
            m[(i + 1, 0)] = *v;
        }
        Self::new(space, m)
    }

    pub fn zeros(space: &TripleSpace) -> Self {
        let (r, c) = space.shape();
        Self {
            space: space.clone(),
            entries: DMatrix::zeros(r, c),
        }
    }

    pub fn space(&self) -> &TripleSpace {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.shape()
    }

    /// Values at the non-zero grid points; `None` for matrices.
    pub fn grid_values(&self) -> Option<&[Complex64]> {
        if self.space.is_grid() {
            Some(&self.entries.as_slice()[1..])
        } else {
            None
        }
    }

    /// JB*-norm: the spectral norm for matrices, the sup norm for grids.
    pub fn norm(&self) -> f64 {
        match self.space {
            TripleSpace::Rectangular { .. } => spectral_norm(&self.entries),
            TripleSpace::Grid { .. } => self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &MatrixElement) -> f64 {
        (self - other).norm()
    }

    pub fn check_same_space(&self, other: &MatrixElement) -> Result<()> {
        if self.space != other.space {
            return Err(JbError::SpaceMismatch {
                left: self.space.clone(),
                right: other.space.clone(),
            });
        }
        Ok(())
    }

    /// Builds an element of the same space from new entries. The caller
    /// guarantees the shape (and the grid zero) are preserved.
    pub(crate) fn with_entries(&self, entries: DMatrix<Complex64>) -> MatrixElement {
        debug_assert_eq!(entries.shape(), self.entries.shape());
        MatrixElement {
            space: self.space.clone(),
            entries,
        }
    }

    /// Applies `f` to every entry. `f(0)` must be `0` for grid elements.
    pub fn map_entries(&self, f: impl Fn(Complex64) -> Complex64) -> MatrixElement {
        let mut out = self.entries.map(f);
        if self.space.is_grid() {
            out[(0, 0)] = Complex64::new(0.0, 0.0);
        }
        self.with_entries(out)
    }

    pub fn scale(&self, c: Complex64) -> MatrixElement {
        self.with_entries(self.entries.map(|z| z * c))
    }

    pub fn scale_real(&self, c: f64) -> MatrixElement {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Unit-norm rescaling; the zero element is returned unchanged.
    pub fn normalized(&self) -> MatrixElement {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale_real(1.0 / n)
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &MatrixElement) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    crate::svd::singular_values(m).first().copied().unwrap_or(0.0)
}

fn assert_same(a: &MatrixElement, b: &MatrixElement) {
    assert!(
        a.space == b.space,
        "arithmetic between {} and {}",
        a.space,
        b.space
    );
}

impl Add for &MatrixElement {
    type Output = MatrixElement;
    fn add(self, rhs: &MatrixElement) -> MatrixElement {
        assert_same(self, rhs);
        self.with_entries(&self.entries + &rhs.entries)
    }
}

impl Sub for &MatrixElement {
    type Output = MatrixElement;
    fn sub(self, rhs: &MatrixElement) -> MatrixElement {
        assert_same(self, rhs);
        self.with_entries(&self.entries - &rhs.entries)
    }
}

impl Neg for &MatrixElement {
    type Output = MatrixElement;
    fn neg(self) -> MatrixElement {
        self.with_entries(-&self.entries)
    }
}

impl Mul<&MatrixElement> for f64 {
    type Output = MatrixElement;
    fn mul(self, rhs: &MatrixElement) -> MatrixElement {
        rhs.scale_real(self)
    }
}

impl Mul<&MatrixElement> for Complex64 {
    type Output = MatrixElement;
    fn mul(self, rhs: &MatrixElement) -> MatrixElement {
        rhs.scale(self)
    }
}
