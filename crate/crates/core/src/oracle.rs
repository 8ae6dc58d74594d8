//! Independent brute-force checks and random instance generation.
//!
//! The estimates here never go through the closed-form routines they are
//! compared with: distances are measured directly on explicit witnesses and
//! the λ-function is found by searching over extreme points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{classify_tripotent, Tripotent};
use crate::decompose::{lambda_decompose, mean_of_two_extremals};
use crate::element::{spectral_norm, MatrixElement, TripleSpace};
use crate::error::{JbError, Result};
use crate::geometry::{alpha_q, dist_to_extremals, lambda_value, DistanceResult};
use crate::spectral::{m_q, triple_spectrum};
use crate::svd::thin_svd;
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    /// Number of random samples or restarts per search.
    pub trials: usize,
    /// Number of λ steps between 0 and 1 in the λ search.
    pub search_grid: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 64,
            search_grid: 100,
            tol: 1e-9,
        }
    }
}

impl OracleConfig {
    /// Generator for stream `counter`; identical `(seed, counter)` pairs give
    /// identical draws regardless of scheduling.
    pub fn rng(&self, counter: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(counter);
        rng
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Uniform draw from `(0, cap]`.
fn uniform_up_to<R: Rng + ?Sized>(rng: &mut R, cap: f64) -> f64 {
    (1.0 - rng.random::<f64>()) * cap
}

/// Rectangular space with `1 ≤ m ≤ max_rows`, `1 ≤ n ≤ max_cols`.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, max_rows: usize, max_cols: usize) -> TripleSpace {
    let m = rng.random_range(1..=max_rows.max(1));
    let n = rng.random_range(1..=max_cols.max(1));
    TripleSpace::rectangular(m, n).expect("positive dimensions")
}

/// Grid space with `1..=max_points` non-trivial points at irregular positions.
pub fn random_grid_space<R: Rng + ?Sized>(rng: &mut R, max_points: usize) -> TripleSpace {
    let k = rng.random_range(1..=max_points.max(1));
    let mut points = vec![0.0];
    let mut p = 0.0;
    for _ in 0..k {
        p += 0.1 + rng.random::<f64>();
        points.push(p);
    }
    TripleSpace::grid(points).expect("increasing points")
}

/// Complex standard-normal entries, optionally rescaled to a norm drawn
/// uniformly from `(0, norm_cap]`.
pub fn random_element<R: Rng + ?Sized>(
    space: &TripleSpace,
    rng: &mut R,
    norm_cap: Option<f64>,
) -> MatrixElement {
    let (r, c) = space.shape();
    let mut m = gaussian_matrix(rng, r, c);
    if space.is_grid() {
        m[(0, 0)] = Complex64::new(0.0, 0.0);
    }
    let a = MatrixElement::new(space.clone(), m).expect("shape matches");
    match norm_cap {
        Some(cap) => {
            let target = uniform_up_to(rng, cap);
            a.normalized().scale_real(target)
        }
        None => a,
    }
}

/// Random element whose rank is forced to `rank` (clamped to the full rank):
/// the trailing singular values (or randomly chosen grid values) are set to
/// exactly zero.
pub fn random_element_of_rank<R: Rng + ?Sized>(
    space: &TripleSpace,
    rng: &mut R,
    rank: usize,
    norm_cap: Option<f64>,
) -> MatrixElement {
    let full = space.full_rank();
    let rank = rank.min(full);
    let a = random_element(space, rng, None);
    let reduced = match space {
        TripleSpace::Rectangular { .. } => {
            let svd = thin_svd(a.entries());
            let mut s = svd.sigma.clone();
            for x in s.iter_mut().skip(rank) {
                *x = 0.0;
            }
            MatrixElement::new(space.clone(), svd.compose(&s)).expect("shape")
        }
        TripleSpace::Grid { .. } => {
            let zeroed = sample(rng, full, full - rank);
            let mut m = a.entries().clone();
            for i in zeroed.iter() {
                m[(i + 1, 0)] = Complex64::new(0.0, 0.0);
            }
            MatrixElement::new(space.clone(), m).expect("shape")
        }
    };
    match norm_cap {
        Some(cap) if !reduced.is_zero() => {
            let target = uniform_up_to(rng, cap);
            reduced.normalized().scale_real(target)
        }
        _ => reduced,
    }
}

/// `U_k V_k*` from a thin SVD: a complete tripotent closest to `m`.
fn polar(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let svd = thin_svd(m);
    svd.compose(&vec![1.0; svd.sigma.len()])
}

/// Random tripotent. Complete ones set every singular value of a Gaussian
/// draw to 1; otherwise a random proper subset is kept at 1 and the rest
/// set to 0.
pub fn random_tripotent<R: Rng + ?Sized>(space: &TripleSpace, rng: &mut R, complete: bool) -> Tripotent {
    let full = space.full_rank();
    let keep: Vec<bool> = if complete {
        vec![true; full]
    } else {
        let rank = rng.random_range(0..full);
        let chosen = sample(rng, full, rank);
        let mut keep = vec![false; full];
        for i in chosen.iter() {
            keep[i] = true;
        }
        keep
    };
    let e = match space {
        TripleSpace::Rectangular { rows, cols } => {
            let g = gaussian_matrix(rng, *rows, *cols);
            let s: Vec<f64> = keep.iter().map(|&k| if k { 1.0 } else { 0.0 }).collect();
            thin_svd(&g).compose(&s)
        }
        TripleSpace::Grid { points } => {
            let mut m = DMatrix::zeros(points.len(), 1);
            for (i, k) in keep.iter().enumerate() {
                if *k {
                    let theta = rng.random::<f64>() * std::f64::consts::TAU;
                    m[(i + 1, 0)] = Complex64::from_polar(1.0, theta);
                }
            }
            m
        }
    };
    let e = MatrixElement::new(space.clone(), e).expect("shape");
    classify_tripotent(&e, 1e-9).expect("constructed as a tripotent")
}

/// Rectangular realisation: matrices as they are, grid elements as the
/// diagonal matrix of their non-trivial values.
pub fn as_matrix(a: &MatrixElement) -> DMatrix<Complex64> {
    match a.grid_values() {
        None => a.entries().clone(),
        Some(values) => {
            let k = values.len();
            DMatrix::from_fn(k, k, |i, j| if i == j { values[i] } else { Complex64::new(0.0, 0.0) })
        }
    }
}

/// `m` with its smallest singular value set to zero.
fn truncate_smallest(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let svd = thin_svd(m);
    let mut s = svd.sigma.clone();
    if let Some(last) = s.last_mut() {
        *last = 0.0;
    }
    svd.compose(&s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularDistanceOracle {
    /// `‖a − a_trunc‖` where `a_trunc` drops the smallest singular value.
    pub value: f64,
    /// Closest randomly sampled singular matrix.
    pub sampled_min: f64,
    /// No sample beat `value` by more than `tol`.
    pub consistent: bool,
}

/// Distance from `a` to the singular (rank-deficient) matrices, measured on
/// the truncated-SVD witness and probed by random singular samples.
pub fn oracle_dist_rank_deficient(a: &MatrixElement, cfg: &OracleConfig) -> SingularDistanceOracle {
    let m = as_matrix(a);
    let witness = truncate_smallest(&m);
    let value = spectral_norm(&(&m - &witness));
    let mut rng = cfg.rng(0x5eed_0001);
    let mut sampled_min = f64::INFINITY;
    for _ in 0..cfg.trials {
        let g = gaussian_matrix(&mut rng, m.nrows(), m.ncols());
        let scale = value.max(1e-3) * 10f64.powf(rng.random_range(-2.0..0.5));
        let g = &g * Complex64::new(scale / spectral_norm(&g).max(f64::MIN_POSITIVE), 0.0);
        let y = truncate_smallest(&(&m + g));
        sampled_min = sampled_min.min(spectral_norm(&(&m - &y)));
    }
    SingularDistanceOracle {
        value,
        sampled_min,
        consistent: sampled_min >= value - cfg.tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalDistanceOracle {
    /// Distance to the polar candidate `U_k V_k*`.
    pub estimate: f64,
    pub sampled_min: f64,
    /// No sampled extreme point beat the estimate by more than `tol`.
    pub search_consistent: bool,
    /// Lower bound reported by [`dist_to_extremals`].
    pub lower_bound: f64,
    pub lower_bound_pass: bool,
}

/// Distance from `a` to the extreme points of the closed unit ball, measured
/// at the polar candidate and challenged by random extreme points near it.
pub fn oracle_dist_extremals(
    a: &MatrixElement,
    cfg: &OracleConfig,
    tols: Tolerances,
) -> ExtremalDistanceOracle {
    let m = as_matrix(a);
    let candidate = polar(&m);
    let estimate = spectral_norm(&(&m - &candidate));
    let mut rng = cfg.rng(0x5eed_0002);
    let mut sampled_min = f64::INFINITY;
    let scales = [1e-3, 1e-2, 1e-1, 1.0];
    for t in 0..cfg.trials {
        let g = gaussian_matrix(&mut rng, m.nrows(), m.ncols());
        let sample = if t % 5 == 4 {
            polar(&g)
        } else {
            let s = scales[t % 4] * rng.random::<f64>();
            polar(&(&candidate + g * Complex64::new(s, 0.0)))
        };
        sampled_min = sampled_min.min(spectral_norm(&(&m - &sample)));
    }
    let lower_bound = dist_to_extremals(a, tols).lower();
    ExtremalDistanceOracle {
        estimate,
        sampled_min,
        search_consistent: sampled_min >= estimate - cfg.tol,
        lower_bound,
        lower_bound_pass: estimate >= lower_bound - cfg.tol,
    }
}

/// Largest dimension accepted by [`oracle_lambda_max`].
pub const LAMBDA_SEARCH_MAX_DIM: usize = 3;

const LOCAL_ITERATIONS: usize = 150;
const RANDOM_STARTS: usize = 2;

/// Local search over complete tripotents for `‖m − λ e‖ ≤ target`.
/// Returns the best point found and whether the target was reached.
fn local_search<R: Rng + ?Sized>(
    m: &DMatrix<Complex64>,
    lambda: f64,
    start: DMatrix<Complex64>,
    target: f64,
    rng: &mut R,
) -> (DMatrix<Complex64>, f64) {
    let objective = |e: &DMatrix<Complex64>| spectral_norm(&(m - e * Complex64::new(lambda, 0.0)));
    let mut e = start;
    let mut f = objective(&e);
    let mut step = 0.3;
    for _ in 0..LOCAL_ITERATIONS {
        if f <= target || step < 1e-7 {
            break;
        }
        let g = gaussian_matrix(rng, m.nrows(), m.ncols());
        let g = &g * Complex64::new(step / g.norm(), 0.0);
        let cand = polar(&(&e + g));
        let fc = objective(&cand);
        if fc < f {
            e = cand;
            f = fc;
            step *= 1.5;
        } else {
            step *= 0.7;
        }
    }
    (e, f)
}

fn lambda_search(a: &MatrixElement, cfg: &OracleConfig, polar_start: bool) -> Result<f64> {
    let norm = a.norm();
    if norm > 1.0 + 1e-9 {
        return Err(JbError::NormExceedsOne { norm, tol: 1e-9 });
    }
    let m = as_matrix(a);
    if m.nrows() > LAMBDA_SEARCH_MAX_DIM || m.ncols() > LAMBDA_SEARCH_MAX_DIM {
        return Err(JbError::PreconditionViolated(format!(
            "lambda search is limited to {LAMBDA_SEARCH_MAX_DIM}x{LAMBDA_SEARCH_MAX_DIM}"
        )));
    }
    let mut rng = cfg.rng(0x5eed_0003);
    let grid = cfg.search_grid.max(1);
    let mut warm: Option<DMatrix<Complex64>> = None;
    for j in 0..=grid {
        let lambda = 1.0 - j as f64 / grid as f64;
        // y = (a − λe)/(1 − λ) must satisfy ‖y‖ ≤ 1 + tol
        let target = (1.0 - lambda) * (1.0 + cfg.tol) + 1e-12;
        let mut starts: Vec<DMatrix<Complex64>> = Vec::new();
        if let Some(w) = warm.take() {
            starts.push(w);
        }
        if polar_start {
            starts.push(polar(&m));
        }
        for _ in 0..RANDOM_STARTS.max(cfg.trials / 32) {
            starts.push(polar(&gaussian_matrix(&mut rng, m.nrows(), m.ncols())));
        }
        let mut best: Option<(DMatrix<Complex64>, f64)> = None;
        for s in starts {
            let (e, f) = local_search(&m, lambda, s, target, &mut rng);
            if f <= target {
                return Ok(lambda);
            }
            if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
                best = Some((e, f));
            }
        }
        warm = best.map(|(e, _)| e);
    }
    Ok(0.0)
}

/// Largest λ on a descending grid for which a decomposition
/// `a = λ e + (1 − λ) y` with `e` extreme and `‖y‖ ≤ 1` is found by search.
///
/// Limited to spaces of size at most 3×3 (grids: at most 3 points besides
/// the origin).
pub fn oracle_lambda_max(a: &MatrixElement, cfg: &OracleConfig) -> Result<f64> {
    lambda_search(a, cfg, true)
}

/// Tolerance for agreement between the grid and diagonal-matrix models.
pub const CROSSCHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckLine {
    pub name: &'static str,
    pub grid: f64,
    pub matrix: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub lines: Vec<CrosscheckLine>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn worst_deviation(&self) -> f64 {
        self.lines
            .iter()
            .map(|l| (l.grid - l.matrix).abs())
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    fn push(&mut self, name: &'static str, grid: f64, matrix: f64) {
        let pass = (grid - matrix).abs() <= CROSSCHECK_TOL;
        self.lines.push(CrosscheckLine { name, grid, matrix, pass });
    }

    fn flag(&mut self, name: &'static str, ok: bool) {
        let v = if ok { 1.0 } else { 0.0 };
        self.lines.push(CrosscheckLine { name, grid: v, matrix: 1.0, pass: ok });
    }
}

/// Builds the same data as a grid element and as a diagonal matrix and
/// compares every derived quantity.
pub fn commutative_crosscheck(
    entries: &[Complex64],
    cfg: &OracleConfig,
    tols: Tolerances,
) -> Result<CrosscheckReport> {
    let grid = MatrixElement::grid(TripleSpace::integer_grid(entries.len())?, entries)?;
    let diag = MatrixElement::diag_complex(entries)?;
    let mut report = CrosscheckReport { lines: Vec::new() };

    let sg = triple_spectrum(&grid, tols.rank_tol);
    let sm = triple_spectrum(&diag, tols.rank_tol);
    report.push("spectrum size", sg.len() as f64, sm.len() as f64);
    for (x, y) in sg.iter().zip(&sm) {
        report.push("spectrum point", *x, *y);
    }
    report.push("norm", grid.norm(), diag.norm());
    let (mg, mm) = (m_q(&grid, tols.rank_tol), m_q(&diag, tols.rank_tol));
    report.push("m_q", mg, mm);
    report.push("alpha_q", alpha_q(&grid, 1e-6, tols).value, alpha_q(&diag, 1e-6, tols).value);

    let dg = dist_to_extremals(&grid, tols);
    let dm = dist_to_extremals(&diag, tols);
    match (dg, dm) {
        (DistanceResult::Exact { value: x, .. }, DistanceResult::Exact { value: y, .. }) => {
            report.push("distance to extremals", x, y)
        }
        (DistanceResult::Exact { value: x, .. }, DistanceResult::Interval { lower, upper, .. }) => {
            report.push("distance vs matrix lower bound", x, lower);
            report.flag("distance inside matrix interval", x <= upper);
        }
        _ => report.flag("grid distance is exact", false),
    }

    if mg == 0.0 {
        let norm = grid.norm();
        let expected = (1.0 + alpha_q(&grid, 1e-6, tols).value).max(norm - 1.0);
        report.push("commutative singular distance", dg.lower(), expected);
        let oracle = oracle_dist_extremals(&diag, cfg, tols);
        report.push("oracle singular distance", oracle.estimate, expected);
        report.flag("oracle search consistent", oracle.search_consistent);
    }

    match (lambda_value(&grid, tols), lambda_value(&diag, tols)) {
        (Ok(lg), Ok(lm)) => {
            report.push("lambda", lg, lm);
            let decompose = |a: &MatrixElement| {
                if m_q(a, tols.rank_tol) > 0.0 {
                    lambda_decompose(a, lg, tols)
                } else {
                    mean_of_two_extremals(a, tols)
                }
            };
            match (decompose(&grid), decompose(&diag)) {
                (Ok(cg), Ok(cm)) => {
                    report.push("decomposition weight", cg.lambda, cm.lambda);
                    report.flag(
                        "grid decomposition valid",
                        cg.is_valid() && cg.reconstruction_residual <= CROSSCHECK_TOL,
                    );
                    report.flag(
                        "matrix decomposition valid",
                        cm.is_valid() && cm.reconstruction_residual <= CROSSCHECK_TOL,
                    );
                }
                _ => report.flag("decompositions exist", false),
            }
        }
        (Err(_), Err(_)) => {}
        _ => report.flag("lambda defined in both models", false),
    }
    Ok(report)
}
