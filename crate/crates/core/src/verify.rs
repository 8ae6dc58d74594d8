//! Randomized property suites.
//!
//! Each suite draws independent instances (one generator stream per trial,
//! so results do not depend on scheduling), evaluates a fixed list of named
//! checks and aggregates the worst residual per check. Thresholds default to
//! the values below; [`VerifyConfig::tol`] replaces every numeric threshold
//! at once.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{
    bergmann, classify_tripotent, max_on_basis, peirce_project, q_op, tp, Tripotent,
};
use crate::decompose::{
    lambda_decompose, mean_of_two_extremals, perturb_to_quasi_invertible,
};
use crate::element::{spectral_norm, MatrixElement, TripleSpace};
use crate::error::JbError;
use crate::geometry::{
    alpha_q, dist_to_extremals, dist_to_non_quasi_invertible, is_bp_quasi_invertible,
    lambda_value, DistanceResult,
};
use crate::oracle::{
    as_matrix, commutative_crosscheck, oracle_dist_extremals, oracle_dist_rank_deficient,
    oracle_lambda_max, random_element, random_element_of_rank, random_grid_space, random_space,
    random_tripotent, OracleConfig,
};
use crate::spectral::{
    compute_svd, generalized_inverse, m_q, odd_calculus, range_tripotent,
    triple_spectrum,
};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides every suite's default trial count.
    pub trials: Option<usize>,
    pub max_rows: usize,
    pub max_cols: usize,
    /// Overrides every numeric threshold.
    pub tol: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            max_rows: 5,
            max_cols: 7,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    AlgebraicAxioms,
    Peirce,
    GeneralizedInverse,
    SingularDistance,
    ExtremalDistanceQuasiInvertible,
    ExtremalDistanceSingular,
    LambdaDecomposition,
    MeanOfTwoExtremals,
    LambdaFunction,
    LipschitzHomogeneity,
    Perturbation,
    Commutative,
    SpectralInvariants,
    Orthogonality,
    ExtremePoints,
    QuasiInvertibility,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::AlgebraicAxioms,
        Suite::Peirce,
        Suite::GeneralizedInverse,
        Suite::SingularDistance,
        Suite::ExtremalDistanceQuasiInvertible,
        Suite::ExtremalDistanceSingular,
        Suite::LambdaDecomposition,
        Suite::MeanOfTwoExtremals,
        Suite::LambdaFunction,
        Suite::LipschitzHomogeneity,
        Suite::Perturbation,
        Suite::Commutative,
        Suite::SpectralInvariants,
        Suite::Orthogonality,
        Suite::ExtremePoints,
        Suite::QuasiInvertibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AlgebraicAxioms => "algebraic-axioms",
            Suite::Peirce => "peirce",
            Suite::GeneralizedInverse => "generalized-inverse",
            Suite::SingularDistance => "singular-distance",
            Suite::ExtremalDistanceQuasiInvertible => "extremal-distance-quasi-invertible",
            Suite::ExtremalDistanceSingular => "extremal-distance-singular",
            Suite::LambdaDecomposition => "lambda-decomposition",
            Suite::MeanOfTwoExtremals => "mean-of-two-extremals",
            Suite::LambdaFunction => "lambda-function",
            Suite::LipschitzHomogeneity => "lipschitz-homogeneity",
            Suite::Perturbation => "quasi-invertible-perturbation",
            Suite::Commutative => "commutative-crosscheck",
            Suite::SpectralInvariants => "spectral-invariants",
            Suite::Orthogonality => "orthogonality",
            Suite::ExtremePoints => "extreme-points",
            Suite::QuasiInvertibility => "quasi-invertibility",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::AlgebraicAxioms => "fundamental identity, Jordan identity and ‖{x,x,x}‖ = ‖x‖³",
            Suite::Peirce => "Peirce projections are complementary contractive idempotents, B(e,e) = P_0(e)",
            Suite::GeneralizedInverse => "Q(a)a† = a, Q(a†)a = a†, [Q(a),Q(a†)] = 0, Q(a)Q(a†) = P_2(r(a)), L(a,a†) = L(r(a),r(a))",
            Suite::SingularDistance => "m_q(a) = dist(a, non-quasi-invertibles), attained at a − m_q(a) r(a)",
            Suite::ExtremalDistanceQuasiInvertible => "dist(a, extreme points) = max{1 − m_q(a), ‖a‖ − 1} for quasi-invertible a",
            Suite::ExtremalDistanceSingular => "dist(a, extreme points) = 1 + α_q(a) = 1 for singular unit-ball a",
            Suite::LambdaDecomposition => "a = λe + (1−λ)u with extreme e, u iff λ ≤ (1 + m_q(a))/2",
            Suite::MeanOfTwoExtremals => "every unit-ball element is the mean of two extreme points (λ ≥ 1/2)",
            Suite::LambdaFunction => "λ(a) agrees with a direct search over decompositions",
            Suite::LipschitzHomogeneity => "m_q(ca) = |c| m_q(a) and |m_q(x) − m_q(y)| ≤ ‖x − y‖",
            Suite::Perturbation => "m_q(a + β r(b)) ≥ β − ‖b − a‖ and P_2(r(b))a + β r(b) invertible",
            Suite::Commutative => "grid model and diagonal matrices agree; commutative singular distance max{1 + α_q, ‖a‖ − 1}",
            Suite::SpectralInvariants => "SVD reconstruction, S(f(a)) = f(S(a)), spectrum invariant under embedding, gauge invariance",
            Suite::Orthogonality => "{a,a,b} = 0 iff {b,b,a} = 0 iff ab* = 0 = b*a",
            Suite::ExtremePoints => "‖a‖ = m_q(a) > 0 iff a/‖a‖ is a complete tripotent",
            Suite::QuasiInvertibility => "quasi-invertible iff a = αv1 + (1−α)v2 with α < 1/2; singular a admit no λ > 1/2",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::AlgebraicAxioms => 1000,
            Suite::Peirce => 200,
            Suite::GeneralizedInverse => 500,
            Suite::SingularDistance => 500,
            Suite::ExtremalDistanceQuasiInvertible => 500,
            Suite::ExtremalDistanceSingular => 200,
            Suite::LambdaDecomposition => 200,
            Suite::MeanOfTwoExtremals => 200,
            Suite::LambdaFunction => 100,
            Suite::LipschitzHomogeneity => 500,
            Suite::Perturbation => 200,
            Suite::Commutative => 500,
            Suite::SpectralInvariants => 200,
            Suite::Orthogonality => 200,
            Suite::ExtremePoints => 200,
            Suite::QuasiInvertibility => 200,
        }
    }

    fn checks(self) -> Vec<Check> {
        use Check as C;
        match self {
            Suite::AlgebraicAxioms => vec![
                C::num("fundamental identity", 1e-9),
                C::num("Jordan identity", 1e-9),
                C::num("cube identity", 1e-9),
            ],
            Suite::Peirce => vec![
                C::num("idempotent", 1e-9),
                C::num("mutually annihilating", 1e-9),
                C::num("sum to identity", 1e-9),
                C::num("contractive", 1e-9),
                C::num("B(e,e) = P_0(e)", 1e-9),
                C::num("{E_2, E_0, E} = 0", 1e-9),
                C::num("complete => P_0 = 0", 1e-9),
            ],
            Suite::GeneralizedInverse => vec![
                C::num("Q(a)a† = a", 1e-9),
                C::num("Q(a†)a = a†", 1e-9),
                C::num("[Q(a),Q(a†)] = 0", 1e-9),
                C::num("Q(a)Q(a†) = P_2(r(a))", 1e-9),
                C::num("L(a,a†) = L(r(a),r(a))", 1e-9),
            ],
            Suite::SingularDistance => vec![
                C::num("m_q vs truncated-SVD distance", 1e-8),
                C::num("‖a − y0‖ = m_q(a)", 1e-10),
                C::flag("y0 singular"),
                C::flag("no closer sampled singular matrix"),
            ],
            Suite::ExtremalDistanceQuasiInvertible => vec![
                C::num("formula vs oracle", 1e-6),
                C::flag("exact result"),
                C::flag("no closer sampled extreme point"),
                C::flag("oracle above lower bound"),
            ],
            Suite::ExtremalDistanceSingular => vec![
                C::num("oracle distance = 1", 1e-6),
                C::flag("exact result equal to 1"),
                C::flag("no closer sampled extreme point"),
            ],
            Suite::LambdaDecomposition => vec![
                C::num("reconstruction", 1e-10),
                C::flag("factors complete"),
                C::flag("bound + 0.01 rejected"),
            ],
            Suite::MeanOfTwoExtremals => vec![
                C::num("reconstruction", 1e-10),
                C::flag("factors complete"),
                C::flag("lambda(a) >= 1/2"),
            ],
            Suite::LambdaFunction => vec![C::num("|lambda − search|", 0.02)],
            Suite::LipschitzHomogeneity => vec![
                C::num("homogeneity (relative)", 1e-12),
                C::num("Lipschitz excess", 1e-9),
                C::flag("alpha_q Lipschitz"),
            ],
            Suite::Perturbation => vec![
                C::num("m_q(z) deficit", 1e-9),
                C::flag("z quasi-invertible"),
                C::flag("Peirce-2 invertible"),
            ],
            Suite::Commutative => vec![
                C::num("model deviation", 1e-10),
                C::flag("all cross-checks pass"),
            ],
            Suite::SpectralInvariants => vec![
                C::num("reconstruction", 1e-10),
                C::num("orthonormal columns", 1e-10),
                C::num("‖a‖ = max S_a", 1e-12),
                C::num("S(f(a)) = f(S(a))", 1e-10),
                C::num("embedding invariance", 1e-10),
                C::num("gauge invariance of r(a)", 1e-10),
                C::num("a r(a)* hermitian", 1e-10),
            ],
            Suite::Orthogonality => vec![
                C::flag("{a,a,b}=0 iff {b,b,a}=0"),
                C::flag("matches ab* = 0 = b*a"),
                C::flag("constructed pairs orthogonal"),
            ],
            Suite::ExtremePoints => vec![
                C::flag("characterization agrees"),
                C::flag("lambda = 1 exactly on extreme points"),
            ],
            Suite::QuasiInvertibility => vec![
                C::flag("weight alpha < 1/2 available"),
                C::flag("‖a − v2‖ < 1 and quasi-invertible"),
                C::flag("singular: no lambda > 1/2"),
                C::flag("singular: lambda_decompose refuses"),
            ],
        }
    }

    fn run_trial(self, rng: &mut ChaCha8Rng, trial: usize, cfg: &VerifyConfig) -> Vec<f64> {
        let ctx = TrialCtx { trial, cfg };
        match self {
            Suite::AlgebraicAxioms => algebraic_axioms(rng, &ctx),
            Suite::Peirce => peirce(rng, &ctx),
            Suite::GeneralizedInverse => gen_inverse(rng, &ctx),
            Suite::SingularDistance => singular_distance(rng, &ctx),
            Suite::ExtremalDistanceQuasiInvertible => extremal_qi(rng, &ctx),
            Suite::ExtremalDistanceSingular => extremal_singular(rng, &ctx),
            Suite::LambdaDecomposition => lambda_decomposition(rng, &ctx),
            Suite::MeanOfTwoExtremals => mean_extremals(rng, &ctx),
            Suite::LambdaFunction => lambda_function(rng, &ctx),
            Suite::LipschitzHomogeneity => lipschitz(rng, &ctx),
            Suite::Perturbation => perturbation(rng, &ctx),
            Suite::Commutative => commutative(rng, &ctx),
            Suite::SpectralInvariants => spectral_invariants(rng, &ctx),
            Suite::Orthogonality => orthogonality(rng, &ctx),
            Suite::ExtremePoints => extreme_points(rng, &ctx),
            Suite::QuasiInvertibility => quasi_invertibility(rng, &ctx),
        }
    }

    fn stream(self) -> u64 {
        (Suite::ALL.iter().position(|s| *s == self).expect("listed") as u64 + 1) << 32
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
struct Check {
    name: &'static str,
    /// `None` for pass/fail flags (residual 0 or 1).
    threshold: Option<f64>,
}

impl Check {
    const fn num(name: &'static str, threshold: f64) -> Self {
        Self { name, threshold: Some(threshold) }
    }

    const fn flag(name: &'static str) -> Self {
        Self { name, threshold: None }
    }
}

/// Residual for a boolean check.
fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    /// `None` for pass/fail flags.
    pub threshold: Option<f64>,
    pub worst: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteFailure {
    pub trial: usize,
    pub seed: u64,
    pub check: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    pub checks: Vec<CheckSummary>,
    pub first_failure: Option<SuiteFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteReport>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }
}

fn passes(residual: f64, threshold: Option<f64>) -> bool {
    match threshold {
        Some(t) => residual <= t,
        None => residual == 0.0,
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let trials = cfg.trials.unwrap_or_else(|| suite.default_trials());
    let checks: Vec<Check> = suite
        .checks()
        .iter()
        .map(|c| Check {
            name: c.name,
            threshold: c.threshold.map(|t| cfg.tol.unwrap_or(t)),
        })
        .collect();
    let oracle = OracleConfig { seed: cfg.seed, ..Default::default() };
    let results: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = oracle.rng(suite.stream() + trial as u64);
            suite.run_trial(&mut rng, trial, cfg)
        })
        .collect();

    let mut summaries: Vec<CheckSummary> = checks
        .iter()
        .map(|c| CheckSummary { name: c.name, threshold: c.threshold, worst: 0.0, failures: 0 })
        .collect();
    let mut passed = 0;
    let mut first_failure = None;
    for (trial, residuals) in results.iter().enumerate() {
        debug_assert_eq!(residuals.len(), checks.len());
        let mut trial_ok = true;
        for ((check, summary), &r) in checks.iter().zip(summaries.iter_mut()).zip(residuals) {
            if r.is_nan() || r > summary.worst {
                summary.worst = if r.is_nan() { f64::NAN } else { r };
            }
            if !passes(r, check.threshold) {
                trial_ok = false;
                summary.failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(SuiteFailure {
                        trial,
                        seed: cfg.seed,
                        check: check.name,
                        residual: r,
                    });
                }
            }
        }
        if trial_ok {
            passed += 1;
        }
    }
    SuiteReport { suite, trials, passed, checks: summaries, first_failure }
}

pub fn run_all(cfg: &VerifyConfig) -> VerifySummary {
    VerifySummary {
        config: *cfg,
        suites: Suite::ALL.iter().map(|s| run_suite(*s, cfg)).collect(),
    }
}

struct TrialCtx<'a> {
    trial: usize,
    cfg: &'a VerifyConfig,
}

impl TrialCtx<'_> {
    fn tols(&self) -> Tolerances {
        Tolerances::default()
    }

    fn oracle(&self, trials: usize) -> OracleConfig {
        OracleConfig {
            seed: self.cfg.seed ^ (self.trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            trials,
            ..Default::default()
        }
    }

    /// Matrices most of the time, a grid one trial in five.
    fn space(&self, rng: &mut ChaCha8Rng, allow_grid: bool) -> TripleSpace {
        if allow_grid && self.trial % 5 == 4 {
            random_grid_space(rng, self.cfg.max_rows.max(self.cfg.max_cols).min(6))
        } else {
            random_space(rng, self.cfg.max_rows, self.cfg.max_cols)
        }
    }
}

fn rel(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

fn algebraic_axioms(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let mut draw = || random_element(&space, rng, Some(3.0));
    let (x, y, z, a, b) = (draw(), draw(), draw(), draw(), draw());
    let (nx, ny, nz, na, nb) = (x.norm(), y.norm(), z.norm(), a.norm(), b.norm());

    let lhs = q_op(&x, &q_op(&y, &q_op(&x, &z)));
    let rhs = q_op(&q_op(&x, &y), &z);
    let fundamental = rel(lhs.distance(&rhs), nx.powi(4) * ny * ny * nz);

    let left = tp(&a, &b, &tp(&x, &y, &z));
    let right = &(&tp(&tp(&a, &b, &x), &y, &z) - &tp(&x, &tp(&b, &a, &y), &z))
        + &tp(&x, &y, &tp(&a, &b, &z));
    let jordan = rel(left.distance(&right), na * nb * nx * ny * nz);

    let cube = rel((tp(&x, &x, &x).norm() - nx.powi(3)).abs(), nx.powi(3));
    vec![fundamental, jordan, cube]
}

fn peirce(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let complete = rng.random_bool(0.5);
    let e = random_tripotent(&space, rng, complete);
    let x = random_element(&space, rng, Some(3.0));
    let y = random_element(&space, rng, Some(3.0));
    let z = random_element(&space, rng, Some(3.0));
    let nx = x.norm();
    let p = |k: u8, v: &MatrixElement| peirce_project(&e, k, v).expect("same space");
    let proj: Vec<MatrixElement> = (0..3).map(|k| p(k, &x)).collect();

    let idempotent = (0..3u8)
        .map(|k| p(k, &proj[k as usize]).distance(&proj[k as usize]))
        .fold(0.0, f64::max);
    let mut annihilating: f64 = 0.0;
    for j in 0..3u8 {
        for k in 0..3u8 {
            if j != k {
                annihilating = annihilating.max(p(j, &proj[k as usize]).norm());
            }
        }
    }
    let sum = (&(&proj[0] + &proj[1]) + &proj[2]).distance(&x);
    let contractive = proj.iter().map(|v| (v.norm() - nx).max(0.0)).fold(0.0, f64::max);
    let bergmann_res = bergmann(e.element(), e.element(), &x).distance(&proj[0]);
    let (p2x, p0y, p0x, p2y) = (p(2, &x), p(0, &y), p(0, &x), p(2, &y));
    let rule = tp(&p2x, &p0y, &z).norm().max(tp(&p0x, &p2y, &z).norm());
    let complete_zero = if e.is_complete() { proj[0].norm() } else { 0.0 };
    vec![
        rel(idempotent, nx),
        rel(annihilating, nx),
        rel(sum, nx),
        rel(contractive, nx),
        rel(bergmann_res, nx),
        rel(rule, nx * y.norm() * z.norm()),
        rel(complete_zero, nx),
    ]
}

/// Half full rank, half with a forced rank in `1..full`.
fn mixed_rank(rng: &mut ChaCha8Rng, space: &TripleSpace, trial: usize, cap: f64) -> MatrixElement {
    let full = space.full_rank();
    if trial % 2 == 1 && full > 1 {
        let r = rng.random_range(1..full);
        random_element_of_rank(space, rng, r, Some(cap))
    } else {
        random_element(space, rng, Some(cap))
    }
}

fn gen_inverse(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let a = mixed_rank(rng, &space, ctx.trial, 3.0);
    let tols = ctx.tols();
    let b = generalized_inverse(&a, tols.rank_tol).expect("non-zero");
    let r = range_tripotent(&a, tols).expect("non-zero");
    let (na, nb) = (a.norm(), b.norm());
    let scale2 = na * na * nb * nb;
    let q1 = rel(q_op(&a, &b).distance(&a), na);
    let q2 = rel(q_op(&b, &a).distance(&b), nb);
    let comm = max_on_basis(&space, |z| &q_op(&a, &q_op(&b, z)) - &q_op(&b, &q_op(&a, z)));
    let p2 = max_on_basis(&space, |z| {
        &q_op(&a, &q_op(&b, z)) - &peirce_project(&r, 2, z).expect("same space")
    });
    let l = max_on_basis(&space, |z| &tp(&a, &b, z) - &tp(r.element(), r.element(), z));
    vec![q1, q2, rel(comm, scale2), rel(p2, scale2), rel(l, na * nb)]
}

fn singular_distance(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, false);
    let a = random_element(&space, rng, Some(3.0));
    let tols = ctx.tols();
    let mq = m_q(&a, tols.rank_tol);
    let oracle = oracle_dist_rank_deficient(&a, &ctx.oracle(16));
    let (value, y0) = dist_to_non_quasi_invertible(&a, tols);
    vec![
        (mq - oracle.value).abs(),
        (a.distance(&y0) - value).abs(),
        // singular relative to the scale of `a`, not of `y0`
        flag(m_q(&y0, 0.0) <= tols.rank_tol * a.norm()),
        flag(oracle.consistent),
    ]
}

fn extremal_qi(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, false);
    let a = random_element(&space, rng, Some(3.0));
    let tols = ctx.tols();
    let formula = dist_to_extremals(&a, tols);
    let oracle = oracle_dist_extremals(&a, &ctx.oracle(16), tols);
    vec![
        (formula.lower() - oracle.estimate).abs(),
        flag(formula.exact().is_some()),
        flag(oracle.search_consistent),
        flag(oracle.lower_bound_pass),
    ]
}

fn extremal_singular(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, false);
    let r = rng.random_range(0..space.full_rank());
    let a = random_element_of_rank(&space, rng, r, Some(1.0));
    let tols = ctx.tols();
    let oracle = oracle_dist_extremals(&a, &ctx.oracle(16), tols);
    let exact_one = matches!(dist_to_extremals(&a, tols), DistanceResult::Exact { value, .. } if value == 1.0);
    vec![(oracle.estimate - 1.0).abs(), flag(exact_one), flag(oracle.search_consistent)]
}

fn lambda_decomposition(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let a = random_element(&space, rng, Some(1.0));
    let tols = ctx.tols();
    let bound = (1.0 + m_q(&a, tols.rank_tol)) / 2.0;
    let mut worst: f64 = 0.0;
    let mut complete = true;
    for j in 0..5 {
        let lambda = 0.5 + (bound - 0.5) * j as f64 / 4.0;
        match lambda_decompose(&a, lambda, tols) {
            Ok(cert) => {
                worst = worst.max(cert.reconstruction_residual);
                complete &= cert.e.is_complete() && cert.u.is_complete();
            }
            Err(_) => {
                worst = f64::INFINITY;
                complete = false;
            }
        }
    }
    let rejected = matches!(
        lambda_decompose(&a, bound + 0.01, tols),
        Err(JbError::LambdaTooLarge { .. })
    );
    vec![worst, flag(complete), flag(rejected)]
}

fn mean_extremals(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let full = space.full_rank();
    let a = if ctx.trial % 2 == 1 {
        let r = rng.random_range(0..full);
        random_element_of_rank(&space, rng, r, Some(1.0))
    } else {
        random_element(&space, rng, Some(1.0))
    };
    let tols = ctx.tols();
    let lam_ok = lambda_value(&a, tols).is_ok_and(|l| l >= 0.5);
    match mean_of_two_extremals(&a, tols) {
        Ok(cert) => vec![
            cert.reconstruction_residual,
            flag(cert.e.is_complete() && cert.u.is_complete() && cert.lambda == 0.5),
            flag(lam_ok),
        ],
        Err(_) => vec![f64::INFINITY, 1.0, flag(lam_ok)],
    }
}

fn lambda_function(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = random_space(rng, ctx.cfg.max_rows.min(3), ctx.cfg.max_cols.min(3));
    let full = space.full_rank();
    let a = if ctx.trial % 2 == 1 {
        let r = rng.random_range(0..full);
        random_element_of_rank(&space, rng, r, Some(1.0))
    } else {
        random_element(&space, rng, Some(1.0))
    };
    let cfg = OracleConfig { tol: 1e-3, ..ctx.oracle(64) };
    let formula = lambda_value(&a, ctx.tols()).unwrap_or(f64::NAN);
    let search = oracle_lambda_max(&a, &cfg).unwrap_or(f64::NAN);
    vec![(formula - search).abs()]
}

fn lipschitz(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let x = mixed_rank(rng, &space, ctx.trial, 3.0);
    let tols = ctx.tols();
    let modulus = 10f64.powf(rng.random_range(-1.0..1.0));
    let c = Complex64::from_polar(modulus, rng.random::<f64>() * std::f64::consts::TAU);
    let mx = m_q(&x, tols.rank_tol);
    let mcx = m_q(&x.scale(c), tols.rank_tol);
    let homogeneity = if mx == 0.0 { mcx } else { (mcx - modulus * mx).abs() / (modulus * mx) };

    let y = if rng.random_bool(0.25) {
        let r = rng.random_range(0..space.full_rank());
        random_element_of_rank(&space, rng, r, Some(3.0))
    } else {
        let d = random_element(&space, rng, None).normalized();
        &x + &d.scale_real(x.norm() * 10f64.powf(rng.random_range(-3.0..0.0)))
    };
    let dist = x.distance(&y);
    let excess = ((mx - m_q(&y, tols.rank_tol)).abs() - dist).max(0.0);
    let ax = alpha_q(&x, 1e-6, tols).value;
    let ay = alpha_q(&y, 1e-6, tols).value;
    vec![homogeneity, excess, flag((ax - ay).abs() <= dist)]
}

fn perturbation(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let b = random_element(&space, rng, Some(2.0));
    let tols = ctx.tols();
    let a = if ctx.trial.is_multiple_of(3) {
        dist_to_non_quasi_invertible(&b, tols).1
    } else {
        let g = random_element(&space, rng, None).normalized();
        &b + &g.scale_real(0.5 * (1.0 - rng.random::<f64>()))
    };
    let beta = a.distance(&b) * (1.0 + rng.random_range(0.01..2.0)) + 1e-12;
    match perturb_to_quasi_invertible(&a, &b, beta, tols) {
        Ok((_, cert)) => vec![
            (cert.lower_bound - cert.m_q_z).max(0.0),
            flag(cert.z_quasi_invertible),
            flag(cert.peirce2_invertible),
        ],
        Err(_) => vec![f64::INFINITY, 1.0, 1.0],
    }
}

fn commutative(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let k = rng.random_range(1..=6);
    let space = TripleSpace::integer_grid(k).expect("k >= 1");
    let deficient = ctx.trial.is_multiple_of(3);
    let a = if deficient {
        let r = rng.random_range(0..k);
        random_element_of_rank(&space, rng, r, Some(3.0))
    } else {
        random_element(&space, rng, Some(3.0))
    };
    let values = a.grid_values().expect("grid").to_vec();
    match commutative_crosscheck(&values, &ctx.oracle(16), ctx.tols()) {
        Ok(report) => vec![report.worst_deviation(), flag(report.passed())],
        Err(_) => vec![f64::INFINITY, 1.0],
    }
}

fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let space = TripleSpace::rectangular(n, n).expect("n >= 1");
    random_tripotent(&space, rng, true).into_element().into_entries()
}

fn spectral_invariants(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, false);
    let (m, n) = space.shape();
    let a = mixed_rank(rng, &space, ctx.trial, 3.0);
    let tols = ctx.tols();
    let na = a.norm();
    let sd = compute_svd(&a, tols.rank_tol).expect("rectangular");
    let recon = rel((a.entries() - sd.reconstruct()).norm(), na);
    let k = sd.sigma.len();
    let eye = DMatrix::<Complex64>::identity(k, k);
    let ortho = (sd.left_vectors.adjoint() * &sd.left_vectors - &eye)
        .norm()
        .max((sd.right_vectors.adjoint() * &sd.right_vectors - &eye).norm());
    let s = triple_spectrum(&a, tols.rank_tol);
    let top = rel((s.last().copied().unwrap_or(0.0) - na).abs(), na);

    let f = |t: f64| t * t * t + t.cbrt();
    let fa = odd_calculus(&a, f, tols.rank_tol);
    let mut expected: Vec<f64> = s.iter().map(|&t| f(t)).collect();
    expected.sort_by(f64::total_cmp);
    let got = triple_spectrum(&fa, tols.rank_tol);
    let fmax = expected.last().copied().unwrap_or(1.0);
    let calculus = if got.len() == expected.len() {
        got.iter().zip(&expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / fmax
    } else {
        f64::INFINITY
    };

    let mut padded = DMatrix::zeros(m + 1, n + 1);
    padded.view_mut((0, 0), (m, n)).copy_from(a.entries());
    let big = MatrixElement::from_matrix(padded).expect("shape");
    let sb = triple_spectrum(&big, tols.rank_tol);
    let embed = if sb.len() == s.len() {
        sb.iter().zip(&s).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / na
    } else {
        f64::INFINITY
    };

    let (u, v) = (haar_unitary(rng, m), haar_unitary(rng, n));
    let rotated = MatrixElement::from_matrix(&u * a.entries() * &v).expect("shape");
    let r = range_tripotent(&a, tols).expect("non-zero");
    let r_rot = range_tripotent(&rotated, tols).expect("non-zero");
    let gauge = spectral_norm(&(&u * r.element().entries() * &v - r_rot.element().entries()));

    let ar = a.entries() * r.element().entries().adjoint();
    let herm = rel(spectral_norm(&(&ar - ar.adjoint())), na);
    vec![recon, ortho, top, calculus, embed, gauge, herm]
}

/// Pair supported on complementary singular blocks.
fn orthogonal_pair(rng: &mut ChaCha8Rng, space: &TripleSpace) -> (MatrixElement, MatrixElement) {
    let (m, n) = space.shape();
    let (u, v) = (haar_unitary(rng, m), haar_unitary(rng, n));
    let k = space.full_rank();
    let split = rng.random_range(0..=k);
    let mut da = DMatrix::<Complex64>::zeros(m, n);
    let mut db = DMatrix::<Complex64>::zeros(m, n);
    for i in 0..k {
        let s = Complex64::new(rng.random_range(0.1..2.0), 0.0);
        if i < split {
            da[(i, i)] = s;
        } else {
            db[(i, i)] = s;
        }
    }
    let wrap = |d: DMatrix<Complex64>| MatrixElement::from_matrix(&u * d * v.adjoint()).expect("shape");
    (wrap(da), wrap(db))
}

fn orthogonality(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, false);
    let constructed = ctx.trial.is_multiple_of(2);
    let (a, b) = if constructed {
        orthogonal_pair(rng, &space)
    } else {
        (random_element(&space, rng, Some(2.0)), random_element(&space, rng, Some(2.0)))
    };
    let tol = 1e-9;
    let ab = crate::algebra::are_orthogonal(&a, &b, tol);
    let ba = crate::algebra::are_orthogonal(&b, &a, tol);
    let scale = (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
    let matrix = spectral_norm(&(a.entries() * b.entries().adjoint())) <= tol * scale
        && spectral_norm(&(b.entries().adjoint() * a.entries())) <= tol * scale;
    vec![flag(ab == ba), flag(ab == matrix), flag(!constructed || ab)]
}

fn extreme_points(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let scale = rng.random_range(0.1..3.0);
    let a = match ctx.trial % 3 {
        0 => random_tripotent(&space, rng, true).element().scale_real(scale),
        1 => random_tripotent(&space, rng, false).element().scale_real(scale),
        _ => random_element(&space, rng, Some(3.0)),
    };
    let tols = ctx.tols();
    let na = a.norm();
    let mq = m_q(&a, tols.rank_tol);
    let by_norms = mq > 0.0 && (na - mq).abs() <= 1e-9 * na;
    let unit = a.normalized();
    let by_tripotent = !a.is_zero()
        && classify_tripotent(&unit, 1e-9).is_ok_and(|t: Tripotent| t.is_complete());
    let lambda_one = match lambda_value(&unit, tols) {
        Ok(l) => (l >= 1.0 - 1e-9) == by_tripotent,
        Err(_) => false,
    };
    vec![flag(by_norms == by_tripotent), flag(a.is_zero() || lambda_one)]
}

fn quasi_invertibility(rng: &mut ChaCha8Rng, ctx: &TrialCtx) -> Vec<f64> {
    let space = ctx.space(rng, true);
    let tols = ctx.tols();

    let a = random_element(&space, rng, Some(1.0));
    let (weight_ok, near_ok) = match lambda_value(&a, tols).and_then(|l| lambda_decompose(&a, l, tols)) {
        Ok(cert) => {
            let alpha = 1.0 - cert.lambda;
            let v2 = cert.e.element();
            let near = a.distance(v2) < 1.0 && is_bp_quasi_invertible(&a, tols).is_bp_quasi_invertible;
            (alpha < 0.5, near)
        }
        Err(_) => (false, false),
    };

    let r = rng.random_range(0..space.full_rank());
    let s = random_element_of_rank(&space, rng, r, Some(1.0));
    let sm = as_matrix(&s);
    let sm_elem = MatrixElement::from_matrix(sm.clone()).expect("shape");
    let mut candidates = vec![crate::oracle::random_tripotent(sm_elem.space(), rng, true)];
    if let Ok(rt) = range_tripotent(&sm_elem, tols) {
        // complete the range tripotent through a small perturbation
        let g = random_element(sm_elem.space(), rng, None).normalized().scale_real(1e-3);
        let svd = crate::svd::thin_svd((rt.element() + &g).entries());
        let e = MatrixElement::from_matrix(svd.compose(&vec![1.0; svd.sigma.len()])).expect("shape");
        candidates.push(classify_tripotent(&e, 1e-9).expect("polar factor"));
    }
    let mut none_above_half = true;
    for e in &candidates {
        for lambda in [0.51, 0.6, 0.75, 0.9, 1.0] {
            let gap = sm_elem.distance(&e.element().scale_real(lambda));
            if gap <= (1.0 - lambda) * (1.0 + 1e-9) {
                none_above_half = false;
            }
        }
    }
    let refuses = matches!(
        lambda_decompose(&s, 0.5, tols),
        Err(JbError::NotQuasiInvertible { .. })
    );
    vec![flag(weight_ok), flag(near_ok), flag(none_above_half), flag(refuses)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_have_distinct_names() {
        let mut names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), Suite::ALL.len());
    }

    #[test]
    fn small_budget_runs_pass() {
        let cfg = VerifyConfig { trials: Some(6), ..Default::default() };
        for suite in Suite::ALL {
            let report = run_suite(suite, &cfg);
            assert!(report.ok(), "{suite}: {report:?}");
        }
    }

    #[test]
    fn corrupted_tolerance_fails() {
        let cfg = VerifyConfig { trials: Some(3), tol: Some(1e-30), ..Default::default() };
        let report = run_suite(Suite::AlgebraicAxioms, &cfg);
        assert!(!report.ok());
        assert!(report.first_failure.is_some());
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = VerifyConfig { trials: Some(8), seed: 11, ..Default::default() };
        assert_eq!(run_suite(Suite::Peirce, &cfg), run_suite(Suite::Peirce, &cfg));
    }
}
