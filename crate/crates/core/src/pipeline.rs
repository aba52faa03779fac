//! End-to-end construction: rescale, extend, separate, fit, avoid, verify.
//!
//! With interior (`Theorem1Discs`) the error budget is split in thirds. The
//! rescaled function `g` stays at distance at least `delta` from the
//! forbidden values on the closure of the interior, and both the fit and
//! the avoidance step change it by less than `delta / 2` each, which keeps
//! the interior clear. Without interior (`Theorem2EmptyInterior`) the whole
//! set is boundary and the budget splits in halves.

use serde::{Deserialize, Serialize};

use crate::avoid_countable::{avoid_set, AvoidanceReport};
use crate::avoid_one::{BoundaryCertifier, CertificateKind};
use crate::compact_set::{BoundingBox, CompactSetSample};
use crate::countable::{truncate_to_reach, ForbiddenSet, ForbiddenSpec, Source, TruncationParams};
use crate::error::{Error, Result, Stage};
use crate::mergelyan::{approximate_poly, disc_rescale, extend_to_k, FitMethod, FunctionEvaluator};
use crate::poly::{Polynomial, C64};

pub const DEFAULT_MAX_DEGREE: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Theorem1Discs,
    Theorem2EmptyInterior,
}

#[derive(Clone, Debug)]
pub struct ApproximationProblem {
    pub f: FunctionEvaluator,
    pub k: CompactSetSample,
    pub a: ForbiddenSet,
    pub eps: f64,
    pub mode: Mode,
    pub max_degree: usize,
    pub keep_iterates: bool,
}

impl ApproximationProblem {
    pub fn new(f: FunctionEvaluator, k: CompactSetSample, a: ForbiddenSet, eps: f64, mode: Mode) -> Self {
        ApproximationProblem {
            f,
            k,
            a,
            eps,
            mode,
            max_degree: DEFAULT_MAX_DEGREE,
            keep_iterates: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    /// `eps / 3` for the rescale; absent without interior.
    pub rescale: Option<f64>,
    pub mergelyan: f64,
    pub avoid: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub mode: Mode,
    pub eps: f64,
    pub budgets: Budgets,
    /// `max |g - f|` over all samples (0 without interior).
    pub g_error: f64,
    pub xi_per_component: Option<Vec<f64>>,
    /// Separation of `g` from the forbidden values on the closure of the
    /// interior; absent without interior or when there are no values.
    pub delta: Option<f64>,
    pub q_error: f64,
    pub q_degree: usize,
    pub fit_method: FitMethod,
    pub forbidden_source: Source,
    pub truncation_params: TruncationParams,
    pub avoid_report: AvoidanceReport,
    /// `max |f - p|` over all samples.
    pub final_sup_error: f64,
    /// `g_error + q_error + avoid_report.total_sup_change`, an upper bound
    /// for `final_sup_error`.
    pub triangle_bound: f64,
    /// `min |p - a_j|` over all samples, per forbidden value.
    pub final_min_margins: Vec<f64>,
    /// Certificates over all samples, per forbidden value.
    pub final_certificates: Vec<CertificateKind>,
    pub certified: bool,
}

/// `delta = min |g(z) - a|` over closure-of-interior samples and `a` in `A`,
/// lowered by a Lipschitz slack `L * mesh` so that it bounds the minimum
/// over the true set. Infinite when `A` is empty.
pub fn estimate_delta(g: &FunctionEvaluator, k: &CompactSetSample, a: &ForbiddenSet) -> Result<f64> {
    let points = k.closure_interior_points();
    if points.is_empty() {
        return Err(Error::EmptySamples);
    }
    if a.is_empty() {
        return Ok(f64::INFINITY);
    }
    let values = g.eval_many(points);
    let raw = values
        .iter()
        .flat_map(|&v| a.values().iter().map(move |&x| (v - x).norm()))
        .fold(f64::INFINITY, f64::min);
    let slack = lipschitz_estimate(g, points, k.mesh()) * k.mesh();
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let floor = 1e-12 * scale;
    let delta = raw - slack;
    if !(delta > floor) {
        return Err(Error::DeltaNotPositive { delta, floor });
    }
    Ok(delta)
}

/// Largest difference quotient of `g` over steps of length `h` from a
/// thinned subset of the points, in four directions, inflated by 5%.
fn lipschitz_estimate(g: &FunctionEvaluator, points: &[C64], h: f64) -> f64 {
    let stride = points.len().div_ceil(4000).max(1);
    let dirs = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
    let mut lip: f64 = 0.0;
    for &z in points.iter().step_by(stride) {
        let v = g.eval(z);
        for d in dirs {
            lip = lip.max((g.eval(z + d * h) - v).norm() / h);
        }
    }
    1.05 * lip
}

/// Runs the construction and verifies the result on every sample.
pub fn run(problem: &ApproximationProblem) -> Result<(Polynomial, PipelineReport)> {
    let ApproximationProblem {
        f,
        k,
        a,
        eps,
        mode,
        max_degree,
        keep_iterates,
    } = problem;
    let eps = *eps;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }

    let (g, xi, delta, budgets) = match mode {
        Mode::Theorem1Discs => {
            if k.discs().is_empty() || k.interior_points().is_empty() {
                return Err(Error::InvalidParameter(
                    "theorem1_discs mode needs a disc union with interior samples".into(),
                ));
            }
            if k.is_tangent() || (k.discs().len() > 1 && !(k.component_separation() > 0.0)) {
                return Err(Error::Geometry(
                    "interior components must be separated by a positive distance".into(),
                ));
            }
            let third = eps / 3.0;
            let (g, params) = disc_rescale(f, k.discs(), k, third).map_err(|e| e.at(Stage::Rescale))?;
            let g = extend_to_k(&g, k);
            let delta = estimate_delta(&g, k, a).map_err(|e| e.at(Stage::EstimateDelta))?;
            let budget = third.min(0.5 * delta);
            let budgets = Budgets {
                rescale: Some(third),
                mergelyan: budget,
                avoid: budget,
            };
            (g, Some(params.xi_per_component), delta.is_finite().then_some(delta), budgets)
        }
        Mode::Theorem2EmptyInterior => {
            if !k.interior_points().is_empty() {
                return Err(Error::InvalidParameter(
                    "theorem2_empty_interior mode needs a set without interior samples".into(),
                ));
            }
            let budgets = Budgets {
                rescale: None,
                mergelyan: 0.5 * eps,
                avoid: 0.5 * eps,
            };
            (f.clone(), None, None, budgets)
        }
    };

    let points = k.all_points();
    let g_error = g.sup_distance(f, points);
    let fit = approximate_poly(&g, k, budgets.mergelyan, *max_degree).map_err(|e| e.at(Stage::Mergelyan))?;
    let avoid = avoid_set(&fit.polynomial, a, k, budgets.avoid, *keep_iterates).map_err(|e| e.at(Stage::Avoid))?;
    let p = avoid.p.clone();

    let check = verify(f, &p, k, a, eps).map_err(|e| e.at(Stage::Verify))?;
    if !(check.sup_error < eps) {
        return Err(Error::Verification(format!(
            "max |f - p| = {:e} is not below eps = {eps:e}",
            check.sup_error
        ))
        .at(Stage::Verify));
    }
    if let Some((j, m)) = check.min_margins.iter().enumerate().find(|(_, m)| !(**m > 0.0)) {
        return Err(Error::Verification(format!(
            "p takes the forbidden value {} (margin {m:e})",
            a.values()[j]
        ))
        .at(Stage::Verify));
    }

    let report = PipelineReport {
        mode: *mode,
        eps,
        budgets,
        g_error,
        xi_per_component: xi,
        delta,
        q_error: fit.sup_error,
        q_degree: fit.degree,
        fit_method: fit.method,
        forbidden_source: a.source(),
        truncation_params: a.truncation_params().clone(),
        triangle_bound: g_error + fit.sup_error + avoid.total_sup_change,
        certified: avoid.certified && check.certified,
        avoid_report: avoid,
        final_sup_error: check.sup_error,
        final_min_margins: check.min_margins,
        final_certificates: check.certificates,
    };
    Ok((p, report))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verification {
    pub samples: usize,
    pub mesh: f64,
    /// `max |f - p|` over all samples.
    pub sup_error: f64,
    /// `min |p - a_j|` over all samples.
    pub min_margins: Vec<f64>,
    pub certificates: Vec<CertificateKind>,
    /// Every value certified over all samples.
    pub certified: bool,
    /// `sup_error < eps`, every margin positive and every value certified.
    pub passed: bool,
}

/// Measures `|f - p|` and the margins `|p - a_j|` on every sample of `k`,
/// and certifies each value over all samples at the mesh of `k`.
pub fn verify(
    f: &FunctionEvaluator,
    p: &Polynomial,
    k: &CompactSetSample,
    a: &ForbiddenSet,
    eps: f64,
) -> Result<Verification> {
    let points = k.all_points();
    let sup_error = points
        .iter()
        .map(|&z| (f.eval(z) - p.eval(z)).norm())
        .fold(0.0, f64::max);
    let certifier = BoundaryCertifier::over(p, points, k.mesh())?;
    let certs: Vec<_> = a.values().iter().map(|&v| certifier.certify(v)).collect();
    let min_margins: Vec<f64> = certs.iter().map(|c| c.margin).collect();
    Ok(Verification {
        samples: points.len(),
        mesh: k.mesh(),
        sup_error,
        passed: sup_error < eps && min_margins.iter().all(|&m| m > 0.0) && certs.iter().all(|c| c.certified()),
        certified: certs.iter().all(|c| c.certified()),
        certificates: certs.iter().map(|c| c.kind).collect(),
        min_margins,
    })
}

/// Runs the empty-interior construction against the algebraic numbers of
/// degree at most `max_degree` and height at most `max_height` that `p`
/// can reach, i.e. those with modulus at most `max |f| + eps`.
pub fn corollary_transcendental(
    f: &FunctionEvaluator,
    k: &CompactSetSample,
    eps: f64,
    max_degree: u32,
    max_height: u32,
) -> Result<(Polynomial, PipelineReport)> {
    let reach = f
        .eval_many(k.all_points())
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        + eps;
    let region = BoundingBox::centered_square(reach);
    let all = ForbiddenSpec::Algebraic {
        max_degree,
        max_height,
        region,
    }
    .build()?;
    let a = truncate_to_reach(&all, reach)?;
    run(&ApproximationProblem::new(f.clone(), k.clone(), a, eps, Mode::Theorem2EmptyInterior))
}
