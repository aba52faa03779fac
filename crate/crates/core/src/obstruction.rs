//! Why uncountable forbidden sets break the approximation: a curve that
//! loops around `a1` but not `a2` forces every close polynomial
//! approximant on an arc to separate `a1` from `a2`, so its image meets
//! the segment `[a1, a2]`.
//!
//! The curve is the nodal cubic `t -> (t^2 - 1) + i(t^3 - t)` on
//! `t in [-3/2, 3/2]`, which crosses itself transversally at the origin
//! (`t = -1` and `t = 1`) and loops around `-0.6`. It is traversed with
//! `t = 3/2 tanh(s) / tanh(1)`, `s in [-1, 1]`, so that it is not a
//! polynomial in the arc parameter. It is moved onto the
//! requested `a1`, `a2` by the similarity sending `-0.6 -> a1` and
//! `-0.6 - 1.2i -> a2`.

use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::compact_set::make_arc;
use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, segment_intersection, segment_segment_distance};
use crate::mergelyan::{approximate_poly, FitMethod, FunctionEvaluator, SampleTable};
use crate::poly::{complex_pair, Polynomial, C64};

/// Canonical pair before the similarity.
const CANON_A1: C64 = C64::new(-0.6, 0.0);
const CANON_A2: C64 = C64::new(-0.6, -1.2);
const T_MAX: f64 = 1.5;

/// Samples of a closed curve with parameters in `[0, 1]`; the last point
/// repeats the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedCurveSamples {
    points: Vec<C64>,
    params: Vec<f64>,
}

impl ClosedCurveSamples {
    /// Closes `points` by repeating the first point when needed; parameters
    /// are uniform.
    pub fn new(mut points: Vec<C64>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidParameter("a closed curve needs at least 3 points".into()));
        }
        if points.first() != points.last() {
            points.push(points[0]);
        }
        let n = points.len() - 1;
        let params = (0..=n).map(|i| i as f64 / n as f64).collect();
        Ok(ClosedCurveSamples { points, params })
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn max_spacing(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max)
    }

    /// Distance from `w` to the polygon through the samples.
    pub fn distance_to(&self, w: C64) -> f64 {
        self.points
            .windows(2)
            .map(|s| point_segment_distance(w, s[0], s[1]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> ClosedCurveSamples {
        ClosedCurveSamples {
            points: self.points.iter().map(|&z| f(z)).collect(),
            params: self.params.clone(),
        }
    }
}

/// Winding number of the sampled curve around `w`, from summed argument
/// increments.
///
/// Needs `w` farther than three times the largest sample spacing from
/// every sample, which keeps each increment below `pi / 3`.
pub fn winding_number(curve: &ClosedCurveSamples, w: C64) -> Result<i64> {
    let distance = curve
        .points
        .iter()
        .map(|z| (z - w).norm())
        .fold(f64::INFINITY, f64::min);
    let required = 3.0 * curve.max_spacing();
    if !(distance > required) {
        return Err(Error::IndeterminateWinding { distance, required });
    }
    let total: f64 = curve
        .points
        .windows(2)
        .map(|s| ((s[1] - w) / (s[0] - w)).arg())
        .sum();
    Ok((total / TAU).round() as i64)
}

/// The curve `gamma: [0, 1] -> C` placed on a given pair of points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gamma {
    #[serde(with = "complex_pair")]
    pub a1: C64,
    #[serde(with = "complex_pair")]
    pub a2: C64,
    /// `gamma(u) = alpha * N(t(u)) + beta` with `N` the nodal cubic.
    #[serde(with = "complex_pair")]
    pub alpha: C64,
    #[serde(with = "complex_pair")]
    pub beta: C64,
    /// The self-intersection point.
    #[serde(with = "complex_pair")]
    pub crossing: C64,
    /// The two parameters in `[0, 1]` mapped to the crossing.
    pub crossing_params: [f64; 2],
}

impl Gamma {
    pub fn eval(&self, u: f64) -> C64 {
        let t = T_MAX * (2.0 * u - 1.0).tanh() / 1f64.tanh();
        self.alpha * nodal(t) + self.beta
    }

    /// `n` samples at uniform parameters.
    pub fn samples(&self, n: usize) -> Vec<C64> {
        let n = n.max(2);
        (0..n).map(|i| self.eval(i as f64 / (n - 1) as f64)).collect()
    }

    /// The loop between the two crossing parameters.
    pub fn loop_samples(&self, n: usize) -> Result<ClosedCurveSamples> {
        let [u0, u1] = self.crossing_params;
        let n = n.max(3);
        ClosedCurveSamples::new((0..n).map(|i| self.eval(u0 + (u1 - u0) * i as f64 / n as f64)).collect())
    }

    /// Distance from `w` to the curve, measured on `n` samples.
    pub fn distance_to(&self, w: C64, n: usize) -> f64 {
        self.samples(n)
            .windows(2)
            .map(|s| point_segment_distance(w, s[0], s[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn nodal(t: f64) -> C64 {
    C64::new(t * t - 1.0, t * t * t - t)
}

/// The curve for the pair `a1`, `a2`: it winds once around `a1` and not
/// around `a2`.
pub fn build_gamma(a1: C64, a2: C64) -> Result<Gamma> {
    if !(a1 - a2).norm().is_normal() {
        return Err(Error::InvalidParameter(format!("a1 and a2 must differ, got {a1} twice")));
    }
    let alpha = (a2 - a1) / (CANON_A2 - CANON_A1);
    let beta = a1 - alpha * CANON_A1;
    let u = |t: f64| 0.5 * ((t * 1f64.tanh() / T_MAX).atanh() + 1.0);
    Ok(Gamma {
        a1,
        a2,
        alpha,
        beta,
        crossing: beta,
        crossing_params: [u(-1.0), u(1.0)],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopMethod {
    /// The polyline crosses itself near the crossing; the loop is cut out
    /// at the intersection point.
    PolylineIntersection,
    /// No crossing found in the windows; the closest pair of points from
    /// the two windows is joined by a chord.
    WindowClosure,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveAnalysis {
    pub loop_method: LoopMethod,
    /// Where the loop was closed.
    #[serde(with = "complex_pair")]
    pub loop_point: C64,
    /// Distance from `loop_point` to the crossing of the model curve.
    pub loop_point_offset: f64,
    /// Sample indices where the loop starts and ends.
    pub loop_indices: [usize; 2],
    pub loop_samples: usize,
    pub winding_a1: i64,
    pub winding_a2: i64,
    pub winding_difference: i64,
    /// Distance from the polyline through the samples to `[a1, a2]`.
    pub min_distance_to_segment: f64,
    /// Largest spacing between consecutive samples.
    pub mesh_scale: f64,
}

/// Extracts a closed loop from the sampled curve near `crossing` and
/// measures its winding around `a1` and `a2`.
///
/// The windows are the runs of samples within `2 eps` (plus one spacing)
/// of `crossing`; the first and last windows are the two passes.
pub fn analyze_curve(points: &[C64], crossing: C64, a1: C64, a2: C64, eps: f64) -> Result<(CurveAnalysis, ClosedCurveSamples)> {
    if points.len() < 4 {
        return Err(Error::EmptySamples);
    }
    let spacing = points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    let radius = 2.0 * eps + spacing;
    let near: Vec<bool> = points.iter().map(|z| (z - crossing).norm() <= radius).collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, &inside) in near.iter().enumerate() {
        if !inside {
            continue;
        }
        match runs.last_mut() {
            Some((_, end)) if *end + 1 == i => *end = i,
            _ => runs.push((i, i)),
        }
    }
    if runs.len() < 2 {
        return Err(Error::Verification(format!(
            "the curve passes the crossing {crossing} {} time(s) within {radius:e}; expected two passes",
            runs.len()
        )));
    }
    let (first, last) = (runs[0], runs[runs.len() - 1]);

    // segments touching each window, crossing pair closest to the model crossing
    let segs = |(s, e): (usize, usize)| s.saturating_sub(1)..e.min(points.len() - 2) + 1;
    let mut best: Option<(f64, usize, usize, C64)> = None;
    for i in segs(first) {
        for j in segs(last) {
            if j <= i + 1 {
                continue;
            }
            if let Some(x) = segment_intersection(points[i], points[i + 1], points[j], points[j + 1]) {
                let d = (x - crossing).norm();
                if best.map_or(true, |b| d < b.0) {
                    best = Some((d, i, j, x));
                }
            }
        }
    }
    let (method, point, start, end, loop_points) = match best {
        Some((_, i, j, x)) => {
            let mut pts = vec![x];
            pts.extend_from_slice(&points[i + 1..=j]);
            (LoopMethod::PolylineIntersection, x, i + 1, j, pts)
        }
        None => {
            let mut pick = (f64::INFINITY, first.0, last.0);
            for i in first.0..=first.1 {
                for j in last.0..=last.1 {
                    let d = (points[i] - points[j]).norm();
                    if d < pick.0 {
                        pick = (d, i, j);
                    }
                }
            }
            let (_, i, j) = pick;
            (LoopMethod::WindowClosure, 0.5 * (points[i] + points[j]), i, j, points[i..=j].to_vec())
        }
    };
    let curve = ClosedCurveSamples::new(loop_points)?;
    let winding_a1 = winding_number(&curve, a1)?;
    let winding_a2 = winding_number(&curve, a2)?;
    let min_distance_to_segment = points
        .windows(2)
        .map(|s| segment_segment_distance(s[0], s[1], a1, a2))
        .fold(f64::INFINITY, f64::min);
    Ok((
        CurveAnalysis {
            loop_method: method,
            loop_point: point,
            loop_point_offset: (point - crossing).norm(),
            loop_indices: [start, end],
            loop_samples: curve.points().len(),
            winding_a1,
            winding_a2,
            winding_difference: winding_a1 - winding_a2,
            min_distance_to_segment,
            mesh_scale: spacing,
        },
        curve,
    ))
}

pub const DEFAULT_ARC_SAMPLES: usize = 2001;
pub const DEFAULT_FIT_DEGREE: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionParams {
    #[serde(with = "complex_pair")]
    pub a1: C64,
    #[serde(with = "complex_pair")]
    pub a2: C64,
    pub eps: f64,
    pub fit_degree: usize,
    pub arc_samples: usize,
}

impl Default for ObstructionParams {
    /// The layout with `a1 = 0`, `a2 = -1 - 3i`.
    fn default() -> Self {
        ObstructionParams {
            a1: C64::new(0.0, 0.0),
            a2: C64::new(-1.0, -3.0),
            eps: 0.01,
            fit_degree: DEFAULT_FIT_DEGREE,
            arc_samples: DEFAULT_ARC_SAMPLES,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub params: ObstructionParams,
    pub gamma: Gamma,
    /// `dist(a1, Gamma) / 4`; `eps` must be below it.
    pub eps_guard: f64,
    pub polynomial: Polynomial,
    pub degree: usize,
    pub fit_method: FitMethod,
    /// `max |f - p|` on the arc samples and on a 4x denser resampling.
    pub fit_sup_error: f64,
    pub analysis: CurveAnalysis,
    /// Winding difference nonzero: `p(B)` separates `a1` from `a2` and so
    /// meets `[a1, a2]`.
    pub obstructed: bool,
}

/// Output of [`demo_obstruction`] with the curves for plotting.
#[derive(Clone, Debug)]
pub struct ObstructionRun {
    pub report: ObstructionReport,
    pub gamma_points: Vec<C64>,
    pub p_points: Vec<C64>,
    pub loop_curve: ClosedCurveSamples,
}

/// The arc `B = [-1, 1]` with `beta(u) = 2u - 1`.
fn arc_parameter(z: C64) -> f64 {
    0.5 * (z.re + 1.0)
}

/// Fits `p` to `f = gamma o beta^{-1}` on `B` within `eps` and analyses the
/// loop of `p(B)` near the crossing.
pub fn demo_obstruction(params: &ObstructionParams) -> Result<ObstructionRun> {
    let ObstructionParams {
        a1,
        a2,
        eps,
        fit_degree,
        arc_samples,
    } = *params;
    if fit_degree == 0 {
        return Err(Error::InvalidParameter("fit_degree must be positive".into()));
    }
    let gamma = build_gamma(a1, a2)?;
    let dense_n = 8 * arc_samples.max(2);
    let eps_guard = 0.25 * gamma.distance_to(a1, dense_n);
    if !(eps > 0.0) || !(eps < eps_guard) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, {eps_guard:e}) = (0, dist(a1, Gamma) / 4), got {eps}"
        )));
    }

    let arc = make_arc(&[C64::new(-1.0, 0.0), C64::new(1.0, 0.0)], arc_samples)?;
    let f = |z: C64| gamma.eval(arc_parameter(z));
    let table = FunctionEvaluator::Samples(SampleTable::tabulate(arc.all_points(), f)?);
    let fit = approximate_poly(&table, &arc, eps, fit_degree)?;
    let p = fit.polynomial;
    let dense = make_arc(&[C64::new(-1.0, 0.0), C64::new(1.0, 0.0)], 4 * arc_samples)?;
    let fit_sup_error = dense
        .all_points()
        .iter()
        .chain(arc.all_points())
        .map(|&z| (p.eval(z) - f(z)).norm())
        .fold(0.0, f64::max);
    if !(fit_sup_error < eps) {
        return Err(Error::Verification(format!(
            "fit error {fit_sup_error:e} on the dense arc is not below eps = {eps:e}; try a higher degree"
        )));
    }

    let p_points: Vec<C64> = dense.all_points().iter().map(|&z| p.eval(z)).collect();
    let (analysis, loop_curve) = analyze_curve(&p_points, gamma.crossing, a1, a2, eps)?;
    let report = ObstructionReport {
        params: *params,
        gamma,
        eps_guard,
        degree: p.degree(),
        polynomial: p,
        fit_method: fit.method,
        fit_sup_error,
        obstructed: analysis.winding_difference != 0,
        analysis,
    };
    Ok(ObstructionRun {
        gamma_points: gamma.samples(dense.all_points().len()),
        report,
        p_points,
        loop_curve,
    })
}

/// Writes `index,re,im` rows.
pub fn write_curve_csv<W: Write>(points: &[C64], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "re", "im"])?;
    for (i, z) in points.iter().enumerate() {
        w.write_record([i.to_string(), z.re.to_string(), z.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
