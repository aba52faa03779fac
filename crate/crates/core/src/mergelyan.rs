//! The polynomial approximation step and the preparations before it: the
//! disc rescaling that pulls `f` inwards on each interior component, the
//! sample-level extension to all of `K`, and the fit itself.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::compact_set::{CompactSetSample, DiscSpec};
use crate::error::{Error, Result};
use crate::geometry::PointIndex;
use crate::poly::{complex_pair, complex_pairs, Polynomial, C64};

/// Largest row count used by the least-squares fit; larger sample sets are
/// thinned deterministically (verification always uses every sample).
const MAX_FIT_ROWS: usize = 4000;
/// Smallest rescale parameter tried.
pub const XI_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticKind {
    Exp,
    Sin,
    Cos,
}

/// `amplitude * F(rate * z) + offset` for an entire function `F`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    pub kind: AnalyticKind,
    #[serde(with = "complex_pair")]
    pub amplitude: C64,
    #[serde(with = "complex_pair")]
    pub rate: C64,
    #[serde(with = "complex_pair")]
    pub offset: C64,
}

impl TaylorSeries {
    pub fn exp() -> Self {
        TaylorSeries {
            kind: AnalyticKind::Exp,
            amplitude: C64::new(1.0, 0.0),
            rate: C64::new(1.0, 0.0),
            offset: C64::new(0.0, 0.0),
        }
    }

    pub fn with_offset(mut self, offset: C64) -> Self {
        self.offset = offset;
        self
    }

    pub fn eval(&self, z: C64) -> C64 {
        let w = self.rate * z;
        let f = match self.kind {
            AnalyticKind::Exp => w.exp(),
            AnalyticKind::Sin => w.sin(),
            AnalyticKind::Cos => w.cos(),
        };
        self.amplitude * f + self.offset
    }

    /// `k`-th derivative of `F` at `w`.
    fn base_derivative(&self, k: usize, w: C64) -> C64 {
        match self.kind {
            AnalyticKind::Exp => w.exp(),
            AnalyticKind::Sin => match k % 4 {
                0 => w.sin(),
                1 => w.cos(),
                2 => -w.sin(),
                _ => -w.cos(),
            },
            AnalyticKind::Cos => match k % 4 {
                0 => w.cos(),
                1 => -w.sin(),
                2 => -w.cos(),
                _ => w.sin(),
            },
        }
    }

    /// Degree-`n` Taylor polynomial about `center`, in monomials of `z`.
    pub fn truncate(&self, center: C64, n: usize) -> Polynomial {
        let w0 = self.rate * center;
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut factor = self.amplitude;
        for k in 0..=n {
            if k > 0 {
                factor *= self.rate / k as f64;
            }
            coeffs.push(factor * self.base_derivative(k, w0));
        }
        coeffs[0] += self.offset;
        Polynomial::new(coeffs).compose_affine(C64::new(1.0, 0.0), -center)
    }

    /// Bound on the truncation error of [`truncate`](Self::truncate) on the
    /// disc of radius `rho` about `center`. Uses `|F^(k)(w)| <= e^|w|` for
    /// all three kinds.
    pub fn remainder_bound(&self, center: C64, rho: f64, n: usize) -> f64 {
        let x = self.rate.norm() * rho;
        // x^(n+1) / (n+1)! computed as a product to avoid overflow
        let term = (1..=n + 1).fold(1.0, |acc, k| acc * x / k as f64);
        self.amplitude.norm() * (self.rate * center).norm().exp() * term * x.exp()
    }
}

/// Values given on a finite point set; off the table the value at the
/// nearest table point is used.
#[derive(Clone, Debug)]
pub struct SampleTable {
    points: Vec<C64>,
    values: Vec<C64>,
    index: PointIndex,
}

impl SampleTable {
    pub fn new(points: Vec<C64>, values: Vec<C64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySamples);
        }
        if points.len() != values.len() {
            return Err(Error::InvalidParameter("table points and values differ in length".into()));
        }
        let index = PointIndex::new(&points);
        Ok(SampleTable {
            points,
            values,
            index,
        })
    }

    /// Tabulates `f` on the given points.
    pub fn tabulate(points: &[C64], f: impl Fn(C64) -> C64) -> Result<Self> {
        Self::new(points.to_vec(), points.iter().map(|&z| f(z)).collect())
    }

    /// Reads `re,im,f_re,f_im` rows (with a header line).
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut points = Vec::new();
        let mut values = Vec::new();
        for row in reader.deserialize::<(f64, f64, f64, f64)>() {
            let (re, im, f_re, f_im) = row?;
            points.push(C64::new(re, im));
            values.push(C64::new(f_re, f_im));
        }
        Self::new(points, values)
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn eval(&self, z: C64) -> C64 {
        let (i, _) = self.index.nearest(z).expect("table is non-empty");
        self.values[i]
    }
}

#[derive(Clone, Debug)]
pub enum FunctionEvaluator {
    Polynomial(Polynomial),
    Taylor(TaylorSeries),
    Samples(SampleTable),
    /// `base(c + (1 - xi) (z - c))` on each disc, `base` elsewhere.
    Rescaled {
        base: Box<FunctionEvaluator>,
        discs: Vec<DiscSpec>,
        xi: Vec<f64>,
    },
    /// `inner` on the discs, and `inner` at the nearest anchor elsewhere.
    Extended {
        inner: Box<FunctionEvaluator>,
        discs: Vec<DiscSpec>,
        anchors: Vec<C64>,
        index: PointIndex,
    },
}

fn disc_of(discs: &[DiscSpec], z: C64) -> Option<usize> {
    discs
        .iter()
        .position(|d| d.contains(z, 1e-9 * d.radius.max(1.0)))
}

impl FunctionEvaluator {
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            FunctionEvaluator::Polynomial(p) => p.eval(z),
            FunctionEvaluator::Taylor(t) => t.eval(z),
            FunctionEvaluator::Samples(s) => s.eval(z),
            FunctionEvaluator::Rescaled { base, discs, xi } => match disc_of(discs, z) {
                Some(j) => {
                    let c = discs[j].center;
                    base.eval(c + (z - c) * (1.0 - xi[j]))
                }
                None => base.eval(z),
            },
            FunctionEvaluator::Extended {
                inner,
                discs,
                anchors,
                index,
            } => {
                if disc_of(discs, z).is_some() {
                    inner.eval(z)
                } else {
                    let (i, _) = index.nearest(z).expect("anchors are non-empty");
                    inner.eval(anchors[i])
                }
            }
        }
    }

    pub fn eval_many(&self, points: &[C64]) -> Vec<C64> {
        points.iter().map(|&z| self.eval(z)).collect()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            FunctionEvaluator::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Maximum of `|self - other|` over the points.
    pub fn sup_distance(&self, other: &FunctionEvaluator, points: &[C64]) -> f64 {
        points
            .iter()
            .map(|&z| (self.eval(z) - other.eval(z)).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaleParams {
    pub xi_per_component: Vec<f64>,
    /// Measured `max |g - f|` on each component's samples.
    pub error_per_component: Vec<f64>,
}

/// Rescales `f` on each disc, `g(z) = f(c + (1 - xi)(z - c))`, halving `xi`
/// from 1/2 until `max |g - f|` on that disc's samples is at most `target`.
pub fn disc_rescale(
    f: &FunctionEvaluator,
    discs: &[DiscSpec],
    k: &CompactSetSample,
    target: f64,
) -> Result<(FunctionEvaluator, RescaleParams)> {
    if !(target > 0.0) {
        return Err(Error::InvalidParameter(format!("target must be positive, got {target}")));
    }
    let mut xis = Vec::with_capacity(discs.len());
    let mut errors = Vec::with_capacity(discs.len());
    for (j, d) in discs.iter().enumerate() {
        let samples: Vec<C64> = k
            .closure_interior_points()
            .iter()
            .copied()
            .filter(|&z| d.contains(z, 1e-9 * d.radius.max(1.0)))
            .collect();
        let values: Vec<C64> = samples.iter().map(|&z| f.eval(z)).collect();
        let mut xi = 0.5;
        let mut best = f64::INFINITY;
        loop {
            let err = samples
                .iter()
                .zip(&values)
                .map(|(&z, &v)| (f.eval(d.center + (z - d.center) * (1.0 - xi)) - v).norm())
                .fold(0.0, f64::max);
            best = best.min(err);
            if err <= target {
                xis.push(xi);
                errors.push(err);
                break;
            }
            xi *= 0.5;
            if xi < XI_FLOOR {
                return Err(Error::RescaleFailed {
                    component: j,
                    target,
                    floor: XI_FLOOR,
                    best,
                });
            }
        }
    }
    let g = match (f.as_polynomial(), discs) {
        // one disc keeps a polynomial a polynomial
        (Some(p), [d]) => {
            let s = C64::new(1.0 - xis[0], 0.0);
            FunctionEvaluator::Polynomial(p.compose_affine(s, d.center - s * d.center))
        }
        _ => FunctionEvaluator::Rescaled {
            base: Box::new(f.clone()),
            discs: discs.to_vec(),
            xi: xis.clone(),
        },
    };
    Ok((
        g,
        RescaleParams {
            xi_per_component: xis,
            error_per_component: errors,
        },
    ))
}

/// Extends `g` from the closure of the interior of `K` to all of `K` by the
/// value at the nearest closure-interior sample. Returns `g` unchanged when
/// every sample already lies in the closure of the interior, or when the
/// interior is empty.
pub fn extend_to_k(g: &FunctionEvaluator, k: &CompactSetSample) -> FunctionEvaluator {
    let anchors = k.closure_interior_points();
    if anchors.is_empty() || anchors.len() == k.all_points().len() {
        return g.clone();
    }
    FunctionEvaluator::Extended {
        inner: Box::new(g.clone()),
        discs: k.discs().to_vec(),
        anchors: anchors.to_vec(),
        index: PointIndex::new(anchors),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Passthrough,
    TaylorTruncation,
    LeastSquares,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialFit {
    pub polynomial: Polynomial,
    /// Verified `max |q - g|` over all samples of `K`.
    pub sup_error: f64,
    pub degree: usize,
    pub method: FitMethod,
}

/// A polynomial `q` with verified `max |q - g| < tol` over all samples of
/// `K`.
///
/// Polynomials pass through unchanged. Entire Taylor data is truncated at
/// the first degree whose remainder bound on a disc covering `K` is at most
/// `tol / 2`. Everything else, and Taylor data failing verification, goes
/// to a least-squares fit with degrees `1..=max_degree`.
pub fn approximate_poly(
    g: &FunctionEvaluator,
    k: &CompactSetSample,
    tol: f64,
    max_degree: usize,
) -> Result<PolynomialFit> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let points = k.all_points();
    let target = g.eval_many(points);
    let verify = |q: &Polynomial| -> f64 {
        points
            .iter()
            .zip(&target)
            .map(|(&z, &v)| (q.eval(z) - v).norm())
            .fold(0.0, f64::max)
    };

    if let Some(p) = g.as_polynomial() {
        return Ok(PolynomialFit {
            polynomial: p.clone(),
            sup_error: 0.0,
            degree: p.degree(),
            method: FitMethod::Passthrough,
        });
    }
    if let FunctionEvaluator::Taylor(t) = g {
        let center = k.bounding_box().center();
        let rho = points.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
        if let Some(n) = (0..=max_degree).find(|&n| t.remainder_bound(center, rho, n) <= 0.5 * tol) {
            let q = t.truncate(center, n);
            let err = verify(&q);
            if err < tol {
                return Ok(PolynomialFit {
                    degree: q.degree(),
                    polynomial: q,
                    sup_error: err,
                    method: FitMethod::TaylorTruncation,
                });
            }
        }
    }
    least_squares(k, &target, tol, max_degree, &verify)
}

fn least_squares(
    k: &CompactSetSample,
    target: &[C64],
    tol: f64,
    max_degree: usize,
    verify: &dyn Fn(&Polynomial) -> f64,
) -> Result<PolynomialFit> {
    let points = k.all_points();
    let bbox = k.bounding_box();
    let center = bbox.center();
    let rho = points
        .iter()
        .map(|z| (z - center).norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    // rows: boundary samples weighted twice, thinned to MAX_FIT_ROWS
    let mut rows: Vec<(C64, C64, f64)> = points
        .iter()
        .zip(target)
        .zip(k.tags())
        .map(|((&z, &v), tag)| {
            let w = if *tag == crate::compact_set::PointTag::Boundary { 2.0 } else { 1.0 };
            ((z - center) / rho, v, w)
        })
        .collect();
    if rows.len() > MAX_FIT_ROWS {
        let stride = rows.len().div_ceil(MAX_FIT_ROWS);
        rows = rows.into_iter().step_by(stride).collect();
    }

    let mut best: Option<PolynomialFit> = None;
    for degree in 1..=max_degree {
        let n = degree + 1;
        let m = rows.len() + n;
        let mut a = DMatrix::<C64>::zeros(m, n);
        let mut b = DMatrix::<C64>::zeros(m, 1);
        for (i, &(w, v, weight)) in rows.iter().enumerate() {
            let mut power = C64::new(weight, 0.0);
            for j in 0..n {
                a[(i, j)] = power;
                power *= w;
            }
            b[(i, 0)] = v * weight;
        }
        // mild ridge growing with the power
        let ridge = 1e-10 * (rows.len() as f64).sqrt();
        for j in 1..n {
            a[(rows.len() + j, j)] = C64::new(ridge * j as f64 / n as f64, 0.0);
        }
        let svd = a.svd(true, true);
        let Ok(x) = svd.solve(&b, 1e-14) else {
            continue;
        };
        let scaled = Polynomial::new(x.column(0).iter().copied().collect());
        let q = scaled.compose_affine(C64::new(1.0 / rho, 0.0), -center / rho);
        let err = verify(&q);
        let fit = PolynomialFit {
            degree: q.degree(),
            polynomial: q,
            sup_error: err,
            method: FitMethod::LeastSquares,
        };
        if err < tol {
            return Ok(fit);
        }
        if best.as_ref().map_or(true, |b| err < b.sup_error) {
            best = Some(fit);
        }
    }
    let (best_err, best_degree) = best.map_or((f64::INFINITY, 0), |b| (b.sup_error, b.degree));
    Err(Error::FitFailed {
        max_degree,
        tol,
        best: best_err,
        best_degree,
    })
}

/// Declarative function description, as found in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Exp {
        #[serde(with = "complex_pair", default = "one")]
        amplitude: C64,
        #[serde(with = "complex_pair", default = "one")]
        rate: C64,
        #[serde(with = "complex_pair", default = "zero")]
        offset: C64,
    },
    Sin {
        #[serde(with = "complex_pair", default = "one")]
        amplitude: C64,
        #[serde(with = "complex_pair", default = "one")]
        rate: C64,
        #[serde(with = "complex_pair", default = "zero")]
        offset: C64,
    },
    Cos {
        #[serde(with = "complex_pair", default = "one")]
        amplitude: C64,
        #[serde(with = "complex_pair", default = "one")]
        rate: C64,
        #[serde(with = "complex_pair", default = "zero")]
        offset: C64,
    },
    Identity,
    Constant {
        #[serde(with = "complex_pair")]
        value: C64,
    },
    Poly {
        #[serde(with = "complex_pairs")]
        coeffs: Vec<C64>,
    },
    /// CSV table with columns `re,im,f_re,f_im`; relative paths resolve
    /// against the configuration file's directory.
    Table { path: String },
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl FunctionSpec {
    pub fn build(&self, base_dir: &Path) -> Result<FunctionEvaluator> {
        let series = |kind, amplitude, rate, offset| {
            FunctionEvaluator::Taylor(TaylorSeries {
                kind,
                amplitude,
                rate,
                offset,
            })
        };
        Ok(match *self {
            FunctionSpec::Exp {
                amplitude,
                rate,
                offset,
            } => series(AnalyticKind::Exp, amplitude, rate, offset),
            FunctionSpec::Sin {
                amplitude,
                rate,
                offset,
            } => series(AnalyticKind::Sin, amplitude, rate, offset),
            FunctionSpec::Cos {
                amplitude,
                rate,
                offset,
            } => series(AnalyticKind::Cos, amplitude, rate, offset),
            FunctionSpec::Identity => FunctionEvaluator::Polynomial(Polynomial::identity()),
            FunctionSpec::Constant { value } => FunctionEvaluator::Polynomial(Polynomial::constant(value)),
            FunctionSpec::Poly { ref coeffs } => FunctionEvaluator::Polynomial(Polynomial::new(coeffs.clone())),
            FunctionSpec::Table { ref path } => {
                FunctionEvaluator::Samples(SampleTable::from_csv(&base_dir.join(path))?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact_set::{make_arc, make_disc_union};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn disc(re: f64, r: f64) -> DiscSpec {
        DiscSpec::new(c(re, 0.0), r).unwrap()
    }

    #[test]
    fn rescale_identity() {
        let k = make_disc_union(&[disc(0.0, 1.0)], 128).unwrap();
        let f = FunctionEvaluator::Polynomial(Polynomial::identity());
        let (g, params) = disc_rescale(&f, k.discs(), &k, 0.1).unwrap();
        let xi = params.xi_per_component[0];
        assert!(xi <= 0.1 && xi > 0.0);
        // sup |g - f| = sup |xi z| = xi on the closed unit disc
        assert!((params.error_per_component[0] - xi).abs() < 1e-12);
        assert!((g.eval(c(0.5, 0.0)) - c(0.5 * (1.0 - xi), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rescale_constant() {
        let k = make_disc_union(&[disc(0.0, 1.0)], 64).unwrap();
        let f = FunctionEvaluator::Polynomial(Polynomial::constant(c(2.0, 1.0)));
        let (g, params) = disc_rescale(&f, k.discs(), &k, 1e-9).unwrap();
        assert_eq!(params.error_per_component, vec![0.0]);
        assert_eq!(g.eval(c(0.3, 0.3)), c(2.0, 1.0));
    }

    #[test]
    fn rescale_floor_error() {
        let k = make_disc_union(&[disc(0.0, 1.0)], 64).unwrap();
        let f = FunctionEvaluator::Polynomial(Polynomial::identity());
        assert!(matches!(
            disc_rescale(&f, k.discs(), &k, 1e-9),
            Err(Error::RescaleFailed { .. })
        ));
    }

    #[test]
    fn extension_identity_and_arc() {
        let d = make_disc_union(&[disc(0.0, 1.0)], 64).unwrap();
        let g = FunctionEvaluator::Polynomial(Polynomial::identity());
        assert!(matches!(extend_to_k(&g, &d), FunctionEvaluator::Polynomial(_)));

        let arc = make_arc(&[c(1.0, 0.0), c(2.0, 0.0)], 11).unwrap();
        let k = d.union(&arc).unwrap();
        let e = extend_to_k(&g, &k);
        // every arc sample takes g at the disc point nearest to it, which is 1
        for &z in arc.all_points() {
            let nearest = k
                .closure_interior_points()
                .iter()
                .min_by(|u, v| (*u - z).norm().total_cmp(&(*v - z).norm()))
                .copied()
                .unwrap();
            assert_eq!(e.eval(z), nearest);
        }
        assert_eq!(e.eval(c(0.2, 0.1)), c(0.2, 0.1));
        let constant = FunctionEvaluator::Polynomial(Polynomial::constant(c(3.0, 0.0)));
        assert_eq!(extend_to_k(&constant, &k).eval(c(2.0, 0.0)), c(3.0, 0.0));
    }

    #[test]
    fn passthrough() {
        let k = make_disc_union(&[disc(0.0, 1.0)], 64).unwrap();
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let fit = approximate_poly(&FunctionEvaluator::Polynomial(p.clone()), &k, 1e-3, 10).unwrap();
        assert_eq!(fit.polynomial, p);
        assert_eq!(fit.sup_error, 0.0);
        assert_eq!(fit.method, FitMethod::Passthrough);
    }

    #[test]
    fn exp_taylor_degree() {
        let t = TaylorSeries::exp();
        // smallest n with 0.9^(n+1)/(n+1)! e^0.9 <= 5e-7
        let n = (0..30).find(|&n| t.remainder_bound(c(0.0, 0.0), 0.9, n) <= 5e-7).unwrap();
        assert_eq!(n, 9);
        let k = make_disc_union(&[disc(0.0, 0.9)], 128).unwrap();
        let fit = approximate_poly(&FunctionEvaluator::Taylor(t), &k, 1e-6, 30).unwrap();
        assert_eq!(fit.method, FitMethod::TaylorTruncation);
        assert!(fit.degree <= 11);
        assert!(fit.sup_error < 1e-6);
    }

    #[test]
    fn sin_cos_truncation_about_offcentre_point() {
        for kind in [AnalyticKind::Sin, AnalyticKind::Cos] {
            let t = TaylorSeries {
                kind,
                amplitude: c(0.5, 0.2),
                rate: c(1.3, -0.4),
                offset: c(1.0, 0.0),
            };
            let center = c(0.7, -0.3);
            let q = t.truncate(center, 25);
            for j in 0..16 {
                let z = center + C64::from_polar(0.8, j as f64 * 0.4);
                assert!((q.eval(z) - t.eval(z)).norm() <= t.remainder_bound(center, 0.8, 25) + 1e-13);
            }
        }
    }

    #[test]
    fn least_squares_on_table() {
        let k = make_disc_union(&[disc(0.0, 1.0)], 64).unwrap();
        let table = SampleTable::tabulate(k.all_points(), |z| (0.5 * z).exp()).unwrap();
        let fit = approximate_poly(&FunctionEvaluator::Samples(table), &k, 1e-4, 20).unwrap();
        assert_eq!(fit.method, FitMethod::LeastSquares);
        assert!(fit.sup_error < 1e-4);
    }

    #[test]
    fn least_squares_failure_reports_best() {
        let k = make_disc_union(&[disc(0.0, 1.0)], 64).unwrap();
        // conj(z) is not uniformly approximable on the disc
        let table = SampleTable::tabulate(k.all_points(), |z| z.conj()).unwrap();
        match approximate_poly(&FunctionEvaluator::Samples(table), &k, 0.05, 6) {
            Err(Error::FitFailed { best, .. }) => assert!(best >= 0.05),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_json() {
        let spec: FunctionSpec = serde_json::from_str(r#"{"kind":"exp","offset":[3,0]}"#).unwrap();
        let f = spec.build(Path::new(".")).unwrap();
        assert!((f.eval(c(0.0, 0.0)) - c(4.0, 0.0)).norm() < 1e-15);
        let spec: FunctionSpec = serde_json::from_str(r#"{"kind":"constant","value":[3.14,0]}"#).unwrap();
        assert!(spec.build(Path::new(".")).unwrap().as_polynomial().is_some());
    }
}
