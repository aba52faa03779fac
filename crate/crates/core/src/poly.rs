//! Dense complex polynomials in ascending-degree coefficient order.
//!
//! Besides arithmetic and evaluation this module carries the numerical
//! factorization used by the root-perturbation step: a simultaneous
//! Aberth–Ehrlich iteration followed by detection of numerically multiple
//! roots.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Trailing coefficients below this fraction of the largest one are dropped.
pub const TRIM_TOL: f64 = 1e-13;
/// Accepted backward residual `|p(z)| / sum |c_i||z|^i` for a computed root.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Tolerance for matching root multisets.
pub const ROOT_MATCH_TOL: f64 = 1e-7;
/// Inflation applied to sampled derivative maxima.
pub const SAFETY_FACTOR: f64 = 1.05;

const MAX_ABERTH_ITERATIONS: usize = 500;
const CLUSTER_CANDIDATE_RADIUS: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming negligible
    /// trailing terms. An empty list is the zero polynomial.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cutoff = TRIM_TOL * max;
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        if coeffs.is_empty() || max == 0.0 {
            coeffs = vec![C64::new(0.0, 0.0)];
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::constant(C64::new(0.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    /// `p(z) = z`
    pub fn identity() -> Self {
        Self::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        horner_with_derivative(&self.coeffs, z)
    }

    /// `sum |c_i| |z|^i`, the natural rounding scale of `eval` at `z`.
    pub fn abs_scale(&self, z: C64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// Coefficients of `h -> p(c + h)`, i.e. `p^{(k)}(c) / k!`.
    pub fn taylor_coefficients_at(&self, c: C64) -> Vec<C64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let next = work[j + 1];
                work[j] += c * next;
            }
        }
        work
    }

    /// `z -> p(alpha * z + beta)`.
    pub fn compose_affine(&self, alpha: C64, beta: C64) -> Polynomial {
        let mut t = self.taylor_coefficients_at(beta);
        let mut power = C64::new(1.0, 0.0);
        for c in t.iter_mut() {
            *c *= power;
            power *= alpha;
        }
        Polynomial::new(t)
    }

    pub fn add_constant(&self, c: C64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, s: C64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Maximum of `|p|` over the samples.
    pub fn sup_on(&self, samples: &[C64]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        Ok(samples.iter().map(|&z| self.eval(z).norm()).fold(0.0, f64::max))
    }

    /// Maximum of `|p - other|` over the samples.
    pub fn sup_distance(&self, other: &Polynomial, samples: &[C64]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        Ok(samples
            .iter()
            .map(|&z| (self.eval(z) - other.eval(z)).norm())
            .fold(0.0, f64::max))
    }

    /// Sampled maximum of `|p'|`, inflated by [`SAFETY_FACTOR`]. Used as a
    /// Lipschitz constant between neighbouring samples.
    pub fn derivative_sup_bound(&self, samples: &[C64]) -> Result<f64> {
        Ok(SAFETY_FACTOR * self.derivative().sup_on(samples)?)
    }

    /// True when `p` has no zero in the closed disc of radius `rho` about
    /// `center`, shown by `|p(center)| > sum_{k>=1} |t_k| rho^k` with `t_k`
    /// the Taylor coefficients at `center` and a rounding allowance.
    pub fn zero_free_disc(&self, center: C64, rho: f64) -> bool {
        self.zero_free_disc_with_headroom(center, rho, 1.0)
    }

    /// As [`zero_free_disc`](Self::zero_free_disc) with `|p(center)|` first
    /// multiplied by `theta`, so that the disc stays zero free under any
    /// perturbation smaller than `(1 - theta) |p(center)|` there.
    pub fn zero_free_disc_with_headroom(&self, center: C64, rho: f64, theta: f64) -> bool {
        let t0 = theta * self.eval(center).norm();
        let slack = 64.0 * f64::EPSILON * self.abs_scale(center);
        if t0 <= slack {
            return false;
        }
        // cheap majorant first: sup of |p'| on the disc via absolute coefficients
        let r = center.norm() + rho;
        let dmax = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * r + k as f64 * c.norm());
        if t0 > rho * dmax + slack {
            return true;
        }
        let t = self.taylor_coefficients_at(center);
        let tail = t.iter().skip(1).rev().fold(0.0, |acc, c| (acc + c.norm()) * rho);
        t0 > tail + slack
    }

    /// Expands `leading * prod (z - r)`.
    pub fn from_roots(leading: C64, roots: &[C64]) -> Polynomial {
        let mut coeffs = vec![leading];
        for &r in roots {
            coeffs.push(C64::new(0.0, 0.0));
            for j in (0..coeffs.len()).rev() {
                let lower = if j > 0 { coeffs[j - 1] } else { C64::new(0.0, 0.0) };
                coeffs[j] = lower - r * coeffs[j];
            }
        }
        Polynomial::new(coeffs)
    }

    /// All roots with multiplicity.
    ///
    /// Roots are computed simultaneously with the Aberth–Ehrlich iteration
    /// started on a circle whose radius is the geometric mean of the root
    /// moduli. Clusters that are indistinguishable from a multiple root at
    /// double precision are replaced by their centroid, which is far more
    /// accurate than the individual members.
    pub fn roots(&self) -> Result<RootFactorization> {
        if self.degree() == 0 {
            return Err(Error::InvalidParameter(
                "roots requested for a polynomial of degree 0".into(),
            ));
        }
        let zeros = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        let reduced = &self.coeffs[zeros..];
        let mut roots = vec![C64::new(0.0, 0.0); zeros];
        match reduced.len() - 1 {
            0 => {}
            1 => roots.push(-reduced[0] / reduced[1]),
            _ => roots.extend(aberth(reduced)?),
        }
        let roots = merge_clusters(self, roots);
        Ok(RootFactorization {
            leading: self.leading(),
            roots,
        })
    }
}

fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn abs_scale_of(coeffs: &[C64], z: C64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn aberth(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<C64> = coeffs.iter().map(|&c| c / lead).collect();

    let radius = monic[0].norm().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;

    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut active = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dpv) = horner_with_derivative(&monic, z[i]);
            if pv.norm() <= 4.0 * eps * abs_scale_of(&monic, z[i]) {
                done[i] = true;
                continue;
            }
            active = true;
            let mut repulsion = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulsion += d.inv();
                    }
                }
            }
            let ratio = if dpv.norm() > 0.0 {
                pv / dpv
            } else {
                C64::new(radius.max(1.0) * 1e-3, 0.0)
            };
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: 0,
                    residual: f64::INFINITY,
                });
            }
            z[i] -= step;
            if step.norm() <= eps * z[i].norm() {
                done[i] = true;
            }
        }
        if !active {
            break;
        }
    }

    let worst = z
        .iter()
        .map(|&r| {
            let scale = abs_scale_of(&monic, r);
            if scale == 0.0 {
                0.0
            } else {
                horner_with_derivative(&monic, r).0.norm() / scale
            }
        })
        .fold(0.0, f64::max);
    if !(worst <= RESIDUAL_TOL) {
        return Err(Error::NoConvergence {
            iterations: MAX_ABERTH_ITERATIONS,
            residual: worst,
        });
    }
    Ok(z)
}

/// Replaces numerically multiple roots by their centroid.
///
/// Candidates are single-linkage groups at a coarse radius. A group of `k`
/// roots is accepted as a `k`-fold root when its spread does not exceed the
/// radius at which a relative coefficient perturbation of order `1e-15`
/// could merge `k` roots, `(1e-15 * scale / |a_k|)^(1/k)` with `a_k` the
/// `k`-th Taylor coefficient at the centroid.
fn merge_clusters(p: &Polynomial, roots: Vec<C64>) -> Vec<C64> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() < CLUSTER_CANDIDATE_RADIUS * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }

    let mut out = roots.clone();
    for group in groups.iter().filter(|g| g.len() > 1) {
        let k = group.len();
        let centroid = group.iter().map(|&i| roots[i]).sum::<C64>() / k as f64;
        let spread = group
            .iter()
            .map(|&i| (roots[i] - centroid).norm())
            .fold(0.0, f64::max);
        let taylor = p.taylor_coefficients_at(centroid);
        let ak = taylor.get(k).map_or(0.0, |c| c.norm());
        if ak == 0.0 {
            continue;
        }
        let scale = p.abs_scale(centroid);
        let merge_radius = 8.0 * (1e-15 * scale / ak).powf(1.0 / k as f64);
        if spread <= merge_radius {
            let refined = refine_multiple_root(p, k, centroid);
            let centre = if (refined - centroid).norm() <= merge_radius {
                refined
            } else {
                centroid
            };
            for &i in group {
                out[i] = centre;
            }
        }
    }
    out
}

/// A `k`-fold root of `p` is a simple root of `p^(k-1)`; a few Newton steps
/// there recover digits the clustered iterates lose.
fn refine_multiple_root(p: &Polynomial, k: usize, start: C64) -> C64 {
    let mut d = p.clone();
    for _ in 1..k {
        d = d.derivative();
    }
    let mut z = start;
    for _ in 0..8 {
        let (v, dv) = d.eval_with_derivative(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// `leading * prod (z - roots[k])`, roots repeated by multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootFactorization {
    #[serde(with = "complex_pair")]
    pub leading: C64,
    #[serde(with = "complex_pairs")]
    pub roots: Vec<C64>,
}

impl RootFactorization {
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_roots(self.leading, &self.roots)
    }

    /// Distinct roots with their multiplicities, grouping values closer than
    /// [`ROOT_MATCH_TOL`].
    pub fn clusters(&self) -> Vec<(C64, usize)> {
        let mut out: Vec<(C64, usize)> = Vec::new();
        for &r in &self.roots {
            match out.iter_mut().find(|(c, _)| (*c - r).norm() < ROOT_MATCH_TOL) {
                Some(entry) => entry.1 += 1,
                None => out.push((r, 1)),
            }
        }
        out
    }
}

/// True when the two multisets can be matched one-to-one with every pair
/// closer than `tol`. Greedy nearest matching; adequate for well separated
/// or exactly repeated roots.
pub fn multisets_match(a: &[C64], b: &[C64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for &x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|(_, u), (_, v)| (x - **u).norm().total_cmp(&(x - **v).norm()));
        match best {
            Some((j, &y)) if (x - y).norm() < tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = C64::new(0.0, 0.0);
        Polynomial::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        complex_pairs::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Polynomial::new(complex_pairs::deserialize(d)?))
    }
}

/// Serde helpers writing complex numbers as `[re, im]`.
pub mod complex_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// Serde helpers writing complex lists as `[[re, im], ...]`.
pub mod complex_pairs {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[C64], s: S) -> Result<S::Ok, S::Error> {
        zs.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}
