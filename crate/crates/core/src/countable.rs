//! Finite truncations of countable forbidden value sets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::compact_set::BoundingBox;
use crate::error::{Error, Result};
use crate::poly::{complex_pairs, Polynomial, C64};

/// Values closer than this are considered equal.
pub const DEDUPE_TOL: f64 = 1e-12;
/// Default cap on the size of an enumerated truncation.
pub const MAX_VALUES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Explicit,
    GaussianRational,
    Algebraic,
}

/// Bounds used to produce a truncation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_denominator: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_height: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub region: Option<BoundingBox>,
    /// Values with modulus above this were discarded by [`truncate_to_reach`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reach: Option<f64>,
}

/// Finite, pairwise distinct list of forbidden values in enumeration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenSet {
    #[serde(with = "complex_pairs")]
    values: Vec<C64>,
    source: Source,
    truncation_params: TruncationParams,
    /// Radius of the origin-centred disc on which the truncation is known to
    /// contain every member of the full set within the enumeration bounds.
    claimed_cover_radius: Option<f64>,
}

impl ForbiddenSet {
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn truncation_params(&self) -> &TruncationParams {
        &self.truncation_params
    }

    pub fn claimed_cover_radius(&self) -> Option<f64> {
        self.claimed_cover_radius
    }

    /// Same set with the values reordered by `order` (a permutation of
    /// indices).
    pub fn permuted(&self, order: &[usize]) -> Result<ForbiddenSet> {
        let mut seen = vec![false; self.values.len()];
        if order.len() != self.values.len() || order.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        Ok(ForbiddenSet {
            values: order.iter().map(|&i| self.values[i]).collect(),
            ..self.clone()
        })
    }
}

/// Insertion-ordered set of complex values with tolerance-based dedupe.
struct Dedupe {
    values: Vec<C64>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl Dedupe {
    // bucket side; anything within DEDUPE_TOL lies in a neighbouring bucket
    const CELL: f64 = 1e-9;

    fn new() -> Self {
        Dedupe {
            values: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn key(z: C64) -> (i64, i64) {
        ((z.re / Self::CELL).floor() as i64, (z.im / Self::CELL).floor() as i64)
    }

    fn insert(&mut self, z: C64) -> bool {
        let (kx, ky) = Self::key(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if list.iter().any(|&i| (self.values[i] - z).norm() <= DEDUPE_TOL) {
                        return false;
                    }
                }
            }
        }
        self.buckets.entry((kx, ky)).or_default().push(self.values.len());
        self.values.push(z);
        true
    }
}

pub fn explicit_set(values: &[C64]) -> ForbiddenSet {
    let mut d = Dedupe::new();
    for &z in values {
        d.insert(z);
    }
    ForbiddenSet {
        values: d.values,
        source: Source::Explicit,
        truncation_params: TruncationParams::default(),
        claimed_cover_radius: None,
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Reduced rationals `a / b` with `b <= n` in `[lo, hi]`, tagged with the
/// reduced denominator.
fn rationals_in(lo: f64, hi: f64, n: u32) -> Vec<(f64, i64)> {
    let mut out = Vec::new();
    for b in 1..=n as i64 {
        let bf = b as f64;
        let first = (lo * bf - 1e-9).ceil() as i64;
        let last = (hi * bf + 1e-9).floor() as i64;
        for a in first..=last {
            if gcd(a, b) == 1 {
                out.push((a as f64 / bf, b));
            }
        }
    }
    out
}

/// All `a/b + (c/d) i` with `b, d <= max_denominator` inside `region`.
///
/// Values are ordered by the larger of the two reduced denominators, then
/// lexicographically by real and imaginary part.
pub fn gaussian_rationals(max_denominator: u32, region: BoundingBox) -> Result<ForbiddenSet> {
    gaussian_rationals_limited(max_denominator, region, MAX_VALUES)
}

pub fn gaussian_rationals_limited(
    max_denominator: u32,
    region: BoundingBox,
    limit: usize,
) -> Result<ForbiddenSet> {
    if max_denominator == 0 {
        return Err(Error::InvalidParameter("max_denominator must be positive".into()));
    }
    let re = rationals_in(region.min_re, region.max_re, max_denominator);
    let im = rationals_in(region.min_im, region.max_im, max_denominator);
    let count = re.len().saturating_mul(im.len());
    if count > limit {
        return Err(Error::TruncationTooLarge { count, limit });
    }
    let mut tagged: Vec<(i64, f64, f64)> = Vec::with_capacity(count);
    for &(x, b) in &re {
        for &(y, d) in &im {
            let z = C64::new(x, y);
            if region.contains(z) {
                tagged.push((b.max(d), x, y));
            }
        }
    }
    tagged.sort_by(|u, v| {
        u.0.cmp(&v.0)
            .then(u.1.total_cmp(&v.1))
            .then(u.2.total_cmp(&v.2))
    });
    let mut d = Dedupe::new();
    for (_, x, y) in tagged {
        d.insert(C64::new(x, y));
    }
    Ok(ForbiddenSet {
        values: d.values,
        source: Source::GaussianRational,
        truncation_params: TruncationParams {
            max_denominator: Some(max_denominator),
            region: Some(region),
            ..Default::default()
        },
        claimed_cover_radius: cover_radius(&region),
    })
}

fn cover_radius(region: &BoundingBox) -> Option<f64> {
    let r = (-region.min_re)
        .min(region.max_re)
        .min(-region.min_im)
        .min(region.max_im);
    (r >= 0.0).then_some(r)
}

/// Roots inside `region` of all integer polynomials of degree at most
/// `max_degree` whose coefficients have modulus at most `max_height`.
///
/// Values are ordered by the smallest height at which they appear, then by
/// the smallest degree, then lexicographically. Only primitive polynomials
/// with positive leading coefficient are solved; the others have the same
/// roots as one of these.
pub fn algebraic_numbers(max_degree: u32, max_height: u32, region: BoundingBox) -> Result<ForbiddenSet> {
    algebraic_numbers_limited(max_degree, max_height, region, MAX_VALUES)
}

pub fn algebraic_numbers_limited(
    max_degree: u32,
    max_height: u32,
    region: BoundingBox,
    limit: usize,
) -> Result<ForbiddenSet> {
    if max_degree == 0 || max_degree > 4 {
        return Err(Error::InvalidParameter(format!(
            "max_degree must lie in 1..=4, got {max_degree}"
        )));
    }
    if max_height > 10 {
        return Err(Error::InvalidParameter(format!(
            "max_height must be at most 10, got {max_height}"
        )));
    }
    let h = max_height as i64;
    let mut d = Dedupe::new();
    for height in 1..=h {
        for degree in 1..=max_degree as usize {
            let mut batch = Vec::new();
            let mut coeffs = vec![-height; degree + 1];
            loop {
                let lead = coeffs[degree];
                let top = coeffs.iter().map(|c| c.abs()).max().unwrap_or(0);
                if lead > 0 && top == height && coeffs.iter().fold(0, |g, &c| gcd(g, c)) == 1 {
                    let p = Polynomial::from_real(&coeffs.iter().map(|&c| c as f64).collect::<Vec<_>>());
                    for z in p.roots()?.roots {
                        if region.contains(z) {
                            batch.push(clean(z));
                        }
                    }
                }
                if !advance(&mut coeffs, height) {
                    break;
                }
            }
            batch.sort_by(|u, v| u.re.total_cmp(&v.re).then(u.im.total_cmp(&v.im)));
            for z in batch {
                d.insert(z);
                if d.values.len() > limit {
                    return Err(Error::TruncationTooLarge {
                        count: d.values.len(),
                        limit,
                    });
                }
            }
        }
    }
    Ok(ForbiddenSet {
        values: d.values,
        source: Source::Algebraic,
        truncation_params: TruncationParams {
            max_degree: Some(max_degree),
            max_height: Some(max_height),
            region: Some(region),
            ..Default::default()
        },
        claimed_cover_radius: cover_radius(&region),
    })
}

/// Odometer over coefficient vectors in `[-h, h]^n`.
fn advance(coeffs: &mut [i64], h: i64) -> bool {
    for c in coeffs.iter_mut() {
        if *c < h {
            *c += 1;
            return true;
        }
        *c = -h;
    }
    false
}

/// Snaps imaginary (or real) parts at rounding level to zero so that real
/// and purely imaginary values dedupe exactly.
fn clean(z: C64) -> C64 {
    let tiny = 1e-14 * z.norm().max(1.0);
    C64::new(
        if z.re.abs() <= tiny { 0.0 } else { z.re },
        if z.im.abs() <= tiny { 0.0 } else { z.im },
    )
}

/// Keeps the values with `|a| <= value_bound` (plus a relative slack of
/// `1e-12`), preserving order.
pub fn truncate_to_reach(set: &ForbiddenSet, value_bound: f64) -> Result<ForbiddenSet> {
    if !(value_bound >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "value bound must be nonnegative, got {value_bound}"
        )));
    }
    let cutoff = value_bound + 1e-12 * value_bound.max(1.0);
    let mut params = set.truncation_params.clone();
    params.reach = Some(params.reach.map_or(value_bound, |r| r.min(value_bound)));
    Ok(ForbiddenSet {
        values: set.values.iter().copied().filter(|a| a.norm() <= cutoff).collect(),
        source: set.source,
        truncation_params: params,
        claimed_cover_radius: set.claimed_cover_radius.map(|r| r.min(value_bound)),
    })
}

/// Declarative forbidden-set description, as found in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ForbiddenSpec {
    Explicit {
        #[serde(with = "complex_pairs")]
        values: Vec<C64>,
    },
    GaussianRational {
        max_denominator: u32,
        region: BoundingBox,
    },
    Algebraic {
        max_degree: u32,
        max_height: u32,
        region: BoundingBox,
    },
}

impl ForbiddenSpec {
    pub fn build(&self) -> Result<ForbiddenSet> {
        match self {
            ForbiddenSpec::Explicit { values } => Ok(explicit_set(values)),
            ForbiddenSpec::GaussianRational {
                max_denominator,
                region,
            } => gaussian_rationals(*max_denominator, *region),
            ForbiddenSpec::Algebraic {
                max_degree,
                max_height,
                region,
            } => {
                if *max_height == 0 {
                    return Ok(ForbiddenSet {
                        values: Vec::new(),
                        source: Source::Algebraic,
                        truncation_params: TruncationParams {
                            max_degree: Some(*max_degree),
                            max_height: Some(0),
                            region: Some(*region),
                            ..Default::default()
                        },
                        claimed_cover_radius: None,
                    });
                }
                algebraic_numbers(*max_degree, *max_height, *region)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn unit_box() -> BoundingBox {
        BoundingBox::new(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    fn contains(set: &ForbiddenSet, z: C64) -> bool {
        set.values().iter().any(|v| (v - z).norm() < 1e-12)
    }

    #[test]
    fn explicit_examples() {
        assert_eq!(explicit_set(&[c(0.0, 0.0)]).len(), 1);
        let s = explicit_set(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.values(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(explicit_set(&[]).is_empty());
    }

    #[test]
    fn gaussian_denominator_one() {
        let s = gaussian_rationals(1, unit_box()).unwrap();
        assert_eq!(s.values(), &[c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(1.0, 1.0)]);
    }

    #[test]
    fn gaussian_denominator_two_and_three() {
        let s = gaussian_rationals(2, unit_box()).unwrap();
        assert_eq!(s.len(), 9);
        // level order: the four corners come first
        assert_eq!(&s.values()[..4], &[c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(1.0, 1.0)]);
        // {0, 1/3, 1/2, 2/3, 1} on each axis
        assert_eq!(gaussian_rationals(3, unit_box()).unwrap().len(), 25);
    }

    #[test]
    fn gaussian_too_large() {
        let big = BoundingBox::centered_square(100.0);
        assert!(matches!(
            gaussian_rationals_limited(10, big, 1000),
            Err(Error::TruncationTooLarge { .. })
        ));
    }

    #[test]
    fn algebraic_degree_one_height_one() {
        let s = algebraic_numbers(1, 1, BoundingBox::centered_square(2.0)).unwrap();
        let mut v: Vec<f64> = s.values().iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![-1.0, 0.0, 1.0]);
        assert!(s.values().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn algebraic_quadratic_members() {
        let s = algebraic_numbers(2, 1, BoundingBox::centered_square(2.0)).unwrap();
        assert!(contains(&s, c(0.0, 1.0)) && contains(&s, c(0.0, -1.0)));
        let s = algebraic_numbers(2, 2, BoundingBox::centered_square(2.0)).unwrap();
        let r2 = 2f64.sqrt();
        assert!(contains(&s, c(r2, 0.0)) && contains(&s, c(-r2, 0.0)));
        assert!(algebraic_numbers(5, 1, BoundingBox::centered_square(1.0)).is_err());
    }

    #[test]
    fn truncation_examples() {
        let a = explicit_set(&[c(0.0, 0.0), c(100.0, 0.0)]);
        let t = truncate_to_reach(&a, 5.0).unwrap();
        assert_eq!(t.values(), &[c(0.0, 0.0)]);
        assert_eq!(t.truncation_params().reach, Some(5.0));
        assert!(truncate_to_reach(&explicit_set(&[]), 1.0).unwrap().is_empty());
        assert!(truncate_to_reach(&a, -1.0).is_err());
    }

    #[test]
    fn height_zero_is_empty() {
        let spec = ForbiddenSpec::Algebraic {
            max_degree: 2,
            max_height: 0,
            region: BoundingBox::centered_square(4.0),
        };
        assert!(spec.build().unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let s = gaussian_rationals(2, unit_box()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"source\":\"gaussian_rational\""));
        let back: ForbiddenSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn permutation() {
        let s = explicit_set(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.permuted(&[1, 0]).unwrap().values()[0], c(1.0, 0.0));
        assert!(s.permuted(&[0, 0]).is_err());
    }
}
