//! Sampled compact sets.
//!
//! A [`CompactSetSample`] is a finite point cloud standing in for a compact
//! set `K`, with every point tagged as lying on the boundary or in the
//! interior and a `mesh`: an upper bound on the distance from any point of
//! the represented set to its nearest sample. All sup-norm and margin claims
//! made downstream hold at the samples and are extended to the true set only
//! through `mesh` times a Lipschitz bound.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{segments_touch, PointIndex};
use crate::poly::{complex_pair, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointTag {
    Boundary,
    Interior,
}

/// A closed disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscSpec {
    #[serde(with = "complex_pair")]
    pub center: C64,
    pub radius: f64,
}

impl DiscSpec {
    pub fn new(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        Ok(DiscSpec { center, radius })
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        (z - self.center).norm() <= self.radius + tol
    }
}

/// Axis-aligned rectangle, inclusive of its edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_re: f64,
    pub max_re: f64,
    pub min_im: f64,
    pub max_im: f64,
}

impl BoundingBox {
    pub fn new(min_re: f64, max_re: f64, min_im: f64, max_im: f64) -> Result<Self> {
        if !(min_re <= max_re && min_im <= max_im) {
            return Err(Error::InvalidParameter("empty bounding box".into()));
        }
        Ok(BoundingBox {
            min_re,
            max_re,
            min_im,
            max_im,
        })
    }

    /// The square `[-r, r] x [-r, r]`.
    pub fn centered_square(r: f64) -> Self {
        BoundingBox {
            min_re: -r,
            max_re: r,
            min_im: -r,
            max_im: r,
        }
    }

    /// Membership with an absolute slack of `1e-12`, so that values computed
    /// numerically on an edge are not lost.
    pub fn contains(&self, z: C64) -> bool {
        const SLACK: f64 = 1e-12;
        z.re >= self.min_re - SLACK
            && z.re <= self.max_re + SLACK
            && z.im >= self.min_im - SLACK
            && z.im <= self.max_im + SLACK
    }

    pub fn of_points(points: &[C64]) -> Option<Self> {
        let first = points.first()?;
        let mut b = BoundingBox {
            min_re: first.re,
            max_re: first.re,
            min_im: first.im,
            max_im: first.im,
        };
        for z in points {
            b.min_re = b.min_re.min(z.re);
            b.max_re = b.max_re.max(z.re);
            b.min_im = b.min_im.min(z.im);
            b.max_im = b.max_im.max(z.im);
        }
        Some(b)
    }

    pub fn center(&self) -> C64 {
        C64::new(
            0.5 * (self.min_re + self.max_re),
            0.5 * (self.min_im + self.max_im),
        )
    }

    pub fn diagonal(&self) -> f64 {
        (self.max_re - self.min_re).hypot(self.max_im - self.min_im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CantorKind {
    /// `S + iS`
    SPlusIS,
    /// `[0, 1] + iS`
    IntervalPlusIS,
}

#[derive(Clone, Debug)]
pub struct CompactSetSample {
    points: Vec<C64>,
    tags: Vec<PointTag>,
    in_closure_interior: Vec<bool>,
    boundary: Vec<C64>,
    interior: Vec<C64>,
    closure_interior: Vec<C64>,
    mesh: f64,
    component_separation: f64,
    discs: Vec<DiscSpec>,
    tangent: bool,
    area: Option<f64>,
    boundary_index: PointIndex,
}

impl CompactSetSample {
    /// Assembles a sample from tagged points. `in_closure_interior` marks the
    /// points that belong to the closure of the interior (for disc unions:
    /// every disc point, boundary circles included).
    pub fn from_tagged(
        points: Vec<C64>,
        tags: Vec<PointTag>,
        in_closure_interior: Vec<bool>,
        mesh: f64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySamples);
        }
        if tags.len() != points.len() || in_closure_interior.len() != points.len() {
            return Err(Error::InvalidParameter("tag lists must align with points".into()));
        }
        if !(mesh > 0.0) || !mesh.is_finite() {
            return Err(Error::InvalidParameter(format!("mesh must be positive, got {mesh}")));
        }
        let pick = |want: &dyn Fn(usize) -> bool| -> Vec<C64> {
            (0..points.len()).filter(|&i| want(i)).map(|i| points[i]).collect()
        };
        let boundary = pick(&|i| tags[i] == PointTag::Boundary);
        let interior = pick(&|i| tags[i] == PointTag::Interior);
        let closure_interior = pick(&|i| in_closure_interior[i]);
        let boundary_index = PointIndex::new(&boundary);
        Ok(CompactSetSample {
            points,
            tags,
            in_closure_interior,
            boundary,
            interior,
            closure_interior,
            mesh,
            component_separation: 0.0,
            discs: Vec::new(),
            tangent: false,
            area: None,
            boundary_index,
        })
    }

    /// A point cloud with every point on the boundary (an empty-interior set).
    pub fn from_boundary_points(points: Vec<C64>, mesh: f64) -> Result<Self> {
        let n = points.len();
        Self::from_tagged(points, vec![PointTag::Boundary; n], vec![false; n], mesh)
    }

    pub fn all_points(&self) -> &[C64] {
        &self.points
    }

    pub fn tags(&self) -> &[PointTag] {
        &self.tags
    }

    pub fn boundary_points(&self) -> &[C64] {
        &self.boundary
    }

    pub fn interior_points(&self) -> &[C64] {
        &self.interior
    }

    pub fn closure_interior_points(&self) -> &[C64] {
        &self.closure_interior
    }

    pub fn is_in_closure_interior(&self, i: usize) -> bool {
        self.in_closure_interior[i]
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn component_separation(&self) -> f64 {
        self.component_separation
    }

    /// Disc components of the interior, when the set was built from discs.
    pub fn discs(&self) -> &[DiscSpec] {
        &self.discs
    }

    /// Set for the tangent two-disc configuration, for which no avoidance
    /// guarantee is claimed.
    pub fn is_tangent(&self) -> bool {
        self.tangent
    }

    /// Area of the represented set when the constructor knows it.
    pub fn area(&self) -> Option<f64> {
        self.area
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::of_points(&self.points).expect("non-empty by construction")
    }

    /// Upper bound on the diameter (bounding-box diagonal).
    pub fn diameter(&self) -> f64 {
        self.bounding_box().diagonal()
    }

    pub fn centroid(&self) -> C64 {
        self.points.iter().sum::<C64>() / self.points.len() as f64
    }

    /// Distance from `z` to the nearest boundary sample.
    pub fn min_distance_to(&self, z: C64) -> f64 {
        self.boundary_index
            .nearest(z)
            .map_or(f64::INFINITY, |(_, d)| d)
    }

    /// Nearest boundary sample to `z`.
    pub fn nearest_boundary(&self, z: C64) -> Option<C64> {
        self.boundary_index.nearest(z).map(|(i, _)| self.boundary[i])
    }

    /// Union of two samples. Interior tags and disc metadata are kept; the
    /// mesh is the larger of the two.
    pub fn union(&self, other: &CompactSetSample) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        let mut tags = self.tags.clone();
        tags.extend_from_slice(&other.tags);
        let mut closure = self.in_closure_interior.clone();
        closure.extend_from_slice(&other.in_closure_interior);
        let mut out = Self::from_tagged(points, tags, closure, self.mesh.max(other.mesh))?;
        out.discs = self.discs.iter().chain(other.discs.iter()).copied().collect();
        out.component_separation = pairwise_gap(&out.discs).max(0.0);
        out.tangent = self.tangent || other.tangent;
        out.area = match (self.area, other.area) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(out)
    }

    /// Writes `re,im,tag` rows with a header line.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["re", "im", "tag"])?;
        for (z, tag) in self.points.iter().zip(&self.tags) {
            let tag = match tag {
                PointTag::Boundary => "boundary",
                PointTag::Interior => "interior",
            };
            w.write_record([z.re.to_string(), z.im.to_string(), tag.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn pairwise_gap(discs: &[DiscSpec]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in discs.iter().enumerate() {
        for b in &discs[i + 1..] {
            gap = gap.min((a.center - b.center).norm() - a.radius - b.radius);
        }
    }
    if gap.is_infinite() {
        0.0
    } else {
        gap
    }
}

/// Sampled circle `|z - center| = radius`: a Jordan curve with empty
/// interior. The mesh is the arc length between neighbouring samples.
pub fn make_circle(center: C64, radius: f64, samples: usize) -> Result<CompactSetSample> {
    DiscSpec::new(center, radius)?;
    if samples < 3 {
        return Err(Error::InvalidParameter("a circle needs at least 3 samples".into()));
    }
    let points = (0..samples)
        .map(|k| center + C64::from_polar(radius, TAU * k as f64 / samples as f64))
        .collect();
    let mut set = CompactSetSample::from_boundary_points(points, TAU * radius / samples as f64)?;
    set.area = Some(0.0);
    Ok(set)
}

/// Union of closed discs. Each circle gets `samples_per_disc` boundary
/// samples; the interior is covered by concentric rings whose radial and
/// angular spacing does not exceed the boundary arc spacing `h`, so `h` is
/// a valid mesh.
///
/// Discs may touch at a point (reported through [`CompactSetSample::is_tangent`])
/// but their interiors must not intersect.
pub fn make_disc_union(discs: &[DiscSpec], samples_per_disc: usize) -> Result<CompactSetSample> {
    if discs.is_empty() {
        return Err(Error::InvalidParameter("no discs given".into()));
    }
    if samples_per_disc < 3 {
        return Err(Error::InvalidParameter("need at least 3 samples per disc".into()));
    }
    for d in discs {
        DiscSpec::new(d.center, d.radius)?;
    }
    let mut tangent = false;
    for (i, a) in discs.iter().enumerate() {
        for b in &discs[i + 1..] {
            let gap = (a.center - b.center).norm() - a.radius - b.radius;
            let tol = 1e-12 * (1.0 + a.center.norm() + b.center.norm() + a.radius + b.radius);
            if gap < -tol {
                return Err(Error::Geometry(format!(
                    "discs at {} and {} overlap",
                    a.center, b.center
                )));
            }
            if gap <= tol {
                tangent = true;
            }
        }
    }

    let mut points = Vec::new();
    let mut tags = Vec::new();
    let mut mesh: f64 = 0.0;
    for d in discs {
        let h = TAU * d.radius / samples_per_disc as f64;
        mesh = mesh.max(h);
        for k in 0..samples_per_disc {
            points.push(d.center + C64::from_polar(d.radius, TAU * k as f64 / samples_per_disc as f64));
            tags.push(PointTag::Boundary);
        }
        let rings = (d.radius / h).ceil().max(1.0) as usize;
        for k in 0..rings {
            let rho = d.radius * k as f64 / rings as f64;
            if k == 0 {
                points.push(d.center);
                tags.push(PointTag::Interior);
                continue;
            }
            let m = ((TAU * rho / h).ceil() as usize).max(3);
            let offset = if k % 2 == 1 { PI / m as f64 } else { 0.0 };
            for j in 0..m {
                points.push(d.center + C64::from_polar(rho, TAU * j as f64 / m as f64 + offset));
                tags.push(PointTag::Interior);
            }
        }
    }
    let n = points.len();
    let mut set = CompactSetSample::from_tagged(points, tags, vec![true; n], mesh)?;
    set.discs = discs.to_vec();
    set.component_separation = if tangent { 0.0 } else { pairwise_gap(discs) };
    set.tangent = tangent;
    set.area = Some(discs.iter().map(|d| PI * d.radius * d.radius).sum());
    Ok(set)
}

/// Intervals of the depth-`depth` fat Cantor construction on `[0, 1]`: at
/// step `k` (from 1) a centred gap of length `removal_ratio / 4^(k-1)` is
/// removed from each of the `2^(k-1)` current intervals, so the total
/// removed length is `removal_ratio * (1 + 1/2 + ... + 1/2^(depth-1))`.
pub fn fat_cantor_intervals(removal_ratio: f64, depth: u32) -> Result<Vec<(f64, f64)>> {
    if !(removal_ratio > 0.0 && removal_ratio < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "removal ratio must lie in (0, 1/2), got {removal_ratio}"
        )));
    }
    if depth > 8 {
        return Err(Error::InvalidParameter(format!("depth {depth} exceeds 8")));
    }
    let mut intervals = vec![(0.0, 1.0)];
    for k in 1..=depth {
        let gap = removal_ratio / 4f64.powi(k as i32 - 1);
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let m = 0.5 * (a + b);
                [(a, m - 0.5 * gap), (m + 0.5 * gap, b)]
            })
            .collect();
    }
    Ok(intervals)
}

/// Samples a product built from a finite-depth fat Cantor set. Every point
/// is tagged boundary: the limit set has empty interior, and the sampled
/// cells carry no interior tags. `per_cell_samples` is the number of grid
/// points per cell side (one means the cell centre).
pub fn make_fat_cantor_product(
    kind: CantorKind,
    removal_ratio: f64,
    depth: u32,
    per_cell_samples: usize,
) -> Result<CompactSetSample> {
    if per_cell_samples == 0 {
        return Err(Error::InvalidParameter("per_cell_samples must be positive".into()));
    }
    let intervals = fat_cantor_intervals(removal_ratio, depth)?;
    let grid = |a: f64, b: f64, n: usize| -> Vec<f64> {
        if n == 1 {
            vec![0.5 * (a + b)]
        } else {
            (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
        }
    };
    let spacing = |a: f64, b: f64, n: usize| -> f64 {
        if n == 1 {
            b - a
        } else {
            (b - a) / (n - 1) as f64
        }
    };
    let n = per_cell_samples;
    let mut points = Vec::new();
    let mut mesh: f64 = 0.0;
    let area;
    match kind {
        CantorKind::SPlusIS => {
            for &(xa, xb) in &intervals {
                for &(ya, yb) in &intervals {
                    for x in grid(xa, xb, n) {
                        for y in grid(ya, yb, n) {
                            points.push(C64::new(x, y));
                        }
                    }
                    mesh = mesh.max(0.5 * spacing(xa, xb, n).hypot(spacing(ya, yb, n)));
                }
            }
            let len: f64 = intervals.iter().map(|(a, b)| b - a).sum();
            area = len * len;
        }
        CantorKind::IntervalPlusIS => {
            for &(ya, yb) in &intervals {
                let sy = spacing(ya, yb, n);
                let nx = if n == 1 {
                    (1.0 / (yb - ya)).ceil() as usize
                } else {
                    (1.0 / sy).ceil() as usize + 1
                };
                let xs = if n == 1 {
                    (0..nx).map(|j| (j as f64 + 0.5) / nx as f64).collect::<Vec<_>>()
                } else {
                    grid(0.0, 1.0, nx)
                };
                let sx = if n == 1 { 1.0 / nx as f64 } else { 1.0 / (nx - 1) as f64 };
                for &x in &xs {
                    for y in grid(ya, yb, n) {
                        points.push(C64::new(x, y));
                    }
                }
                mesh = mesh.max(0.5 * sx.hypot(sy));
            }
            area = intervals.iter().map(|(a, b)| b - a).sum();
        }
    }
    let mut set = CompactSetSample::from_boundary_points(points, mesh)?;
    set.area = Some(area);
    Ok(set)
}

/// Arclength-uniform samples of a simple polyline. All samples are tagged
/// boundary; the mesh is half the arclength spacing.
pub fn make_arc(control_points: &[C64], samples: usize) -> Result<CompactSetSample> {
    if control_points.len() < 2 {
        return Err(Error::InvalidParameter("an arc needs at least 2 control points".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("an arc needs at least 2 samples".into()));
    }
    check_simple_polyline(control_points)?;
    let lengths: Vec<f64> = control_points.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    let mut points = Vec::with_capacity(samples);
    let mut seg = 0;
    let mut start = 0.0;
    for i in 0..samples {
        let s = total * i as f64 / (samples - 1) as f64;
        while seg + 1 < lengths.len() && s > start + lengths[seg] {
            start += lengths[seg];
            seg += 1;
        }
        let t = ((s - start) / lengths[seg]).clamp(0.0, 1.0);
        points.push(control_points[seg] + (control_points[seg + 1] - control_points[seg]) * t);
    }
    let mesh = 0.5 * total / (samples - 1) as f64;
    let mut set = CompactSetSample::from_boundary_points(points, mesh)?;
    set.area = Some(0.0);
    Ok(set)
}

fn check_simple_polyline(pts: &[C64]) -> Result<()> {
    let segs: Vec<(C64, C64)> = pts.windows(2).map(|w| (w[0], w[1])).collect();
    for (i, &(a, b)) in segs.iter().enumerate() {
        if (b - a).norm() == 0.0 {
            return Err(Error::Geometry(format!("zero-length segment at control point {i}")));
        }
        if let Some(&(_, next)) = segs.get(i + 1) {
            // adjacent segments may only share their joint; a fold-back overlaps
            let u = b - a;
            let v = next - b;
            let cross = u.re * v.im - u.im * v.re;
            let dot = (u * v.conj()).re;
            if cross.abs() <= 1e-14 * u.norm() * v.norm() && dot < 0.0 {
                return Err(Error::Geometry(format!("polyline folds back at control point {}", i + 1)));
            }
        }
        for (j, &(c, d)) in segs.iter().enumerate().skip(i + 2) {
            if segments_touch(a, b, c, d) {
                return Err(Error::Geometry(format!(
                    "polyline segments {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(())
}

/// Declarative set description, as found in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "snake_case")]
pub enum SetSpec {
    Circle {
        #[serde(with = "complex_pair")]
        center: C64,
        radius: f64,
        samples: usize,
    },
    DiscUnion {
        discs: Vec<DiscSpec>,
        samples_per_disc: usize,
    },
    FatCantorProduct {
        kind: CantorKind,
        removal_ratio: f64,
        depth: u32,
        per_cell_samples: usize,
    },
    Arc {
        #[serde(with = "crate::poly::complex_pairs")]
        control_points: Vec<C64>,
        samples: usize,
    },
    Union {
        parts: Vec<SetSpec>,
    },
}

impl SetSpec {
    pub fn build(&self) -> Result<CompactSetSample> {
        self.build_dense(1)
    }

    /// Builds the set with every sampling density multiplied by `factor`,
    /// which divides the mesh by roughly `factor`.
    pub fn build_dense(&self, factor: usize) -> Result<CompactSetSample> {
        let factor = factor.max(1);
        match self {
            SetSpec::Circle {
                center,
                radius,
                samples,
            } => make_circle(*center, *radius, samples * factor),
            SetSpec::DiscUnion {
                discs,
                samples_per_disc,
            } => make_disc_union(discs, samples_per_disc * factor),
            SetSpec::FatCantorProduct {
                kind,
                removal_ratio,
                depth,
                per_cell_samples,
            } => {
                let n = if factor == 1 {
                    *per_cell_samples
                } else {
                    (per_cell_samples.max(&2) - 1) * factor + 1
                };
                make_fat_cantor_product(*kind, *removal_ratio, *depth, n)
            }
            SetSpec::Arc {
                control_points,
                samples,
            } => make_arc(control_points, (samples - 1).max(1) * factor + 1),
            SetSpec::Union { parts } => {
                let mut iter = parts.iter();
                let first = iter
                    .next()
                    .ok_or_else(|| Error::InvalidParameter("empty union".into()))?
                    .build_dense(factor)?;
                iter.try_fold(first, |acc, part| acc.union(&part.build_dense(factor)?))
            }
        }
    }
}
