//! Small planar helpers: nearest-neighbour index and segment predicates.

use crate::poly::C64;

/// Static 2-d tree over a point cloud for nearest-neighbour queries.
#[derive(Clone, Debug, Default)]
pub struct PointIndex {
    points: Vec<C64>,
    // permutation of point indices laid out as an implicit balanced tree
    order: Vec<usize>,
}

impl PointIndex {
    pub fn new(points: &[C64]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        build(points, &mut order, 0);
        PointIndex {
            points: points.to_vec(),
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of and distance to the nearest indexed point.
    pub fn nearest(&self, z: C64) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(z, 0, self.order.len(), 0, &mut best);
        Some((best.0, best.1.sqrt()))
    }

    fn search(&self, z: C64, lo: usize, hi: usize, depth: usize, best: &mut (usize, f64)) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let idx = self.order[mid];
        let p = self.points[idx];
        let d2 = (p - z).norm_sqr();
        if d2 < best.1 {
            *best = (idx, d2);
        }
        let diff = if depth % 2 == 0 { z.re - p.re } else { z.im - p.im };
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(z, near.0, near.1, depth + 1, best);
        if diff * diff < best.1 {
            self.search(z, far.0, far.1, depth + 1, best);
        }
    }
}

fn build(points: &[C64], order: &mut [usize], depth: usize) {
    if order.len() <= 1 {
        return;
    }
    let mid = order.len() / 2;
    let key = |i: &usize| {
        if depth % 2 == 0 {
            points[*i].re
        } else {
            points[*i].im
        }
    };
    order.select_nth_unstable_by(mid, |a, b| key(a).total_cmp(&key(b)));
    let (left, right) = order.split_at_mut(mid);
    build(points, left, depth + 1);
    build(points, &mut right[1..], depth + 1);
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

pub fn point_segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Intersection point of the closed segments `[a, b]` and `[c, d]` when they
/// cross or touch at a single point. Collinear overlaps return `None`.
pub fn segment_intersection(a: C64, b: C64, c: C64, d: C64) -> Option<C64> {
    let r = b - a;
    let s = d - c;
    let denom = cross(r, s);
    let scale = r.norm() * s.norm();
    if denom.abs() <= 1e-14 * scale {
        return None;
    }
    let t = cross(c - a, s) / denom;
    let u = cross(c - a, r) / denom;
    let tol = 1e-12;
    if (-tol..=1.0 + tol).contains(&t) && (-tol..=1.0 + tol).contains(&u) {
        Some(a + r * t)
    } else {
        None
    }
}

/// True when the closed segments share any point, including collinear overlap.
pub fn segments_touch(a: C64, b: C64, c: C64, d: C64) -> bool {
    if segment_intersection(a, b, c, d).is_some() {
        return true;
    }
    let scale = (b - a).norm().max((d - c).norm()).max(1.0);
    let tol = 1e-12 * scale;
    point_segment_distance(a, c, d) <= tol
        || point_segment_distance(b, c, d) <= tol
        || point_segment_distance(c, a, b) <= tol
        || point_segment_distance(d, a, b) <= tol
}

pub fn segment_segment_distance(a: C64, b: C64, c: C64, d: C64) -> f64 {
    if segment_intersection(a, b, c, d).is_some() {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}
