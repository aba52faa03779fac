//! Moving a polynomial off a single value on the boundary of `K`.
//!
//! The construction factors `g = p - a` as `c0 * prod (z - z_k)`, pushes the
//! roots lying on or near the boundary a small distance `eta` away from it,
//! and rebuilds `q = c0 * prod (z - z'_k) + a`. The degree is unchanged and
//! `q - p -> 0` uniformly on `K` as `eta -> 0`.

use serde::{Deserialize, Serialize};

use crate::compact_set::CompactSetSample;
use crate::error::{Error, Result};
use crate::poly::{complex_pair, Polynomial, C64};

/// Knobs of the perturbation search. The defaults are used everywhere in
/// the crate; they are exposed for experiments.
#[derive(Clone, Debug)]
pub struct AvoidOptions {
    /// Roots closer to the boundary than this multiple of the mesh are moved.
    pub activation_factor: f64,
    /// Number of equally spaced trial directions per root.
    pub directions: usize,
    /// Smallest step, as a fraction of the mesh.
    pub eta_floor_factor: f64,
    /// Certification is demanded for this fraction of the margin, leaving
    /// room for later perturbations.
    pub headroom: f64,
}

impl Default for AvoidOptions {
    fn default() -> Self {
        AvoidOptions {
            activation_factor: 2.0,
            directions: 32,
            eta_floor_factor: 1e-6,
            headroom: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootMove {
    #[serde(with = "complex_pair")]
    pub original: C64,
    #[serde(with = "complex_pair")]
    pub moved: C64,
}

/// How a boundary margin was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// `margin > derivative_sup_bound * mesh`.
    Global,
    /// Every boundary sample carries a zero-free disc of radius `mesh` for
    /// `q - a`, by a Taylor tail bound at that sample.
    Local,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `min |q - a|` over the boundary samples.
    pub margin: f64,
    /// Sampled `max |q'|` (inflated) times the mesh.
    pub global_bound: f64,
    pub kind: CertificateKind,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.kind != CertificateKind::None
    }
}

/// Certifies that `q` does not take the value `a` on the set represented by
/// the boundary samples of `k`. See [`BoundaryCertifier`].
pub fn certify_boundary(q: &Polynomial, a: C64, k: &CompactSetSample) -> Result<Certificate> {
    Ok(BoundaryCertifier::new(q, k)?.certify(a))
}

/// Certification of one polynomial against many values on a sample set.
///
/// The cheap global test compares the margin with a Lipschitz bound. When
/// it fails, the local test checks a zero-free disc of radius `mesh` around
/// each sample; since the samples cover the set at that radius, this also
/// excludes the value between samples.
pub struct BoundaryCertifier<'a> {
    q: &'a Polynomial,
    points: &'a [C64],
    mesh: f64,
    values: Vec<C64>,
    global_bound: f64,
    headroom: f64,
}

impl<'a> BoundaryCertifier<'a> {
    /// Certifier over the boundary samples of `k`.
    pub fn new(q: &'a Polynomial, k: &'a CompactSetSample) -> Result<Self> {
        Self::over(q, k.boundary_points(), k.mesh())
    }

    /// Certifier over an arbitrary sample set with covering radius `mesh`.
    pub fn over(q: &'a Polynomial, points: &'a [C64], mesh: f64) -> Result<Self> {
        let global_bound = q.derivative_sup_bound(points)? * mesh;
        Ok(BoundaryCertifier {
            q,
            points,
            mesh,
            values: points.iter().map(|&z| q.eval(z)).collect(),
            global_bound,
            headroom: 1.0,
        })
    }

    /// Demands the certificate for `theta` times the margin, `0 < theta <= 1`.
    pub fn with_headroom(mut self, theta: f64) -> Self {
        self.headroom = theta;
        self
    }

    pub fn margin(&self, a: C64) -> f64 {
        self.values
            .iter()
            .map(|&v| (v - a).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn certify(&self, a: C64) -> Certificate {
        let margin = self.margin(a);
        let kind = if self.headroom * margin > self.global_bound {
            CertificateKind::Global
        } else if margin > 0.0 && {
            let g = self.q.add_constant(-a);
            self.points
                .iter()
                .all(|&z| g.zero_free_disc_with_headroom(z, self.mesh, self.headroom))
        } {
            CertificateKind::Local
        } else {
            CertificateKind::None
        };
        Certificate {
            margin,
            global_bound: self.global_bound,
            kind,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingleAvoidanceResult {
    pub q: Polynomial,
    /// `min |q - a|` over the boundary samples.
    pub margin: f64,
    /// Lipschitz bound times mesh.
    pub certificate_bound: f64,
    pub certificate: CertificateKind,
    pub certified: bool,
    /// `max |p - q|` over all samples of `K`.
    pub sup_change: f64,
    pub perturbed_roots: Vec<RootMove>,
    /// Step length used for the moved roots (0 on the skip path).
    pub eta: f64,
    pub activation_radius: f64,
}

/// Returns `q` of the same degree as `p` with `sup_K |p - q| < eps` and
/// `q != a` at every boundary sample.
///
/// The roots of `p - a` near the boundary are pushed away from it. When
/// no root move is admissible, constant shifts of size `eps / 2` (and `p`
/// itself) are tried instead.
///
/// The result is `certified` when [`certify_boundary`] rules out the value
/// `a` between samples as well. An uncertified result is still returned
/// when no certified one is found.
pub fn avoid_value(
    p: &Polynomial,
    a: C64,
    k: &CompactSetSample,
    eps: f64,
) -> Result<SingleAvoidanceResult> {
    avoid_value_with(p, a, k, eps, &AvoidOptions::default())
}

pub fn avoid_value_with(
    p: &Polynomial,
    a: C64,
    k: &CompactSetSample,
    eps: f64,
    opts: &AvoidOptions,
) -> Result<SingleAvoidanceResult> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if k.boundary_points().is_empty() {
        return Err(Error::EmptySamples);
    }
    let g = p.add_constant(-a);
    if g.degree() == 0 {
        return Ok(avoid_constant(p, a, g.coeffs()[0], eps));
    }
    let factors = g.roots()?;
    let search = Search {
        p,
        a,
        k,
        eps,
        opts,
        leading: factors.leading,
        roots: &factors.roots,
        boundary_dist: factors.roots.iter().map(|&z| k.min_distance_to(z)).collect(),
    };

    let mesh = k.mesh();
    let diam = k.diameter().max(mesh);
    let mut radius = opts.activation_factor * mesh;
    let mut best: Option<SingleAvoidanceResult> = None;
    loop {
        if let Some(found) = search.at_activation(radius)? {
            if found.certified {
                return Ok(found);
            }
            if best.as_ref().map_or(true, |b| found.margin > b.margin) {
                best = Some(found);
            }
        }
        if radius > diam {
            break;
        }
        radius *= 2.0;
    }
    // constant shifts, and `p` itself, for budgets too small for root moves
    if let Some(found) = search.shift_fallback()? {
        if found.certified || best.as_ref().map_or(true, |b| found.margin > b.margin) {
            best = Some(found);
        }
    }
    best.ok_or_else(|| Error::AvoidFailed {
        value: a.to_string(),
        reason: format!("no root perturbation below eps = {eps:e} separates the value from the boundary samples"),
    })
}

fn avoid_constant(p: &Polynomial, a: C64, g0: C64, eps: f64) -> SingleAvoidanceResult {
    let hit = g0.norm() <= 4.0 * f64::EPSILON * a.norm().max(1.0);
    let (q, sup_change, eta) = if hit {
        (p.add_constant(C64::new(0.5 * eps, 0.0)), 0.5 * eps, 0.5 * eps)
    } else {
        (p.clone(), 0.0, 0.0)
    };
    let margin = (q.coeffs()[0] - a).norm();
    SingleAvoidanceResult {
        q,
        margin,
        certificate_bound: 0.0,
        certificate: if margin > 0.0 {
            CertificateKind::Global
        } else {
            CertificateKind::None
        },
        certified: margin > 0.0,
        sup_change,
        perturbed_roots: Vec::new(),
        eta,
        activation_radius: 0.0,
    }
}

struct Search<'a> {
    p: &'a Polynomial,
    a: C64,
    k: &'a CompactSetSample,
    eps: f64,
    opts: &'a AvoidOptions,
    leading: C64,
    roots: &'a [C64],
    boundary_dist: Vec<f64>,
}

struct Candidate {
    q: Polynomial,
    cert: Certificate,
    moves: Vec<RootMove>,
    eta: f64,
}

impl Search<'_> {
    /// Best result when moving every root within `radius` of the boundary.
    /// `None` when no admissible step exists.
    fn at_activation(&self, radius: f64) -> Result<Option<SingleAvoidanceResult>> {
        let active: Vec<usize> = (0..self.roots.len())
            .filter(|&i| self.boundary_dist[i] < radius)
            .collect();
        if active.is_empty() {
            let q = self.p.clone();
            let cert = self.certify(&q)?;
            let cand = Candidate {
                q,
                cert,
                moves: Vec::new(),
                eta: 0.0,
            };
            return Ok((cert.margin > 0.0).then(|| self.finish(cand, 0.0, radius)));
        }

        let mesh = self.k.mesh();
        let diam = self.k.diameter().max(mesh);
        let m = self.roots.len() as f64;
        // first-order size that keeps the change below eps, and a generous cap
        let estimate = self.eps / (4.0 * m * self.leading.norm() * diam.max(1.0).powf(m - 1.0));
        let mut eta = (0.5 * diam).max(estimate);
        let floor = self.opts.eta_floor_factor * mesh;
        let mut fallback: Option<(Candidate, f64)> = None;
        let mut refined = false;
        while eta >= floor {
            let (mut moves, mut q, mut change_boundary) = self.trial(&active, eta)?;
            if change_boundary < self.eps && !refined && eta < 0.5 * diam {
                // the ladder overshoots by up to a factor 2; recover most of it
                refined = true;
                let (mut lo, mut hi) = (eta, 2.0 * eta);
                for _ in 0..6 {
                    let mid = 0.5 * (lo + hi);
                    let t = self.trial(&active, mid)?;
                    if t.2 < self.eps {
                        lo = mid;
                        (moves, q, change_boundary) = t;
                    } else {
                        hi = mid;
                    }
                }
                eta = lo;
            }
            if change_boundary < self.eps && q.degree() == self.p.degree() {
                let cert = self.certify(&q)?;
                if cert.margin > 0.0 {
                    let change = q.sup_distance(self.p, self.k.all_points())?;
                    if change < self.eps {
                        let cand = Candidate {
                            q,
                            cert,
                            moves,
                            eta,
                        };
                        if cert.certified() {
                            return Ok(Some(self.finish(cand, change, radius)));
                        }
                        if fallback.as_ref().map_or(true, |(c, _)| cert.margin > c.cert.margin) {
                            fallback = Some((cand, change));
                        }
                    }
                }
            }
            eta *= 0.5;
        }
        Ok(fallback.map(|(cand, change)| self.finish(cand, change, radius)))
    }

    /// Best of `p + eps/2 e^(i theta)` over the search directions and `p`
    /// unchanged, by certificate and then margin. `None` when every
    /// candidate takes the value at a sample.
    fn shift_fallback(&self) -> Result<Option<SingleAvoidanceResult>> {
        let n = self.opts.directions.max(1);
        let shifts = std::iter::once(C64::new(0.0, 0.0))
            .chain((0..n).map(|j| C64::from_polar(0.5 * self.eps, std::f64::consts::TAU * j as f64 / n as f64)));
        let mut best: Option<(Candidate, f64)> = None;
        for shift in shifts {
            let q = self.p.add_constant(shift);
            if q.degree() != self.p.degree() {
                continue;
            }
            let cert = self.certify(&q)?;
            if !(cert.margin > 0.0) {
                continue;
            }
            let change = q.sup_distance(self.p, self.k.all_points())?;
            if !(change < self.eps) {
                continue;
            }
            let better = best.as_ref().map_or(true, |(b, _)| {
                (cert.certified(), cert.margin) > (b.cert.certified(), b.cert.margin)
            });
            if better {
                best = Some((
                    Candidate {
                        q,
                        cert,
                        moves: Vec::new(),
                        eta: shift.norm(),
                    },
                    change,
                ));
            }
        }
        Ok(best.map(|(c, change)| self.finish(c, change, 0.0)))
    }

    /// Moves the active roots by `eta` and rebuilds; returns the moves, the
    /// new polynomial and its sup distance to `p` on the boundary samples.
    fn trial(&self, active: &[usize], eta: f64) -> Result<(Vec<RootMove>, Polynomial, f64)> {
        let moves = self.move_roots(active, eta);
        let mut moved = self.roots.to_vec();
        for (&i, mv) in active.iter().zip(&moves) {
            moved[i] = mv.moved;
        }
        let q = Polynomial::from_roots(self.leading, &moved).add_constant(self.a);
        let change = q.sup_distance(self.p, self.k.boundary_points())?;
        Ok((moves, q, change))
    }

    fn certify(&self, q: &Polynomial) -> Result<Certificate> {
        Ok(BoundaryCertifier::new(q, self.k)?
            .with_headroom(self.opts.headroom)
            .certify(self.a))
    }

    fn finish(&self, c: Candidate, sup_change: f64, radius: f64) -> SingleAvoidanceResult {
        SingleAvoidanceResult {
            certified: c.cert.certified(),
            certificate: c.cert.kind,
            q: c.q,
            margin: c.cert.margin,
            certificate_bound: c.cert.global_bound,
            sup_change,
            perturbed_roots: c.moves,
            eta: c.eta,
            activation_radius: radius,
        }
    }

    /// Moves each active root by `eta` in the direction that maximizes its
    /// distance to the boundary samples; near-ties go to the direction
    /// pointing away from the centroid of `K`.
    fn move_roots(&self, active: &[usize], eta: f64) -> Vec<RootMove> {
        let centroid = self.k.centroid();
        let n = self.opts.directions.max(1);
        active
            .iter()
            .map(|&i| {
                let z = self.roots[i];
                let mut dirs: Vec<C64> = Vec::with_capacity(n + 1);
                if let Some(b) = self.k.nearest_boundary(z) {
                    let away = z - b;
                    if away.norm() > 0.0 {
                        dirs.push(away / away.norm());
                    }
                }
                dirs.extend((0..n).map(|j| C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64)));
                let outward = z - centroid;
                let mut best = (z, f64::NEG_INFINITY, f64::NEG_INFINITY);
                for d in dirs {
                    let w = z + d * eta;
                    let dist = self.k.min_distance_to(w);
                    let lean = (outward * d.conj()).re;
                    let tie = (dist - best.1).abs() <= 1e-9 * dist.max(best.1.abs());
                    if (!tie && dist > best.1) || (tie && lean > best.2) {
                        best = (w, dist, lean);
                    }
                }
                RootMove {
                    original: z,
                    moved: best.0,
                }
            })
            .collect()
    }
}
