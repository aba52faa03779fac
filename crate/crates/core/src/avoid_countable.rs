//! Avoiding a whole enumerated value set by iterating the single-value step
//! with geometrically shrinking budgets.
//!
//! With `p_0 = q` and `eps_0 = eps / 2`, step `j` moves `p_{j-1}` off `a_j`
//! by less than `eps_{j-1} / 2`, measures the boundary margin `delta_j` of
//! the result and sets `eps_j = min(delta_j, eps_{j-1} / 2) / 2`. Later steps
//! then change `p_j` by less than `eps_j` in total, so every earlier margin
//! survives: `|p - a_j| >= delta_j - eps_j > 0` on the boundary.

use serde::{Deserialize, Serialize};

use crate::avoid_one::{avoid_value_with, AvoidOptions, BoundaryCertifier, CertificateKind};
use crate::compact_set::CompactSetSample;
use crate::countable::ForbiddenSet;
use crate::error::{Error, Result};
use crate::poly::{complex_pairs, Polynomial, C64};

/// Margins below this fraction of the boundary sup of `p_j` are treated as
/// numerically zero.
pub const MARGIN_FLOOR: f64 = 1e-12;

/// Steps certify half of each new margin. Later steps change the
/// polynomial by less than `2/3` of `eps_j <= delta_j / 2`, so the final
/// margin keeps at least that half.
const HEADROOM: f64 = 0.5;

/// The budgets `eps_0, eps_1, ...`, kept both as doubles and as base-2
/// logarithms.
///
/// Budgets shrink at least by a factor 4 per step, so a few hundred values
/// take them below the smallest positive double. The logarithms keep the
/// comparisons meaningful after that point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsSchedule {
    values: Vec<f64>,
    log2: Vec<f64>,
}

impl EpsSchedule {
    pub fn starting_at(eps0: f64) -> Self {
        EpsSchedule {
            values: vec![eps0],
            log2: vec![eps0.log2()],
        }
    }

    /// Schedule from plain values.
    pub fn from_values(values: &[f64]) -> Self {
        EpsSchedule {
            values: values.to_vec(),
            log2: values.iter().map(|v| v.log2()).collect(),
        }
    }

    pub fn from_log2(log2: Vec<f64>) -> Self {
        EpsSchedule {
            values: log2.iter().map(|l| l.exp2()).collect(),
            log2,
        }
    }

    /// Appends `eps_j = min(delta_j, eps_{j-1} / 2) / 2`.
    pub fn push(&mut self, delta: f64) {
        let prev = *self.values.last().expect("schedule starts non-empty");
        let prev_log = *self.log2.last().expect("schedule starts non-empty");
        self.values.push(0.5 * delta.min(0.5 * prev));
        self.log2.push(-1.0 + delta.log2().min(prev_log - 1.0));
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn log2(&self, j: usize) -> f64 {
        self.log2[j]
    }

    /// `eps_j`, which is 0 once it has underflowed.
    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log2_values(&self) -> &[f64] {
        &self.log2
    }

    /// True when `x < eps_j`. Falls back to the log domain once `eps_j` is
    /// no longer a normal double, where a zero difference still passes.
    pub fn exceeds(&self, j: usize, x: f64) -> bool {
        if self.values[j].is_normal() {
            x < self.values[j]
        } else {
            x == 0.0 || x.log2() < self.log2[j]
        }
    }

    /// Budget `eps_{j-1} / 2` of step `j`, if it is a normal positive double.
    fn budget(&self, step: usize) -> Option<f64> {
        let v = 0.5 * self.values[step - 1];
        (v.is_normal() && v > 0.0).then_some(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// The previous iterate already certifiably avoided the value.
    Skip,
    Perturbed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AvoidanceReport {
    /// Final polynomial `p_N`.
    pub p: Polynomial,
    /// `p_0, ..., p_N` when requested.
    pub iterates_kept: Option<Vec<Polynomial>>,
    #[serde(with = "complex_pairs")]
    pub values: Vec<C64>,
    /// `delta_j` for `j = 1..=N`.
    pub deltas: Vec<f64>,
    /// `eps_0, ..., eps_N` (entries that underflowed are 0) with their
    /// base-2 logarithms.
    pub eps_schedule: EpsSchedule,
    pub steps: Vec<StepKind>,
    /// Minimum of `|p - a_j|` over the boundary samples.
    pub final_margins: Vec<f64>,
    pub final_certificates: Vec<CertificateKind>,
    pub certified: bool,
    /// Maximum of `|q - p|` over all samples.
    pub total_sup_change: f64,
    pub initial_degree: usize,
    pub final_degree: usize,
    pub leading_coefficient_magnitude: f64,
}

impl AvoidanceReport {
    pub fn schedule(&self) -> &EpsSchedule {
        &self.eps_schedule
    }
}

/// Runs the iteration over the values of `a` in enumeration order.
pub fn avoid_set(
    q: &Polynomial,
    a: &ForbiddenSet,
    k: &CompactSetSample,
    eps: f64,
    keep_iterates: bool,
) -> Result<AvoidanceReport> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if k.boundary_points().is_empty() {
        return Err(Error::EmptySamples);
    }
    let values = a.values().to_vec();
    let opts = AvoidOptions {
        headroom: HEADROOM,
        ..AvoidOptions::default()
    };
    let mut schedule = EpsSchedule::starting_at(0.5 * eps);
    let mut deltas = Vec::with_capacity(values.len());
    let mut steps = Vec::with_capacity(values.len());
    let mut iterates = keep_iterates.then(|| vec![q.clone()]);
    let mut p = q.clone();

    for (idx, &value) in values.iter().enumerate() {
        let step = idx + 1;
        let certifier = BoundaryCertifier::new(&p, k)?.with_headroom(HEADROOM);
        let (next, kind) = if certifier.certify(value).certified() {
            (p.clone(), StepKind::Skip)
        } else {
            let budget = schedule.budget(step).ok_or_else(|| Error::BudgetUnderflow {
                step,
                value: value.to_string(),
            })?;
            let res = avoid_value_with(&p, value, k, budget, &opts).map_err(|e| Error::AvoidStep {
                step,
                source: Box::new(e),
            })?;
            (res.q, StepKind::Perturbed)
        };
        let delta = BoundaryCertifier::new(&next, k)?.margin(value);
        let floor = MARGIN_FLOOR * next.sup_on(k.boundary_points())?.max(1.0);
        if !(delta > floor) {
            return Err(Error::DegenerateMargin { step, delta, floor });
        }
        schedule.push(delta);
        deltas.push(delta);
        steps.push(kind);
        p = next;
        if let Some(list) = iterates.as_mut() {
            list.push(p.clone());
        }
    }

    let certifier = BoundaryCertifier::new(&p, k)?;
    let certificates: Vec<_> = values.iter().map(|&v| certifier.certify(v)).collect();
    let total_sup_change = p.sup_distance(q, k.all_points())?;
    Ok(AvoidanceReport {
        iterates_kept: iterates,
        values,
        deltas,
        steps,
        final_margins: certificates.iter().map(|c| c.margin).collect(),
        final_certificates: certificates.iter().map(|c| c.kind).collect(),
        certified: certificates.iter().all(|c| c.certified()),
        total_sup_change,
        initial_degree: q.degree(),
        final_degree: p.degree(),
        leading_coefficient_magnitude: p.leading().norm(),
        eps_schedule: schedule,
        p,
    })
}

/// True iff `sup_K |p_l - p_k| < eps_k` for all `k < l`.
pub fn check_cauchy(iterates: &[Polynomial], schedule: &EpsSchedule, k: &CompactSetSample) -> bool {
    if iterates.len() > schedule.len() {
        return false;
    }
    let samples = k.all_points();
    let values: Vec<Vec<C64>> = iterates
        .iter()
        .map(|p| samples.iter().map(|&z| p.eval(z)).collect())
        .collect();
    for i in 0..iterates.len() {
        for j in i + 1..iterates.len() {
            if iterates[i] == iterates[j] {
                continue;
            }
            let sup = values[i]
                .iter()
                .zip(&values[j])
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            if !schedule.exceeds(i, sup) {
                return false;
            }
        }
    }
    true
}
