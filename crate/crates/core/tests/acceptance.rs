//! Acceptance suite. Run with
//! `cargo test -p avoidant-approx --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use avoidant_approx::avoid_countable::{avoid_set, check_cauchy};
use avoidant_approx::avoid_one::avoid_value;
use avoidant_approx::compact_set::{
    make_arc, make_circle, make_disc_union, make_fat_cantor_product, BoundingBox, CantorKind, CompactSetSample,
    DiscSpec,
};
use avoidant_approx::countable::{algebraic_numbers, explicit_set, gaussian_rationals, truncate_to_reach};
use avoidant_approx::mergelyan::{FunctionEvaluator, SampleTable, TaylorSeries};
use avoidant_approx::obstruction::{demo_obstruction, ObstructionParams};
use avoidant_approx::pipeline::{corollary_transcendental, run, verify, ApproximationProblem, Mode};
use avoidant_approx::poly::{multisets_match, ROOT_MATCH_TOL};
use avoidant_approx::{Polynomial, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Polynomial {
    Polynomial::new(
        (0..=degree)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn two_circles(samples: usize) -> CompactSetSample {
    make_circle(c(-1.0, 0.0), 0.9, samples)
        .unwrap()
        .union(&make_circle(c(1.0, 0.0), 0.9, samples).unwrap())
        .unwrap()
}

/// A forbidden value for `p`: either the image of a point near the
/// boundary, so a perturbation is needed, or a random point in the image
/// box.
fn random_value(rng: &mut ChaCha8Rng, p: &Polynomial, k: &CompactSetSample, hit: bool) -> C64 {
    let b = k.boundary_points();
    if hit {
        let z = b[rng.gen_range(0..b.len())];
        p.eval(z + c(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)))
    } else {
        let sup = p.sup_on(b).unwrap();
        c(rng.gen_range(-sup..sup), rng.gen_range(-sup..sup))
    }
}

fn single_value_suite() -> String {
    let circle = make_circle(c(0.0, 0.0), 1.0, 2048).unwrap();
    let discs = two_circles(4096);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut certified = 0;
    for i in 0..200 {
        let degree = rng.gen_range(1..=12);
        let p = random_poly(&mut rng, degree);
        let k = if i % 2 == 0 { &circle } else { &discs };
        let a = random_value(&mut rng, &p, k, i % 4 < 2);
        let eps = 0.05 * p.sup_on(k.boundary_points()).unwrap().max(1.0);
        let r = avoid_value(&p, a, k, eps).unwrap_or_else(|e| panic!("run {i}: {e}"));
        assert_eq!(r.q.degree(), p.degree(), "run {i}: degree changed");
        let change = r.q.sup_distance(&p, k.all_points()).unwrap();
        assert!(change < eps, "run {i}: sup change {change} >= eps {eps}");
        let margin = k.boundary_points().iter().map(|&z| (r.q.eval(z) - a).norm()).fold(f64::INFINITY, f64::min);
        assert!(margin > 0.0, "run {i}: boundary margin {margin}");
        certified += r.certified as usize;
    }
    assert!(certified >= 190, "only {certified}/200 certified");
    format!("{certified}/200 certified")
}

fn countable_suite() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut values_total = 0;
    let mut perturbed = 0;
    let mut certified = 0;
    for i in 0..50 {
        let (k, dense) = if i % 2 == 0 {
            (
                make_circle(c(0.0, 0.0), 1.0, 2048).unwrap(),
                make_circle(c(0.0, 0.0), 1.0, 20480).unwrap(),
            )
        } else {
            (two_circles(2048), two_circles(20480))
        };
        let degree = rng.gen_range(1..=8);
        let q = random_poly(&mut rng, degree);
        let n = rng.gen_range(5..=25);
        let hits = rng.gen_range(1..=3);
        let values: Vec<C64> = (0..n).map(|j| random_value(&mut rng, &q, &k, j < hits)).collect();
        let a = explicit_set(&values);
        let eps = 0.05 * q.sup_on(k.boundary_points()).unwrap().max(1.0);
        let r = avoid_set(&q, &a, &k, eps, true).unwrap_or_else(|e| panic!("triple {i}: {e}"));
        let s = r.schedule();
        for j in 0..s.len() {
            assert!(
                s.log2(j) <= s.log2(0) - j as f64 + 1e-12,
                "triple {i}: eps_{j} above eps_0 2^-{j}"
            );
        }
        assert!(check_cauchy(r.iterates_kept.as_ref().unwrap(), s, &k), "triple {i}: Cauchy bound");
        let slack = 1.05 * r.p.derivative_sup_bound(k.boundary_points()).unwrap() * k.mesh();
        for j in 0..values.len() {
            let m = r.final_margins[j];
            assert!(m > 0.0, "triple {i}: margin {j} is {m}");
            assert!(
                m >= r.deltas[j] - s.value(j + 1) - slack,
                "triple {i}: margin {j} = {m} below delta - eps - slack"
            );
            let dense_margin = dense
                .boundary_points()
                .iter()
                .map(|&z| (r.p.eval(z) - values[j]).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(dense_margin > 0.0, "triple {i}: value {j} flips sign at 10x density");
        }
        assert!(r.total_sup_change < eps, "triple {i}: total change {}", r.total_sup_change);
        values_total += values.len();
        certified += r.certified as usize;
        perturbed += r.steps.iter().filter(|s| **s == avoidant_approx::avoid_countable::StepKind::Perturbed).count();
    }
    format!("{values_total} values, {perturbed} perturbation steps, {certified}/50 reports certified")
}

fn two_discs() -> [DiscSpec; 2] {
    [DiscSpec::new(c(-1.0, 0.0), 0.9).unwrap(), DiscSpec::new(c(1.0, 0.0), 0.9).unwrap()]
}

fn two_disc_end_to_end() -> String {
    let k = make_disc_union(&two_discs(), 256).unwrap();
    let f = FunctionEvaluator::Taylor(TaylorSeries::exp().with_offset(c(3.0, 0.0)));
    let a = explicit_set(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let (p, report) = run(&ApproximationProblem::new(f.clone(), k, a.clone(), 0.1, Mode::Theorem1Discs)).unwrap();
    assert!(report.certified);
    assert!(report.final_sup_error < 0.1);
    assert!(report.final_sup_error <= report.triangle_bound + 1e-12);
    assert!(report.final_min_margins.iter().all(|&m| m > 0.0));
    let dense = make_disc_union(&two_discs(), 2560).unwrap();
    let v = verify(&f, &p, &dense, &a, 0.1).unwrap();
    assert!(v.passed && v.certified, "{v:?}");
    format!(
        "degree {}, error {:.4}, margins {:.3?} at {} dense samples",
        p.degree(),
        v.sup_error,
        v.min_margins,
        v.samples
    )
}

/// Continuous, not holomorphic, and equal to 0 at the corner `1 + i` of
/// the product, so the value 0 needs a perturbation.
fn cantor_function(z: C64) -> C64 {
    let w = z - c(1.0, 1.0);
    w * 0.45 + 0.01 * w.norm()
}

fn cantor_end_to_end() -> String {
    let r = 0.25;
    let k = make_fat_cantor_product(CantorKind::SPlusIS, r, 3, 8).unwrap();
    // removed length r (1 + 1/2 + 1/4)
    let side = 1.0 - r * (0..3).map(|j| 0.5f64.powi(j)).sum::<f64>();
    assert_eq!(side, 0.5625);
    assert!((k.area().unwrap() - side * side).abs() < 1e-15);

    let f = FunctionEvaluator::Samples(SampleTable::tabulate(k.all_points(), cantor_function).unwrap());
    let eps = 0.05;
    let reach = f.eval_many(k.all_points()).iter().map(|v| v.norm()).fold(0.0, f64::max) + eps;
    let a = truncate_to_reach(&gaussian_rationals(2, BoundingBox::centered_square(reach)).unwrap(), reach).unwrap();
    let (p, report) = run(&ApproximationProblem::new(f, k, a.clone(), eps, Mode::Theorem2EmptyInterior)).unwrap();
    assert!(report.certified);
    assert!(report.final_sup_error < eps);
    assert!(report.final_min_margins.iter().all(|&m| m > 0.0));

    let dense = make_fat_cantor_product(CantorKind::SPlusIS, r, 3, 71).unwrap();
    let g = FunctionEvaluator::Samples(SampleTable::tabulate(dense.all_points(), cantor_function).unwrap());
    let v = verify(&g, &p, &dense, &a, eps).unwrap();
    assert!(v.passed, "{v:?}");
    format!(
        "|A| = {}, degree {}, error {:.4}, min margin {:.2e}",
        a.len(),
        p.degree(),
        report.final_sup_error,
        v.min_margins.iter().copied().fold(f64::INFINITY, f64::min)
    )
}

/// Roots of every integer polynomial of degree 1 or 2 with coefficients
/// in `[-h, h]`, by the closed formulas, deduplicated.
fn brute_force_algebraic(h: i64, region: BoundingBox) -> Vec<C64> {
    let mut roots = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            if a != 0 {
                roots.push(c(-b as f64 / a as f64, 0.0));
            }
            for cc in -h..=h {
                if a == 0 {
                    continue;
                }
                let (a, b, cc) = (a as f64, b as f64, cc as f64);
                let disc = C64::new(b * b - 4.0 * a * cc, 0.0).sqrt();
                roots.push((-b + disc) / (2.0 * a));
                roots.push((-b - disc) / (2.0 * a));
            }
        }
    }
    let mut out: Vec<C64> = Vec::new();
    for z in roots.into_iter().filter(|&z| region.contains(z)) {
        if !out.iter().any(|w| (w - z).norm() < 1e-9) {
            out.push(z);
        }
    }
    out
}

fn algebraic_truncation() -> String {
    let k = make_arc(&[c(0.0, 0.0), c(1.0, 0.0)], 201).unwrap();
    let pi = std::f64::consts::PI;
    let eps = 0.1;
    let region = BoundingBox::centered_square(pi + eps);
    let enumerated = algebraic_numbers(2, 5, region).unwrap();
    let oracle = brute_force_algebraic(5, region);
    assert!(
        multisets_match(enumerated.values(), &oracle, 1e-9),
        "enumeration has {} values, oracle {}",
        enumerated.len(),
        oracle.len()
    );

    let f = FunctionEvaluator::Polynomial(Polynomial::constant(c(pi, 0.0)));
    let (p, report) = corollary_transcendental(&f, &k, eps, 2, 5).unwrap();
    let within: Vec<C64> = oracle.iter().copied().filter(|z| z.norm() <= pi + eps).collect();
    assert!(multisets_match(&report.avoid_report.values, &within, 1e-9));
    assert!(report.certified);
    assert!(report.final_min_margins.iter().all(|&m| m > 0.0));
    assert!(p.sup_distance(&Polynomial::constant(c(pi, 0.0)), k.all_points()).unwrap() < eps);
    format!(
        "{} enumerated values match the oracle, {} within reach avoided",
        oracle.len(),
        within.len()
    )
}

fn obstruction_demo() -> String {
    let mut lines = Vec::new();
    for eps in [0.01, 0.005] {
        let run = demo_obstruction(&ObstructionParams {
            eps,
            ..ObstructionParams::default()
        })
        .unwrap();
        let r = &run.report;
        assert!(r.fit_sup_error < eps);
        assert_ne!(r.analysis.winding_difference, 0, "eps {eps}");
        assert!(r.obstructed);
        assert!(r.analysis.min_distance_to_segment < 10.0 * r.analysis.mesh_scale);
        lines.push(format!(
            "eps {eps}: winding {} vs {}, distance {:.1e}",
            r.analysis.winding_a1, r.analysis.winding_a2, r.analysis.min_distance_to_segment
        ));
    }
    lines.join("; ")
}

fn oracle_equivalence() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let n = rng.gen_range(1..=15);
        let roots: Vec<C64> = (0..n).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let leading = c(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
        let p = Polynomial::from_roots(leading, &roots);
        let f = p.roots().unwrap_or_else(|e| panic!("instance {i}: {e}"));
        assert!(multisets_match(&f.roots, &roots, ROOT_MATCH_TOL), "instance {i}");
        assert!((f.leading - leading).norm() <= 1e-12 * leading.norm());
    }
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let degree = rng.gen_range(0..=20);
        let p = random_poly(&mut rng, degree);
        let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let naive: C64 = p.coeffs().iter().enumerate().map(|(k, &a)| a * z.powi(k as i32)).sum();
        let scale: f64 = p.coeffs().iter().enumerate().map(|(k, a)| a.norm() * z.norm().powi(k as i32)).sum();
        let bound = 8.0 * (degree as f64 + 1.0) * f64::EPSILON * scale;
        let diff = (p.eval(z) - naive).norm();
        assert!(diff <= bound, "eval differs by {diff:e}, bound {bound:e}");
        worst = worst.max(diff / bound);
    }
    format!("500 round trips, 10^4 evaluations (worst {worst:.2} of the bound)")
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> String,
}

#[test]
fn acceptance_suite() {
    let criteria = [
        Criterion { name: "single-value avoidance suite", limit: Duration::from_secs(30), run: single_value_suite },
        Criterion { name: "countable avoidance suite", limit: Duration::from_secs(120), run: countable_suite },
        Criterion { name: "two-disc end-to-end", limit: Duration::from_secs(60), run: two_disc_end_to_end },
        Criterion { name: "fat Cantor end-to-end", limit: Duration::from_secs(120), run: cantor_end_to_end },
        Criterion { name: "algebraic truncation", limit: Duration::from_secs(60), run: algebraic_truncation },
        Criterion { name: "obstruction demo", limit: Duration::from_secs(30), run: obstruction_demo },
        Criterion { name: "oracle equivalence", limit: Duration::from_secs(60), run: oracle_equivalence },
    ];
    let mut failed = Vec::new();
    for (i, cr) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(cr.run));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(detail) if elapsed <= cr.limit => (true, detail),
            Ok(detail) => (false, format!("{detail}; over the {:?} limit", cr.limit)),
            Err(e) => (
                false,
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default(),
            ),
        };
        println!(
            "{} [{}] {}: {} ({:.2?})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            cr.name,
            detail,
            elapsed
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
