use avoidant_approx::avoid_countable::{avoid_set, check_cauchy};
use avoidant_approx::compact_set::{make_arc, make_disc_union, make_fat_cantor_product, BoundingBox, CantorKind, DiscSpec};
use avoidant_approx::countable::{explicit_set, gaussian_rationals};
use avoidant_approx::mergelyan::{FunctionEvaluator, TaylorSeries};
use avoidant_approx::pipeline::{corollary_transcendental, run, verify, ApproximationProblem, Mode};
use avoidant_approx::{Error, Polynomial, Stage, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn cantor_product_cauchy_bound() {
    let k = make_fat_cantor_product(CantorKind::SPlusIS, 0.25, 3, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = Polynomial::new((0..=5).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
    let a = gaussian_rationals(2, BoundingBox::centered_square(1.0)).unwrap();
    let r = avoid_set(&q, &a, &k, 0.05, true).unwrap();
    assert!(r.final_margins.iter().all(|&m| m > 0.0));
    assert!(check_cauchy(r.iterates_kept.as_ref().unwrap(), r.schedule(), &k));
    assert!(r.total_sup_change < 0.05);
}

#[test]
fn disc_mode_budgets_and_triangle() {
    let discs = [DiscSpec::new(c(-1.0, 0.0), 0.9).unwrap(), DiscSpec::new(c(1.0, 0.0), 0.9).unwrap()];
    let k = make_disc_union(&discs, 128).unwrap();
    let f = FunctionEvaluator::Taylor(TaylorSeries::exp().with_offset(c(3.0, 0.0)));
    let a = explicit_set(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let (p, r) = run(&ApproximationProblem::new(f.clone(), k.clone(), a.clone(), 0.1, Mode::Theorem1Discs)).unwrap();
    let delta = r.delta.unwrap();
    let budget = (0.1f64 / 3.0).min(0.5 * delta);
    assert!(r.g_error <= 0.1 / 3.0);
    assert!(r.q_error < budget);
    assert!(r.avoid_report.total_sup_change < budget);
    assert!(r.final_sup_error <= r.triangle_bound + 1e-12);
    assert!(r.final_sup_error < 0.1);
    let v = verify(&f, &p, &k, &a, 0.1).unwrap();
    assert_eq!(v.min_margins, r.final_min_margins);
}

#[test]
fn empty_interior_mode_skips_rescale_and_delta() {
    let k = make_arc(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)], 101).unwrap();
    let f = FunctionEvaluator::Taylor(TaylorSeries::exp());
    let a = explicit_set(&[c(2.0, 0.0), c(1.5, 0.5)]);
    let (_, r) = run(&ApproximationProblem::new(f, k, a, 0.05, Mode::Theorem2EmptyInterior)).unwrap();
    assert!(r.xi_per_component.is_none());
    assert!(r.delta.is_none());
    assert_eq!(r.budgets.rescale, None);
    assert_eq!(r.budgets.mergelyan, 0.025);
    assert!(r.final_min_margins.iter().all(|&m| m > 0.0));
}

#[test]
fn fit_failure_is_tagged() {
    let k = make_arc(&[c(0.0, 0.0), c(1.0, 0.0)], 101).unwrap();
    let f = FunctionEvaluator::Taylor(TaylorSeries::exp());
    let mut problem = ApproximationProblem::new(f, k, explicit_set(&[]), 1e-9, Mode::Theorem2EmptyInterior);
    problem.max_degree = 2;
    let err = run(&problem).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Mergelyan));
    assert!(matches!(err, Error::Stage { ref source, .. } if matches!(**source, Error::FitFailed { .. })));
}

#[test]
fn algebraic_avoidance_zero_within_half() {
    let k = make_arc(&[c(0.0, 0.0), c(1.0, 0.0)], 51).unwrap();
    let f = FunctionEvaluator::Polynomial(Polynomial::zero());
    let (p, r) = corollary_transcendental(&f, &k, 0.5, 1, 1).unwrap();
    assert_eq!(r.truncation_params.max_height, Some(1));
    assert!(r.truncation_params.reach.is_some());
    assert!(p.sup_on(k.all_points()).unwrap() < 0.5);
    for z in [c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)] {
        assert!(k.all_points().iter().all(|&w| p.eval(w) != z));
    }
}
