//! Invariants of the bounds, their inversions and the planar solver over
//! randomly generated inputs.

use proptest::prelude::*;

use scenario_bounds::lab::{
    solve_min_norm, support_set, HalfPlaneConstraint, Vec2, FEASIBILITY_TOL,
};
use scenario_bounds::{
    epsilon_for_confidence, sample_size_for, BoundKind, BoundQuery, InversionTarget,
};

fn kind() -> impl Strategy<Value = BoundKind> {
    proptest::sample::select(BoundKind::ALL.to_vec())
}

/// A valid `(kind, N, d, r)` for every kind.
fn admissible() -> impl Strategy<Value = (BoundKind, u64, u64, u64)> {
    (kind(), 2..400u64, 0..400u64, 0..60u64).prop_filter_map(
        "outside the domain",
        |(k, n, d, r)| {
            let r = if k.is_discard() { r } else { 0 };
            let d = d % n;
            k.validate(&BoundQuery::discard(n, d, r, 0.5))
                .ok()
                .map(|_| (k, n, d, r))
        },
    )
}

fn constraint() -> impl Strategy<Value = HalfPlaneConstraint> {
    (0.0..std::f64::consts::TAU, 0.05..=1.0f64).prop_map(|(t, len)| {
        HalfPlaneConstraint::new(Vec2::new(len * t.cos(), len * t.sin())).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bounds_are_probabilities((k, n, d, r) in admissible(), eps in 1e-6..=1.0f64) {
        let q = k.evaluate(&BoundQuery::discard(n, d, r, eps)).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
    }

    #[test]
    fn bounds_do_not_increase_in_epsilon(
        (k, n, d, r) in admissible(),
        a in 1e-4..1.0f64,
        b in 1e-4..1.0f64,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let q = |e| k.log_bound(&BoundQuery::discard(n, d, r, e)).unwrap().ln();
        let (q_lo, q_hi) = (q(lo), q(hi));
        prop_assert!(q_hi <= q_lo + 1e-10 * q_lo.abs().max(1.0), "{q_hi} > {q_lo}");
    }

    #[test]
    fn new_consistent_dominates(n in 2..2000u64, d in 0..2000u64, eps in 1e-6..1.0f64) {
        let d = d % n;
        let q = BoundQuery::consistent(n, d, eps);
        let new = BoundKind::NewConsistent.log_bound(&q).unwrap();
        prop_assert!(new.ln() <= BoundKind::FloydConsistent.log_bound(&q).unwrap().ln());
        prop_assert!(
            BoundKind::NewConsistent.evaluate(&q).unwrap()
                <= BoundKind::WaitJudgeConsistent.evaluate(&q).unwrap()
        );
    }

    #[test]
    fn inverted_epsilon_is_the_first_crossing((k, n, d, r) in admissible(), beta in 0.001..0.5f64) {
        let target = InversionTarget::new(k, beta, d, r);
        let q = |e: f64| k.evaluate(&BoundQuery::discard(n, d, r, e)).unwrap();
        match epsilon_for_confidence(&target, n) {
            Ok(eps) => {
                prop_assert!(q(eps) <= beta);
                let below = eps - 2e-12;
                prop_assert!(below <= 0.0 || q(below) > beta);
            }
            Err(scenario_bounds::Error::Infeasible { .. }) => prop_assert!(q(1.0) > beta),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn inverted_epsilon_falls_as_beta_grows(
        (k, n, d, r) in admissible(),
        b1 in 0.001..0.9f64,
        b2 in 0.001..0.9f64,
    ) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        let at = |beta| epsilon_for_confidence(&InversionTarget::new(k, beta, d, r), n).ok();
        if let (Some(e_lo), Some(e_hi)) = (at(lo), at(hi)) {
            prop_assert!(e_hi <= e_lo + 1e-12);
        }
    }

    #[test]
    fn designed_sample_size_is_minimal(
        k in kind(),
        d in 0..20u64,
        r in 0..10u64,
        eps in 0.02..0.5f64,
        beta in 0.001..0.3f64,
    ) {
        let r = if k.is_discard() { r } else { 0 };
        let d = if matches!(k, BoundKind::CampiDiscard | BoundKind::RomaoDiscard) { d.max(1) } else { d };
        let target = InversionTarget::new(k, beta, d, r);
        let n = sample_size_for(&target, eps).unwrap();
        let q = |n| k.evaluate(&BoundQuery::discard(n, d, r, eps)).unwrap();
        prop_assert!(q(n) <= beta);
        let floor = k.min_sample_size(d, r).max(1);
        prop_assert!(n == floor || q(n - 1) > beta);
    }

    #[test]
    fn solver_is_permutation_invariant(
        cs in proptest::collection::vec(constraint(), 1..30),
        c in (-4.0..4.0f64, -4.0..4.0f64),
        rot in 0usize..30,
    ) {
        let c = Vec2::new(c.0, c.1);
        let x = solve_min_norm(c, &cs).unwrap();
        let mut rotated = cs.clone();
        rotated.rotate_left(rot % cs.len());
        rotated.reverse();
        prop_assert_eq!(solve_min_norm(c, &rotated).unwrap(), x);
        prop_assert!(cs.iter().all(|h| h.level(c, x) <= 1.0 + FEASIBILITY_TOL));
        let support = support_set(c, &cs, x).unwrap();
        prop_assert!(support.len() <= 2);
        let kept: Vec<_> = support.iter().map(|&i| cs[i]).collect();
        prop_assert!(solve_min_norm(c, &kept).unwrap().distance(x) <= FEASIBILITY_TOL);
    }
}

#[test]
fn reductions_at_zero_discarding_are_bit_identical() {
    use BoundKind::*;
    for n in 1..=80u64 {
        for d in 0..=n {
            for k in 1..=10 {
                let q = BoundQuery::consistent(n, d, k as f64 / 10.0);
                for (discard, consistent) in [
                    (NewDiscard, NewConsistent),
                    (MargellosDiscard, FloydConsistent),
                    (CampiDiscard, CampiConsistent),
                    (RomaoDiscard, CampiConsistent),
                ] {
                    if let (Ok(a), Ok(b)) = (discard.evaluate(&q), consistent.evaluate(&q)) {
                        assert_eq!(
                            a.to_bits(),
                            b.to_bits(),
                            "{discard} vs {consistent} at {q:?}"
                        );
                    }
                }
            }
        }
    }
}
