//! Randomized invariants over the builtin models.

use std::sync::Arc;

use mtqc_core::fusion::{FMoveDirection, StateDump};
use mtqc_core::measurement::Routing;
use mtqc_core::teleport::DEFAULT_MAX_ATTEMPTS;
use mtqc_core::{
    load_builtin, measurement_braid, pair_charge_distribution, project_pair, relative_phase, trial_rng, AnyonModel,
    BraidDirection, BraidSign, BuiltinModel, Charge, Error, Quad, StateVector,
};
use proptest::prelude::*;
use rand::Rng;

const MODELS: [BuiltinModel; 6] = [
    BuiltinModel::Fibonacci,
    BuiltinModel::Ising,
    BuiltinModel::Su2k(2),
    BuiltinModel::Su2k(3),
    BuiltinModel::Su2k(4),
    BuiltinModel::Su2k(5),
];

fn model(i: usize) -> Arc<AnyonModel> {
    Arc::new(load_builtin(MODELS[i % MODELS.len()]).unwrap())
}

/// Random leaves (any charges) and a reachable total, then a random state.
fn random_state(m: &Arc<AnyonModel>, n: usize, seed: u64) -> StateVector {
    let mut rng = trial_rng(seed, 0);
    loop {
        let leaves: Vec<Charge> = (0..n).map(|_| Charge(rng.random_range(0..m.num_charges()))).collect();
        let totals: Vec<Charge> =
            m.charges().filter(|&t| !mtqc_core::standard_basis(m, &leaves, t).unwrap().is_empty()).collect();
        let total = totals[rng.random_range(0..totals.len())];
        if let Ok(s) = StateVector::random(m.clone(), &leaves, total, &mut rng) {
            return s;
        }
    }
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn routing(b: bool) -> Routing {
    if b {
        Routing::Over
    } else {
        Routing::Under
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn braids_and_f_moves_are_unitary(mi in 0usize..6, n in 2usize..7, seed: u64, pos in 0usize..6) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let i = pos % (n - 1);
        for sign in [BraidSign::Positive, BraidSign::Negative] {
            let b = s.apply_braid(i, sign).unwrap();
            prop_assert!((b.norm() - 1.0).abs() < 1e-12);
            let back = b.apply_braid(i, sign.inverse()).unwrap();
            prop_assert!(max_diff(&back, &s) < 1e-12);
        }
        if n >= 3 {
            let slot = 1 + pos % (n - 2);
            let f = s.apply_f_move(slot, FMoveDirection::Forward).unwrap();
            prop_assert!((f.norm() - 1.0).abs() < 1e-12);
            let back = f.apply_f_move(slot, FMoveDirection::Backward).unwrap();
            prop_assert!(max_diff(&back, &s) < 1e-12);
        }
    }

    #[test]
    fn yang_baxter_on_random_states(mi in 0usize..6, n in 3usize..7, seed: u64, pos in 0usize..5, positive: bool) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let i = pos % (n - 2);
        let sg = if positive { BraidSign::Positive } else { BraidSign::Negative };
        let lhs = s.apply_braid(i, sg).and_then(|x| x.apply_braid(i + 1, sg)).and_then(|x| x.apply_braid(i, sg)).unwrap();
        // The leaf order after either side is the same permutation.
        let rhs = s.apply_braid(i + 1, sg).and_then(|x| x.apply_braid(i, sg)).and_then(|x| x.apply_braid(i + 1, sg)).unwrap();
        prop_assert_eq!(lhs.leaves(), rhs.leaves());
        prop_assert!(max_diff(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn far_generators_commute(mi in 0usize..6, n in 4usize..7, seed: u64) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let a = s.apply_braid(0, BraidSign::Positive).and_then(|x| x.apply_braid(2, BraidSign::Negative)).unwrap();
        let b = s.apply_braid(2, BraidSign::Negative).and_then(|x| x.apply_braid(0, BraidSign::Positive)).unwrap();
        prop_assert!(max_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn measurement_completeness_and_idempotence(
        mi in 0usize..6, n in 2usize..7, seed: u64, pi in 0usize..6, pj in 0usize..6, over: bool,
    ) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let (i, j) = (pi % n, pj % n);
        prop_assume!(i != j);
        let (i, j) = (i.min(j), i.max(j));
        let r = routing(over);
        let d = pair_charge_distribution(&s, i, j, r).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-10);
        for (c, p) in d.support() {
            if p < 1e-9 {
                continue;
            }
            let (post, p2) = project_pair(&s, i, j, c, r).unwrap();
            prop_assert!((p - p2).abs() < 1e-12);
            prop_assert!((post.norm() - 1.0).abs() < 1e-9);
            // |<s|post>|^2 is the Born probability.
            prop_assert!((s.inner(&post).unwrap().norm_sqr() - p).abs() < 1e-10);
            let again = pair_charge_distribution(&post, i, j, r).unwrap();
            prop_assert!((again.prob(c) - 1.0).abs() < 1e-10);
            let (twice, p3) = project_pair(&post, i, j, c, r).unwrap();
            prop_assert!((p3 - 1.0).abs() < 1e-10 && max_diff(&twice, &post) < 1e-10);
            for other in m.charges().filter(|&o| o != c) {
                let err = project_pair(&post, i, j, other, r);
                prop_assert!(matches!(err, Err(Error::ZeroProbabilityOutcome { .. })), "{:?}", err.map(|x| x.1));
            }
        }
    }

    #[test]
    fn disjoint_pairs_commute(mi in 0usize..6, n in 4usize..7, seed: u64, first in 0usize..3) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let (p, q) = ((first, first + 1), (first + 2, first + 3));
        prop_assume!(q.1 < n);
        let before = pair_charge_distribution(&s, q.0, q.1, Routing::Under).unwrap();
        let dp = pair_charge_distribution(&s, p.0, p.1, Routing::Under).unwrap();
        // Averaging over the outcome of p leaves q's distribution unchanged.
        let mut mixed = vec![0.0; m.num_charges()];
        for (c, w) in dp.support().filter(|x| x.1 > 1e-12) {
            let post = project_pair(&s, p.0, p.1, c, Routing::Under).unwrap().0;
            let dq = pair_charge_distribution(&post, q.0, q.1, Routing::Under).unwrap();
            for (k, x) in mixed.iter_mut().enumerate() {
                *x += w * dq.prob(Charge(k));
            }
        }
        for (k, x) in mixed.iter().enumerate() {
            prop_assert!((x - before.prob(Charge(k))).abs() < 1e-10);
        }
    }

    #[test]
    fn attach_then_detach_is_identity(mi in 0usize..6, n in 1usize..6, seed: u64, pos in 0usize..7, ci in 0usize..8) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let p = pos % (n + 1);
        let a = Charge(ci % m.num_charges());
        let with = s.attach_pair(p, a).unwrap();
        prop_assert_eq!(with.num_leaves(), n + 2);
        let d = pair_charge_distribution(&with, p, p + 1, Routing::Under).unwrap();
        prop_assert!((d.prob(Charge::VACUUM) - 1.0).abs() < 1e-10);
        let back = with.detach_pair(p).unwrap();
        prop_assert!(max_diff(&back, &s) < 1e-12);
    }

    #[test]
    fn dump_round_trip(mi in 0usize..6, n in 1usize..7, seed: u64) {
        let m = model(mi);
        let s = random_state(&m, n, seed);
        let json = StateDump::from_state(&s).unwrap().to_json();
        let back = StateDump::from_json(&json).unwrap().to_state(m).unwrap();
        for (x, y) in s.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn measurement_braid_is_deterministic_and_exact(
        mi in 0usize..6, extra in 0usize..3, seed: u64, positive: bool, over: bool,
    ) {
        let m = model(mi);
        let a = m.charge(MODELS[mi % MODELS.len()].computational_label()).unwrap();
        // Register: `extra` spectators, then a quad.
        let mut rng = trial_rng(seed, 1);
        let leaves = vec![a; extra + 2];
        let total = m.charges().find(|&t| !mtqc_core::standard_basis(&m, &leaves, t).unwrap().is_empty()).unwrap();
        let reg = StateVector::random(m.clone(), &leaves, total, &mut rng).unwrap();
        let state = reg.attach_pair(extra + 1, m.dual(a)).unwrap();
        let quad = Quad::contiguous(extra);
        let dir = if positive { BraidDirection::Positive } else { BraidDirection::Inverse };
        let r = routing(over);
        let run = |k| measurement_braid(&state, quad, dir, r, &mut trial_rng(seed, k), DEFAULT_MAX_ATTEMPTS).unwrap();
        let (s1, rec1) = run(2);
        let (s2, rec2) = run(2);
        prop_assert_eq!(&rec1, &rec2);
        prop_assert!(s1.amplitudes() == s2.amplitudes());
        prop_assert!((rec1.extracted_phase.norm() - 1.0).abs() < 1e-9);
        let d = pair_charge_distribution(&s1, extra + 1, extra + 2, r).unwrap();
        prop_assert!((d.prob(Charge::VACUUM) - 1.0).abs() < 1e-10);
        let oracle = mtqc_core::teleport::direct_exchange(&state, extra, extra + 3, rec1.sign, r).unwrap();
        prop_assert!(oracle.fidelity(&s1).unwrap() > 1.0 - 1e-9);
        let z = relative_phase(&oracle, &s1).unwrap();
        prop_assert!((z - rec1.extracted_phase).norm() < 1e-12);
    }
}
