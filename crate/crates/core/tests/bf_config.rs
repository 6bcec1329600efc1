mod common;

use pertinv::bf_config::{
    action_eval, action_invariance_test, candidate_b_defect, invariance_test, matrix_a, s_os_closed, solve_eom,
    Configuration, PiecewiseLinearMap, StepFunction, ThetaAtJump,
};
use pertinv::rational::{q, qf};
use pertinv::{QMatrix, Q};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_config(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> Configuration {
    let mut xs: Vec<Q> = Vec::new();
    while xs.len() < n {
        let x = qf(rng.random_range(-40..40), rng.random_range(1..=3));
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    Configuration::new(xs).unwrap()
}

/// The same configuration with each point replaced by its rank.
fn ranks(c: &Configuration) -> Configuration {
    let x = c.points();
    Configuration::new(x.iter().map(|p| q(x.iter().filter(|y| *y < p).count() as i64)).collect()).unwrap()
}

#[test]
fn s_os_depends_only_on_the_order() {
    let mut rng = common::rng(21);
    for n in 2..=5 {
        for _ in 0..20 {
            let c = random_config(&mut rng, n);
            for conv in [ThetaAtJump::Zero, ThetaAtJump::One, ThetaAtJump::Half] {
                assert_eq!(s_os_closed(&c, conv), s_os_closed(&ranks(&c), conv));
            }
        }
    }
}

#[test]
fn random_maps_leave_everything_invariant() {
    let mut rng = common::rng(33);
    let maps: Vec<PiecewiseLinearMap> = (0..50).map(|_| PiecewiseLinearMap::random(&mut rng, 6)).collect();
    for n in 2..=5 {
        let c = random_config(&mut rng, n);
        assert!(invariance_test(&c, &maps, ThetaAtJump::Half).invariant(), "n = {n}");
        if n % 2 == 0 {
            assert!(action_invariance_test(&c, &maps).invariant(), "n = {n}");
        }
    }
}

#[test]
fn even_eom_holds_pointwise() {
    let mut rng = common::rng(4);
    for n in [2, 4, 6] {
        let c = random_config(&mut rng, n);
        let sol = solve_eom(&c);
        assert!(sol.solved());
        let a = matrix_a(n);
        let thetas = c.thetas();
        let mut probes: Vec<Q> = c.points().to_vec();
        probes.extend(c.points().iter().map(|x| x + qf(1, 7)));
        probes.extend(c.points().iter().map(|x| x - qf(1, 7)));
        for y in &probes {
            for i in 0..n {
                let lhs: Q = (0..n).map(|j| &a[(i, j)] * sol.fields[j].eval(y)).sum();
                assert_eq!(lhs, thetas[i].eval(y), "n = {n}, row {i}");
            }
        }
    }
}

#[test]
fn odd_eom_leaves_the_kernel() {
    let mut rng = common::rng(8);
    for n in [3, 5] {
        let c = random_config(&mut rng, n);
        let sol = solve_eom(&c);
        assert!(!sol.solved());
        assert_eq!(sol.kernel.len(), 1);
        // the residual is minus the projection onto ker A
        let k = &sol.kernel[0];
        let norm = k.dot(k);
        let mut pi = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                pi[(i, j)] = &k.0[i] * &k.0[j] / &norm;
            }
        }
        assert_eq!(sol.residual, -&pi);
    }
}

#[test]
fn candidate_b_is_not_an_inverse() {
    assert_eq!(candidate_b_defect(2), QMatrix::from_int_rows(&[&[-2, 1], &[-1, 0]]));
}

#[test]
fn action_of_constant_fields() {
    let c = Configuration::new(vec![q(0), q(1)]).unwrap();
    let fs = vec![StepFunction::constant(q(2)), StepFunction::constant(q(3))];
    assert_eq!(action_eval(&fs, &c), q(-5));
}

#[test]
fn coincident_points_are_rejected() {
    assert!(Configuration::new(vec![q(1), q(2), q(1)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn s_os_is_invariant_under_relabelling_preserving_order(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = common::rng(seed);
        let mut xs: Vec<i64> = (0..n as i64).map(|i| 3 * i).collect();
        xs.shuffle(&mut rng);
        let c = Configuration::new(xs.iter().map(|&x| q(x)).collect()).unwrap();
        let shifted = Configuration::new(xs.iter().map(|&x| q(x) * qf(5, 2) - q(11)).collect()).unwrap();
        prop_assert_eq!(s_os_closed(&c, ThetaAtJump::Half), s_os_closed(&shifted, ThetaAtJump::Half));
    }

    #[test]
    fn step_function_sum_is_pointwise(a in -5i64..5, b in -5i64..5, y in -10i64..10) {
        let f = StepFunction::theta(q(a)).scale(&q(3));
        let g = StepFunction::theta(q(b)).scale(&q(-2));
        let y = qf(y, 2);
        prop_assert_eq!(f.add(&g).eval(&y), f.eval(&y) + g.eval(&y));
    }
}
