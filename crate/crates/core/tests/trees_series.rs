mod common;

use pertinv::rational::{q, qf};
use pertinv::series::{fixed_point, series_mul, FormalSeries};
use pertinv::trees::{
    audit_second_equation, count_via_series, enumerate_r, enumerate_t, generating_series, LabeledTree, Labels,
    TreePolicy, TreeTable,
};
use pertinv::Q;
use proptest::prelude::*;

#[test]
fn zero_label_counts_match_schroeder() {
    let counts = count_via_series(9, Labels::Zero).unwrap();
    let oracle = common::zero_label_counts(9);
    assert_eq!(counts.iter().map(|&c| c as u64).collect::<Vec<_>>(), oracle);
    assert_eq!(&counts[..5], &[1, 1, 3, 11, 45]);
}

#[test]
fn labelled_counts_match_brute_force() {
    for label_min in 0..3 {
        let table = TreeTable::build(7, &TreePolicy::labelled(label_min));
        let oracle = common::brute_tree_counts(7, |l, _| l >= label_min);
        let got: Vec<u64> = table.counts().iter().map(|&c| c as u64).collect();
        assert_eq!(got, oracle, "label_min {label_min}");
        let series = generating_series(7, Labels::Labelled { label_min }).unwrap();
        for (n, &c) in oracle.iter().enumerate() {
            assert_eq!(series[n], q(c as i64));
        }
    }
}

#[test]
fn enumerated_trees_have_the_right_order_and_are_distinct() {
    let policy = TreePolicy::labelled(0);
    for n in 0..6 {
        let trees = enumerate_t(n, &policy);
        let mut codes: Vec<Vec<u8>> = trees.iter().map(|t| t.encode()).collect();
        assert!(trees.iter().all(|t| t.order() == n));
        assert!(codes.windows(2).all(|w| w[0] < w[1]), "canonical order");
        codes.dedup();
        assert_eq!(codes.len(), trees.len());
    }
}

#[test]
fn text_form_round_trip_for_all_small_trees() {
    for t in enumerate_t(4, &TreePolicy::labelled(0)) {
        let text = t.to_string();
        let back: std::sync::Arc<LabeledTree> = text.parse::<LabeledTree>().map(std::sync::Arc::new).unwrap();
        assert_eq!(back.encode(), t.encode(), "{text}");
    }
}

#[test]
fn unary_root_trees_are_t_trees() {
    let policy = TreePolicy::labelled(0);
    for n in 0..5 {
        let t = enumerate_t(n, &policy);
        let r = enumerate_r(n, 1, &policy);
        assert_eq!(r.len(), t.len(), "order {n}");
        assert!(r.iter().all(|r| r.label == 0 && r.arity() == 1 && r.order() == n));
    }
}

#[test]
fn audit_reports_every_row() {
    let rows = audit_second_equation(8, &[0, 1, 2]).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.enumerated.len() == 9 && r.literal.len() == 9));
    assert!(rows.iter().any(|r| r.matches));
}

#[test]
fn catalan_fixed_point() {
    // C = 1 + x C^2
    let c = fixed_point(|c| &FormalSeries::one(8) + &series_mul(c, c).shift(1), 8).unwrap();
    let expected = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
    for (n, e) in expected.iter().enumerate() {
        assert_eq!(c[n], q(*e));
    }
}

fn series_strategy() -> impl Strategy<Value = FormalSeries> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 6).prop_map(|v| {
        FormalSeries::from_coeffs(v.into_iter().map(|(a, b)| qf(a, b)).collect(), 5)
    })
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_associative(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        prop_assert_eq!(series_mul(&a, &b), series_mul(&b, &a));
        prop_assert_eq!(series_mul(&series_mul(&a, &b), &c), series_mul(&a, &series_mul(&b, &c)));
    }

    #[test]
    fn composition_with_x_is_identity(a in series_strategy()) {
        let x = FormalSeries::monomial(1, 5);
        prop_assert_eq!(a.compose(&x), a);
    }

    #[test]
    fn pow_matches_repeated_product(a in series_strategy(), e in 0usize..4) {
        let mut p = FormalSeries::one(5);
        for _ in 0..e {
            p = series_mul(&p, &a);
        }
        prop_assert_eq!(a.pow(e), p);
    }

    #[test]
    fn counts_are_stable_under_truncation(n in 1usize..7) {
        let long = count_via_series(7, Labels::Zero).unwrap();
        let short = count_via_series(n, Labels::Zero).unwrap();
        prop_assert_eq!(&long[..=n], &short[..]);
        let zero: Q = q(0);
        prop_assert!(generating_series(n, Labels::Zero).unwrap()[0] != zero);
    }
}
