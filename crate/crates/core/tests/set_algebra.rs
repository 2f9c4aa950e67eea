mod common;

use neutrocalc::neutronum::{nn_arith, NnOp};
use neutrocalc::realset::{set_arith, SetOp};
use neutrocalc::{NeutroNumber, RealSet};
use proptest::prelude::*;

fn small_points(nonzero: bool) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-12i32..=12, 1..=6).prop_map(move |v| {
        v.into_iter().map(|k| if nonzero && k == 0 { 0.5 } else { k as f64 / 2.0 }).collect()
    })
}

fn brute(op: SetOp, a: &[f64], b: &[f64]) -> RealSet {
    let mut out = Vec::new();
    for &x in a {
        for &y in b {
            out.push(match op {
                SetOp::Add => x + y,
                SetOp::Sub => x - y,
                SetOp::Mul => x * y,
                SetOp::Div => x / y,
                SetOp::Scale(t) => t * x,
            });
        }
    }
    RealSet::from_points(&out).unwrap()
}

/// `a + sum b_k I_k` with quarter-integer coefficients, so sums are exact.
fn nn_number(max_index: u32) -> impl Strategy<Value = NeutroNumber> {
    (-40i32..40, prop::collection::vec((1..=max_index, -40i32..40), 0..=3)).prop_map(|(a, terms)| {
        let terms: Vec<(u32, f64)> = terms.into_iter().map(|(k, v)| (k, v as f64 / 4.0)).collect();
        NeutroNumber::refined(a as f64 / 4.0, &terms)
    })
}

fn nn_close(x: &NeutroNumber, y: &NeutroNumber, tol: f64) -> bool {
    let d = x.sub(y);
    d.a().abs() <= tol && d.terms().values().all(|v| v.abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn finite_sets_match_enumeration(a in small_points(false), b in small_points(false), d in small_points(true)) {
        let (sa, sb, sd) = (RealSet::from_points(&a).unwrap(), RealSet::from_points(&b).unwrap(), RealSet::from_points(&d).unwrap());
        for op in [SetOp::Add, SetOp::Sub, SetOp::Mul] {
            prop_assert_eq!(set_arith(op, &sa, &sb).unwrap(), brute(op, &a, &b));
        }
        let q = set_arith(SetOp::Div, &sa, &sd).unwrap();
        prop_assert!(q.approx_eq(&brute(SetOp::Div, &a, &d), 1e-12));
        prop_assert_eq!(set_arith(SetOp::Scale(-1.5), &sa, &sa).unwrap(), brute(SetOp::Scale(-1.5), &a, &[0.0]));
    }

    #[test]
    fn normalize_is_idempotent(s in common::realset()) {
        let again = RealSet::normalize(s.intervals(), s.points()).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn intersection_laws(a in common::realset(), b in common::realset(), c in common::realset()) {
        prop_assert_eq!(a.intersect(&a), a.clone());
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
        prop_assert!(a.intersect(&b).is_subset(&a));
    }

    #[test]
    fn union_contains_both(a in common::realset(), b in common::realset()) {
        let u = a.union(&b);
        prop_assert!(a.is_subset(&u) && b.is_subset(&u));
        prop_assert_eq!(u, b.union(&a));
    }

    #[test]
    fn nn_sum_and_difference_invert(x in nn_number(3), y in nn_number(3)) {
        prop_assert_eq!(nn_arith(NnOp::Sub, &nn_arith(NnOp::Add, &x, &y).unwrap(), &y).unwrap(), x.clone());
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn nn_products_with_plain_i(x in nn_number(1), y in nn_number(1), z in nn_number(1)) {
        let xy = x.mul(&y).unwrap();
        prop_assert!(nn_close(&xy, &y.mul(&x).unwrap(), 1e-12));
        let left = xy.mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        let scale = 1.0 + left.a().abs() + left.coeff(1).abs();
        prop_assert!(nn_close(&left, &right, 1e-12 * scale));
    }

    #[test]
    fn crisp_numbers_embed_the_reals(a in -100.0..100.0f64, b in -100.0..100.0f64, c in 0.5..10.0f64) {
        let (x, y) = (NeutroNumber::crisp(a), NeutroNumber::crisp(b));
        prop_assert_eq!(nn_arith(NnOp::Add, &x, &y).unwrap(), NeutroNumber::crisp(a + b));
        prop_assert_eq!(nn_arith(NnOp::Sub, &x, &y).unwrap(), NeutroNumber::crisp(a - b));
        prop_assert_eq!(nn_arith(NnOp::Mul, &x, &y).unwrap(), NeutroNumber::crisp(a * b));
        prop_assert_eq!(nn_arith(NnOp::DivByCrisp(c), &x, &y).unwrap(), NeutroNumber::crisp(a / c));
    }

    #[test]
    fn distinct_subindeterminacies_do_not_multiply(j in 2u32..6, k in 2u32..6) {
        prop_assume!(j != k);
        let r = NeutroNumber::indeterminacy(j).mul(&NeutroNumber::indeterminacy(k));
        prop_assert!(r.is_err());
    }
}

#[test]
fn powers_of_i_collapse() {
    let i = NeutroNumber::indeterminacy(1);
    let mut acc = i.clone();
    for n in 1..=12 {
        assert_eq!(acc, i, "I^{n}");
        assert_eq!(i.powi(n).unwrap(), i);
        acc = acc.mul(&i).unwrap();
    }
    let i3 = NeutroNumber::indeterminacy(3);
    assert_eq!(i3.mul(&i3).unwrap(), i3);
}
