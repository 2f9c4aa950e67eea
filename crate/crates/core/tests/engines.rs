mod common;

use neutrocalc::calc::{antiderivative_nn, derivative_nn, derivative_thick, integrate_setbounds, integrate_thick, IntegralConfig, NnPoly};
use neutrocalc::contin::{classify_at, ivt_cover, ivt_find, ContinuityClass};
use neutrocalc::funcmodel::{eval_at, FuncSpec};
use neutrocalc::limits::{directional_limit, full_limit, interval_param_limit, mereo_limit, LimitConfig, LimitOutcome, Side};
use neutrocalc::realset::{eta_metric, set_arith, SetOp};
use neutrocalc::textparse::parse_expr;
use neutrocalc::{Error, Expr, NeutroNumber, RealSet};
use proptest::prelude::*;

fn finite(o: LimitOutcome) -> RealSet {
    o.as_finite().cloned().unwrap_or_else(|| panic!("expected a finite limit, got {o}"))
}

fn value(f: &FuncSpec, x: f64) -> RealSet {
    eval_at(f, x).unwrap().as_set().unwrap().clone()
}

fn end_range(f: &FuncSpec, a: f64, b: f64) -> (f64, f64) {
    let (fa, fb) = (value(f, a), value(f, b));
    (fa.inf().unwrap().min(fb.inf().unwrap()), fa.sup().unwrap().max(fb.sup().unwrap()))
}

/// Polynomial with indeterminate coefficients, as coefficient list and
/// expression.
fn nn_poly_expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((-16i32..16, -16i32..16), 1..5).prop_map(|cs| {
        let mut e = Expr::c(0.0);
        for (k, (a, b)) in cs.into_iter().enumerate() {
            let c = Expr::nn(NeutroNumber::new(a as f64 / 4.0, b as f64 / 4.0));
            e = e + c * Expr::x().powi(k as i32);
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn full_limit_implies_same_mereo_limit((_, _, f) in common::thick_poly(), c in -2.0..2.0f64) {
        let cfg = LimitConfig::default();
        let full = finite(full_limit(&f, c, &cfg).unwrap());
        let mereo = finite(mereo_limit(&f, c, &cfg).unwrap());
        prop_assert!(eta_metric(&full, &mereo).unwrap() <= cfg.tol);
    }

    #[test]
    fn crisp_polynomials_limit_to_their_values((cs, p) in common::poly_expr(3), c in -2.0..2.0f64) {
        let cfg = LimitConfig::default();
        let l = finite(full_limit(&FuncSpec::Crisp(p), c, &cfg).unwrap());
        let want = common::poly_eval(&cs, c);
        prop_assert!((l.as_point().unwrap() - want).abs() <= 2.0 * cfg.tol * (1.0 + want.abs()), "{} vs {}", l, want);
    }

    #[test]
    fn scaling_commutes_with_limits((_, _, f) in common::thick_poly(), c in -2.0..2.0f64, alpha in prop_oneof![-3.0..-0.25f64, 0.25..3.0f64]) {
        let cfg = LimitConfig::default();
        let l = finite(directional_limit(&f, c, Side::Left, &cfg).unwrap());
        let scaled = FuncSpec::Scaled { factor: alpha, inner: Box::new(f) };
        let ls = finite(directional_limit(&scaled, c, Side::Left, &cfg).unwrap());
        let want = set_arith(SetOp::Scale(alpha), &l, &l).unwrap();
        prop_assert!(eta_metric(&ls, &want).unwrap() <= 4.0 * cfg.tol * (1.0 + alpha.abs()), "{} vs {}", ls, want);
    }

    #[test]
    fn parameter_endpoints_lie_in_the_hull(p in 0.5..3.0f64, w in 0.1..2.0f64) {
        let q = p + w;
        let cfg = LimitConfig::default();
        let t = parse_expr(&format!("(x^2 + 3x - [{p},{q}]x - 3*[{p},{q}])/(x + 3)")).unwrap();
        let l = finite(interval_param_limit(&t, -3.0, &cfg).unwrap());
        for alpha in [p, q] {
            let crisp = parse_expr(&format!("(x^2 + 3x - {alpha}x - 3*{alpha})/(x + 3)")).unwrap();
            let f = FuncSpec::Crisp(crisp);
            // direct substitution is 0/0
            prop_assert!(matches!(eval_at(&f, -3.0), Err(Error::DivisionBySetContainingZero(_))));
            let m = finite(full_limit(&f, -3.0, &cfg).unwrap()).as_point().unwrap();
            prop_assert!((m + 3.0 + alpha).abs() <= 1e-6);
            prop_assert!(l.closure_contains(m) || l.distance_to(m) <= 1e-9, "{} outside {}", m, l);
        }
    }

    #[test]
    fn continuity_gives_value_as_mereo_limit((_, _, f) in common::thick_poly(), c in -2.0..2.0f64) {
        let cfg = LimitConfig::default();
        let class = classify_at(&f, c, &cfg).unwrap();
        prop_assert_eq!(&class, &ContinuityClass::Continuous);
        let m = finite(mereo_limit(&f, c, &cfg).unwrap());
        prop_assert!(eta_metric(&m, &value(&f, c)).unwrap() <= cfg.tol);
    }

    #[test]
    fn finer_grid_keeps_the_witness((_, _, f) in common::thick_poly(), t in 0.0..=1.0f64, g in 8usize..64) {
        let (m, big_m) = end_range(&f, -1.0, 1.0);
        let k = m + t * (big_m - m);
        let coarse = ivt_find(&f, -1.0, 1.0, k, g).unwrap();
        let fine = ivt_find(&f, -1.0, 1.0, k, 2 * g).unwrap();
        prop_assert!(fine <= coarse + 1e-6, "grid {}: {} then {}", g, coarse, fine);
    }

    #[test]
    fn cover_reaches_the_whole_range((_, _, f) in common::thick_poly(), s in 0.0..=1.0f64, t in 0.0..=1.0f64) {
        let (m, big_m) = end_range(&f, -1.0, 1.0);
        let (k1, k2) = (m + s.min(t) * (big_m - m), m + s.max(t) * (big_m - m));
        prop_assume!(k1 < k2);
        let cs = ivt_cover(&f, -1.0, 1.0, k1, k2, 256).unwrap();
        let u = cs.iter().fold(RealSet::empty(), |u, &c| u.union(&value(&f, c)));
        prop_assert!(RealSet::closed(k1, k2).is_subset(&u), "{} misses part of [{}, {}]", u, k1, k2);
        prop_assert!(cs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fundamental_theorem((cs, p) in common::poly_expr(3), a in -2.0..0.0f64, b in 0.1..2.0f64) {
        let d = derivative_thick(&FuncSpec::Crisp(p)).unwrap();
        let v = integrate_thick(&d, a, b, &IntegralConfig { n: 10_000, ..IntegralConfig::default() }).unwrap();
        let want = common::poly_eval(&cs, b) - common::poly_eval(&cs, a);
        prop_assert!((v.as_point().unwrap() - want).abs() <= 1e-6, "{} vs {}", v, want);
    }

    #[test]
    fn antiderivative_then_derivative_is_identity(e in nn_poly_expr()) {
        let f = FuncSpec::NNExpr(e.clone());
        let anti = antiderivative_nn(&f).unwrap();
        let FuncSpec::NNExpr(back) = derivative_nn(&anti.spec()).unwrap() else {
            return Err(TestCaseError::fail("derivative of a polynomial"));
        };
        let (got, want) = (NnPoly::from_expr(&back).unwrap(), NnPoly::from_expr(&e).unwrap());
        let keys: std::collections::BTreeSet<u32> = got.terms().keys().chain(want.terms().keys()).copied().collect();
        for k in keys {
            let d = got.coeff(k).sub(&want.coeff(k));
            prop_assert!(d.a().abs() <= 1e-12 && d.coeff(1).abs() <= 1e-12, "power {}: {} vs {}", k, got, want);
        }
    }

    #[test]
    fn singleton_bounds_match_plain_integral((_, _, f) in common::crossing_thick(), a in -1.0..0.0f64, b in 0.5..1.5f64) {
        let cfg = IntegralConfig::default();
        let plain = integrate_thick(&f, a, b, &cfg).unwrap();
        let sets = integrate_setbounds(&f, &RealSet::point(a), &RealSet::point(b), &cfg).unwrap();
        prop_assert!(eta_metric(&plain, &sets).unwrap() <= 1e-6);
    }

    #[test]
    fn wider_band_gives_wider_integral((_, _, f) in common::thick_poly(), eps in 0.01..1.0f64) {
        let FuncSpec::Thick { lower, upper, .. } = &f else { unreachable!() };
        let wide = FuncSpec::thick(lower.clone() - Expr::c(eps), upper.clone() + Expr::c(eps));
        let cfg = IntegralConfig::default();
        let (narrow, broad) = (integrate_thick(&f, -1.0, 1.0, &cfg).unwrap(), integrate_thick(&wide, -1.0, 1.0, &cfg).unwrap());
        prop_assert!(narrow.is_subset(&broad), "{} not in {}", narrow, broad);
    }
}
