#![allow(dead_code)]

use neutrocalc::funcmodel::Expr;
use neutrocalc::realset::{Interval, RealSet};
use neutrocalc::FuncSpec;
use proptest::prelude::*;

pub fn interval_in(lo: f64, hi: f64) -> impl Strategy<Value = Interval> {
    (lo..hi, lo..hi, any::<bool>(), any::<bool>()).prop_map(|(a, b, lo_open, hi_open)| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a == b {
            Interval::point(a)
        } else {
            Interval::new(a, b, lo_open, hi_open)
        }
    })
}

/// Non-empty canonical set with up to three intervals and two points.
pub fn realset_in(lo: f64, hi: f64) -> impl Strategy<Value = RealSet> {
    (prop::collection::vec(interval_in(lo, hi), 0..=3), prop::collection::vec(lo..hi, 0..=2))
        .prop_filter("non-empty", |(ivs, pts)| !ivs.is_empty() || !pts.is_empty())
        .prop_map(|(ivs, pts)| RealSet::normalize(&ivs, &pts).expect("finite endpoints"))
        .prop_filter("non-empty after normalization", |s| !s.is_empty())
}

pub fn realset() -> impl Strategy<Value = RealSet> {
    realset_in(-10.0, 10.0)
}

/// A subset of `c`: `c` cut down to a window inside its hull.
pub fn subset_of(c: RealSet) -> impl Strategy<Value = (RealSet, RealSet)> {
    let (lo, hi) = (c.inf().unwrap(), c.sup().unwrap());
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(move |(s, t)| {
        let (u, v) = (lo + (hi - lo) * s.min(t), lo + (hi - lo) * s.max(t));
        let window = if u == v { RealSet::point(u) } else { RealSet::closed(u, v) };
        let a = c.intersect(&window);
        let a = if a.is_empty() { c.clone() } else { a };
        (a, c.clone())
    })
}

/// Polynomial `c0 + c1*x + c2*x^2 + c3*x^3` with small coefficients.
pub fn poly_expr(degree: usize) -> impl Strategy<Value = (Vec<f64>, Expr)> {
    prop::collection::vec(-3.0..3.0f64, degree + 1).prop_map(|cs| {
        let mut e = Expr::c(cs[0]);
        for (k, &c) in cs.iter().enumerate().skip(1) {
            let term = if k == 1 { Expr::x() } else { Expr::x().powi(k as i32) };
            e = e + Expr::c(c) * term;
        }
        (cs, e)
    })
}

pub fn poly_eval(cs: &[f64], x: f64) -> f64 {
    cs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Thick spec `[p, p + w]` where `w >= 0.1` everywhere: `w = w0 + w2*x^2`.
pub fn thick_poly() -> impl Strategy<Value = (Vec<f64>, (f64, f64), FuncSpec)> {
    (poly_expr(3), 0.1..2.0f64, 0.0..1.0f64).prop_map(|((cs, p), w0, w2)| {
        let upper = p.clone() + Expr::c(w0) + Expr::c(w2) * Expr::x().powi(2);
        (cs, (w0, w2), FuncSpec::thick(p, upper))
    })
}

/// Thick spec `[p, q]` from two independent polynomials; the envelopes may
/// cross.
pub fn crossing_thick() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, FuncSpec)> {
    (poly_expr(3), poly_expr(3)).prop_map(|((a, pa), (b, pb))| (a, b, FuncSpec::thick(pa, pb)))
}

/// Random expression trees whose printed form parses back to the same
/// tree.
pub fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::x()),
        (-20i32..20, 1u32..4).prop_map(|(n, d)| Expr::c(n as f64 / d as f64)),
        (0i32..5, 1i32..4).prop_map(|(a, w)| Expr::set(RealSet::closed(a as f64, (a + w) as f64))),
        (0i32..5).prop_map(|p| Expr::set(RealSet::point(p as f64))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            inner.clone().prop_filter("no negated constants", |a| !matches!(a, Expr::Const(_))).prop_map(|a| -a),
            (inner.clone(), -3i32..4).prop_map(|(a, n)| a.powi(n)),
            (inner.clone(), prop_oneof![Just(0.5), Just(1.5), Just(-0.25)]).prop_map(|(a, p)| a.pow(Expr::c(p))),
            inner.clone().prop_map(Expr::exp),
            inner.clone().prop_map(Expr::ln),
            inner.clone().prop_map(Expr::sqrt),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(Expr::abs),
            (2i32..5, inner.clone()).prop_map(|(b, a)| Expr::log(Expr::c(b as f64), a)),
            (inner.clone(), inner.clone())
                .prop_filter("flat alternatives", |(a, b)| !matches!(a, Expr::Or(_)) && !matches!(b, Expr::Or(_)))
                .prop_map(|(a, b)| Expr::or(vec![a, b])),
            (inner.clone(), inner, any::<bool>(), any::<bool>())
                .prop_filter("band with a variable end", |(a, b, _, _)| a.has_var() || b.has_var())
                .prop_map(|(a, b, lo, hi)| Expr::hull(a, b, lo, hi)),
        ]
    })
}
