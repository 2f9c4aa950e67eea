mod common;

use neutrocalc::funcmodel::{classify_relation, compose, eval, eval_at, invert, RelationClass, TableRow};
use neutrocalc::neutronum::NeutroNumber;
use neutrocalc::textparse::{parse_expr, parse_value, render};
use neutrocalc::{Branch, FuncSpec, NeutroValue, RealSet};
use proptest::prelude::*;

fn pairs(rows: &[TableRow]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = rows
        .iter()
        .flat_map(|r| {
            let vals = r.val.points().to_vec();
            r.arg.points().iter().flat_map(move |&a| vals.clone().into_iter().map(move |v| (a, v))).collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|p, q| p.partial_cmp(q).unwrap());
    out
}

/// A classical function on a few integer arguments.
fn function_table() -> impl Strategy<Value = Vec<TableRow>> {
    prop::collection::btree_map(-20i32..20, -5i32..5, 1..8).prop_map(|m| {
        m.into_iter().map(|(x, y)| TableRow::new(RealSet::point(x as f64), RealSet::point(y as f64))).collect()
    })
}

fn crisp_poly() -> impl Strategy<Value = (Vec<f64>, FuncSpec)> {
    common::poly_expr(2).prop_map(|(cs, e)| (cs, FuncSpec::Crisp(e)))
}

fn value_strategy() -> impl Strategy<Value = NeutroValue> {
    let nn = (-40i32..40, 1i32..40).prop_map(|(a, b)| Branch::NN(NeutroNumber::new(a as f64 / 8.0, b as f64 / 8.0)));
    let set = common::realset().prop_map(Branch::Set);
    prop::collection::vec(prop_oneof![3 => set, 1 => nn], 1..4).prop_map(|b| NeutroValue::new(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn thick_value_holds_both_envelopes((a, b, f) in common::crossing_thick(), x in -3.0..3.0f64) {
        let v = eval_at(&f, x).unwrap();
        let s = v.as_set().unwrap();
        let (ya, yb) = (common::poly_eval(&a, x), common::poly_eval(&b, x));
        let tol = 1e-12 * (1.0 + ya.abs() + yb.abs());
        prop_assert!(s.inf().unwrap() <= s.sup().unwrap());
        prop_assert!((s.inf().unwrap() - ya.min(yb)).abs() <= tol && (s.sup().unwrap() - ya.max(yb)).abs() <= tol);
    }

    #[test]
    fn composition_matches_nested_evaluation((_, f) in crisp_poly(), (_, _, g) in common::thick_poly(), x in -2.0..2.0f64) {
        let direct = eval_at(&compose(&f, &g), x).unwrap();
        let nested = eval(&f, &eval_at(&g, x).unwrap()).unwrap();
        prop_assert!(direct.approx_eq_unordered(&nested, 1e-9), "{:?} vs {:?}", direct, nested);
    }

    #[test]
    fn composed_alternatives_multiply(m in 1usize..4, n in 1usize..4, x in 0.5..2.0f64) {
        let alts = |k: usize, shift: f64| {
            FuncSpec::Alternatives((0..k).map(|i| FuncSpec::Crisp(parse_expr(&format!("x + {}", shift + i as f64)).unwrap())).collect())
        };
        let h = compose(&alts(m, 0.0), &alts(n, 10.0));
        prop_assert_eq!(eval_at(&h, x).unwrap().branches().len(), m * n);
    }

    #[test]
    fn double_inverse_restores_the_graph(rows in function_table()) {
        let t = FuncSpec::Table(rows.clone());
        prop_assert_eq!(classify_relation(&t).unwrap(), RelationClass::CrispFunction);
        let FuncSpec::Table(back) = invert(&invert(&t).unwrap()).unwrap() else {
            return Err(TestCaseError::fail("inverse of a table is a table"));
        };
        prop_assert_eq!(pairs(&back), pairs(&rows));
    }

    #[test]
    fn rendered_values_parse_back(v in value_strategy()) {
        let text = render(&v);
        let back = parse_value(&text).unwrap();
        prop_assert_eq!(&back, &v, "{}", text);
        prop_assert_eq!(parse_value(&text).unwrap(), back);
    }

    #[test]
    fn parse_errors_are_deterministic(cut in 1usize..30) {
        let text = "(x^2 + [1,2]x - 3)/(x or 2x) + ln(";
        let t = &text[..cut.min(text.len())];
        prop_assert_eq!(parse_expr(t), parse_expr(t));
    }
}
