//! JSON encoding of engine results, and the decoding used to check it.

use neutrocalc::calc::{DerivClass, NnPoly};
use neutrocalc::contin::ContinuityClass;
use neutrocalc::limits::LimitOutcome;
use neutrocalc::realset::Interval;
use neutrocalc::{Branch, NeutroNumber, NeutroValue, RealSet};
use serde_json::{json, Map, Value};

/// Finite numbers as JSON numbers, infinities as `{"inf": "+"|"-"}`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::Null
    } else {
        json!({ "inf": if x > 0.0 { "+" } else { "-" } })
    }
}

pub fn realset(s: &RealSet) -> Value {
    let intervals: Vec<Value> = s
        .intervals()
        .iter()
        .map(|iv| json!({ "lo": num(iv.lo), "hi": num(iv.hi), "lo_open": iv.lo_open, "hi_open": iv.hi_open }))
        .collect();
    let points: Vec<Value> = s.points().iter().map(|&p| num(p)).collect();
    let mut m = Map::new();
    m.insert("intervals".into(), Value::Array(intervals));
    m.insert("points".into(), Value::Array(points));
    if !s.annotations().is_empty() {
        let notes = s
            .annotations()
            .iter()
            .map(|(v, t)| json!({ "value": num(*v), "t": t.t, "i": t.i, "f": t.f }))
            .collect();
        m.insert("annotations".into(), Value::Array(notes));
    }
    Value::Object(m)
}

pub fn nn(n: &NeutroNumber) -> Value {
    let coeffs: Map<String, Value> = n.terms().iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
    json!({ "a": num(n.a()), "I": coeffs })
}

pub fn branch(b: &Branch) -> Value {
    match b {
        Branch::Set(s) => realset(s),
        Branch::NN(n) => nn(n),
    }
}

/// A value is its array of branches.
pub fn value(v: &NeutroValue) -> Value {
    Value::Array(v.branches().iter().map(branch).collect())
}

pub fn limit(o: &LimitOutcome) -> Value {
    match o {
        LimitOutcome::Finite(s) => json!({ "outcome": "finite", "value": realset(s) }),
        LimitOutcome::PlusInfinity => json!({ "outcome": "infinite", "value": num(f64::INFINITY) }),
        LimitOutcome::MinusInfinity => json!({ "outcome": "infinite", "value": num(f64::NEG_INFINITY) }),
        LimitOutcome::DoesNotExist(why) => json!({ "outcome": "does_not_exist", "reason": why }),
    }
}

pub fn continuity(c: &ContinuityClass) -> Value {
    match c {
        ContinuityClass::Continuous => json!({ "class": "continuous" }),
        ContinuityClass::MereoContinuous(w) => json!({ "class": "mereo-continuous", "witness": realset(w) }),
        ContinuityClass::Discontinuous { reason } => json!({ "class": "discontinuous", "reason": reason }),
    }
}

pub fn deriv_class(d: &DerivClass) -> Value {
    match d {
        DerivClass::Differentiable(s) => json!({ "class": "differentiable", "derivative": realset(s) }),
        DerivClass::MereoDerivative(s) => json!({ "class": "mereo-derivative", "derivative": realset(s) }),
        DerivClass::NotDifferentiable => json!({ "class": "not-differentiable" }),
    }
}

/// Coefficients keyed by power.
pub fn nn_poly(p: &NnPoly) -> Value {
    Value::Object(p.terms().iter().map(|(k, c)| (k.to_string(), nn(c))).collect())
}

pub fn to_num(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::Object(m) => match m.get("inf")?.as_str()? {
            "+" => Some(f64::INFINITY),
            "-" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}

/// Reads a set back; annotations are not decoded.
pub fn to_realset(v: &Value) -> Option<RealSet> {
    let mut ivs = Vec::new();
    for iv in v.get("intervals")?.as_array()? {
        ivs.push(Interval::new(
            to_num(iv.get("lo")?)?,
            to_num(iv.get("hi")?)?,
            iv.get("lo_open")?.as_bool()?,
            iv.get("hi_open")?.as_bool()?,
        ));
    }
    let pts = v.get("points")?.as_array()?.iter().map(to_num).collect::<Option<Vec<_>>>()?;
    RealSet::normalize(&ivs, &pts).ok()
}

pub fn to_nn(v: &Value) -> Option<NeutroNumber> {
    let a = to_num(v.get("a")?)?;
    let mut terms = Vec::new();
    for (k, c) in v.get("I")?.as_object()? {
        terms.push((k.parse().ok()?, to_num(c)?));
    }
    Some(NeutroNumber::refined(a, &terms))
}

pub fn to_value(v: &Value) -> Option<NeutroValue> {
    let branches = v
        .as_array()?
        .iter()
        .map(|b| if b.get("a").is_some() { to_nn(b).map(Branch::NN) } else { to_realset(b).map(Branch::Set) })
        .collect::<Option<Vec<_>>>()?;
    NeutroValue::new(branches).ok()
}
