use std::fmt;

use crate::funcmodel::{Branch, FuncSpec, NeutroValue, TableRow};
use crate::realset::{PairTag, RealSet};

/// Canonical text of a value; [`super::parse_value`] reads it back.
pub fn render(v: &NeutroValue) -> String {
    v.branches().iter().map(render_branch).collect::<Vec<_>>().join(" or ")
}

fn render_branch(b: &Branch) -> String {
    match b {
        Branch::Set(s) => s.to_string(),
        Branch::NN(n) => n.to_string(),
    }
}

fn bracket(lo_open: bool, hi_open: bool, lo: &dyn fmt::Display, hi: &dyn fmt::Display) -> String {
    format!("{}{}, {}{}", if lo_open { '(' } else { '[' }, lo, hi, if hi_open { ')' } else { ']' })
}

fn set_text(s: &RealSet) -> String {
    match s.as_point() {
        Some(p) if s.annotations().is_empty() => format!("{{{}}}", crate::realset::fmt_num(p)),
        _ => s.to_string(),
    }
}

fn row_text(r: &TableRow) -> String {
    let tag = match r.tag {
        PairTag::Sure => String::new(),
        PairTag::Partial(t) => t.to_string(),
        PairTag::Potential => "?".into(),
    };
    format!("{}->{}{}", set_text(&r.arg), set_text(&r.val), tag)
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncSpec::Crisp(e) | FuncSpec::NNExpr(e) => write!(f, "{e}"),
            FuncSpec::Thick { lower, upper, lo_open, hi_open } => {
                write!(f, "{}", bracket(*lo_open, *hi_open, lower, upper))
            }
            FuncSpec::Piecewise(pieces) => {
                let parts: Vec<String> = pieces.iter().map(|(d, s)| format!("{s} on {d}")).collect();
                write!(f, "{{ {} }}", parts.join("; "))
            }
            FuncSpec::Alternatives(v) => {
                let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", parts.join(" or "))
            }
            FuncSpec::Table(rows) => {
                let parts: Vec<String> = rows.iter().map(row_text).collect();
                write!(f, "table {{ {} }}", parts.join("; "))
            }
            FuncSpec::Composed { outer, inner } => write!(f, "({outer}) after ({inner})"),
            FuncSpec::Combined { op, lhs, rhs } => {
                let sym = match op {
                    crate::funcmodel::BinOp::Add => "+",
                    crate::funcmodel::BinOp::Sub => "-",
                    crate::funcmodel::BinOp::Mul => "*",
                    crate::funcmodel::BinOp::Div => "/",
                };
                write!(f, "({lhs}) {sym} ({rhs})")
            }
            FuncSpec::Scaled { factor, inner } => write!(f, "{}*({inner})", crate::realset::fmt_num(*factor)),
            FuncSpec::WithSetArgs { rows, otherwise } => {
                let parts: Vec<String> = rows.iter().map(row_text).collect();
                write!(f, "table {{ {} }} else {otherwise}", parts.join("; "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neutronum::NeutroNumber;
    use crate::textparse::{parse_funcdef, parse_value};

    #[test]
    fn render_examples() {
        let v = NeutroValue::new(vec![Branch::point(2.0), Branch::point(4.0)]).unwrap();
        assert_eq!(render(&v), "2 or 4");
        assert_eq!(render(&NeutroValue::set(RealSet::closed(8.0, 9.0))), "[8,9]");
        assert_eq!(render(&NeutroValue::nn(NeutroNumber::new(6.0 / 8.0, 29.0 / 8.0))), "0.75 + 3.625*I");
    }

    #[test]
    fn round_trip_fixed_values() {
        for text in ["2 or 4", "[8,9]", "0.75 + 3.625*I", "(0.1,3] ∪ {4,5}", "[0,5<0.6,0.1,0.3>)", "-1 - 2*I2 or {}"] {
            let v = parse_value(text).unwrap();
            assert_eq!(parse_value(&render(&v)).unwrap(), v, "{text}");
        }
    }

    #[test]
    fn spec_display_reparses() {
        for text in [
            "f(x) = { [-x^2 + 6*x + 3, x^3 - 114] on (-inf,5]; [x + 1, 3*x - 6] on (5,inf) }",
            "t(x) = table { {1}->{5}; {2,3,4}->{6}<0.5,0.2,0.1> }",
            "k(x) = 2^(x or x + 1)",
            "h(x) = x^3 or x^4",
        ] {
            let (_, spec) = parse_funcdef(text).unwrap();
            let again = parse_funcdef(&format!("f(x) = {spec}")).unwrap().1;
            assert_eq!(again, spec, "{text}");
        }
    }
}
