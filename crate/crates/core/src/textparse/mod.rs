//! The function-definition language.
//!
//! ```text
//! expr   := orexpr
//! orexpr := sum ("or" sum)*
//! sum    := term (("+"|"-") term)*
//! term   := factor (("*"|"/")? factor)*      juxtaposition multiplies
//! factor := "-" factor | power
//! power  := atom ("^" factor)?
//! atom   := number | "I" digits? | "x" | set | "[" expr "," expr "]"
//!         | "(" expr ")" | func "(" expr ")"
//! func   := exp | ln | log_<atom> | sqrt | sin | cos | abs
//! ```
//!
//! Sets are written `[a,b]`, `(a,b)`, `[a,b)`, `(a,b]`, `{p1,p2}` and
//! joined with `u` or `∪`. An endpoint may carry a membership triple,
//! `5<0.6,0.1,0.3>`. Definitions look like
//!
//! ```text
//! f(x) = { [-x^2+6x+3, x^3-114] on (-inf,5]; [x+1, 3x-6] on (5,inf) }
//! t(x) = table { {1}->{5}; {2,3,4}->{6} }
//! ```

mod lexer;
mod parser;
mod render;

use std::fmt;

pub use render::render;

use crate::error::{Error, Result};
use crate::funcmodel::{eval_expr, Branch, Expr, FuncSpec, NeutroValue};
use parser::Parser;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text, 1)?;
    let e = p.parse_expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_funcdef(text: &str) -> Result<(String, FuncSpec)> {
    Parser::new(text, 1)?.parse_funcdef()
}

fn starts_definition(line: &str) -> bool {
    let t = line.trim_start();
    let name_len = t.chars().take_while(|c| c.is_ascii_alphanumeric()).count();
    if name_len == 0 || !t.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return false;
    }
    let rest: String = t[name_len..].chars().filter(|c| !c.is_whitespace()).collect();
    rest.starts_with("(x)=")
}

/// Parses a whole definitions file. `#` starts a comment; a definition
/// runs until the next line of the form `name(x) =`.
pub fn parse_defs(text: &str) -> Result<Vec<(String, FuncSpec)>> {
    let mut chunks: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if starts_definition(line) || chunks.is_empty() {
            if line.trim().is_empty() {
                continue;
            }
            chunks.push((i + 1, String::new()));
        }
        let chunk = &mut chunks.last_mut().expect("pushed above").1;
        chunk.push_str(line);
        chunk.push('\n');
    }
    let mut out: Vec<(String, FuncSpec)> = Vec::new();
    for (line, chunk) in chunks {
        let (name, spec) = Parser::new(&chunk, line)?.parse_funcdef()?;
        if out.iter().any(|(n, _)| *n == name) {
            return Err(Error::Parse(ParseError {
                span: SourceSpan { line, column: 1, length: name.len() },
                expected: "a new function name".into(),
                found: format!("second definition of `{name}`"),
            }));
        }
        out.push((name, spec));
    }
    Ok(out)
}

/// Parses a constant value such as `2 or 4`, `[8,9]` or `0.75 + 3.625*I`.
pub fn parse_value(text: &str) -> Result<NeutroValue> {
    let e = parse_expr(text)?;
    if e.has_var() {
        return Err(Error::Parse(ParseError {
            span: SourceSpan { line: 1, column: 1, length: text.chars().count() },
            expected: "a constant value".into(),
            found: "a formula in `x`".into(),
        }));
    }
    NeutroValue::new(eval_expr(&e, &Branch::point(0.0))?)
}

/// Parses a constant set, as used for set arguments on the command line.
pub fn parse_set(text: &str) -> Result<crate::realset::RealSet> {
    let v = parse_value(text)?;
    match v.as_set() {
        Some(s) => Ok(s.clone()),
        None => Err(Error::Parse(ParseError {
            span: SourceSpan { line: 1, column: 1, length: text.chars().count() },
            expected: "a single set".into(),
            found: format!("`{text}`"),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::Domain;
    use crate::neutronum::NeutroNumber;
    use crate::realset::{Interval, MembershipTriple, RealSet};

    fn c(v: f64) -> Expr {
        Expr::c(v)
    }

    fn x() -> Expr {
        Expr::x()
    }

    fn i1() -> Expr {
        Expr::nn(NeutroNumber::indeterminacy(1))
    }

    /// Fixed precedence corpus.
    #[test]
    fn precedence_corpus() {
        let cases: Vec<(&str, Expr)> = vec![
            ("1+2*3", c(1.0) + c(2.0) * c(3.0)),
            ("1-2-3", (c(1.0) - c(2.0)) - c(3.0)),
            ("8/4/2", (c(8.0) / c(4.0)) / c(2.0)),
            ("2^3^2", c(2.0).pow(c(3.0).powi(2))),
            ("-x^2", -(x().powi(2))),
            ("-2^2", -(c(2.0).powi(2))),
            ("(-2)^2", c(-2.0).powi(2)),
            ("2x", c(2.0) * x()),
            ("2x^2", c(2.0) * x().powi(2)),
            ("3*x - x^2*I", c(3.0) * x() - x().powi(2) * i1()),
            ("x or x+1", Expr::or(vec![x(), x() + c(1.0)])),
            ("a", c(0.0)),
            ("2^(x or x+1)", c(2.0).pow(Expr::or(vec![x(), x() + c(1.0)]))),
            ("[2,5]/(x-1)", Expr::set(RealSet::closed(2.0, 5.0)) / (x() - c(1.0))),
            ("4/((1,3)x^2)", c(4.0) / (Expr::set(RealSet::open(1.0, 3.0)) * x().powi(2))),
            ("sqrt([4,5]x+1)", (Expr::set(RealSet::closed(4.0, 5.0)) * x() + c(1.0)).sqrt()),
            ("log_2(x) - 1", Expr::log(c(2.0), x()) - c(1.0)),
            ("ln(3x)", (c(3.0) * x()).ln()),
            ("x^-2", x().powi(-2)),
            ("2xI1 + 5x^3I2", c(2.0) * x() * i1() + c(5.0) * x().powi(3) * Expr::nn(NeutroNumber::indeterminacy(2))),
            ("(x, x+1)", Expr::hull(x(), x() + c(1.0), true, true)),
        ];
        for (text, want) in cases {
            if text == "a" {
                assert!(parse_expr(text).is_err());
                continue;
            }
            assert_eq!(parse_expr(text).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn thick_definition() {
        let (name, spec) = parse_funcdef("g(x) = [2x, 2x+1]").unwrap();
        assert_eq!(name, "g");
        assert_eq!(spec, FuncSpec::thick(c(2.0) * x(), c(2.0) * x() + c(1.0)));
    }

    #[test]
    fn piecewise_definition() {
        let (_, spec) = parse_funcdef("f(x) = { [-x^2+6x+3, x^3-114] on (-inf,5]; [x+1, 3x-6] on (5, inf) }").unwrap();
        let FuncSpec::Piecewise(pieces) = spec else { panic!() };
        assert_eq!(pieces.len(), 2);
        assert!(matches!(pieces[0].1, FuncSpec::Thick { .. }));
        assert!(matches!(pieces[1].1, FuncSpec::Thick { .. }));
        let left = Domain::new(&[Interval::new(f64::NEG_INFINITY, 5.0, true, false)], &[]).unwrap();
        assert_eq!(pieces[0].0, left);
    }

    #[test]
    fn table_definition() {
        let (_, spec) = parse_funcdef("t(x) = table { {1}->{5}; {2,3,4}->{6}<0.5,0.2,0.1>; {7}->{8}? }").unwrap();
        let FuncSpec::Table(rows) = spec else { panic!() };
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].arg, RealSet::from_points(&[2.0, 3.0, 4.0]).unwrap());
        assert_eq!(rows[1].tag, crate::realset::PairTag::Partial(MembershipTriple::new(0.5, 0.2, 0.1).unwrap()));
        assert_eq!(rows[2].tag, crate::realset::PairTag::Potential);
    }

    #[test]
    fn overlap_is_reported() {
        let err = parse_funcdef("f(x) = { x on [0,2]; 1 on [1,3] }").unwrap_err();
        assert!(matches!(err, Error::Overlap(_)));
    }

    #[test]
    fn inf_outside_domain_rejected() {
        let err = parse_expr("x + inf").unwrap_err();
        let Error::Parse(p) = err else { panic!() };
        assert_eq!(p.span.column, 5);
    }

    #[test]
    fn errors_are_deterministic() {
        let a = parse_funcdef("f(x) = [x, ").unwrap_err();
        let b = parse_funcdef("f(x) = [x, ").unwrap_err();
        assert_eq!(a, b);
        let Error::Parse(p) = a else { panic!() };
        assert_eq!(p.found, "end of input");
    }

    #[test]
    fn defs_file() {
        let text = "# sample\nf(x) = { x on [0,1];\n   2 on (1,2] }\n\ng(x) = [2x, 2x+1]  # thick\n";
        let defs = parse_defs(text).unwrap();
        assert_eq!(defs.iter().map(|d| d.0.as_str()).collect::<Vec<_>>(), ["f", "g"]);
        let err = parse_defs("f(x) = x\nh(x) = [x,\n").unwrap_err();
        let Error::Parse(p) = err else { panic!() };
        assert_eq!(p.span.line, 3);
        assert!(parse_defs("f(x) = x\nf(x) = 2x\n").is_err());
    }

    #[test]
    fn values() {
        assert_eq!(parse_value("2 or 4").unwrap().branches().len(), 2);
        assert_eq!(parse_value("0.75 + 3.625*I").unwrap(), NeutroValue::nn(NeutroNumber::new(0.75, 3.625)));
        assert_eq!(parse_set("[1,3] u {4}").unwrap(), RealSet::normalize(&[Interval::closed(1.0, 3.0)], &[4.0]).unwrap());
        assert!(parse_value("x").is_err());
    }
}
