//! Symbolic derivative of an [`Expr`] in `x`, with a small simplifier.

use crate::error::{Error, Result};
use crate::funcmodel::Expr;

use super::poly::Poly;

fn is_const(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == v)
}

/// `d/dx e`.
pub fn derive(e: &Expr) -> Result<Expr> {
    if !e.has_var() {
        return Ok(Expr::c(0.0));
    }
    let d = |a: &Expr| derive(a);
    Ok(match e {
        Expr::Var => Expr::c(1.0),
        Expr::Neg(a) => -d(a)?,
        Expr::Add(a, b) => d(a)? + d(b)?,
        Expr::Sub(a, b) => d(a)? - d(b)?,
        Expr::Mul(a, b) => d(a)? * (**b).clone() + (**a).clone() * d(b)?,
        Expr::Div(a, b) => {
            let num = d(a)? * (**b).clone() - (**a).clone() * d(b)?;
            num / (**b).clone().powi(2)
        }
        Expr::Powi(a, n) => Expr::c(*n as f64) * (**a).clone().powi(n - 1) * d(a)?,
        Expr::Pow(base, expo) => {
            if !expo.has_var() {
                let reduced = (**expo).clone() - Expr::c(1.0);
                (**expo).clone() * (**base).clone().pow(reduced) * d(base)?
            } else if !base.has_var() {
                (**base).clone().ln() * e.clone() * d(expo)?
            } else {
                let inner = d(expo)? * (**base).clone().ln() + (**expo).clone() * d(base)? / (**base).clone();
                e.clone() * inner
            }
        }
        Expr::Exp(a) => e.clone() * d(a)?,
        Expr::Ln(a) => d(a)? / (**a).clone(),
        Expr::Log(base, a) => {
            if base.has_var() {
                return Err(Error::NotSupported(format!("derivative of `{e}` with a variable base")));
            }
            d(a)? / ((**a).clone() * (**base).clone().ln())
        }
        Expr::Sqrt(a) => d(a)? / (Expr::c(2.0) * e.clone()),
        Expr::Sin(a) => (**a).clone().cos() * d(a)?,
        Expr::Cos(a) => -((**a).clone().sin()) * d(a)?,
        Expr::Or(v) => Expr::or(v.iter().map(derive).collect::<Result<Vec<_>>>()?),
        Expr::Abs(_) | Expr::Hull { .. } => {
            return Err(Error::NotSupported(format!("derivative of `{e}`")));
        }
        Expr::Const(_) | Expr::ConstSet(_) | Expr::ConstNN(_) => Expr::c(0.0),
    })
}

/// Constant folding and unit removal; polynomials come back in normal
/// form.
pub fn simplify(e: &Expr) -> Expr {
    let s = fold(e);
    match Poly::from_expr(&s) {
        Some(p) if s.has_var() || !matches!(s, Expr::Const(_)) => p.to_expr(),
        _ => s,
    }
}

fn fold(e: &Expr) -> Expr {
    use Expr::*;
    let b = |x: &Expr| Box::new(fold(x));
    match e {
        Neg(a) => match fold(a) {
            Const(c) => Const(-c),
            Neg(inner) => *inner,
            other => Neg(Box::new(other)),
        },
        Add(x, y) => {
            let (x, y) = (fold(x), fold(y));
            match (&x, &y) {
                (Const(p), Const(q)) => Const(p + q),
                _ if is_const(&x, 0.0) => y,
                _ if is_const(&y, 0.0) => x,
                _ => Add(Box::new(x), Box::new(y)),
            }
        }
        Sub(x, y) => {
            let (x, y) = (fold(x), fold(y));
            match (&x, &y) {
                (Const(p), Const(q)) => Const(p - q),
                _ if is_const(&y, 0.0) => x,
                _ if is_const(&x, 0.0) => fold(&Neg(Box::new(y))),
                _ => Sub(Box::new(x), Box::new(y)),
            }
        }
        Mul(x, y) => {
            let (x, y) = (fold(x), fold(y));
            match (&x, &y) {
                (Const(p), Const(q)) => Const(p * q),
                _ if is_const(&x, 0.0) || is_const(&y, 0.0) => Const(0.0),
                _ if is_const(&x, 1.0) => y,
                _ if is_const(&y, 1.0) => x,
                _ => Mul(Box::new(x), Box::new(y)),
            }
        }
        Div(x, y) => {
            let (x, y) = (fold(x), fold(y));
            match (&x, &y) {
                (Const(p), Const(q)) if *q != 0.0 => Const(p / q),
                _ if is_const(&y, 1.0) => x,
                _ if is_const(&x, 0.0) => Const(0.0),
                _ => Div(Box::new(x), Box::new(y)),
            }
        }
        Powi(a, n) => match (fold(a), *n) {
            (_, 0) => Const(1.0),
            (a, 1) => a,
            (Const(c), n) => Const(c.powi(n)),
            (a, n) => Powi(Box::new(a), n),
        },
        Pow(a, x) => match (fold(a), fold(x)) {
            (a, Const(c)) if c.fract() == 0.0 && c.abs() < i32::MAX as f64 => fold(&Powi(Box::new(a), c as i32)),
            (a, x) => Pow(Box::new(a), Box::new(x)),
        },
        Exp(a) => Exp(b(a)),
        Ln(a) => Ln(b(a)),
        Log(base, a) => Log(b(base), b(a)),
        Sqrt(a) => Sqrt(b(a)),
        Sin(a) => Sin(b(a)),
        Cos(a) => Cos(b(a)),
        Abs(a) => Abs(b(a)),
        Or(v) => Or(v.iter().map(fold).collect()),
        Hull { lo, hi, lo_open, hi_open } => Hull { lo: b(lo), hi: b(hi), lo_open: *lo_open, hi_open: *hi_open },
        Const(_) | ConstSet(_) | ConstNN(_) | Var => e.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::eval_f64;
    use crate::textparse::parse_expr;

    fn dd(text: &str) -> Expr {
        simplify(&derive(&parse_expr(text).unwrap()).unwrap())
    }

    #[test]
    fn polynomial_forms() {
        assert_eq!(dd("2x^3 + 7x").to_string(), "6*x^2 + 7");
        assert_eq!(dd("x^5").to_string(), "5*x^4");
        assert_eq!(dd("-x^2 + 6x + 3").to_string(), "-2*x + 6");
        assert_eq!(dd("7").to_string(), "0");
    }

    #[test]
    fn transcendental_rules_match_differences() {
        for text in ["exp(2x)", "ln(x^2+1)", "sin(x)*cos(x)", "sqrt(x+3)", "x^2/(x+1)", "2^x", "x^x", "log_3(x)", "(x+1)^0.5", "x^-2"] {
            let e = parse_expr(text).unwrap();
            let de = dd(text);
            for x in [0.7, 1.3, 2.9] {
                let h = 1e-6;
                let num = (eval_f64(&e, x + h).unwrap() - eval_f64(&e, x - h).unwrap()) / (2.0 * h);
                let got = eval_f64(&de, x).unwrap();
                assert!((num - got).abs() < 1e-5 * (1.0 + got.abs()), "{text} at {x}: {got} vs {num}");
            }
        }
    }

    #[test]
    fn abs_is_rejected() {
        assert!(matches!(derive(&parse_expr("abs(x)").unwrap()), Err(Error::NotSupported(_))));
    }
}
