use std::fmt;
use std::ops;

use crate::neutronum::NeutroNumber;
use crate::realset::{fmt_num, RealSet};

/// Expression tree in the single free variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    ConstSet(RealSet),
    ConstNN(NeutroNumber),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power.
    Powi(Box<Expr>, i32),
    /// General power with a positive base, e.g. `2^x` or `[2.1,2.5]^x`.
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    /// `Log(base, arg)`.
    Log(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Abs(Box<Expr>),
    /// Discrete alternatives, `a or b or c`.
    Or(Vec<Expr>),
    /// Band between two expressions, `[lo, hi]`, `(lo, hi)` and the like.
    Hull {
        lo: Box<Expr>,
        hi: Box<Expr>,
        lo_open: bool,
        hi_open: bool,
    },
}

impl Expr {
    pub fn x() -> Expr {
        Expr::Var
    }

    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn set(s: RealSet) -> Expr {
        Expr::ConstSet(s)
    }

    pub fn nn(n: NeutroNumber) -> Expr {
        Expr::ConstNN(n)
    }

    pub fn powi(self, n: i32) -> Expr {
        Expr::Powi(Box::new(self), n)
    }

    pub fn pow(self, e: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(e))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    pub fn log(base: Expr, arg: Expr) -> Expr {
        Expr::Log(Box::new(base), Box::new(arg))
    }

    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn abs(self) -> Expr {
        Expr::Abs(Box::new(self))
    }

    pub fn hull(lo: Expr, hi: Expr, lo_open: bool, hi_open: bool) -> Expr {
        Expr::Hull { lo: Box::new(lo), hi: Box::new(hi), lo_open, hi_open }
    }

    pub fn or(alts: Vec<Expr>) -> Expr {
        Expr::Or(alts)
    }

    /// Direct children, in order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::ConstSet(_) | Expr::ConstNN(_) | Expr::Var => vec![],
            Expr::Neg(a)
            | Expr::Powi(a, _)
            | Expr::Exp(a)
            | Expr::Ln(a)
            | Expr::Sqrt(a)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Abs(a) => vec![a],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) | Expr::Log(a, b) => {
                vec![a, b]
            }
            Expr::Hull { lo, hi, .. } => vec![lo, hi],
            Expr::Or(v) => v.iter().collect(),
        }
    }

    fn any(&self, pred: &dyn Fn(&Expr) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn has_var(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Var))
    }

    pub fn var_count(&self) -> usize {
        match self {
            Expr::Var => 1,
            _ => self.children().into_iter().map(Expr::var_count).sum(),
        }
    }

    /// True when some leaf is a non-crisp indeterminacy number.
    pub fn has_nn(&self) -> bool {
        self.any(&|e| matches!(e, Expr::ConstNN(n) if !n.is_crisp()))
    }

    pub fn has_or(&self) -> bool {
        self.any(&|e| matches!(e, Expr::Or(_)))
    }

    pub fn has_set(&self) -> bool {
        self.any(&|e| matches!(e, Expr::ConstSet(s) if s.as_point().is_none()) || matches!(e, Expr::Hull { .. }))
    }

    /// Replaces every `x` by `e`.
    pub fn substitute(&self, e: &Expr) -> Expr {
        self.map_leaves(&|leaf| if matches!(leaf, Expr::Var) { Some(e.clone()) } else { None })
    }

    /// Rebuilds the tree, replacing leaves for which `f` returns a value.
    pub fn map_leaves(&self, f: &dyn Fn(&Expr) -> Option<Expr>) -> Expr {
        if let Some(r) = f(self) {
            return r;
        }
        let m = |a: &Expr| Box::new(a.map_leaves(f));
        match self {
            Expr::Const(_) | Expr::ConstSet(_) | Expr::ConstNN(_) | Expr::Var => self.clone(),
            Expr::Neg(a) => Expr::Neg(m(a)),
            Expr::Add(a, b) => Expr::Add(m(a), m(b)),
            Expr::Sub(a, b) => Expr::Sub(m(a), m(b)),
            Expr::Mul(a, b) => Expr::Mul(m(a), m(b)),
            Expr::Div(a, b) => Expr::Div(m(a), m(b)),
            Expr::Powi(a, n) => Expr::Powi(m(a), *n),
            Expr::Pow(a, b) => Expr::Pow(m(a), m(b)),
            Expr::Exp(a) => Expr::Exp(m(a)),
            Expr::Ln(a) => Expr::Ln(m(a)),
            Expr::Log(a, b) => Expr::Log(m(a), m(b)),
            Expr::Sqrt(a) => Expr::Sqrt(m(a)),
            Expr::Sin(a) => Expr::Sin(m(a)),
            Expr::Cos(a) => Expr::Cos(m(a)),
            Expr::Abs(a) => Expr::Abs(m(a)),
            Expr::Or(v) => Expr::Or(v.iter().map(|e| e.map_leaves(f)).collect()),
            Expr::Hull { lo, hi, lo_open, hi_open } => {
                Expr::Hull { lo: m(lo), hi: m(hi), lo_open: *lo_open, hi_open: *hi_open }
            }
        }
    }

    /// Multiplies out every `or`: the result lists the or-free
    /// alternatives in order, leftmost choice varying slowest.
    pub fn expand_or(&self) -> Vec<Expr> {
        if !self.has_or() {
            return vec![self.clone()];
        }
        let un = |a: &Expr, k: fn(Box<Expr>) -> Expr| a.expand_or().into_iter().map(|x| k(Box::new(x))).collect();
        let bin = |a: &Expr, b: &Expr, k: &dyn Fn(Box<Expr>, Box<Expr>) -> Expr| {
            let (xs, ys) = (a.expand_or(), b.expand_or());
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(k(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
            out
        };
        match self {
            Expr::Or(v) => v.iter().flat_map(Expr::expand_or).collect(),
            Expr::Neg(a) => un(a, Expr::Neg),
            Expr::Exp(a) => un(a, Expr::Exp),
            Expr::Ln(a) => un(a, Expr::Ln),
            Expr::Sqrt(a) => un(a, Expr::Sqrt),
            Expr::Sin(a) => un(a, Expr::Sin),
            Expr::Cos(a) => un(a, Expr::Cos),
            Expr::Abs(a) => un(a, Expr::Abs),
            Expr::Powi(a, n) => a.expand_or().into_iter().map(|x| Expr::Powi(Box::new(x), *n)).collect(),
            Expr::Add(a, b) => bin(a, b, &Expr::Add),
            Expr::Sub(a, b) => bin(a, b, &Expr::Sub),
            Expr::Mul(a, b) => bin(a, b, &Expr::Mul),
            Expr::Div(a, b) => bin(a, b, &Expr::Div),
            Expr::Pow(a, b) => bin(a, b, &Expr::Pow),
            Expr::Log(a, b) => bin(a, b, &Expr::Log),
            Expr::Hull { lo, hi, lo_open, hi_open } => {
                let (lo_open, hi_open) = (*lo_open, *hi_open);
                bin(lo, hi, &move |l, h| Expr::Hull { lo: l, hi: h, lo_open, hi_open })
            }
            Expr::Const(_) | Expr::ConstSet(_) | Expr::ConstNN(_) | Expr::Var => vec![self.clone()],
        }
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

// binding strength, loosest first
const OR: u8 = 0;
const SUM: u8 = 1;
const TERM: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Or(_) => OR,
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => TERM,
        Expr::Neg(_) => UNARY,
        Expr::Const(c) if *c < 0.0 => UNARY,
        Expr::Powi(..) | Expr::Pow(..) => 4,
        _ => ATOM,
    }
}

struct At<'a>(&'a Expr, u8);

impl fmt::Display for At<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if level(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn fmt_set_atom(s: &RealSet) -> String {
    match s.as_point() {
        Some(p) if s.annotations().is_empty() => format!("{{{}}}", fmt_num(p)),
        _ => s.to_string(),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", fmt_num(*c)),
            Expr::ConstSet(s) => write!(f, "{}", fmt_set_atom(s)),
            Expr::ConstNN(n) => {
                let unit = n.a() == 0.0 && n.terms().len() == 1 && n.terms().values().all(|&v| v == 1.0);
                if unit {
                    let k = *n.terms().keys().next().expect("one term");
                    write!(f, "{}", crate::neutronum::index_name(k))
                } else if n.is_crisp() {
                    write!(f, "{}", fmt_num(n.a()))
                } else {
                    write!(f, "({n})")
                }
            }
            Expr::Var => write!(f, "x"),
            Expr::Neg(a) => write!(f, "-{}", At(a, UNARY)),
            Expr::Add(a, b) => write!(f, "{} + {}", At(a, SUM), At(b, TERM)),
            Expr::Sub(a, b) => write!(f, "{} - {}", At(a, SUM), At(b, TERM)),
            Expr::Mul(a, b) => write!(f, "{}*{}", At(a, TERM), At(b, UNARY)),
            Expr::Div(a, b) => write!(f, "{}/{}", At(a, TERM), At(b, UNARY)),
            Expr::Powi(a, n) => write!(f, "{}^{}", At(a, ATOM), n),
            Expr::Pow(a, b) => write!(f, "{}^{}", At(a, ATOM), At(b, UNARY)),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Log(base, a) => match base.as_ref() {
                Expr::Const(b) if *b >= 0.0 => write!(f, "log_{}({a})", fmt_num(*b)),
                Expr::ConstSet(s) => write!(f, "log_{}({a})", fmt_set_atom(s)),
                other => write!(f, "log_({other})({a})"),
            },
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Or(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " or ")?;
                    }
                    write!(f, "{}", At(e, SUM))?;
                }
                Ok(())
            }
            Expr::Hull { lo, hi, lo_open, hi_open } => write!(
                f,
                "{}{}, {}{}",
                if *lo_open { '(' } else { '[' },
                lo,
                hi,
                if *hi_open { ')' } else { ']' }
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_or_order() {
        let e = Expr::or(vec![Expr::x(), Expr::x() + Expr::c(1.0)]) * Expr::or(vec![Expr::c(2.0), Expr::c(3.0)]);
        let alts: Vec<String> = e.expand_or().iter().map(|a| a.to_string()).collect();
        assert_eq!(alts, ["x*2", "x*3", "(x + 1)*2", "(x + 1)*3"]);
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        let e = (Expr::x() - Expr::c(1.0)) / Expr::c(2.0);
        assert_eq!(e.to_string(), "(x - 1)/2");
        let p = Expr::c(2.0).pow(Expr::or(vec![Expr::x(), Expr::x() + Expr::c(1.0)]));
        assert_eq!(p.to_string(), "2^(x or x + 1)");
        assert_eq!((-(Expr::x() + Expr::c(1.0))).to_string(), "-(x + 1)");
        assert_eq!(Expr::c(-2.0).powi(2).to_string(), "(-2)^2");
    }

    #[test]
    fn var_count_and_substitute() {
        let e = Expr::x() * Expr::x() + Expr::c(1.0);
        assert_eq!(e.var_count(), 2);
        let s = e.substitute(&Expr::c(3.0));
        assert!(!s.has_var());
    }
}
