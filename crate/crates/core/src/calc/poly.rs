//! Polynomial normal forms in `x`, with real or indeterminate coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::funcmodel::Expr;
use crate::neutronum::NeutroNumber;

/// Real polynomial, power to coefficient; zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(BTreeMap<u32, f64>);

impl Poly {
    pub fn constant(c: f64) -> Poly {
        Poly::monomial(c, 0)
    }

    pub fn monomial(c: f64, p: u32) -> Poly {
        let mut m = BTreeMap::new();
        if c != 0.0 {
            m.insert(p, c);
        }
        Poly(m)
    }

    pub fn coeff(&self, p: u32) -> f64 {
        self.0.get(&p).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> &BTreeMap<u32, f64> {
        &self.0
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    fn insert(&mut self, p: u32, c: f64) {
        let v = self.coeff(p) + c;
        if v == 0.0 {
            self.0.remove(&p);
        } else {
            self.0.insert(p, v);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (&p, &c) in &o.0 {
            out.insert(p, c);
        }
        out
    }

    pub fn scale(&self, k: f64) -> Poly {
        let mut out = Poly::default();
        for (&p, &c) in &self.0 {
            out.insert(p, c * k);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (&p, &c) in &self.0 {
            for (&q, &d) in &o.0 {
                out.insert(p + q, c * d);
            }
        }
        out
    }

    pub fn derivative(&self) -> Poly {
        let mut out = Poly::default();
        for (&p, &c) in &self.0 {
            if p > 0 {
                out.insert(p - 1, c * p as f64);
            }
        }
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().map(|(&p, &c)| c * x.powi(p as i32)).sum()
    }

    /// Normal form of `e`, if `e` is a polynomial in `x` with real
    /// coefficients.
    pub fn from_expr(e: &Expr) -> Option<Poly> {
        let nn = NnPoly::from_expr(e).ok()?;
        if nn.0.values().all(NeutroNumber::is_crisp) {
            Some(Poly(nn.0.iter().map(|(&p, c)| (p, c.a())).collect()))
        } else {
            None
        }
    }

    /// `c_n*x^n + ... + c_0`, highest power first.
    pub fn to_expr(&self) -> Expr {
        let parts: Vec<(f64, Expr)> = self.0.iter().rev().map(|(&p, &c)| (c, x_power(p))).collect();
        signed_sum(parts)
    }
}

fn x_power(p: u32) -> Expr {
    match p {
        0 => Expr::c(1.0),
        1 => Expr::x(),
        _ => Expr::x().powi(p as i32),
    }
}

/// `c*t` with the unit factors dropped.
fn times(c: f64, t: Expr) -> Expr {
    if t == Expr::c(1.0) {
        Expr::c(c)
    } else if c == 1.0 {
        t
    } else {
        Expr::c(c) * t
    }
}

/// Sum of `c_i * t_i`, turning negative coefficients into subtraction.
fn signed_sum(parts: Vec<(f64, Expr)>) -> Expr {
    let mut acc: Option<Expr> = None;
    for (c, t) in parts {
        acc = Some(match acc {
            None => times(c, t),
            Some(a) if c < 0.0 => a - times(-c, t),
            Some(a) => a + times(c, t),
        });
    }
    acc.unwrap_or(Expr::c(0.0))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Polynomial with indeterminate coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NnPoly(BTreeMap<u32, NeutroNumber>);

impl NnPoly {
    pub fn monomial(c: NeutroNumber, p: u32) -> NnPoly {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(p, c);
        }
        NnPoly(m)
    }

    pub fn coeff(&self, p: u32) -> NeutroNumber {
        self.0.get(&p).cloned().unwrap_or_else(|| NeutroNumber::crisp(0.0))
    }

    pub fn terms(&self) -> &BTreeMap<u32, NeutroNumber> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest refined index used, 0 when fully determinate.
    pub fn max_index(&self) -> u32 {
        self.0.values().flat_map(|c| c.terms().keys().copied()).max().unwrap_or(0)
    }

    fn insert(&mut self, p: u32, c: &NeutroNumber) {
        let v = self.coeff(p).add(c);
        if v.is_zero() {
            self.0.remove(&p);
        } else {
            self.0.insert(p, v);
        }
    }

    fn add(&self, o: &NnPoly) -> NnPoly {
        let mut out = self.clone();
        for (&p, c) in &o.0 {
            out.insert(p, c);
        }
        out
    }

    fn scale(&self, k: f64) -> NnPoly {
        let mut out = NnPoly::default();
        for (&p, c) in &self.0 {
            out.insert(p, &c.scale(k));
        }
        out
    }

    fn div(&self, k: f64) -> Result<NnPoly> {
        let mut out = NnPoly::default();
        for (&p, c) in &self.0 {
            out.insert(p, &c.div_crisp(k)?);
        }
        Ok(out)
    }

    fn mul(&self, o: &NnPoly) -> Result<NnPoly> {
        let mut out = NnPoly::default();
        for (&p, c) in &self.0 {
            for (&q, d) in &o.0 {
                out.insert(p + q, &c.mul(d)?);
            }
        }
        Ok(out)
    }

    pub fn from_expr(e: &Expr) -> Result<NnPoly> {
        let not_poly = || Error::NotSupported(format!("`{e}` is not a polynomial in x"));
        Ok(match e {
            Expr::Const(c) => NnPoly::monomial(NeutroNumber::crisp(*c), 0),
            Expr::ConstNN(n) => NnPoly::monomial(n.clone(), 0),
            Expr::ConstSet(s) => NnPoly::monomial(NeutroNumber::crisp(s.as_point().ok_or_else(not_poly)?), 0),
            Expr::Var => NnPoly::monomial(NeutroNumber::crisp(1.0), 1),
            Expr::Neg(a) => NnPoly::from_expr(a)?.scale(-1.0),
            Expr::Add(a, b) => NnPoly::from_expr(a)?.add(&NnPoly::from_expr(b)?),
            Expr::Sub(a, b) => NnPoly::from_expr(a)?.add(&NnPoly::from_expr(b)?.scale(-1.0)),
            Expr::Mul(a, b) => NnPoly::from_expr(a)?.mul(&NnPoly::from_expr(b)?)?,
            Expr::Div(a, b) => {
                let d = NnPoly::from_expr(b)?;
                let k = match (d.0.len(), d.0.get(&0)) {
                    (1, Some(k)) if k.is_crisp() => k.a(),
                    _ => return Err(not_poly()),
                };
                NnPoly::from_expr(a)?.div(k)?
            }
            Expr::Powi(a, n) if *n >= 0 => {
                let base = NnPoly::from_expr(a)?;
                let mut out = NnPoly::monomial(NeutroNumber::crisp(1.0), 0);
                for _ in 0..*n {
                    out = out.mul(&base)?;
                }
                out
            }
            _ => return Err(not_poly()),
        })
    }

    pub fn derivative(&self) -> NnPoly {
        let mut out = NnPoly::default();
        for (&p, c) in &self.0 {
            if p > 0 {
                out.insert(p - 1, &c.scale(p as f64));
            }
        }
        out
    }

    /// Termwise antiderivative, without the constant.
    pub fn antiderivative(&self) -> NnPoly {
        let mut out = NnPoly::default();
        for (&p, c) in &self.0 {
            let c = c.div_crisp(p as f64 + 1.0).expect("nonzero divisor");
            out.insert(p + 1, &c);
        }
        out
    }

    /// Coefficient polynomial of `I_k`, or of the determinate part for
    /// `k = 0`.
    pub fn part(&self, k: u32) -> Poly {
        let mut out = Poly::default();
        for (&p, c) in &self.0 {
            out.insert(p, if k == 0 { c.a() } else { c.coeff(k) });
        }
        out
    }

    fn indices(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.0.values().flat_map(|c| c.terms().keys().copied()).collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// Determinate part followed by one `(...)*I_k` group per index.
    pub fn to_expr(&self) -> Expr {
        let mut parts: Vec<(f64, Expr)> = Vec::new();
        let det = self.part(0);
        if det.degree().is_some() || self.indices().is_empty() {
            parts.push((1.0, det.to_expr()));
        }
        for k in self.indices() {
            let pk = self.part(k);
            let ik = Expr::nn(NeutroNumber::indeterminacy(k));
            if pk.terms().len() == 1 {
                let (&p, &c) = pk.terms().iter().next().expect("one term");
                let t = match (p, c.abs() == 1.0) {
                    (0, true) => ik,
                    (0, false) => Expr::c(c.abs()) * ik,
                    _ => times(c.abs(), x_power(p)) * ik,
                };
                parts.push((c.signum(), t));
            } else {
                parts.push((1.0, pk.to_expr() * ik));
            }
        }
        let mut acc: Option<Expr> = None;
        for (sign, t) in parts {
            acc = Some(match acc {
                None if sign < 0.0 => -t,
                None => t,
                Some(a) if sign < 0.0 => a - t,
                Some(a) => a + t,
            });
        }
        acc.unwrap_or(Expr::c(0.0))
    }
}

impl fmt::Display for NnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.to_expr())
    }
}
