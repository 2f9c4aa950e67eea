//! Interval-extension evaluation of [`Expr`] at a set or indeterminacy
//! argument.

use std::f64::consts::{FRAC_PI_2, PI};

use super::expr::Expr;
use crate::error::{Error, Result};
use crate::neutronum::NeutroNumber;
use crate::realset::{corner_extremes, set_arith, Interval, RealSet, SetOp};

/// One alternative of a neutrosophic value.
#[derive(Debug, Clone, PartialEq)]
pub enum Branch {
    Set(RealSet),
    NN(NeutroNumber),
}

impl Branch {
    pub fn point(x: f64) -> Branch {
        Branch::Set(RealSet::point(x))
    }

    /// Crisp indeterminacy numbers collapse to point sets.
    pub fn from_nn(n: NeutroNumber) -> Branch {
        if n.is_crisp() {
            Branch::point(n.a())
        } else {
            Branch::NN(n)
        }
    }

    pub fn as_set(&self) -> Option<&RealSet> {
        match self {
            Branch::Set(s) => Some(s),
            Branch::NN(_) => None,
        }
    }

    fn to_nn(&self) -> Result<NeutroNumber> {
        match self {
            Branch::NN(n) => Ok(n.clone()),
            Branch::Set(s) => s
                .as_point()
                .map(NeutroNumber::crisp)
                .ok_or_else(|| Error::NotSupported(format!("set {s} combined with an indeterminacy number"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn set_op(self) -> SetOp {
        match self {
            BinOp::Add => SetOp::Add,
            BinOp::Sub => SetOp::Sub,
            BinOp::Mul => SetOp::Mul,
            BinOp::Div => SetOp::Div,
        }
    }
}

pub fn combine(op: BinOp, a: &Branch, b: &Branch) -> Result<Branch> {
    if let (Branch::Set(s), Branch::Set(t)) = (a, b) {
        return Ok(Branch::Set(set_arith(op.set_op(), s, t)?));
    }
    let (x, y) = (a.to_nn()?, b.to_nn()?);
    let r = match op {
        BinOp::Add => x.add(&y),
        BinOp::Sub => x.sub(&y),
        BinOp::Mul => x.mul(&y)?,
        BinOp::Div => x.div(&y)?,
    };
    Ok(Branch::from_nn(r))
}

pub fn scale(b: &Branch, alpha: f64) -> Result<Branch> {
    match b {
        Branch::Set(s) => Ok(Branch::Set(set_arith(SetOp::Scale(alpha), s, &RealSet::empty())?)),
        Branch::NN(n) => Ok(Branch::from_nn(n.scale(alpha))),
    }
}

/// All branches of `e` at `x`; every `or` multiplies the branch count.
pub fn eval_expr(e: &Expr, x: &Branch) -> Result<Vec<Branch>> {
    if !e.has_or() {
        return Ok(vec![eval_single(e, x)?]);
    }
    e.expand_or().iter().map(|alt| eval_single(alt, x)).collect()
}

/// Evaluates an expression built from indeterminacy numbers. Sets are
/// allowed only where they reduce to single points.
pub fn eval_nn(e: &Expr, at: &NeutroNumber) -> Result<NeutroNumber> {
    if e.has_or() {
        return Err(Error::NotSupported(format!("alternatives in {e}")));
    }
    eval_single(e, &Branch::from_nn(at.clone()))?.to_nn()
}

/// Plain real evaluation; infinite arguments propagate through monotone
/// primitives.
pub fn eval_f64(e: &Expr, x: f64) -> Result<f64> {
    let r = |a: &Expr| eval_f64(a, x);
    Ok(match e {
        Expr::Const(c) => *c,
        Expr::ConstSet(s) => s.as_point().ok_or_else(|| Error::NotSupported(format!("set constant {s}")))?,
        Expr::ConstNN(n) if n.is_crisp() => n.a(),
        Expr::ConstNN(n) => return Err(Error::NotSupported(format!("indeterminate constant {n}"))),
        Expr::Var => x,
        Expr::Neg(a) => -r(a)?,
        Expr::Add(a, b) => r(a)? + r(b)?,
        Expr::Sub(a, b) => r(a)? - r(b)?,
        Expr::Mul(a, b) => r(a)? * r(b)?,
        Expr::Div(a, b) => r(a)? / r(b)?,
        Expr::Powi(a, n) => r(a)?.powi(*n),
        Expr::Pow(a, b) => r(a)?.powf(r(b)?),
        Expr::Exp(a) => r(a)?.exp(),
        Expr::Ln(a) => r(a)?.ln(),
        Expr::Log(b, a) => r(a)?.ln() / r(b)?.ln(),
        Expr::Sqrt(a) => r(a)?.sqrt(),
        Expr::Sin(a) => r(a)?.sin(),
        Expr::Cos(a) => r(a)?.cos(),
        Expr::Abs(a) => r(a)?.abs(),
        Expr::Or(_) | Expr::Hull { .. } => return Err(Error::NotSupported(format!("{e} is not single-valued"))),
    })
}

fn eval_single(e: &Expr, x: &Branch) -> Result<Branch> {
    let bin = |op, a: &Expr, b: &Expr| combine(op, &eval_single(a, x)?, &eval_single(b, x)?);
    match e {
        Expr::Const(c) => Ok(Branch::point(*c)),
        Expr::ConstSet(s) => Ok(Branch::Set(s.clone())),
        Expr::ConstNN(n) => Ok(Branch::from_nn(n.clone())),
        Expr::Var => Ok(x.clone()),
        Expr::Neg(a) => scale(&eval_single(a, x)?, -1.0),
        Expr::Add(a, b) => bin(BinOp::Add, a, b),
        Expr::Sub(a, b) => bin(BinOp::Sub, a, b),
        Expr::Mul(a, b) => bin(BinOp::Mul, a, b),
        Expr::Div(a, b) => bin(BinOp::Div, a, b),
        Expr::Powi(a, n) => match eval_single(a, x)? {
            Branch::Set(s) => Ok(Branch::Set(set_powi(&s, *n)?)),
            Branch::NN(v) => Ok(Branch::from_nn(v.powi(*n)?)),
        },
        Expr::Pow(a, b) => {
            let base = eval_single(a, x)?;
            let expo = eval_single(b, x)?;
            match (&base, &expo) {
                (Branch::Set(s), Branch::Set(t)) => Ok(Branch::Set(set_pow(s, t)?)),
                (Branch::NN(v), Branch::Set(t)) => match t.as_point() {
                    Some(p) if p.fract() == 0.0 && p.abs() < i32::MAX as f64 => Ok(Branch::from_nn(v.powi(p as i32)?)),
                    _ => Err(Error::NotSupported(format!("{v} raised to {t}"))),
                },
                _ => Err(Error::NotSupported("indeterminate exponent".into())),
            }
        }
        Expr::Exp(a) => unary(eval_single(a, x)?, "exp", |s| Ok(map_monotone(s, f64::exp, true))),
        Expr::Ln(a) => unary(eval_single(a, x)?, "ln", set_ln),
        Expr::Log(b, a) => {
            let num = unary(eval_single(a, x)?, "ln", set_ln)?;
            let den = unary(eval_single(b, x)?, "ln", set_ln)?;
            combine(BinOp::Div, &num, &den)
        }
        Expr::Sqrt(a) => unary(eval_single(a, x)?, "sqrt", set_sqrt),
        Expr::Sin(a) => unary(eval_single(a, x)?, "sin", |s| set_trig(s, false)),
        Expr::Cos(a) => unary(eval_single(a, x)?, "cos", |s| set_trig(s, true)),
        Expr::Abs(a) => unary(eval_single(a, x)?, "abs", set_abs),
        Expr::Hull { lo, hi, lo_open, hi_open } => {
            let (l, h) = (eval_single(lo, x)?, eval_single(hi, x)?);
            match (l, h) {
                (Branch::Set(l), Branch::Set(h)) => Ok(Branch::Set(band(&l, &h, *lo_open, *hi_open)?)),
                _ => Err(Error::NotSupported("band with indeterminate envelope".into())),
            }
        }
        Expr::Or(_) => Err(Error::NotSupported("unexpanded alternatives".into())),
    }
}

fn unary(b: Branch, name: &str, f: impl Fn(&RealSet) -> Result<RealSet>) -> Result<Branch> {
    match b {
        Branch::Set(s) => Ok(Branch::Set(f(&s)?)),
        Branch::NN(n) => Err(Error::NotSupported(format!("{name} of indeterminate {n}"))),
    }
}

/// Smallest interval spanned by two envelope values. The flag `lo_open`
/// belongs to whichever envelope is lower at this point.
pub(crate) fn band(l: &RealSet, h: &RealSet, lo_open: bool, hi_open: bool) -> Result<RealSet> {
    let (li, hi) = (l.hull().ok_or(Error::EmptySet)?, h.hull().ok_or(Error::EmptySet)?);
    if let (Some(p), Some(q)) = (l.as_point(), h.as_point()) {
        return if p == q {
            Ok(RealSet::point(p))
        } else if p < q {
            RealSet::from_interval(Interval::new(p, q, lo_open, hi_open))
        } else {
            RealSet::from_interval(Interval::new(q, p, lo_open, hi_open))
        };
    }
    // an extreme is attained if any envelope attaining it is closed there
    let pick = |p: (f64, bool), q: (f64, bool), lower: bool| {
        if p.0 == q.0 {
            (p.0, p.1 && q.1)
        } else if (p.0 < q.0) == lower {
            p
        } else {
            q
        }
    };
    let (a, a_open) = pick((li.lo, li.lo_open || lo_open), (hi.lo, hi.lo_open || lo_open), true);
    let (b, b_open) = pick((li.hi, li.hi_open || hi_open), (hi.hi, hi.hi_open || hi_open), false);
    if a == b {
        return Ok(RealSet::point(a));
    }
    RealSet::from_interval(Interval::new(a, b, a_open, b_open))
}

/// Image under a monotone map; a collapsed image becomes a closed point.
pub(crate) fn map_monotone(s: &RealSet, f: impl Fn(f64) -> f64, increasing: bool) -> RealSet {
    let pieces: Vec<Interval> = s
        .components()
        .iter()
        .map(|c| {
            let (a, b) = (f(c.lo), f(c.hi));
            let iv = if increasing {
                Interval::new(a, b, c.lo_open, c.hi_open)
            } else {
                Interval::new(b, a, c.hi_open, c.lo_open)
            };
            if iv.lo == iv.hi {
                Interval::point(iv.lo)
            } else {
                iv
            }
        })
        .collect();
    RealSet::normalize(&pieces, &[]).unwrap_or_default()
}

fn finite(s: RealSet, what: &str) -> Result<RealSet> {
    let ok = s.components().iter().all(|c| c.lo.is_finite() && c.hi.is_finite());
    if ok {
        Ok(s)
    } else {
        Err(Error::Domain(format!("{what} overflows")))
    }
}

pub(crate) fn set_ln(s: &RealSet) -> Result<RealSet> {
    match s.inf() {
        Some(lo) if lo > 0.0 => Ok(map_monotone(s, f64::ln, true)),
        Some(_) => Err(Error::Domain(format!("ln of {s}, which reaches 0 or below"))),
        None => Err(Error::EmptySet),
    }
}

fn set_sqrt(s: &RealSet) -> Result<RealSet> {
    match s.inf() {
        Some(lo) if lo >= 0.0 => Ok(map_monotone(s, f64::sqrt, true)),
        Some(_) => Err(Error::Domain(format!("sqrt of {s}, which has negative elements"))),
        None => Err(Error::EmptySet),
    }
}

fn set_abs(s: &RealSet) -> Result<RealSet> {
    let pieces: Vec<Interval> = s
        .components()
        .iter()
        .map(|c| {
            if c.lo >= 0.0 {
                *c
            } else if c.hi <= 0.0 {
                Interval::new(-c.hi, -c.lo, c.hi_open, c.lo_open)
            } else {
                let top = corner_extremes(&[(-c.lo, c.lo_open), (c.hi, c.hi_open)]);
                Interval::new(0.0, top.hi, false, top.hi_open)
            }
        })
        .collect();
    RealSet::normalize(&pieces, &[])
}

pub(crate) fn set_powi(s: &RealSet, n: i32) -> Result<RealSet> {
    if n == 0 {
        return Ok(RealSet::point(1.0));
    }
    if n < 0 {
        let pos = set_powi(s, -n)?;
        return set_arith(SetOp::Div, &RealSet::point(1.0), &pos);
    }
    let pieces: Vec<Interval> = s
        .components()
        .iter()
        .map(|c| {
            let (a, b) = (c.lo.powi(n), c.hi.powi(n));
            if n % 2 == 1 || c.lo >= 0.0 {
                Interval::new(a, b, c.lo_open, c.hi_open)
            } else if c.hi <= 0.0 {
                Interval::new(b, a, c.hi_open, c.lo_open)
            } else {
                let top = corner_extremes(&[(a, c.lo_open), (b, c.hi_open)]);
                Interval::new(0.0, top.hi, false, top.hi_open)
            }
        })
        .collect();
    finite(RealSet::normalize(&pieces, &[])?, "power")
}

/// `B^E` for a positive base. Both maps `b -> b^e` and `e -> b^e` are
/// monotone, so extremes sit at corners.
pub(crate) fn set_pow(base: &RealSet, expo: &RealSet) -> Result<RealSet> {
    if let Some(p) = expo.as_point() {
        if p.fract() == 0.0 && p.abs() <= 1024.0 {
            return set_powi(base, p as i32);
        }
    }
    match base.inf() {
        Some(lo) if lo > 0.0 => {}
        Some(_) => return Err(Error::Domain(format!("power with base {base}, which is not positive"))),
        None => return Err(Error::EmptySet),
    }
    let mut out = Vec::new();
    for b in base.components() {
        for e in expo.components() {
            let mut cands = [(0.0, false); 4];
            let mut k = 0;
            for (bv, bo) in [(b.lo, b.lo_open), (b.hi, b.hi_open)] {
                for (ev, eo) in [(e.lo, e.lo_open), (e.hi, e.hi_open)] {
                    let attained = (bv == 1.0 && !bo) || (ev == 0.0 && !eo);
                    cands[k] = (bv.powf(ev), (bo || eo) && !attained);
                    k += 1;
                }
            }
            out.push(corner_extremes(&cands));
        }
    }
    finite(RealSet::normalize(&out, &[])?, "power")
}

fn set_trig(s: &RealSet, cosine: bool) -> Result<RealSet> {
    let f = |t: f64| if cosine { t.cos() } else { t.sin() };
    // critical points: k*pi for cos, pi/2 + k*pi for sin
    let shift = if cosine { 0.0 } else { FRAC_PI_2 };
    let mut out = Vec::new();
    for c in s.components() {
        if c.hi - c.lo >= 2.0 * PI {
            out.push(Interval::closed(-1.0, 1.0));
            continue;
        }
        let mut cands = vec![(f(c.lo), c.lo_open), (f(c.hi), c.hi_open)];
        let k0 = ((c.lo - shift) / PI).ceil() as i64;
        let k1 = ((c.hi - shift) / PI).floor() as i64;
        for k in k0..=k1 {
            let t = shift + k as f64 * PI;
            if c.contains(t) {
                let v = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                cands.push((v, false));
            }
        }
        out.push(corner_extremes(&cands));
    }
    RealSet::normalize(&out, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: f64) -> Branch {
        Branch::point(x)
    }

    fn set_of(b: Branch) -> RealSet {
        b.as_set().unwrap().clone()
    }

    #[test]
    fn even_power_across_zero() {
        let s = set_powi(&RealSet::normalize(&[Interval::new(-2.0, 3.0, false, true)], &[6.0]).unwrap(), 2).unwrap();
        let want = RealSet::normalize(&[Interval::new(0.0, 9.0, false, true)], &[36.0]).unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn interval_base_log() {
        let e = Expr::log(Expr::set(RealSet::closed(2.0, 3.0)), Expr::x());
        let v = set_of(eval_single(&e, &at(8.0)).unwrap());
        assert!(v.approx_eq(&RealSet::closed(8f64.ln() / 3f64.ln(), 3.0), 1e-12));
        // below 1 the envelope order swaps
        let w = set_of(eval_single(&e, &at(0.5)).unwrap());
        assert!(w.approx_eq(&RealSet::closed(-1.0, 0.5f64.ln() / 3f64.ln()), 1e-12));
    }

    #[test]
    fn open_exponent_band() {
        let e = Expr::c(2.0).pow(Expr::hull(Expr::x(), Expr::x() + Expr::c(1.0), true, true));
        assert_eq!(set_of(eval_single(&e, &at(1.0)).unwrap()), RealSet::open(2.0, 4.0));
    }

    #[test]
    fn trig_extremes() {
        let s = set_of(eval_single(&Expr::x().sin(), &Branch::Set(RealSet::closed(0.0, 3.0))).unwrap());
        assert!(s.approx_eq(&RealSet::closed(0.0, 1.0), 1e-15));
        let c = set_of(eval_single(&Expr::x().cos(), &Branch::Set(RealSet::open(-1.0, 4.0))).unwrap());
        assert_eq!(c.hull().unwrap().lo, -1.0);
        assert!(!c.hull().unwrap().lo_open);
    }

    #[test]
    fn ln_domain() {
        assert!(matches!(eval_single(&Expr::x().ln(), &at(0.0)), Err(Error::Domain(_))));
        assert!(matches!(eval_single(&Expr::x().sqrt(), &at(-1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn band_orders_crossing_envelopes() {
        let s = band(&RealSet::point(5.0), &RealSet::point(2.0), false, true).unwrap();
        assert_eq!(s, RealSet::from_interval(Interval::new(2.0, 5.0, false, true)).unwrap());
    }

    #[test]
    fn f64_eval_propagates_infinity() {
        let e = Expr::c(2.0) * Expr::x() + Expr::c(1.0);
        assert_eq!(eval_f64(&e, f64::NEG_INFINITY).unwrap(), f64::NEG_INFINITY);
    }
}
