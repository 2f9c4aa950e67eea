//! Inversion of function descriptors.

use super::eval::eval_f64;
use super::{eval, Domain, Expr, FuncSpec, NeutroValue, TableRow};
use crate::error::{Error, Result};
use crate::realset::{Interval, PairTag};

/// Inverse descriptor. Tables are grouped by value; formulas are solved
/// for `x` when the variable occurs once under invertible primitives.
pub fn invert(f: &FuncSpec) -> Result<FuncSpec> {
    match f {
        FuncSpec::Table(rows) => Ok(FuncSpec::Table(invert_rows(rows))),
        FuncSpec::Crisp(e) => {
            let alts = e.expand_or();
            if alts.len() == 1 {
                Ok(FuncSpec::Crisp(solve(e, &Expr::Var)?))
            } else {
                let inv = alts.iter().map(|a| solve(a, &Expr::Var).map(FuncSpec::Crisp)).collect::<Result<_>>()?;
                Ok(FuncSpec::Alternatives(inv))
            }
        }
        // for increasing envelopes the preimage of y is [upper^-1(y), lower^-1(y)]
        FuncSpec::Thick { lower, upper, lo_open, hi_open } => Ok(FuncSpec::Thick {
            lower: solve(lower, &Expr::Var)?,
            upper: solve(upper, &Expr::Var)?,
            lo_open: *hi_open,
            hi_open: *lo_open,
        }),
        FuncSpec::Alternatives(v) => {
            let mut out = Vec::new();
            for s in v {
                match invert(s)? {
                    FuncSpec::Alternatives(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            Ok(FuncSpec::Alternatives(out))
        }
        FuncSpec::Piecewise(pieces) => invert_piecewise(pieces),
        FuncSpec::Composed { outer, inner } => {
            Ok(FuncSpec::Composed { outer: Box::new(invert(inner)?), inner: Box::new(invert(outer)?) })
        }
        FuncSpec::Scaled { factor, inner } => Ok(FuncSpec::Composed {
            outer: Box::new(invert(inner)?),
            inner: Box::new(FuncSpec::Crisp(Expr::Var / Expr::c(*factor))),
        }),
        FuncSpec::NNExpr(_) | FuncSpec::Combined { .. } | FuncSpec::WithSetArgs { .. } => {
            Err(Error::NotSupported("inverse of this kind of function".into()))
        }
    }
}

/// `f^-1(b) = {a : f(a) = b}`, grouped by value set in order of first
/// appearance.
fn invert_rows(rows: &[TableRow]) -> Vec<TableRow> {
    let mut out: Vec<TableRow> = Vec::new();
    for r in rows {
        let key = r.val.crisp();
        match out.iter_mut().find(|o| o.arg == key) {
            Some(o) => {
                o.val = o.val.union(&r.arg.crisp());
                if o.tag != r.tag {
                    o.tag = PairTag::Sure;
                }
            }
            None => out.push(TableRow { arg: key, val: r.arg.crisp(), tag: r.tag }),
        }
    }
    out
}

/// Or-free formulas making up one piece, for image computation.
fn branch_exprs(spec: &FuncSpec) -> Result<Vec<Expr>> {
    match spec {
        FuncSpec::Crisp(e) => Ok(e.expand_or()),
        FuncSpec::Thick { lower, upper, .. } => {
            let mut v = lower.expand_or();
            v.extend(upper.expand_or());
            Ok(v)
        }
        FuncSpec::Alternatives(v) => {
            let mut out = Vec::new();
            for s in v {
                out.extend(branch_exprs(s)?);
            }
            Ok(out)
        }
        _ => Err(Error::NotSupported("inverse of a nested piece".into())),
    }
}

/// Image of a domain under a monotone formula, endpoint by endpoint.
fn monotone_image(dom: &Domain, e: &Expr) -> Result<Domain> {
    let mut ivs = Vec::new();
    let mut pts = Vec::new();
    for c in dom.as_set().components() {
        let (a, b) = (eval_f64(e, c.lo)?, eval_f64(e, c.hi)?);
        if a.is_nan() || b.is_nan() {
            return Err(Error::Domain(format!("{e} is undefined on {dom}")));
        }
        if c.lo == c.hi {
            pts.push(a);
        } else if a <= b {
            ivs.push(Interval::new(a, b, c.lo_open, c.hi_open));
        } else {
            ivs.push(Interval::new(b, a, c.hi_open, c.lo_open));
        }
    }
    Domain::new(&ivs, &pts)
}

fn invert_piecewise(pieces: &[(Domain, FuncSpec)]) -> Result<FuncSpec> {
    let mut rows = Vec::new();
    let mut general = Vec::new();
    for (dom, spec) in pieces {
        if dom.is_discrete() {
            // value taken on a finite argument set: read it as one set-argument pair
            let arg = dom.as_set().clone();
            let value = eval(spec, &NeutroValue::set(arg.clone()))?;
            for s in value.sets()? {
                rows.push(TableRow::new(s, arg.clone()));
            }
            continue;
        }
        let mut image: Option<Domain> = None;
        for e in branch_exprs(spec)? {
            let im = monotone_image(dom, &e)?;
            image = Some(match image {
                Some(d) => d.intersect(&im),
                None => im,
            });
        }
        let image = image.ok_or_else(|| Error::NotSupported("empty piece".into()))?;
        general.push((image, invert(spec)?));
    }
    if general.is_empty() {
        return Ok(FuncSpec::Table(rows));
    }
    let otherwise = FuncSpec::piecewise(general)?;
    if rows.is_empty() {
        Ok(otherwise)
    } else {
        Ok(FuncSpec::WithSetArgs { rows, otherwise: Box::new(otherwise) })
    }
}

fn is_const(e: &Expr) -> bool {
    !e.has_var()
}

/// Solves `e(x) = y` for `x`, returning the solution as an expression in
/// `y`. The variable has to occur exactly once.
pub fn solve(e: &Expr, y: &Expr) -> Result<Expr> {
    if e.var_count() != 1 {
        return Err(Error::NotSupported(format!("{e} does not contain x exactly once")));
    }
    solve_once(e, y.clone())
}

fn solve_once(e: &Expr, y: Expr) -> Result<Expr> {
    let unsupported = || Err(Error::NotSupported(format!("cannot invert {e}")));
    match e {
        Expr::Var => Ok(y),
        Expr::Neg(a) => solve_once(a, -y),
        Expr::Add(a, b) if is_const(b) => solve_once(a, y - (**b).clone()),
        Expr::Add(a, b) => solve_once(b, y - (**a).clone()),
        Expr::Sub(a, b) if is_const(b) => solve_once(a, y + (**b).clone()),
        Expr::Sub(a, b) => solve_once(b, (**a).clone() - y),
        Expr::Mul(a, b) if is_const(b) => solve_once(a, y / (**b).clone()),
        Expr::Mul(a, b) => solve_once(b, y / (**a).clone()),
        Expr::Div(a, b) if is_const(b) => solve_once(a, y * (**b).clone()),
        Expr::Div(a, b) => solve_once(b, (**a).clone() / y),
        Expr::Exp(a) => solve_once(a, y.ln()),
        Expr::Ln(a) => solve_once(a, Expr::Exp(Box::new(y))),
        Expr::Log(base, a) if is_const(base) => solve_once(a, (**base).clone().pow(y)),
        Expr::Pow(base, a) if is_const(base) => solve_once(a, Expr::log((**base).clone(), y)),
        Expr::Pow(a, p) => match p.as_ref() {
            Expr::Const(c) if *c != 0.0 => solve_once(a, y.pow(Expr::c(1.0 / c))),
            _ => unsupported(),
        },
        Expr::Powi(a, 1) => solve_once(a, y),
        Expr::Powi(a, -1) => solve_once(a, Expr::c(1.0) / y),
        Expr::Sqrt(a) => solve_once(a, y.powi(2)),
        _ => unsupported(),
    }
}
