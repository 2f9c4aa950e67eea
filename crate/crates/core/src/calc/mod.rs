//! Derivatives, antiderivatives and definite integrals.

mod diff;
mod integrate;
mod poly;

use std::fmt;

pub use diff::{derive, simplify};
pub use integrate::{
    integral_interpretations, integrate_setbounds, integrate_thick, integrate_with_check, IntegralConfig, IntegralReport,
    Interpretations, Rule,
};
pub use poly::{NnPoly, Poly};

use crate::error::{Error, Result};
use crate::funcmodel::{eval_at, Branch, FuncSpec};
use crate::realset::{eta_metric, RealSet};

/// Envelope-wise derivative. Piecewise and alternative specs are
/// differentiated part by part.
pub fn derivative_thick(f: &FuncSpec) -> Result<FuncSpec> {
    let d = |e| -> Result<_> { Ok(simplify(&derive(e)?)) };
    Ok(match f {
        FuncSpec::Crisp(e) => FuncSpec::Crisp(d(e)?),
        FuncSpec::Thick { lower, upper, .. } => FuncSpec::thick(d(lower)?, d(upper)?),
        FuncSpec::Piecewise(pieces) => FuncSpec::Piecewise(
            pieces.iter().map(|(dom, s)| Ok((dom.clone(), derivative_thick(s)?))).collect::<Result<_>>()?,
        ),
        FuncSpec::Alternatives(v) => FuncSpec::Alternatives(v.iter().map(derivative_thick).collect::<Result<_>>()?),
        other => return Err(Error::NotSupported(format!("derivative of {other}"))),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum DerivClass {
    Differentiable(RealSet),
    MereoDerivative(RealSet),
    NotDifferentiable,
}

impl fmt::Display for DerivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivClass::Differentiable(s) => write!(f, "differentiable, derivative {s}"),
            DerivClass::MereoDerivative(s) => write!(f, "mereo-derivative {s}"),
            DerivClass::NotDifferentiable => write!(f, "not differentiable"),
        }
    }
}

/// The part of `f` that holds on the given side of `c`: for a piecewise
/// spec, the piece whose domain contains points arbitrarily close to `c`
/// on that side.
fn side_piece(f: &FuncSpec, c: f64, left: bool) -> Result<&FuncSpec> {
    let FuncSpec::Piecewise(pieces) = f else {
        return Ok(f);
    };
    let near = |k: i32| {
        let h = 1e-9 * (1.0 + c.abs()) * 2f64.powi(k);
        if left {
            c - h
        } else {
            c + h
        }
    };
    pieces
        .iter()
        .find(|(d, _)| (0..4).all(|k| d.contains(near(k))))
        .map(|(_, s)| s)
        .ok_or_else(|| Error::NotSupported(format!("no piece on the {} of {c}", if left { "left" } else { "right" })))
}

fn derivative_set(piece: &FuncSpec, c: f64) -> Result<RealSet> {
    let d = derivative_thick(piece)?;
    let v = eval_at(&d, c).map_err(|e| Error::NotSupported(format!("derivative at {c}: {e}")))?;
    let mut out = RealSet::empty();
    for b in v.branches() {
        match b {
            Branch::Set(s) => out = out.union(s),
            Branch::NN(n) => return Err(Error::NotSupported(format!("indeterminate derivative {n}"))),
        }
    }
    Ok(out)
}

/// Compares the derivative sets of the pieces meeting at `c`, each piece
/// differentiated by its own formula.
pub fn derivative_classify(f: &FuncSpec, c: f64) -> Result<DerivClass> {
    let left = derivative_set(side_piece(f, c, true)?, c)?;
    let right = derivative_set(side_piece(f, c, false)?, c)?;
    if eta_metric(&left, &right)? <= 1e-9 * (1.0 + left.sup().unwrap_or(0.0).abs()) {
        return Ok(DerivClass::Differentiable(left));
    }
    let common = left.intersect(&right);
    Ok(if common.is_empty() { DerivClass::NotDifferentiable } else { DerivClass::MereoDerivative(common) })
}

fn nn_poly(f: &FuncSpec) -> Result<NnPoly> {
    match f {
        FuncSpec::NNExpr(e) | FuncSpec::Crisp(e) => NnPoly::from_expr(e),
        other => Err(Error::NotSupported(format!("{other} is not a polynomial"))),
    }
}

/// Termwise derivative of a polynomial with indeterminate coefficients.
pub fn derivative_nn(f: &FuncSpec) -> Result<FuncSpec> {
    Ok(FuncSpec::NNExpr(nn_poly(f)?.derivative().to_expr()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Antiderivative {
    pub poly: NnPoly,
    /// `C`, or `a + b*I` for inputs with refined indeterminacies.
    pub constant: String,
}

impl Antiderivative {
    pub fn spec(&self) -> FuncSpec {
        FuncSpec::NNExpr(self.poly.to_expr())
    }
}

impl fmt::Display for Antiderivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            write!(f, "0 + {}", self.constant)
        } else {
            write!(f, "{} + {}", self.poly, self.constant)
        }
    }
}

pub fn antiderivative_nn(f: &FuncSpec) -> Result<Antiderivative> {
    let p = nn_poly(f)?;
    let constant = if p.max_index() > 1 { "a + b*I" } else { "C" };
    Ok(Antiderivative { poly: p.antiderivative(), constant: constant.into() })
}
