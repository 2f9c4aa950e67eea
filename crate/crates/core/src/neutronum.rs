//! Indeterminacy numbers `a + b*I` with `I^2 = I` and `0*I = 0`, plus the
//! refined forms `a + b1*I1 + b2*I2 + ...` where each `Ik` is carried
//! linearly.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::realset::fmt_num;

/// `a + sum(b[k] * I_k)`. Index 1 is the plain `I`. Zero coefficients are
/// never stored, so a crisp number has an empty map.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeutroNumber {
    a: f64,
    b: BTreeMap<u32, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NnOp {
    Add,
    Sub,
    Mul,
    DivByCrisp(f64),
}

impl NeutroNumber {
    pub fn crisp(a: f64) -> Self {
        NeutroNumber { a, b: BTreeMap::new() }
    }

    /// `a + b*I`.
    pub fn new(a: f64, b: f64) -> Self {
        NeutroNumber::refined(a, &[(1, b)])
    }

    /// `a + sum(b_k * I_k)`; repeated indices accumulate.
    pub fn refined(a: f64, terms: &[(u32, f64)]) -> Self {
        let mut map = BTreeMap::new();
        for &(k, v) in terms {
            *map.entry(k).or_insert(0.0) += v;
        }
        map.retain(|_, v| *v != 0.0);
        NeutroNumber { a, b: map }
    }

    /// The bare symbol `I_k`.
    pub fn indeterminacy(k: u32) -> Self {
        NeutroNumber::refined(0.0, &[(k, 1.0)])
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Coefficient of `I_k`, zero when absent.
    pub fn coeff(&self, k: u32) -> f64 {
        self.b.get(&k).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> &BTreeMap<u32, f64> {
        &self.b
    }

    pub fn is_crisp(&self) -> bool {
        self.b.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b.is_empty()
    }

    pub fn scale(&self, c: f64) -> NeutroNumber {
        let terms: Vec<(u32, f64)> = self.b.iter().map(|(&k, &v)| (k, v * c)).collect();
        NeutroNumber::refined(self.a * c, &terms)
    }

    pub fn add(&self, other: &NeutroNumber) -> NeutroNumber {
        let terms: Vec<(u32, f64)> = self.b.iter().chain(other.b.iter()).map(|(&k, &v)| (k, v)).collect();
        NeutroNumber::refined(self.a + other.a, &terms)
    }

    pub fn sub(&self, other: &NeutroNumber) -> NeutroNumber {
        self.add(&other.scale(-1.0))
    }

    pub fn neg(&self) -> NeutroNumber {
        self.scale(-1.0)
    }

    /// `(a + bI)(c + dI) = ac + (ad + bc + bd)I`. Products of two distinct
    /// indices are left undefined.
    pub fn mul(&self, other: &NeutroNumber) -> Result<NeutroNumber> {
        let mut keys = self.b.keys().chain(other.b.keys()).copied().collect::<Vec<_>>();
        keys.sort_unstable();
        keys.dedup();
        match keys.as_slice() {
            [] => Ok(NeutroNumber::crisp(self.a * other.a)),
            [k] => {
                let (b, d) = (self.coeff(*k), other.coeff(*k));
                Ok(NeutroNumber::refined(self.a * other.a, &[(*k, self.a * d + b * other.a + b * d)]))
            }
            _ => {
                // a crisp factor only scales, whatever indices the other carries
                if self.is_crisp() {
                    Ok(other.scale(self.a))
                } else if other.is_crisp() {
                    Ok(self.scale(other.a))
                } else {
                    Err(Error::UndefinedSubindeterminacyProduct(keys[0], keys[1]))
                }
            }
        }
    }

    pub fn div_crisp(&self, c: f64) -> Result<NeutroNumber> {
        if c == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let terms: Vec<(u32, f64)> = self.b.iter().map(|(&k, &v)| (k, v / c)).collect();
        Ok(NeutroNumber::refined(self.a / c, &terms))
    }

    /// Multiplicative inverse of `c + dI`: `1/c - d/(c(c+d)) I`.
    pub fn inverse(&self) -> Result<NeutroNumber> {
        if self.is_crisp() {
            if self.a == 0.0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(NeutroNumber::crisp(1.0 / self.a));
        }
        if self.b.len() > 1 {
            return Err(Error::NotInvertible(format!("{self} mixes several indeterminacies")));
        }
        let (&k, &d) = self.b.iter().next().expect("non-crisp");
        let c = self.a;
        if c == 0.0 || c + d == 0.0 {
            return Err(Error::NotInvertible(format!("{self}")));
        }
        Ok(NeutroNumber::refined(1.0 / c, &[(k, -d / (c * (c + d)))]))
    }

    pub fn div(&self, other: &NeutroNumber) -> Result<NeutroNumber> {
        if other.is_crisp() {
            self.div_crisp(other.a)
        } else {
            self.mul(&other.inverse()?)
        }
    }

    pub fn powi(&self, n: i32) -> Result<NeutroNumber> {
        if n < 0 {
            return self.inverse()?.powi(-n);
        }
        let mut acc = NeutroNumber::crisp(1.0);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

pub fn nn_arith(op: NnOp, x: &NeutroNumber, y: &NeutroNumber) -> Result<NeutroNumber> {
    match op {
        NnOp::Add => Ok(x.add(y)),
        NnOp::Sub => Ok(x.sub(y)),
        NnOp::Mul => x.mul(y),
        NnOp::DivByCrisp(c) => x.div_crisp(c),
    }
}

/// Substitutes `at` into `num` and `den`, reduces with `I^2 = I`, then
/// divides by the denominator, which has to come out crisp and nonzero.
pub fn nn_eval_rational(num: &crate::funcmodel::Expr, den: &crate::funcmodel::Expr, at: &NeutroNumber) -> Result<NeutroNumber> {
    let n = crate::funcmodel::eval_nn(num, at)?;
    let d = crate::funcmodel::eval_nn(den, at)?;
    if !d.is_crisp() || d.a == 0.0 {
        return Err(Error::IndeterminateDenominator(format!("{d}")));
    }
    n.div_crisp(d.a)
}

impl From<f64> for NeutroNumber {
    fn from(a: f64) -> Self {
        NeutroNumber::crisp(a)
    }
}

pub(crate) fn index_name(k: u32) -> String {
    if k == 1 {
        "I".to_string()
    } else {
        format!("I{k}")
    }
}

impl fmt::Display for NeutroNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_num(self.a))?;
        for (&k, &v) in &self.b {
            let sign = if v < 0.0 { '-' } else { '+' };
            write!(f, " {sign} {}*{}", fmt_num(v.abs()), index_name(k))?;
        }
        Ok(())
    }
}
