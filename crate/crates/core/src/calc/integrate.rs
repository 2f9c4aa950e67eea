//! Riemann sums of set-valued functions.

use crate::error::{Error, Result};
use crate::funcmodel::{eval, Branch, FuncSpec, NeutroValue};
use crate::realset::{eta_metric, Interval, RealSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    LeftEndpoint,
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegralConfig {
    pub n: usize,
    pub rule: Rule,
}

impl Default for IntegralConfig {
    fn default() -> Self {
        IntegralConfig { n: 4096, rule: Rule::Midpoint }
    }
}

impl IntegralConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        Ok(())
    }

    /// Position of the sample inside subinterval `i`, as a fraction of `n`.
    fn sample(&self, i: usize) -> f64 {
        let off = match self.rule {
            Rule::LeftEndpoint => 0.0,
            Rule::Midpoint => 0.5,
        };
        (i as f64 + off) / self.n as f64
    }
}

/// Running interval sum `[lo, hi]` with openness.
struct Acc {
    lo: f64,
    hi: f64,
    lo_open: bool,
    hi_open: bool,
}

impl Acc {
    fn new() -> Acc {
        Acc { lo: 0.0, hi: 0.0, lo_open: false, hi_open: false }
    }

    /// Adds the hull of one value set.
    fn add(&mut self, v: &NeutroValue, at: &str) -> Result<()> {
        let mut hull: Option<Interval> = None;
        for b in v.branches() {
            let Branch::Set(s) = b else {
                return Err(Error::Integration(format!("indeterminate value at {at}")));
            };
            let h = s.hull().ok_or_else(|| Error::Integration(format!("empty value at {at}")))?;
            hull = Some(match hull {
                None => h,
                Some(g) => {
                    let (lo, lo_open) = if h.lo < g.lo || (h.lo == g.lo && !h.lo_open) { (h.lo, h.lo_open) } else { (g.lo, g.lo_open) };
                    let (hi, hi_open) = if h.hi > g.hi || (h.hi == g.hi && !h.hi_open) { (h.hi, h.hi_open) } else { (g.hi, g.hi_open) };
                    Interval { lo, hi, lo_open, hi_open }
                }
            });
        }
        let h = hull.ok_or_else(|| Error::Integration(format!("no value at {at}")))?;
        self.lo += h.lo;
        self.hi += h.hi;
        self.lo_open |= h.lo_open;
        self.hi_open |= h.hi_open;
        Ok(())
    }

    fn finish(&self, width: f64) -> Result<RealSet> {
        let (lo, hi) = (self.lo * width, self.hi * width);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Integration("sum is not finite".into()));
        }
        if lo == hi {
            return Ok(RealSet::point(lo));
        }
        RealSet::from_interval(Interval::new(lo, hi, self.lo_open, self.hi_open))
    }
}

fn eval_or_fail(f: &FuncSpec, arg: &NeutroValue, at: impl Fn() -> String) -> Result<NeutroValue> {
    eval(f, arg).map_err(|e| Error::Integration(format!("at {}: {e}", at())))
}

/// Riemann sum of the value sets of `f` over `[a,b]`, summed in ascending
/// order. Values that are not intervals contribute their hull.
pub fn integrate_thick(f: &FuncSpec, a: f64, b: f64, cfg: &IntegralConfig) -> Result<RealSet> {
    cfg.validate()?;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidBounds(format!("need finite a < b, got a = {a}, b = {b}")));
    }
    let mut acc = Acc::new();
    for i in 0..cfg.n {
        let x = a + (b - a) * cfg.sample(i);
        let v = eval_or_fail(f, &NeutroValue::point(x), || x.to_string())?;
        acc.add(&v, &x.to_string())?;
    }
    acc.finish((b - a) / cfg.n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralReport {
    pub value: RealSet,
    /// Same sum with half the subdivisions.
    pub coarse: RealSet,
    /// `eta(value, coarse)`.
    pub change: f64,
    /// Richardson estimate of the error left at `n`.
    pub error_estimate: f64,
}

/// [`integrate_thick`] together with a halved-`n` comparison.
pub fn integrate_with_check(f: &FuncSpec, a: f64, b: f64, cfg: &IntegralConfig) -> Result<IntegralReport> {
    let value = integrate_thick(f, a, b, cfg)?;
    let half = IntegralConfig { n: (cfg.n / 2).max(1), ..*cfg };
    let coarse = integrate_thick(f, a, b, &half)?;
    let change = eta_metric(&value, &coarse)?;
    let order = match cfg.rule {
        Rule::LeftEndpoint => 1,
        Rule::Midpoint => 2,
    };
    let error_estimate = change / (2f64.powi(order) - 1.0);
    Ok(IntegralReport { value, coarse, change, error_estimate })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interpretations {
    pub min: f64,
    pub mid: f64,
    pub max: f64,
}

/// Lower bound, average and upper bound of an integral set.
pub fn integral_interpretations(lower: f64, upper: f64) -> Interpretations {
    let (min, max) = if lower <= upper { (lower, upper) } else { (upper, lower) };
    Interpretations { min, mid: 0.5 * (min + max), max }
}

/// Integral between set-valued bounds. The subdivision points run from
/// the hull of `a_set` to the hull of `b_set`, each end moving linearly.
pub fn integrate_setbounds(f: &FuncSpec, a_set: &RealSet, b_set: &RealSet, cfg: &IntegralConfig) -> Result<RealSet> {
    cfg.validate()?;
    let (Some(ha), Some(hb)) = (a_set.hull(), b_set.hull()) else {
        return Err(Error::InvalidBounds("empty bound".into()));
    };
    if ha.lo > hb.lo || ha.hi > hb.hi {
        return Err(Error::InvalidBounds(format!("need inf A <= inf B and sup A <= sup B, got {a_set} and {b_set}")));
    }
    let width = eta_metric(a_set, b_set)?;
    if width == 0.0 {
        return Ok(RealSet::point(0.0));
    }
    let lerp = |p: f64, q: f64, t: f64| p + (q - p) * t;
    let mut acc = Acc::new();
    for i in 0..cfg.n {
        let t = cfg.sample(i);
        let (lo, hi) = (lerp(ha.lo, hb.lo, t), lerp(ha.hi, hb.hi, t));
        let c = if lo >= hi { RealSet::point(lo) } else { RealSet::closed(lo, hi) };
        let v = eval_or_fail(f, &NeutroValue::set(c.clone()), || c.to_string())?;
        acc.add(&v, &c.to_string())?;
    }
    acc.finish(width / cfg.n as f64)
}
