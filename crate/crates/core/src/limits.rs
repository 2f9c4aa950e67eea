//! One-sided, two-sided and mereo limits, evaluated numerically.
//!
//! The engine samples `f` at `c ∓ h0 * ratio^k` and watches the sequence of
//! value sets in the partial metric `eta`.

use std::fmt;

use crate::error::{Error, Result};
use crate::funcmodel::{eval_at, Branch, Expr, FuncSpec};
use crate::realset::{eta_metric, mu_norm, Interval, RealSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConfig {
    pub h0: f64,
    pub ratio: f64,
    pub tol: f64,
    pub max_steps: usize,
    pub blowup_threshold: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { h0: 0.1, ratio: 0.5, tol: 1e-6, max_steps: 60, blowup_threshold: 1e9 }
    }
}

impl LimitConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.h0 > 0.0
            && self.ratio > 0.0
            && self.ratio < 1.0
            && self.tol > 0.0
            && self.max_steps > 0
            && self.blowup_threshold > 0.0
            && self.h0.is_finite()
            && self.blowup_threshold.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{self:?}")))
        }
    }

    /// `eta <= tol` with a little slack for rounding.
    pub(crate) fn within(&self, eta: f64) -> bool {
        eta <= self.tol * (1.0 + 1e-6) + 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LimitOutcome {
    Finite(RealSet),
    PlusInfinity,
    MinusInfinity,
    DoesNotExist(String),
}

impl LimitOutcome {
    pub fn as_finite(&self) -> Option<&RealSet> {
        match self {
            LimitOutcome::Finite(s) => Some(s),
            _ => None,
        }
    }

    fn agrees(&self, other: &LimitOutcome, cfg: &LimitConfig) -> bool {
        match (self, other) {
            (LimitOutcome::Finite(a), LimitOutcome::Finite(b)) => {
                eta_metric(a, b).map(|e| cfg.within(e)).unwrap_or(false)
            }
            (LimitOutcome::PlusInfinity, LimitOutcome::PlusInfinity) => true,
            (LimitOutcome::MinusInfinity, LimitOutcome::MinusInfinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for LimitOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitOutcome::Finite(s) => write!(f, "{s}"),
            LimitOutcome::PlusInfinity => write!(f, "+inf"),
            LimitOutcome::MinusInfinity => write!(f, "-inf"),
            LimitOutcome::DoesNotExist(why) => write!(f, "does not exist ({why})"),
        }
    }
}

/// Consecutive Cauchy steps needed for convergence.
const CAUCHY_RUN: usize = 3;
/// Consecutive growing steps needed for an infinite limit.
const BLOWUP_RUN: usize = 3;
/// Steps without a new smallest `eta` that count as oscillation.
const STALL_RUN: usize = 10;

#[derive(Default)]
struct Track {
    prev: Option<RealSet>,
    cauchy: usize,
    up: usize,
    down: usize,
    best: f64,
    stall: usize,
    done: Option<LimitOutcome>,
}

impl Track {
    fn new() -> Track {
        Track { best: f64::INFINITY, ..Default::default() }
    }

    fn push(&mut self, s: RealSet, cfg: &LimitConfig) -> Result<()> {
        if self.done.is_some() {
            return Ok(());
        }
        let Some(prev) = self.prev.take() else {
            self.prev = Some(s);
            return Ok(());
        };
        let (lo, hi) = (s.inf().ok_or(Error::EmptySet)?, s.sup().ok_or(Error::EmptySet)?);
        let (plo, phi) = (prev.inf().ok_or(Error::EmptySet)?, prev.sup().ok_or(Error::EmptySet)?);
        self.up = if lo > cfg.blowup_threshold && lo > plo { self.up + 1 } else { 0 };
        self.down = if hi < -cfg.blowup_threshold && hi < phi { self.down + 1 } else { 0 };
        if self.up >= BLOWUP_RUN {
            self.done = Some(LimitOutcome::PlusInfinity);
            return Ok(());
        }
        if self.down >= BLOWUP_RUN {
            self.done = Some(LimitOutcome::MinusInfinity);
            return Ok(());
        }
        let eta = eta_metric(&s, &prev)?;
        self.cauchy = if eta < cfg.tol { self.cauchy + 1 } else { 0 };
        if self.cauchy >= CAUCHY_RUN {
            self.done = Some(LimitOutcome::Finite(extrapolate(&prev, &s, cfg)));
            return Ok(());
        }
        let growing = mu_norm(&s)? > mu_norm(&prev)?;
        if eta < self.best {
            self.best = eta;
            self.stall = 0;
        } else if !growing {
            self.stall += 1;
            if self.stall >= STALL_RUN {
                self.done = Some(LimitOutcome::DoesNotExist("oscillation".into()));
                return Ok(());
            }
        }
        self.prev = Some(s);
        Ok(())
    }
}

fn round_to(v: f64, digits: i32) -> f64 {
    if !(0..=15).contains(&digits) {
        return v;
    }
    let scale = 10f64.powi(digits);
    let r = (v * scale).round() / scale;
    if r.is_finite() {
        r
    } else {
        v
    }
}

/// Richardson step on matching endpoints, then rounding to the digits of
/// `tol`.
fn extrapolate(prev: &RealSet, last: &RealSet, cfg: &LimitConfig) -> RealSet {
    let digits = (-cfg.tol.log10()).ceil() as i32;
    let r = cfg.ratio;
    let rich = |p: f64, l: f64| (l - r * p) / (1.0 - r);
    let (pc, lc) = (prev.components(), last.components());
    let same_shape = pc.len() == lc.len()
        && pc.iter().zip(&lc).all(|(a, b)| a.lo_open == b.lo_open && a.hi_open == b.hi_open && a.is_point() == b.is_point());
    let mut ivs = Vec::new();
    let mut pts = Vec::new();
    for (i, cur) in lc.iter().enumerate() {
        let (mut lo, mut hi) = (cur.lo, cur.hi);
        if same_shape {
            let (elo, ehi) = (rich(pc[i].lo, cur.lo), rich(pc[i].hi, cur.hi));
            if elo <= ehi && (elo - cur.lo).abs() < cfg.tol && (ehi - cur.hi).abs() < cfg.tol {
                lo = elo;
                hi = ehi;
            }
        }
        let (lo, hi) = (round_to(lo, digits), round_to(hi, digits));
        if lo == hi || cur.is_point() {
            pts.push(lo);
        } else {
            ivs.push(Interval::new(lo, hi, cur.lo_open, cur.hi_open));
        }
    }
    RealSet::normalize(&ivs, &pts).unwrap_or_else(|_| last.clone())
}

/// Limit of each branch of `f` separately, in branch order.
pub fn branch_limits(f: &FuncSpec, c: f64, side: Side, cfg: &LimitConfig) -> Result<Vec<LimitOutcome>> {
    cfg.validate()?;
    let mut tracks: Vec<Track> = Vec::new();
    let dne = |why: String| Ok(vec![LimitOutcome::DoesNotExist(why)]);
    for k in 0..cfg.max_steps {
        let h = cfg.h0 * cfg.ratio.powi(k as i32);
        let x = match side {
            Side::Left => c - h,
            Side::Right => c + h,
        };
        if x == c {
            break;
        }
        let v = match eval_at(f, x) {
            Ok(v) => v,
            Err(e) => return dne(format!("evaluation failed at x = {x}: {e}")),
        };
        if tracks.is_empty() {
            tracks = (0..v.branches().len()).map(|_| Track::new()).collect();
        } else if tracks.len() != v.branches().len() {
            return dne("number of branches changes near the point".into());
        }
        for (t, b) in tracks.iter_mut().zip(v.branches()) {
            let Branch::Set(s) = b else {
                return dne("indeterminate value near the point".into());
            };
            if s.is_empty() {
                return dne(format!("empty value at x = {x}"));
            }
            if let Err(e) = t.push(s.clone(), cfg) {
                return dne(e.to_string());
            }
        }
        if tracks.iter().all(|t| t.done.is_some()) {
            break;
        }
    }
    if tracks.is_empty() {
        return dne("no sample points".into());
    }
    Ok(tracks
        .into_iter()
        .map(|t| t.done.unwrap_or_else(|| LimitOutcome::DoesNotExist(format!("no convergence within {} steps", cfg.max_steps))))
        .collect())
}

/// One-sided limit; branches have to agree.
pub fn directional_limit(f: &FuncSpec, c: f64, side: Side, cfg: &LimitConfig) -> Result<LimitOutcome> {
    let all = branch_limits(f, c, side, cfg)?;
    let first = all[0].clone();
    if all.iter().all(|o| o.agrees(&first, cfg)) {
        return Ok(first);
    }
    let parts: Vec<String> = all.iter().map(|o| o.to_string()).collect();
    Ok(LimitOutcome::DoesNotExist(format!("branches disagree: {}", parts.join(" or "))))
}

/// Intersection of the left and right limits.
pub fn mereo_limit(f: &FuncSpec, c: f64, cfg: &LimitConfig) -> Result<LimitOutcome> {
    let left = directional_limit(f, c, Side::Left, cfg)?;
    let right = directional_limit(f, c, Side::Right, cfg)?;
    if left.agrees(&right, cfg) {
        return Ok(left);
    }
    Ok(match (&left, &right) {
        (LimitOutcome::Finite(l), LimitOutcome::Finite(r)) => {
            let common = l.intersect(r);
            if common.is_empty() {
                LimitOutcome::DoesNotExist(format!("left limit {l} and right limit {r} are disjoint"))
            } else {
                LimitOutcome::Finite(common)
            }
        }
        _ => LimitOutcome::DoesNotExist(format!("left limit {left}, right limit {right}")),
    })
}

/// Two-sided limit: left and right have to coincide.
pub fn full_limit(f: &FuncSpec, c: f64, cfg: &LimitConfig) -> Result<LimitOutcome> {
    let left = directional_limit(f, c, Side::Left, cfg)?;
    let right = directional_limit(f, c, Side::Right, cfg)?;
    if left.agrees(&right, cfg) {
        return Ok(left);
    }
    Ok(match (&left, &right) {
        (LimitOutcome::DoesNotExist(why), _) => LimitOutcome::DoesNotExist(format!("left: {why}")),
        (_, LimitOutcome::DoesNotExist(why)) => LimitOutcome::DoesNotExist(format!("right: {why}")),
        _ => LimitOutcome::DoesNotExist(format!("left limit {left} differs from right limit {right}")),
    })
}

fn interval_leaves(e: &Expr, out: &mut Vec<Interval>) {
    if let Expr::ConstSet(s) = e {
        if let Some(iv) = s.hull().filter(|iv| !iv.is_point()) {
            out.push(iv);
        }
    }
    for c in e.children() {
        interval_leaves(c, out);
    }
}

/// Limit of a formula whose interval coefficients all move with one
/// parameter. Every interval `[p,q]` in the template is read as
/// `p + theta*(q - p)` with a shared `theta` in `[0,1]`.
pub fn interval_param_limit(template: &Expr, c: f64, cfg: &LimitConfig) -> Result<LimitOutcome> {
    cfg.validate()?;
    let mut params = Vec::new();
    interval_leaves(template, &mut params);
    let any = !params.is_empty();
    let closed_lo = params.iter().all(|iv| !iv.lo_open);
    let closed_hi = params.iter().all(|iv| !iv.hi_open);
    let at = |theta: f64| -> Result<LimitOutcome> {
        let crisp = template.map_leaves(&|leaf| match leaf {
            Expr::ConstSet(s) => s.hull().map(|iv| Expr::Const(iv.lo + theta * (iv.hi - iv.lo))),
            _ => None,
        });
        full_limit(&FuncSpec::Crisp(crisp), c, cfg)
    };
    let l0 = at(0.0)?;
    if !any {
        return Ok(l0);
    }
    let l1 = at(1.0)?;
    let lm = at(0.5)?;
    let value = |o: &LimitOutcome| o.as_finite().and_then(RealSet::as_point);
    let (v0, v1, vm) = match (value(&l0), value(&l1), value(&lm)) {
        (Some(a), Some(b), Some(m)) => (a, b, m),
        _ => {
            if l0.agrees(&l1, cfg) && l0.agrees(&lm, cfg) {
                return Ok(l0);
            }
            return Ok(LimitOutcome::DoesNotExist(format!("parameter endpoints give {l0} and {l1}")));
        }
    };
    let (lo, hi) = (v0.min(v1), v0.max(v1));
    if vm < lo - cfg.tol || vm > hi + cfg.tol {
        return Err(Error::NonMonotoneParameter(format!("midpoint limit {vm} lies outside [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(LimitOutcome::Finite(RealSet::point(lo)));
    }
    let (lo_closed, hi_closed) = if v0 <= v1 { (closed_lo, closed_hi) } else { (closed_hi, closed_lo) };
    Ok(LimitOutcome::Finite(RealSet::from_interval(Interval::new(lo, hi, !lo_closed, !hi_closed))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textparse::{parse_expr, parse_funcdef};

    fn spec(text: &str) -> FuncSpec {
        parse_funcdef(text).unwrap().1
    }

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    fn graph() -> FuncSpec {
        spec("f(x) = { [-x^2+6x+3, x^3-114] on (-inf,5]; [x+1, 3x-6] on (5,inf) }")
    }

    fn finite(o: LimitOutcome) -> RealSet {
        match o {
            LimitOutcome::Finite(s) => s,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn graphical_limits() {
        let f = graph();
        let l = finite(directional_limit(&f, 5.0, Side::Left, &cfg()).unwrap());
        assert!(eta_metric(&l, &RealSet::closed(8.0, 11.0)).unwrap() < 1e-6, "{l}");
        let r = finite(directional_limit(&f, 5.0, Side::Right, &cfg()).unwrap());
        assert!(eta_metric(&r, &RealSet::closed(6.0, 9.0)).unwrap() < 1e-6, "{r}");
        let m = finite(mereo_limit(&f, 5.0, &cfg()).unwrap());
        assert_eq!(m, RealSet::closed(8.0, 9.0));
        assert!(matches!(full_limit(&f, 5.0, &cfg()).unwrap(), LimitOutcome::DoesNotExist(_)));
    }

    #[test]
    fn infinite_limits() {
        let f = spec("f(x) = [2,5]/(x-1)");
        assert_eq!(directional_limit(&f, 1.0, Side::Left, &cfg()).unwrap(), LimitOutcome::MinusInfinity);
        assert_eq!(directional_limit(&f, 1.0, Side::Right, &cfg()).unwrap(), LimitOutcome::PlusInfinity);
        let g = spec("g(x) = 4/((1,3)x^2)");
        assert_eq!(full_limit(&g, 0.0, &cfg()).unwrap(), LimitOutcome::PlusInfinity);
        assert!(matches!(full_limit(&f, 1.0, &cfg()).unwrap(), LimitOutcome::DoesNotExist(_)));
    }

    #[test]
    fn classical_and_thick() {
        let sq = spec("f(x) = x^2");
        assert_eq!(finite(mereo_limit(&sq, 1.0, &cfg()).unwrap()), RealSet::point(1.0));
        let t = spec("t(x) = [2x, 2x+1]");
        assert_eq!(finite(full_limit(&t, 3.0, &cfg()).unwrap()), RealSet::closed(6.0, 7.0));
    }

    #[test]
    fn disjoint_sides() {
        let f = spec("f(x) = { [0,1] on (-inf,0]; [2,3] on (0,inf) }");
        assert!(matches!(mereo_limit(&f, 0.0, &cfg()).unwrap(), LimitOutcome::DoesNotExist(_)));
    }

    #[test]
    fn oscillation_is_reported() {
        let f = spec("f(x) = sin(1/x)");
        let o = directional_limit(&f, 0.0, Side::Right, &cfg()).unwrap();
        assert!(matches!(o, LimitOutcome::DoesNotExist(_)), "{o:?}");
    }

    #[test]
    fn branches_disagree() {
        let h = spec("h(x) = (x^2+7)/(x - (2 or 3))");
        let per = branch_limits(&h, 2.0, Side::Left, &cfg()).unwrap();
        assert_eq!(per[0], LimitOutcome::MinusInfinity);
        assert_eq!(finite(per[1].clone()), RealSet::point(-11.0));
        assert!(matches!(directional_limit(&h, 2.0, Side::Left, &cfg()).unwrap(), LimitOutcome::DoesNotExist(_)));
    }

    #[test]
    fn parameter_limits() {
        let t = parse_expr("(x^2 + 3x - [1,2]x - [3,6])/(x+3)").unwrap();
        assert_eq!(finite(interval_param_limit(&t, -3.0, &cfg()).unwrap()), RealSet::closed(-5.0, -4.0));
        let r = parse_expr("(sqrt([4,5]x+1) - 1)/x").unwrap();
        assert_eq!(finite(interval_param_limit(&r, 0.0, &cfg()).unwrap()), RealSet::closed(2.0, 2.5));
        let open = parse_expr("(sqrt((4,5)x+1) - 1)/x").unwrap();
        assert_eq!(finite(interval_param_limit(&open, 0.0, &cfg()).unwrap()), RealSet::open(2.0, 2.5));
        let one = parse_expr("(x^2 + 3x - {1}x - {3})/(x+3)").unwrap();
        assert_eq!(finite(interval_param_limit(&one, -3.0, &cfg()).unwrap()), RealSet::point(-4.0));
    }

    #[test]
    fn non_monotone_parameter() {
        let t = parse_expr("(([0,2] - 1)^2 x)/x").unwrap();
        assert!(matches!(interval_param_limit(&t, 0.0, &cfg()), Err(Error::NonMonotoneParameter(_))));
    }

    #[test]
    fn bad_config() {
        let bad = LimitConfig { ratio: 1.5, ..cfg() };
        assert!(matches!(full_limit(&graph(), 5.0, &bad), Err(Error::InvalidConfig(_))));
    }
}
