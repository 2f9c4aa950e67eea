//! Continuity classes and the intermediate value searches.

use std::fmt;

use crate::error::{Error, Result};
use crate::funcmodel::{bisect, eval_at, locate, scan_points, BinOp, Branch, FuncSpec, Locus, BISECT_TOL};
use crate::limits::{directional_limit, LimitConfig, LimitOutcome, Side};
use crate::realset::{eta_metric, Interval, RealSet};

pub const DEFAULT_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum ContinuityClass {
    Continuous,
    MereoContinuous(RealSet),
    Discontinuous { reason: String },
}

impl ContinuityClass {
    /// Continuous or mereo-continuous.
    pub fn is_mereo_or_better(&self) -> bool {
        !matches!(self, ContinuityClass::Discontinuous { .. })
    }
}

impl fmt::Display for ContinuityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuityClass::Continuous => write!(f, "continuous"),
            ContinuityClass::MereoContinuous(w) => write!(f, "mereo-continuous, witness {w}"),
            ContinuityClass::Discontinuous { reason } => write!(f, "discontinuous: {reason}"),
        }
    }
}

/// Union of the set branches of `f(x)`.
fn value_set(f: &FuncSpec, x: f64) -> Result<RealSet> {
    let v = eval_at(f, x)?;
    let mut out = RealSet::empty();
    for b in v.branches() {
        match b {
            Branch::Set(s) => out = out.union(s),
            Branch::NN(n) => return Err(Error::NotSupported(format!("indeterminate value {n}"))),
        }
    }
    Ok(out)
}

pub fn classify_at(f: &FuncSpec, c: f64, cfg: &LimitConfig) -> Result<ContinuityClass> {
    let disc = |reason: String| Ok(ContinuityClass::Discontinuous { reason });
    let left = directional_limit(f, c, Side::Left, cfg)?;
    let right = directional_limit(f, c, Side::Right, cfg)?;
    let (l, r) = match (&left, &right) {
        (LimitOutcome::Finite(l), LimitOutcome::Finite(r)) => (l, r),
        _ => return disc(format!("left limit {left}, right limit {right}")),
    };
    let v = match value_set(f, c) {
        Ok(v) if !v.is_empty() => v,
        Ok(_) => return disc(format!("empty value at {c}")),
        Err(e) => return disc(format!("not defined at {c}: {e}")),
    };
    let close = |a: &RealSet, b: &RealSet| eta_metric(a, b).map(|e| cfg.within(e)).unwrap_or(false);
    let sides_agree = close(l, r);
    if sides_agree && close(l, &v) && close(r, &v) {
        return Ok(ContinuityClass::Continuous);
    }
    let lr = if sides_agree { l.clone() } else { l.intersect(r) };
    let witness = lr.intersect(&v);
    if witness.is_empty() {
        disc(format!("left limit {l}, right limit {r} and value {v} have no common point"))
    } else {
        Ok(ContinuityClass::MereoContinuous(witness))
    }
}

/// `m` and `M`: the extreme bounds of the values at the ends of `[a,b]`.
fn end_range(f: &FuncSpec, a: f64, b: f64) -> Result<(f64, f64)> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::Precondition(format!("need a < b, got a = {a}, b = {b}")));
    }
    let (fa, fb) = (value_set(f, a)?, value_set(f, b)?);
    let u = fa.union(&fb);
    let (m, big_m) = (u.inf().ok_or(Error::EmptySet)?, u.sup().ok_or(Error::EmptySet)?);
    if m == big_m {
        return Err(Error::Precondition(format!("values at {a} and {b} collapse to {m}")));
    }
    Ok((m, big_m))
}

/// Leftmost `c` in `[a,b]` with `k` in `f(c)`.
///
/// A crisp crossing that the grid only brackets is returned as the last
/// point before it, within the bisection tolerance.
pub fn ivt_find(f: &FuncSpec, a: f64, b: f64, k: f64, grid: usize) -> Result<f64> {
    let (m, big_m) = end_range(f, a, b)?;
    if !(m <= k && k <= big_m) {
        return Err(Error::OutOfRange(format!("{k} is outside [{m}, {big_m}]")));
    }
    let xs = scan_points(f, a, b, grid, |_| true);
    let contains = |x: f64| locate(f, x, k) == Locus::Contains;
    let mut prev = Locus::Other;
    for (i, &x) in xs.iter().enumerate() {
        let here = locate(f, x, k);
        if here == Locus::Contains {
            let c = if i > 0 { bisect(x, xs[i - 1], BISECT_TOL, contains) } else { x };
            return verify_find(f, c, k, None);
        }
        let flip = matches!((prev, here), (Locus::Below, Locus::Above) | (Locus::Above, Locus::Below));
        if flip {
            let start = prev;
            let (c, partner) = bracket(xs[i - 1], x, |t| locate(f, t, k) == start);
            return verify_find(f, c, k, Some(partner));
        }
        prev = here;
    }
    Err(Error::NotFound(format!("no point of [{a}, {b}] reaches {k} at grid {grid}")))
}

/// Shrinks `[good, bad]` around the change of `pred`, keeping both ends.
fn bracket(mut good: f64, mut bad: f64, pred: impl Fn(f64) -> bool) -> (f64, f64) {
    while (good - bad).abs() > BISECT_TOL {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    (good, bad)
}

fn verify_find(f: &FuncSpec, c: f64, k: f64, partner: Option<f64>) -> Result<f64> {
    if value_set(f, c)?.contains(k) {
        return Ok(c);
    }
    if let Some(p) = partner {
        // crossing bracketed within tolerance: k lies between the two values
        let (u, w) = (value_set(f, c)?, value_set(f, p)?);
        let hull = u.union(&w).hull().map(RealSet::from_interval);
        if (p - c).abs() <= 2.0 * BISECT_TOL && matches!(hull, Some(Ok(h)) if h.closure_contains(k)) {
            return Ok(c);
        }
    }
    Err(Error::NotFound(format!("candidate {c} failed verification for {k}")))
}

/// Greedy cover of `[k1,k2]` by values at grid points; returned in
/// ascending order. Each step takes the point whose value set reaches
/// furthest past the first uncovered level, the leftmost on ties, with
/// reach capped at `k2`.
pub fn ivt_cover(f: &FuncSpec, a: f64, b: f64, k1: f64, k2: f64, grid: usize) -> Result<Vec<f64>> {
    if k1 > k2 {
        return Err(Error::Precondition(format!("need k1 <= k2, got [{k1}, {k2}]")));
    }
    let (m, big_m) = end_range(f, a, b)?;
    if k1 < m || k2 > big_m {
        return Err(Error::OutOfRange(format!("[{k1}, {k2}] is not inside [{m}, {big_m}]")));
    }
    let cands: Vec<(f64, Vec<Interval>)> = scan_points(f, a, b, grid, |_| true)
        .into_iter()
        .filter_map(|x| value_set(f, x).ok().map(|s| (x, s.components())))
        .collect();
    // the next level to cover, and whether that level itself is still needed
    let (mut level, mut need_level) = (k1, true);
    let mut chosen: Vec<f64> = Vec::new();
    for _ in 0..=cands.len() {
        let mut best: Option<(f64, bool, f64, f64)> = None;
        for (x, comps) in &cands {
            for iv in comps {
                let hits = if need_level { iv.contains(level) } else { iv.lo <= level && iv.hi > level };
                if !hits {
                    continue;
                }
                let reach = iv.hi.min(k2);
                let closed = !iv.hi_open || iv.hi > k2;
                let better = match best {
                    None => true,
                    Some((r, c, _, _)) => reach > r || (reach == r && closed && !c),
                };
                if better {
                    best = Some((reach, closed, *x, iv.hi));
                }
            }
        }
        let Some((reach, closed, x, raw_hi)) = best else {
            return Err(Error::NotFound(format!("cannot cover level {level} of [{k1}, {k2}] at grid {grid}")));
        };
        if !chosen.contains(&x) {
            chosen.push(x);
        }
        if raw_hi > k2 || (reach == k2 && closed) {
            chosen.sort_by(f64::total_cmp);
            return verify_cover(f, &chosen, k1, k2);
        }
        if reach == level && !(need_level && closed) {
            return Err(Error::NotFound(format!("cover stalls at level {level}")));
        }
        level = reach;
        need_level = !closed;
    }
    Err(Error::NotFound(format!("cover of [{k1}, {k2}] did not finish")))
}

fn verify_cover(f: &FuncSpec, cs: &[f64], k1: f64, k2: f64) -> Result<Vec<f64>> {
    let mut u = RealSet::empty();
    for &c in cs {
        u = u.union(&value_set(f, c)?);
    }
    let target = if k1 == k2 { RealSet::point(k1) } else { RealSet::closed(k1, k2) };
    if target.is_subset(&u) {
        Ok(cs.to_vec())
    } else {
        Err(Error::NotFound(format!("points {cs:?} give {u}, which misses part of {target}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosureOp {
    Add,
    Sub,
    Mul,
    Div,
    Scale(f64),
}

/// Checks that `f op g` is mereo-continuous at `c` when `f` and `g` are.
/// `Scale` uses `f` only.
pub fn check_closure(f: &FuncSpec, g: &FuncSpec, c: f64, op: ClosureOp, cfg: &LimitConfig) -> Result<bool> {
    let cf = classify_at(f, c, cfg)?;
    if !cf.is_mereo_or_better() {
        return Err(Error::Precondition(format!("first function at {c}: {cf}")));
    }
    let combined = match op {
        ClosureOp::Scale(alpha) => {
            if alpha == 0.0 || !alpha.is_finite() {
                return Err(Error::Precondition(format!("scale factor {alpha}")));
            }
            FuncSpec::scaled(alpha, f.clone())
        }
        _ => {
            let cg = classify_at(g, c, cfg)?;
            if !cg.is_mereo_or_better() {
                return Err(Error::Precondition(format!("second function at {c}: {cg}")));
            }
            let bin = match op {
                ClosureOp::Add => BinOp::Add,
                ClosureOp::Sub => BinOp::Sub,
                ClosureOp::Mul => BinOp::Mul,
                _ => {
                    if value_set(g, c)?.closure_contains(0.0) {
                        return Err(Error::Precondition(format!("divisor value at {c} contains 0")));
                    }
                    BinOp::Div
                }
            };
            FuncSpec::combined(bin, f.clone(), g.clone())
        }
    };
    Ok(classify_at(&combined, c, cfg)?.is_mereo_or_better())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textparse::parse_funcdef;

    fn spec(text: &str) -> FuncSpec {
        parse_funcdef(text).unwrap().1
    }

    fn graph() -> FuncSpec {
        spec("f(x) = { [-x^2+6x+3, x^3-114] on (-inf,5]; [x+1, 3x-6] on (5,inf) }")
    }

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    #[test]
    fn classes() {
        assert_eq!(classify_at(&graph(), 5.0, &cfg()).unwrap(), ContinuityClass::MereoContinuous(RealSet::closed(8.0, 9.0)));
        assert_eq!(classify_at(&spec("t(x) = [2x, 2x+1]"), 3.0, &cfg()).unwrap(), ContinuityClass::Continuous);
        let step = spec("s(x) = { 0 on (-inf,0]; 1 on (0,inf) }");
        assert!(matches!(classify_at(&step, 0.0, &cfg()).unwrap(), ContinuityClass::Discontinuous { .. }));
        let pole = spec("p(x) = 1/x");
        assert!(matches!(classify_at(&pole, 0.0, &cfg()).unwrap(), ContinuityClass::Discontinuous { .. }));
    }

    #[test]
    fn find_examples() {
        let t = spec("t(x) = [x, x+2]");
        assert_eq!(ivt_find(&t, 0.0, 4.0, 3.0, DEFAULT_GRID).unwrap(), 1.0);
        let id = spec("i(x) = x");
        assert_eq!(ivt_find(&id, 0.0, 2.0, 1.0, DEFAULT_GRID).unwrap(), 1.0);
        assert!(matches!(ivt_find(&t, 0.0, 4.0, 9.0, DEFAULT_GRID), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn find_bracketed_crossing() {
        let f = spec("f(x) = x^3 - 2");
        let c = ivt_find(&f, 0.0, 2.0, 0.0, 100).unwrap();
        assert!((c - 2f64.cbrt()).abs() < 1e-8, "{c}");
    }

    #[test]
    fn table_graph() {
        let g = spec("g(x) = table { {2}->[4,5]; {4}->[4.5,6.5]; {6}->[5.5,7]; {8}->[6,7] }");
        let c = ivt_find(&g, 2.0, 8.0, 6.0, DEFAULT_GRID).unwrap();
        assert!(value_set(&g, c).unwrap().contains(6.0));
        assert_eq!(c, 4.0);
    }

    #[test]
    fn cover_examples() {
        let h = spec("h(x) = table { {3}->[6,8]; {8}->[6.5,11]; {10}->[9.5,12]; {12}->[10,12.5] }");
        assert_eq!(ivt_cover(&h, 3.0, 12.0, 6.5, 12.0, DEFAULT_GRID).unwrap(), vec![8.0, 10.0]);
        let t = spec("t(x) = [x, x+2]");
        assert_eq!(ivt_cover(&t, 0.0, 4.0, 1.0, 2.0, DEFAULT_GRID).unwrap(), vec![0.0]);
        let id = spec("i(x) = x");
        assert_eq!(ivt_cover(&id, 0.0, 2.0, 0.5, 0.5, DEFAULT_GRID).unwrap(), vec![0.5]);
        let gap = spec("g(x) = table { {0}->[0,1]; {1}->[2,3] }");
        assert!(matches!(ivt_cover(&gap, 0.0, 1.0, 0.0, 3.0, 4), Err(Error::NotFound(_))));
    }

    #[test]
    fn cover_crosses_open_ends() {
        let h = spec("h(x) = table { {0}->[0,1); {1}->{1}; {2}->(1,2] }");
        assert_eq!(ivt_cover(&h, 0.0, 2.0, 0.0, 2.0, 4).unwrap(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn closure_examples() {
        let f = graph();
        for op in [ClosureOp::Add, ClosureOp::Sub, ClosureOp::Mul, ClosureOp::Scale(-2.0)] {
            assert!(check_closure(&f, &f, 5.0, op, &cfg()).unwrap(), "{op:?}");
        }
        assert!(check_closure(&f, &f, 5.0, ClosureOp::Div, &cfg()).unwrap());
        let sq = spec("f(x) = x^2");
        let id = spec("g(x) = x");
        assert!(check_closure(&sq, &id, 2.0, ClosureOp::Mul, &cfg()).unwrap());
        assert!(matches!(check_closure(&sq, &id, 0.0, ClosureOp::Div, &cfg()), Err(Error::Precondition(_))));
        let step = spec("s(x) = { 0 on (-inf,0]; 1 on (0,inf) }");
        assert!(matches!(check_closure(&step, &id, 0.0, ClosureOp::Add, &cfg()), Err(Error::Precondition(_))));
    }
}
