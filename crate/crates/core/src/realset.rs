//! Canonical subsets of the real line.
//!
//! A [`RealSet`] is a finite union of intervals (each endpoint open or
//! closed) plus isolated points. Every constructor canonicalizes, so two
//! sets describing the same subset compare equal with `==`. Endpoints may
//! additionally carry a (t, i, f) membership annotation; annotations only
//! take part in [`RealSet::membership`] and [`neutro_subset`], never in
//! arithmetic.
//!
//! The module also houses the norm `mu(S) = max(|inf S|, |sup S|)` and the
//! partial metric `eta(A, B) = max(|inf A - inf B|, |sup A - sup B|)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// One connected component. `lo <= hi` once normalized; a degenerate
/// interval is a closed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    /// Builds an interval as written. Reversed endpoints are accepted and
    /// sorted later, the way `[5,3]` means `[3,5]`.
    pub const fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Self {
        Interval { lo, hi, lo_open, hi_open }
    }

    pub const fn closed(lo: f64, hi: f64) -> Self {
        Interval::new(lo, hi, false, false)
    }

    pub const fn open(lo: f64, hi: f64) -> Self {
        Interval::new(lo, hi, true, true)
    }

    pub const fn point(p: f64) -> Self {
        Interval::new(p, p, false, false)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    /// True when `other` lies entirely inside `self`.
    pub fn covers(&self, other: &Interval) -> bool {
        let lo_ok = self.lo < other.lo || (self.lo == other.lo && (!self.lo_open || other.lo_open));
        let hi_ok = self.hi > other.hi || (self.hi == other.hi && (!self.hi_open || other.hi_open));
        lo_ok && hi_ok
    }

    /// Orients the interval and drops it when empty.
    fn oriented(self) -> Option<Interval> {
        let iv = if self.lo > self.hi {
            Interval::new(self.hi, self.lo, self.hi_open, self.lo_open)
        } else {
            self
        };
        if iv.lo == iv.hi {
            if iv.lo_open || iv.hi_open {
                None
            } else {
                Some(iv)
            }
        } else {
            Some(iv)
        }
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = match self.lo.partial_cmp(&other.lo) {
            Some(Ordering::Greater) => (self.lo, self.lo_open),
            Some(Ordering::Less) => (other.lo, other.lo_open),
            _ => (self.lo, self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Less) => (self.hi, self.hi_open),
            Some(Ordering::Greater) => (other.hi, other.hi_open),
            _ => (self.hi, self.hi_open || other.hi_open),
        };
        if lo < hi || (lo == hi && !lo_open && !hi_open) {
            Some(Interval::new(lo, hi, lo_open, hi_open))
        } else {
            None
        }
    }
}

/// Degrees of truth, indeterminacy and falsity of membership. The three
/// come from independent sources, so their sum may exceed 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipTriple {
    pub t: f64,
    pub i: f64,
    pub f: f64,
}

impl MembershipTriple {
    pub const MEMBER: MembershipTriple = MembershipTriple { t: 1.0, i: 0.0, f: 0.0 };
    pub const NON_MEMBER: MembershipTriple = MembershipTriple { t: 0.0, i: 0.0, f: 1.0 };

    pub fn new(t: f64, i: f64, f: f64) -> Result<Self> {
        for (name, v) in [("t", t), ("i", i), ("f", f)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidMembership(format!("{name} = {v} is outside [0,1]")));
            }
        }
        Ok(MembershipTriple { t, i, f })
    }

    /// Componentwise domination used by neutrosophic inclusion:
    /// `t <= t'`, `i >= i'`, `f >= f'`.
    pub fn dominated_by(&self, other: &MembershipTriple) -> bool {
        self.t <= other.t && self.i >= other.i && self.f >= other.f
    }
}

impl fmt::Display for MembershipTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", fmt_num(self.t), fmt_num(self.i), fmt_num(self.f))
    }
}

/// Certainty attached to a pair of a neutrosophic relation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PairTag {
    #[default]
    Sure,
    Partial(MembershipTriple),
    Potential,
}

/// Canonical finite union of intervals and isolated points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealSet {
    intervals: Vec<Interval>,
    points: Vec<f64>,
    annotations: Vec<(f64, MembershipTriple)>,
}

/// Elementwise set operations. `Scale` ignores its second operand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetOp {
    Scale(f64),
    Add,
    Sub,
    Mul,
    Div,
}

impl RealSet {
    pub fn empty() -> Self {
        RealSet::default()
    }

    pub fn point(p: f64) -> Self {
        RealSet::normalize(&[], &[p]).expect("finite point")
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        RealSet::normalize(&[Interval::closed(lo, hi)], &[]).expect("finite interval")
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        RealSet::normalize(&[Interval::open(lo, hi)], &[]).expect("finite interval")
    }

    pub fn from_interval(iv: Interval) -> Result<Self> {
        RealSet::normalize(&[iv], &[])
    }

    pub fn from_points(points: &[f64]) -> Result<Self> {
        RealSet::normalize(&[], points)
    }

    /// Canonicalizes raw intervals and points: sorts, merges overlapping
    /// and adjacent pieces, absorbs covered points. Idempotent.
    pub fn normalize(intervals: &[Interval], points: &[f64]) -> Result<Self> {
        let (intervals, points) = canonicalize(intervals, points, false)?;
        Ok(RealSet { intervals, points, annotations: Vec::new() })
    }

    /// Like [`RealSet::normalize`] but admits infinite endpoints. Only piece
    /// domains use this; values never do.
    pub(crate) fn normalize_unbounded(intervals: &[Interval], points: &[f64]) -> Result<Self> {
        let (intervals, points) = canonicalize(intervals, points, true)?;
        Ok(RealSet { intervals, points, annotations: Vec::new() })
    }

    /// Attaches a membership annotation to `value`, which must be an
    /// endpoint of an interval or an isolated point of the set.
    pub fn with_annotation(mut self, value: f64, triple: MembershipTriple) -> Result<Self> {
        if !self.is_boundary(value) {
            return Err(Error::InvalidMembership(format!(
                "{} is not an endpoint of {}",
                fmt_num(value),
                self
            )));
        }
        self.annotations.retain(|(v, _)| *v != value);
        self.annotations.push((value, triple));
        self.annotations.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(self)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn annotations(&self) -> &[(f64, MembershipTriple)] {
        &self.annotations
    }

    /// Same set with annotations stripped.
    pub fn crisp(&self) -> RealSet {
        RealSet { intervals: self.intervals.clone(), points: self.points.clone(), annotations: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    /// A single isolated point, if that is all the set is.
    pub fn as_point(&self) -> Option<f64> {
        if self.intervals.is_empty() && self.points.len() == 1 {
            Some(self.points[0])
        } else {
            None
        }
    }

    pub fn is_single_interval(&self) -> bool {
        self.intervals.len() == 1 && self.points.is_empty()
    }

    pub fn inf(&self) -> Option<f64> {
        let a = self.intervals.first().map(|iv| iv.lo);
        let b = self.points.first().copied();
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn sup(&self) -> Option<f64> {
        let a = self.intervals.last().map(|iv| iv.hi);
        let b = self.points.last().copied();
        match (a, b) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    /// Smallest interval containing the set, with the openness of the
    /// extreme endpoints.
    pub fn hull(&self) -> Option<Interval> {
        let comps = self.components();
        let first = comps.first()?;
        let last = comps.last()?;
        Some(Interval::new(first.lo, last.hi, first.lo_open, last.hi_open))
    }

    /// All pieces in increasing order, isolated points as degenerate
    /// closed intervals.
    pub fn components(&self) -> Vec<Interval> {
        let mut out: Vec<Interval> = self
            .intervals
            .iter()
            .copied()
            .chain(self.points.iter().map(|&p| Interval::point(p)))
            .collect();
        out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        out
    }

    pub fn contains(&self, x: f64) -> bool {
        self.points.contains(&x) || self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// True when `x` lies in the topological closure.
    pub fn closure_contains(&self, x: f64) -> bool {
        self.points.contains(&x) || self.intervals.iter().any(|iv| iv.lo <= x && x <= iv.hi)
    }

    /// Distance from `x` to the closure of the set; infinite for the empty set.
    pub fn distance_to(&self, x: f64) -> f64 {
        self.components()
            .iter()
            .map(|c| {
                if x < c.lo {
                    c.lo - x
                } else if x > c.hi {
                    x - c.hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn is_boundary(&self, value: f64) -> bool {
        self.points.contains(&value) || self.intervals.iter().any(|iv| iv.lo == value || iv.hi == value)
    }

    /// Crisp inclusion, ignoring annotations.
    pub fn is_subset(&self, other: &RealSet) -> bool {
        let theirs = other.components();
        self.components().iter().all(|c| theirs.iter().any(|t| t.covers(c)))
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        let mut ivs = self.intervals.clone();
        ivs.extend_from_slice(&other.intervals);
        let mut pts = self.points.clone();
        pts.extend_from_slice(&other.points);
        let (intervals, points) = canonicalize(&ivs, &pts, true).expect("inputs are canonical");
        let mut out = RealSet { intervals, points, annotations: Vec::new() };
        for &(v, t) in self.annotations.iter().chain(other.annotations.iter()) {
            if out.is_boundary(v) && !out.annotations.iter().any(|(w, _)| *w == v) {
                out.annotations.push((v, t));
            }
        }
        out.annotations.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Set intersection. Annotated values keep the fuzzy-intersection
    /// triple (min t, max i, max f) when they remain endpoints.
    pub fn intersect(&self, other: &RealSet) -> RealSet {
        let mut pieces = Vec::new();
        for a in self.components() {
            for b in other.components() {
                if let Some(c) = a.intersect(&b) {
                    pieces.push(c);
                }
            }
        }
        let (intervals, points) = canonicalize(&pieces, &[], true).expect("inputs are canonical");
        let mut out = RealSet { intervals, points, annotations: Vec::new() };
        let mut values: Vec<f64> = self.annotations.iter().chain(other.annotations.iter()).map(|a| a.0).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for v in values {
            let (x, y) = (self.membership(v), other.membership(v));
            let m = MembershipTriple { t: x.t.min(y.t), i: x.i.max(y.i), f: x.f.max(y.f) };
            if m != MembershipTriple::MEMBER && m.t > 0.0 && out.is_boundary(v) {
                out.annotations.push((v, m));
            }
        }
        out
    }

    /// (t, i, f) degree of membership of `x`.
    pub fn membership(&self, x: f64) -> MembershipTriple {
        if let Some((_, t)) = self.annotations.iter().find(|(v, _)| *v == x) {
            *t
        } else if self.contains(x) {
            MembershipTriple::MEMBER
        } else {
            MembershipTriple::NON_MEMBER
        }
    }

    /// Negation `-S`.
    pub fn neg(&self) -> RealSet {
        set_arith(SetOp::Scale(-1.0), self, &RealSet::empty()).expect("negation keeps finiteness")
    }

    /// Same set within `tol`: equal component structure and endpoints.
    pub fn approx_eq(&self, other: &RealSet, tol: f64) -> bool {
        let (a, b) = (self.components(), other.components());
        a.len() == b.len()
            && a.iter().zip(b.iter()).all(|(x, y)| {
                (x.lo - y.lo).abs() <= tol
                    && (x.hi - y.hi).abs() <= tol
                    && x.lo_open == y.lo_open
                    && x.hi_open == y.hi_open
            })
    }
}

fn check_endpoint(x: f64, allow_unbounded: bool) -> Result<()> {
    if x.is_nan() || (!allow_unbounded && x.is_infinite()) {
        Err(Error::InvalidEndpoint(format!("{x} is not finite")))
    } else {
        Ok(())
    }
}

fn canonicalize(intervals: &[Interval], points: &[f64], allow_unbounded: bool) -> Result<(Vec<Interval>, Vec<f64>)> {
    let mut pieces = Vec::with_capacity(intervals.len() + points.len());
    for iv in intervals {
        check_endpoint(iv.lo, allow_unbounded)?;
        check_endpoint(iv.hi, allow_unbounded)?;
        if let Some(mut iv) = iv.oriented() {
            // infinite ends are never attained
            iv.lo_open |= iv.lo.is_infinite();
            iv.hi_open |= iv.hi.is_infinite();
            if iv.lo < iv.hi || (!iv.lo_open && !iv.hi_open) {
                pieces.push(iv);
            }
        }
    }
    for &p in points {
        check_endpoint(p, false)?;
        pieces.push(Interval::point(p));
    }
    pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.lo_open.cmp(&b.lo_open)));

    let mut merged: Vec<Interval> = Vec::with_capacity(pieces.len());
    for next in pieces {
        match merged.last_mut() {
            Some(cur) if next.lo < cur.hi || (next.lo == cur.hi && !(cur.hi_open && next.lo_open)) => {
                if next.hi > cur.hi {
                    cur.hi = next.hi;
                    cur.hi_open = next.hi_open;
                } else if next.hi == cur.hi {
                    cur.hi_open = cur.hi_open && next.hi_open;
                }
            }
            _ => merged.push(next),
        }
    }

    let mut ivs = Vec::new();
    let mut pts = Vec::new();
    for m in merged {
        if m.is_point() {
            pts.push(m.lo);
        } else {
            ivs.push(m);
        }
    }
    Ok((ivs, pts))
}

fn add_piece(p: &Interval, q: &Interval) -> Interval {
    Interval::new(p.lo + q.lo, p.hi + q.hi, p.lo_open || q.lo_open, p.hi_open || q.hi_open)
}

fn sub_piece(p: &Interval, q: &Interval) -> Interval {
    Interval::new(p.lo - q.hi, p.hi - q.lo, p.lo_open || q.hi_open, p.hi_open || q.lo_open)
}

fn scale_piece(p: &Interval, alpha: f64) -> Interval {
    if alpha == 0.0 {
        Interval::point(0.0)
    } else if alpha > 0.0 {
        Interval::new(alpha * p.lo, alpha * p.hi, p.lo_open, p.hi_open)
    } else {
        Interval::new(alpha * p.hi, alpha * p.lo, p.hi_open, p.lo_open)
    }
}

/// Extreme of a product over the four endpoint pairs. An extreme is
/// attained (closed) when some pair producing it is attained; a closed
/// zero factor attains its product whatever the other endpoint is.
pub(crate) fn corner_extremes(candidates: &[(f64, bool)]) -> Interval {
    let mut lo = (f64::INFINITY, true);
    let mut hi = (f64::NEG_INFINITY, true);
    for &(v, open) in candidates {
        if v < lo.0 {
            lo = (v, open);
        } else if v == lo.0 {
            lo.1 &= open;
        }
        if v > hi.0 {
            hi = (v, open);
        } else if v == hi.0 {
            hi.1 &= open;
        }
    }
    if lo.0 == hi.0 {
        Interval::point(lo.0)
    } else {
        Interval::new(lo.0, hi.0, lo.1, hi.1)
    }
}

fn mul_piece(p: &Interval, q: &Interval) -> Interval {
    let mut cands = [(0.0, false); 4];
    let mut k = 0;
    for (a, ao) in [(p.lo, p.lo_open), (p.hi, p.hi_open)] {
        for (b, bo) in [(q.lo, q.lo_open), (q.hi, q.hi_open)] {
            let attained_zero = (a == 0.0 && !ao) || (b == 0.0 && !bo);
            cands[k] = (a * b, (ao || bo) && !attained_zero);
            k += 1;
        }
    }
    corner_extremes(&cands)
}

fn recip_piece(q: &Interval) -> Interval {
    Interval::new(1.0 / q.hi, 1.0 / q.lo, q.hi_open, q.lo_open)
}

/// Exact image of the elementwise operation, canonicalized.
pub fn set_arith(op: SetOp, s: &RealSet, t: &RealSet) -> Result<RealSet> {
    let sc = s.components();
    let mut out = Vec::new();
    match op {
        SetOp::Scale(alpha) => {
            if !alpha.is_finite() {
                return Err(Error::InvalidEndpoint(format!("scale factor {alpha}")));
            }
            out.extend(sc.iter().map(|p| scale_piece(p, alpha)));
        }
        SetOp::Div if t.closure_contains_zero() => {
            return Err(Error::DivisionBySetContainingZero(format!("{s} / {t}")));
        }
        _ => {
            let tc = t.components();
            for p in &sc {
                for q in &tc {
                    out.push(match op {
                        SetOp::Add => add_piece(p, q),
                        SetOp::Sub => sub_piece(p, q),
                        SetOp::Mul => mul_piece(p, q),
                        SetOp::Div => mul_piece(p, &recip_piece(q)),
                        SetOp::Scale(_) => unreachable!(),
                    });
                }
            }
        }
    }
    RealSet::normalize(&out, &[])
}

impl RealSet {
    fn closure_contains_zero(&self) -> bool {
        self.closure_contains(0.0)
    }
}

/// `mu(S) = max(|inf S|, |sup S|)`.
pub fn mu_norm(s: &RealSet) -> Result<f64> {
    match (s.inf(), s.sup()) {
        (Some(lo), Some(hi)) => Ok(lo.abs().max(hi.abs())),
        _ => Err(Error::EmptySet),
    }
}

/// `eta(A, B) = max(|inf A - inf B|, |sup A - sup B|)`. Zero does not
/// force `A == B`: `{3,4,5,7}` and `{3,7}` are at distance 0.
pub fn eta_metric(a: &RealSet, b: &RealSet) -> Result<f64> {
    match (a.inf(), a.sup(), b.inf(), b.sup()) {
        (Some(ai), Some(asup), Some(bi), Some(bsup)) => Ok((ai - bi).abs().max((asup - bsup).abs())),
        _ => Err(Error::EmptySet),
    }
}

pub fn intersect(a: &RealSet, b: &RealSet) -> RealSet {
    a.intersect(b)
}

/// Neutrosophic inclusion: every element of `m` (annotated points
/// included) belongs to `n` with `t_m <= t_n`, `i_m >= i_n`, `f_m >= f_n`.
pub fn neutro_subset(m: &RealSet, n: &RealSet) -> bool {
    let support = |s: &RealSet| {
        let extra: Vec<f64> = s
            .annotations
            .iter()
            .filter(|(_, t)| *t != MembershipTriple::NON_MEMBER)
            .map(|(v, _)| *v)
            .collect();
        s.crisp().union(&RealSet::from_points(&extra).expect("annotated values are finite"))
    };
    let (ms, ns) = (support(m), support(n));
    if !ms.is_subset(&ns) {
        return false;
    }
    m.annotations
        .iter()
        .chain(n.annotations.iter())
        .map(|(v, _)| *v)
        .filter(|v| ms.contains(*v))
        .all(|v| m.membership(v).dominated_by(&n.membership(v)))
}

/// Shortest round-trip decimal, `-0` printed as `0`, infinities as `inf`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let note = |v: f64| match self.annotations.iter().find(|(w, _)| *w == v) {
            Some((_, t)) => format!("{}{}", fmt_num(v), t),
            None => fmt_num(v),
        };
        let comps = self.components();
        if comps.is_empty() {
            return write!(f, "{{}}");
        }
        if comps.len() == 1 && comps[0].is_point() && self.annotations.is_empty() {
            return write!(f, "{}", fmt_num(comps[0].lo));
        }
        let mut parts: Vec<String> = Vec::new();
        let mut run: Vec<String> = Vec::new();
        for c in &comps {
            if c.is_point() {
                run.push(note(c.lo));
                continue;
            }
            if !run.is_empty() {
                parts.push(format!("{{{}}}", run.join(",")));
                run.clear();
            }
            parts.push(format!(
                "{}{},{}{}",
                if c.lo_open { '(' } else { '[' },
                note(c.lo),
                note(c.hi),
                if c.hi_open { ')' } else { ']' }
            ));
        }
        if !run.is_empty() {
            parts.push(format!("{{{}}}", run.join(",")));
        }
        write!(f, "{}", parts.join(" ∪ "))
    }
}
