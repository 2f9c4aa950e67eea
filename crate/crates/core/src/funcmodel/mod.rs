//! Function descriptors and their evaluation.
//!
//! A [`FuncSpec`] describes a neutrosophic function: a crisp formula, a
//! thick band between two envelopes, a piecewise definition, discrete
//! alternatives, a finite table of set pairs, or a formula over
//! indeterminacy numbers. Evaluation returns a [`NeutroValue`], a list of
//! alternative branches.

mod eval;
mod expr;
mod ops;

use std::fmt;

pub use eval::{combine, eval_expr, eval_f64, eval_nn, scale, BinOp, Branch};
pub use expr::Expr;
pub use ops::{invert, solve};

pub(crate) use eval::band;

use crate::error::{Error, Result};
use crate::neutronum::NeutroNumber;
use crate::realset::{Interval, PairTag, RealSet};

/// Piece domain: like a [`RealSet`] but may extend to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain(RealSet);

impl Domain {
    pub fn all() -> Domain {
        Domain::new(&[Interval::open(f64::NEG_INFINITY, f64::INFINITY)], &[]).expect("valid")
    }

    pub fn new(intervals: &[Interval], points: &[f64]) -> Result<Domain> {
        Ok(Domain(RealSet::normalize_unbounded(intervals, points)?))
    }

    /// The real line without the given points.
    pub fn all_except(points: &[f64]) -> Domain {
        let mut pts = points.to_vec();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut ivs = Vec::with_capacity(pts.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        for &p in &pts {
            ivs.push(Interval::open(lo, p));
            lo = p;
        }
        ivs.push(Interval::open(lo, f64::INFINITY));
        Domain::new(&ivs, &[]).expect("finite cut points")
    }

    pub fn from_set(s: &RealSet) -> Domain {
        Domain(s.crisp())
    }

    pub fn as_set(&self) -> &RealSet {
        &self.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.0.contains(x)
    }

    pub fn contains_set(&self, s: &RealSet) -> bool {
        s.is_subset(&self.0)
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        Domain(self.0.intersect(&other.0))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the domain is a finite set of isolated points.
    pub fn is_discrete(&self) -> bool {
        self.0.intervals().is_empty()
    }

    /// Finite interval endpoints and isolated points.
    pub fn boundary_points(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.0.points().to_vec();
        for iv in self.0.intervals() {
            out.extend([iv.lo, iv.hi].into_iter().filter(|v| v.is_finite()));
        }
        out
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub arg: RealSet,
    pub val: RealSet,
    pub tag: PairTag,
}

impl TableRow {
    pub fn new(arg: RealSet, val: RealSet) -> TableRow {
        TableRow { arg, val, tag: PairTag::Sure }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FuncSpec {
    Crisp(Expr),
    /// `[lower(x), upper(x)]`, ordered pointwise. `lo_open` and `hi_open`
    /// apply to the smaller and the larger value respectively.
    Thick {
        lower: Expr,
        upper: Expr,
        lo_open: bool,
        hi_open: bool,
    },
    Piecewise(Vec<(Domain, FuncSpec)>),
    Alternatives(Vec<FuncSpec>),
    Table(Vec<TableRow>),
    NNExpr(Expr),
    /// `outer(inner(x))`.
    Composed {
        outer: Box<FuncSpec>,
        inner: Box<FuncSpec>,
    },
    /// `lhs(x) op rhs(x)`.
    Combined {
        op: BinOp,
        lhs: Box<FuncSpec>,
        rhs: Box<FuncSpec>,
    },
    Scaled {
        factor: f64,
        inner: Box<FuncSpec>,
    },
    /// Exact set arguments listed in `rows` take precedence over `otherwise`.
    WithSetArgs {
        rows: Vec<TableRow>,
        otherwise: Box<FuncSpec>,
    },
}

impl FuncSpec {
    pub fn thick(lower: Expr, upper: Expr) -> FuncSpec {
        FuncSpec::Thick { lower, upper, lo_open: false, hi_open: false }
    }

    pub fn combined(op: BinOp, lhs: FuncSpec, rhs: FuncSpec) -> FuncSpec {
        FuncSpec::Combined { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn scaled(factor: f64, inner: FuncSpec) -> FuncSpec {
        FuncSpec::Scaled { factor, inner: Box::new(inner) }
    }

    /// Piecewise spec; domains have to be pairwise disjoint.
    pub fn piecewise(pieces: Vec<(Domain, FuncSpec)>) -> Result<FuncSpec> {
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let common = pieces[i].0.intersect(&pieces[j].0);
                if !common.is_empty() {
                    return Err(Error::Overlap(format!("{} and {} share {}", pieces[i].0, pieces[j].0, common)));
                }
            }
        }
        Ok(FuncSpec::Piecewise(pieces))
    }

    /// Points where the definition changes: piece boundaries and table
    /// arguments.
    pub fn special_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_special(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_special(&self, out: &mut Vec<f64>) {
        let rows = |rows: &[TableRow], out: &mut Vec<f64>| {
            for r in rows {
                out.extend(r.arg.points());
                for iv in r.arg.intervals() {
                    out.extend([iv.lo, iv.hi]);
                }
            }
        };
        match self {
            FuncSpec::Piecewise(pieces) => {
                for (d, s) in pieces {
                    out.extend(d.boundary_points());
                    s.collect_special(out);
                }
            }
            FuncSpec::Alternatives(v) => v.iter().for_each(|s| s.collect_special(out)),
            FuncSpec::Table(r) => rows(r, out),
            FuncSpec::WithSetArgs { rows: r, otherwise } => {
                rows(r, out);
                otherwise.collect_special(out);
            }
            FuncSpec::Composed { inner, .. } => inner.collect_special(out),
            FuncSpec::Combined { lhs, rhs, .. } => {
                lhs.collect_special(out);
                rhs.collect_special(out);
            }
            FuncSpec::Scaled { inner, .. } => inner.collect_special(out),
            FuncSpec::Crisp(_) | FuncSpec::Thick { .. } | FuncSpec::NNExpr(_) => {}
        }
    }
}

/// Result of an evaluation: one or more alternative branches, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct NeutroValue {
    branches: Vec<Branch>,
}

impl NeutroValue {
    pub fn new(branches: Vec<Branch>) -> Result<NeutroValue> {
        if branches.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(NeutroValue { branches })
    }

    pub fn single(b: Branch) -> NeutroValue {
        NeutroValue { branches: vec![b] }
    }

    pub fn point(x: f64) -> NeutroValue {
        NeutroValue::single(Branch::point(x))
    }

    pub fn set(s: RealSet) -> NeutroValue {
        NeutroValue::single(Branch::Set(s))
    }

    pub fn nn(n: NeutroNumber) -> NeutroValue {
        NeutroValue::single(Branch::from_nn(n))
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_determinate(&self) -> bool {
        self.branches.len() == 1
    }

    /// The value as a single set, if it is one.
    pub fn as_set(&self) -> Option<&RealSet> {
        match self.branches.as_slice() {
            [Branch::Set(s)] => Some(s),
            _ => None,
        }
    }

    /// Every branch as a set; fails on indeterminacy-number branches.
    pub fn sets(&self) -> Result<Vec<RealSet>> {
        self.branches
            .iter()
            .map(|b| match b {
                Branch::Set(s) => Ok(s.clone()),
                Branch::NN(n) => Err(Error::NotSupported(format!("indeterminate value {n}"))),
            })
            .collect()
    }

    /// Branches compared as an unordered multiset, endpoints within `tol`.
    pub fn approx_eq_unordered(&self, other: &NeutroValue, tol: f64) -> bool {
        if self.branches.len() != other.branches.len() {
            return false;
        }
        let mut used = vec![false; other.branches.len()];
        self.branches.iter().all(|a| {
            let hit = other.branches.iter().enumerate().find(|(j, b)| !used[*j] && branch_approx_eq(a, b, tol));
            match hit {
                Some((j, _)) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    pub fn map(&self, f: impl Fn(&Branch) -> Result<Branch>) -> Result<NeutroValue> {
        Ok(NeutroValue { branches: self.branches.iter().map(f).collect::<Result<_>>()? })
    }
}

fn branch_approx_eq(a: &Branch, b: &Branch, tol: f64) -> bool {
    match (a, b) {
        (Branch::Set(s), Branch::Set(t)) => {
            let scale = 1.0 + s.sup().map_or(0.0, f64::abs).max(s.inf().map_or(0.0, f64::abs));
            s.approx_eq(t, tol * scale)
        }
        (Branch::NN(x), Branch::NN(y)) => {
            let d = x.sub(y);
            d.a().abs() <= tol && d.terms().values().all(|v| v.abs() <= tol)
        }
        _ => false,
    }
}

pub fn eval(f: &FuncSpec, at: &NeutroValue) -> Result<NeutroValue> {
    let mut out = Vec::new();
    for b in at.branches() {
        out.extend(eval_branch(f, b)?);
    }
    NeutroValue::new(out)
}

/// Evaluation at a real argument.
pub fn eval_at(f: &FuncSpec, x: f64) -> Result<NeutroValue> {
    NeutroValue::new(eval_branch(f, &Branch::point(x))?)
}

fn lookup_rows<'a>(rows: &'a [TableRow], arg: &RealSet) -> Vec<&'a TableRow> {
    let key = arg.crisp();
    rows.iter().filter(|r| r.arg.crisp() == key).collect()
}

fn eval_branch(f: &FuncSpec, x: &Branch) -> Result<Vec<Branch>> {
    match f {
        FuncSpec::Crisp(e) | FuncSpec::NNExpr(e) => eval_expr(e, x),
        FuncSpec::Thick { lower, upper, lo_open, hi_open } => {
            let (ls, us) = (eval_expr(lower, x)?, eval_expr(upper, x)?);
            let mut out = Vec::with_capacity(ls.len() * us.len());
            for l in &ls {
                for u in &us {
                    match (l, u) {
                        (Branch::Set(l), Branch::Set(u)) => out.push(Branch::Set(band(l, u, *lo_open, *hi_open)?)),
                        _ => return Err(Error::NotSupported("thick band with indeterminate envelope".into())),
                    }
                }
            }
            Ok(out)
        }
        FuncSpec::Piecewise(pieces) => {
            let inside = |d: &Domain| match x {
                Branch::Set(s) => d.contains_set(s),
                Branch::NN(_) => false,
            };
            match pieces.iter().find(|(d, _)| inside(d)) {
                Some((_, spec)) => eval_branch(spec, x),
                None => Err(Error::Domain(format!("{} lies in no piece domain", show_branch(x)))),
            }
        }
        FuncSpec::Alternatives(v) => {
            let mut out = Vec::new();
            for s in v {
                out.extend(eval_branch(s, x)?);
            }
            Ok(out)
        }
        FuncSpec::Table(rows) => {
            let arg = x.as_set().ok_or_else(|| Error::Domain("table lookup needs a set argument".into()))?;
            let hits = lookup_rows(rows, arg);
            if hits.is_empty() {
                return Err(Error::Domain(format!("no table row for argument {arg}")));
            }
            Ok(hits.into_iter().map(|r| Branch::Set(r.val.clone())).collect())
        }
        FuncSpec::Composed { outer, inner } => {
            let mut out = Vec::new();
            for b in eval_branch(inner, x)? {
                out.extend(eval_branch(outer, &b)?);
            }
            Ok(out)
        }
        FuncSpec::Combined { op, lhs, rhs } => {
            let (ls, rs) = (eval_branch(lhs, x)?, eval_branch(rhs, x)?);
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for l in &ls {
                for r in &rs {
                    out.push(combine(*op, l, r)?);
                }
            }
            Ok(out)
        }
        FuncSpec::Scaled { factor, inner } => eval_branch(inner, x)?.iter().map(|b| scale(b, *factor)).collect(),
        FuncSpec::WithSetArgs { rows, otherwise } => {
            if let Some(arg) = x.as_set() {
                let hits = lookup_rows(rows, arg);
                if !hits.is_empty() {
                    return Ok(hits.into_iter().map(|r| Branch::Set(r.val.clone())).collect());
                }
            }
            eval_branch(otherwise, x)
        }
    }
}

fn show_branch(b: &Branch) -> String {
    match b {
        Branch::Set(s) => s.to_string(),
        Branch::NN(n) => n.to_string(),
    }
}

/// `f o g`: evaluation fans `f` out over every branch of `g(x)`.
pub fn compose(f: &FuncSpec, g: &FuncSpec) -> FuncSpec {
    FuncSpec::Composed { outer: Box::new(f.clone()), inner: Box::new(g.clone()) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationClass {
    CrispFunction,
    SubsetFunction,
    GeneralRelation,
}

/// Vertical line test on a table.
pub fn classify_relation(f: &FuncSpec) -> Result<RelationClass> {
    let FuncSpec::Table(rows) = f else {
        return Err(Error::NotSupported("only tables can be classified".into()));
    };
    let mut uniq: Vec<(RealSet, RealSet)> = Vec::new();
    for r in rows {
        let pair = (r.arg.crisp(), r.val.crisp());
        if !uniq.contains(&pair) {
            uniq.push(pair);
        }
    }
    let repeated = uniq.iter().enumerate().any(|(i, a)| uniq[i + 1..].iter().any(|b| b.0 == a.0));
    if repeated {
        return Ok(RelationClass::GeneralRelation);
    }
    let singletons = uniq.iter().all(|(a, v)| a.as_point().is_some() && v.as_point().is_some());
    Ok(if singletons { RelationClass::CrispFunction } else { RelationClass::SubsetFunction })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

/// Sampled parity test over a domain symmetric about 0.
pub fn parity(f: &FuncSpec, domain: &RealSet, samples: usize) -> Result<Parity> {
    if domain.is_empty() || !domain.approx_eq(&domain.neg(), 1e-12) {
        return Err(Error::Domain(format!("{domain} is not symmetric about 0")));
    }
    let (lo, hi) = (domain.inf().expect("non-empty"), domain.sup().expect("non-empty"));
    let n = samples.max(1);
    let mut xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    xs.extend(f.special_points());
    xs.extend(domain.points());
    let (mut even, mut odd) = (true, true);
    for x in xs {
        if !(domain.contains(x) && domain.contains(-x)) {
            continue;
        }
        match (eval_at(f, x), eval_at(f, -x)) {
            (Err(_), Err(_)) => continue,
            (Ok(fx), Ok(fmx)) => {
                even &= fmx.approx_eq_unordered(&fx, 1e-9);
                odd &= match fx.map(|b| scale(b, -1.0)) {
                    Ok(neg) => fmx.approx_eq_unordered(&neg, 1e-9),
                    Err(_) => false,
                };
            }
            _ => return Ok(Parity::Neither),
        }
        if !even && !odd {
            return Ok(Parity::Neither);
        }
    }
    Ok(if even {
        Parity::Even
    } else if odd {
        Parity::Odd
    } else {
        Parity::Neither
    })
}

pub(crate) const BISECT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Locus {
    Contains,
    Below,
    Above,
    Other,
}

/// Where `k` sits relative to `f(x)`: inside some branch, above every
/// branch, below every branch, or none of these.
pub(crate) fn locate(f: &FuncSpec, x: f64, k: f64) -> Locus {
    let Ok(v) = eval_at(f, x) else {
        return Locus::Other;
    };
    let mut below = true;
    let mut above = true;
    for b in v.branches() {
        match b {
            Branch::Set(s) => {
                if s.contains(k) {
                    return Locus::Contains;
                }
                below &= s.sup().is_some_and(|h| h < k);
                above &= s.inf().is_some_and(|l| l > k);
            }
            Branch::NN(_) => return Locus::Other,
        }
    }
    if below {
        Locus::Below
    } else if above {
        Locus::Above
    } else {
        Locus::Other
    }
}

/// Bisects between `good` (where `pred` holds) and `bad` until they are
/// within `tol` or adjacent floats; returns the last `good` point.
pub(crate) fn bisect(mut good: f64, mut bad: f64, tol: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        if (good - bad).abs() <= tol {
            break;
        }
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
    good
}

/// Sample grid over the hull of `search` plus the spec's special points,
/// sorted and restricted to `search`.
pub(crate) fn scan_points(f: &FuncSpec, lo: f64, hi: f64, grid: usize, keep: impl Fn(f64) -> bool) -> Vec<f64> {
    let n = grid.max(1);
    let mut xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    xs.extend(f.special_points().into_iter().filter(|p| *p >= lo && *p <= hi));
    xs.retain(|x| keep(*x));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Zeros of `f` inside `search`, from a grid scan refined by bisection.
pub fn zeros(f: &FuncSpec, search: &RealSet, grid: usize) -> Result<RealSet> {
    let (Some(lo), Some(hi)) = (search.inf(), search.sup()) else {
        return Ok(RealSet::empty());
    };
    let xs = scan_points(f, lo, hi, grid, |x| search.contains(x));
    let sides: Vec<Locus> = xs.iter().map(|&x| locate(f, x, 0.0)).collect();
    let contains = |x: f64| locate(f, x, 0.0) == Locus::Contains;
    let mut ivs = Vec::new();
    let mut pts = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if sides[i] == Locus::Contains {
            let mut j = i;
            while j + 1 < xs.len() && sides[j + 1] == Locus::Contains {
                j += 1;
            }
            let a = if i > 0 { bisect(xs[i], xs[i - 1], BISECT_TOL, contains) } else { xs[i] };
            let b = if j + 1 < xs.len() { bisect(xs[j], xs[j + 1], BISECT_TOL, contains) } else { xs[j] };
            if b - a > BISECT_TOL {
                ivs.push(Interval::closed(a, b));
            } else {
                pts.push(0.5 * (a + b));
            }
            i = j + 1;
            continue;
        }
        if i + 1 < xs.len() {
            let flip = matches!((sides[i], sides[i + 1]), (Locus::Below, Locus::Above) | (Locus::Above, Locus::Below));
            if flip {
                let start = sides[i];
                let root = bisect(xs[i], xs[i + 1], BISECT_TOL, |x| locate(f, x, 0.0) == start);
                pts.push(root);
            }
        }
        i += 1;
    }
    RealSet::normalize(&ivs, &pts)
}
