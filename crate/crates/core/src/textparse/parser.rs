use super::lexer::{lex, Tok};
use super::{ParseError, SourceSpan};
use crate::error::{Error, Result};
use crate::funcmodel::{Domain, Expr, FuncSpec, TableRow};
use crate::neutronum::NeutroNumber;
use crate::realset::{Interval, MembershipTriple, PairTag, RealSet};

const FUNCS: [&str; 7] = ["exp", "ln", "log", "sqrt", "sin", "cos", "abs"];

/// Constant endpoint together with its optional membership annotation.
type Endpoint = (f64, Option<MembershipTriple>);

pub(crate) struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    allow_inf: bool,
}

impl Parser {
    pub(crate) fn new(text: &str, first_line: usize) -> std::result::Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text, first_line)?, pos: 0, allow_inf: false })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    #[cfg(test)]
    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse(ParseError { span: self.span(), expected: expected.into(), found: self.peek().describe() })
    }

    fn expect(&mut self, t: Tok, expected: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    pub(crate) fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub(crate) fn parse_expr(&mut self) -> Result<Expr> {
        let first = self.parse_sum()?;
        if !self.at_ident("or") {
            return Ok(first);
        }
        let mut alts = vec![first];
        while self.at_ident("or") {
            self.bump();
            alts.push(self.parse_sum()?);
        }
        Ok(Expr::Or(alts))
    }

    fn parse_sum(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.parse_term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.parse_term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Tok::Num(_) | Tok::X | Tok::I(_) | Tok::LParen | Tok::LBrack | Tok::LBrace => true,
            Tok::Ident(w) => FUNCS.contains(&w.as_str()),
            _ => false,
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = lhs * self.parse_factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    lhs = lhs / self.parse_factor()?;
                }
                _ if self.starts_factor() => lhs = lhs * self.parse_factor()?,
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.parse_factor()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => -other,
            });
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let expo = self.parse_factor()?;
        Ok(match expo {
            Expr::Const(c) if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 => base.powi(c as i32),
            other => base.pow(other),
        })
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::X => {
                self.bump();
                Ok(Expr::Var)
            }
            Tok::I(k) => {
                self.bump();
                Ok(Expr::ConstNN(NeutroNumber::indeterminacy(k)))
            }
            Tok::Ident(w) if w == "inf" => {
                if !self.allow_inf {
                    return Err(self.error("a finite value (`inf` is only allowed in piece domains)"));
                }
                self.bump();
                Ok(Expr::Const(f64::INFINITY))
            }
            Tok::Ident(w) if FUNCS.contains(&w.as_str()) => self.parse_call(&w),
            Tok::LParen | Tok::LBrack => {
                let e = self.parse_bracketed()?;
                self.maybe_union(e)
            }
            Tok::LBrace => {
                let e = self.parse_point_set()?;
                self.maybe_union(e)
            }
            _ => Err(self.error("an expression")),
        }
    }

    fn parse_call(&mut self, name: &str) -> Result<Expr> {
        self.bump();
        let base = if name == "log" {
            self.expect(Tok::Underscore, "`_` after `log`")?;
            Some(self.parse_atom()?)
        } else {
            None
        };
        self.expect(Tok::LParen, "`(`")?;
        let arg = self.parse_expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(match name {
            "exp" => arg.exp(),
            "ln" => arg.ln(),
            "log" => Expr::log(base.expect("parsed above"), arg),
            "sqrt" => arg.sqrt(),
            "sin" => arg.sin(),
            "cos" => arg.cos(),
            _ => arg.abs(),
        })
    }

    fn parse_annotation(&mut self) -> Result<Option<MembershipTriple>> {
        if *self.peek() != Tok::Lt {
            return Ok(None);
        }
        let at = self.span();
        self.bump();
        let mut vals = [0.0; 3];
        for (k, v) in vals.iter_mut().enumerate() {
            if k > 0 {
                self.expect(Tok::Comma, "`,` in membership triple")?;
            }
            *v = self.parse_signed_number()?;
        }
        self.expect(Tok::Gt, "`>` closing membership triple")?;
        MembershipTriple::new(vals[0], vals[1], vals[2]).map(Some).map_err(|e| {
            Error::Parse(ParseError { span: at, expected: "membership components in [0,1]".into(), found: e.to_string() })
        })
    }

    fn parse_signed_number(&mut self) -> Result<f64> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            Tok::Ident(w) if w == "inf" && self.allow_inf => {
                self.bump();
                Ok(if neg { f64::NEG_INFINITY } else { f64::INFINITY })
            }
            _ => Err(self.error("a number")),
        }
    }

    /// `(a, b)`, `[a, b)` and friends, or a parenthesized expression.
    fn parse_bracketed(&mut self) -> Result<Expr> {
        let lo_open = self.bump() == Tok::LParen;
        let start = self.span();
        let first = self.parse_expr()?;
        let first_note = self.parse_annotation()?;
        if *self.peek() != Tok::Comma {
            if !lo_open {
                return Err(self.error("`,` inside `[ ]`"));
            }
            if first_note.is_some() {
                return Err(self.error("`,` after an annotated endpoint"));
            }
            self.expect(Tok::RParen, "`)`")?;
            return Ok(first);
        }
        self.bump();
        let second = self.parse_expr()?;
        let second_note = self.parse_annotation()?;
        let hi_open = match self.peek() {
            Tok::RParen => true,
            Tok::RBrack => false,
            _ => return Err(self.error("`)` or `]`")),
        };
        self.bump();
        match (&first, &second) {
            (Expr::Const(a), Expr::Const(b)) => {
                let iv = Interval::new(*a, *b, lo_open, hi_open);
                let set = self.make_set(&[iv], &[], &[(*a, first_note), (*b, second_note)], start)?;
                Ok(Expr::ConstSet(set))
            }
            _ if first_note.is_some() || second_note.is_some() => Err(Error::Parse(ParseError {
                span: start,
                expected: "constant endpoints for membership annotations".into(),
                found: "a formula".into(),
            })),
            _ => Ok(Expr::hull(first, second, lo_open, hi_open)),
        }
    }

    fn make_set(&self, ivs: &[Interval], pts: &[f64], notes: &[Endpoint], at: SourceSpan) -> Result<RealSet> {
        let wrap = |e: Error| Error::Parse(ParseError { span: at, expected: "a valid set".into(), found: e.to_string() });
        let mut set = if self.allow_inf {
            RealSet::normalize_unbounded(ivs, pts)
        } else {
            RealSet::normalize(ivs, pts)
        }
        .map_err(wrap)?;
        for (v, note) in notes {
            if let Some(t) = note {
                set = set.with_annotation(*v, *t).map_err(wrap)?;
            }
        }
        Ok(set)
    }

    fn parse_point_set(&mut self) -> Result<Expr> {
        let start = self.span();
        self.expect(Tok::LBrace, "`{`")?;
        let mut pts = Vec::new();
        let mut notes = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let p = self.parse_signed_number()?;
                if p.is_infinite() {
                    return Err(self.error("a finite point"));
                }
                notes.push((p, self.parse_annotation()?));
                pts.push(p);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace, "`}` or `,`")?;
        Ok(Expr::ConstSet(self.make_set(&[], &pts, &notes, start)?))
    }

    fn maybe_union(&mut self, first: Expr) -> Result<Expr> {
        if *self.peek() != Tok::Union {
            return Ok(first);
        }
        let Expr::ConstSet(mut acc) = first else {
            return Err(self.error("constant sets on both sides of a union"));
        };
        while *self.peek() == Tok::Union {
            self.bump();
            let next = match self.peek() {
                Tok::LBrace => self.parse_point_set()?,
                Tok::LParen | Tok::LBrack => self.parse_bracketed()?,
                _ => return Err(self.error("a set after union")),
            };
            match next {
                Expr::ConstSet(s) => acc = acc.union(&s),
                _ => return Err(self.error("a constant set after union")),
            }
        }
        Ok(Expr::ConstSet(acc))
    }

    /// A constant set in domain position: unbounded endpoints allowed.
    pub(crate) fn parse_domain(&mut self) -> Result<Domain> {
        let start = self.span();
        self.allow_inf = true;
        let e = match self.peek() {
            Tok::LBrace => self.parse_point_set(),
            Tok::LParen | Tok::LBrack => self.parse_bracketed(),
            _ => Err(self.error("a domain set")),
        }
        .and_then(|e| self.maybe_union(e));
        self.allow_inf = false;
        match e? {
            Expr::ConstSet(s) => Ok(Domain::from_set(&s)),
            _ => Err(Error::Parse(ParseError {
                span: start,
                expected: "a constant domain".into(),
                found: "a formula".into(),
            })),
        }
    }

    /// `name(x) = body`
    pub(crate) fn parse_funcdef(&mut self) -> Result<(String, FuncSpec)> {
        let name = match self.peek().clone() {
            Tok::Ident(w) if !["or", "on", "table", "inf"].contains(&w.as_str()) && !FUNCS.contains(&w.as_str()) => {
                self.bump();
                w
            }
            _ => return Err(self.error("a function name")),
        };
        self.expect(Tok::LParen, "`(`")?;
        self.expect(Tok::X, "`x`")?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Eq, "`=`")?;
        let spec = self.parse_body()?;
        self.expect_eof()?;
        Ok((name, spec))
    }

    fn parse_body(&mut self) -> Result<FuncSpec> {
        if self.at_ident("table") {
            return self.parse_table();
        }
        if *self.peek() == Tok::LBrace && self.brace_holds_pieces() {
            return self.parse_pieces();
        }
        Ok(spec_from_expr(self.parse_expr()?))
    }

    fn brace_holds_pieces(&self) -> bool {
        let mut depth = 0i32;
        for (t, _) in &self.toks[self.pos..] {
            match t {
                Tok::LBrace | Tok::LParen | Tok::LBrack => depth += 1,
                Tok::RBrace | Tok::RParen | Tok::RBrack => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                Tok::Ident(w) if w == "on" && depth == 1 => return true,
                Tok::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn parse_pieces(&mut self) -> Result<FuncSpec> {
        let start = self.span();
        self.expect(Tok::LBrace, "`{`")?;
        let mut pieces = Vec::new();
        loop {
            let body = self.parse_expr()?;
            if !self.at_ident("on") {
                return Err(self.error("`on`"));
            }
            self.bump();
            let dom = self.parse_domain()?;
            pieces.push((dom, spec_from_expr(body)));
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                    if *self.peek() == Tok::RBrace {
                        break;
                    }
                }
                Tok::RBrace => break,
                _ => return Err(self.error("`;` or `}`")),
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        FuncSpec::piecewise(pieces).map_err(|e| match e {
            Error::Overlap(msg) => Error::Overlap(format!("{msg} (line {}, column {})", start.line, start.column)),
            other => other,
        })
    }

    fn parse_const_set(&mut self) -> Result<RealSet> {
        let e = match self.peek() {
            Tok::LBrace => self.parse_point_set()?,
            Tok::LParen | Tok::LBrack => self.parse_bracketed()?,
            Tok::Num(_) | Tok::Minus => Expr::ConstSet(RealSet::point(self.parse_signed_number()?)),
            _ => return Err(self.error("a constant set")),
        };
        match self.maybe_union(e)? {
            Expr::ConstSet(s) => Ok(s),
            _ => Err(self.error("a constant set")),
        }
    }

    fn parse_table(&mut self) -> Result<FuncSpec> {
        self.bump();
        self.expect(Tok::LBrace, "`{` after `table`")?;
        let mut rows = Vec::new();
        while *self.peek() != Tok::RBrace {
            let arg = self.parse_const_set()?;
            self.expect(Tok::Arrow, "`->`")?;
            let val = self.parse_const_set()?;
            let tag = match self.peek() {
                Tok::Lt => PairTag::Partial(self.parse_annotation()?.expect("saw `<`")),
                Tok::Question => {
                    self.bump();
                    PairTag::Potential
                }
                _ => PairTag::Sure,
            };
            rows.push(TableRow { arg, val, tag });
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                }
                Tok::RBrace => {}
                _ => return Err(self.error("`;` or `}`")),
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(FuncSpec::Table(rows))
    }
}

/// Top-level shape decides the descriptor: `or` gives alternatives, a
/// band gives a thick function, indeterminacy leaves give an NN formula.
pub(crate) fn spec_from_expr(e: Expr) -> FuncSpec {
    match e {
        Expr::Or(alts) => FuncSpec::Alternatives(alts.into_iter().map(spec_from_expr).collect()),
        Expr::Hull { lo, hi, lo_open, hi_open } => FuncSpec::Thick { lower: *lo, upper: *hi, lo_open, hi_open },
        e if e.has_nn() => FuncSpec::NNExpr(e),
        e => FuncSpec::Crisp(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pe(s: &str) -> Expr {
        let mut p = Parser::new(s, 1).unwrap();
        let e = p.parse_expr().unwrap();
        p.expect_eof().unwrap();
        e
    }

    #[test]
    fn lookahead_helpers() {
        let p = Parser::new("a b", 1).unwrap();
        assert_eq!(p.peek_at(1), &Tok::Ident("b".into()));
        assert_eq!(p.peek_at(9), &Tok::Eof);
    }

    #[test]
    fn interval_division() {
        let want = Expr::set(RealSet::closed(2.0, 5.0)) / (Expr::x() - Expr::c(1.0));
        assert_eq!(pe("[2,5]/(x-1)"), want);
    }

    #[test]
    fn band_with_formulas() {
        assert_eq!(pe("[2x, 2x+1]"), Expr::hull(Expr::c(2.0) * Expr::x(), Expr::c(2.0) * Expr::x() + Expr::c(1.0), false, false));
    }

    #[test]
    fn annotated_endpoint() {
        let Expr::ConstSet(s) = pe("[0,5<0.6,0.1,0.3>)") else { panic!() };
        assert_eq!(s.membership(5.0), MembershipTriple::new(0.6, 0.1, 0.3).unwrap());
    }
}
