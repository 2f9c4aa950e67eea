use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    X,
    /// `I` or `Ik`.
    I(u32),
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Lt,
    Gt,
    Arrow,
    Eq,
    Union,
    Underscore,
    Question,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::X => "`x`".into(),
            Tok::I(1) => "`I`".into(),
            Tok::I(k) => format!("`I{k}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Union => "union".into(),
            Tok::Underscore => "`_`".into(),
            Tok::Question => "`?`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(crate) fn lex(text: &str, first_line: usize) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (first_line, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let span = |len: usize| SourceSpan { line: start.0, column: start.1, length: len };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let lit: String = chars[i..j].iter().collect();
            let v: f64 = lit.parse().map_err(|_| ParseError {
                span: span(j - i),
                expected: "number".into(),
                found: format!("`{lit}`"),
            })?;
            out.push((Tok::Num(v), span(j - i)));
            col += j - i;
            i = j;
            continue;
        }
        if c == 'x' {
            out.push((Tok::X, span(1)));
            i += 1;
            col += 1;
            continue;
        }
        if c == 'I' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let k = if j == i + 1 {
                1
            } else {
                let digits: String = chars[i + 1..j].iter().collect();
                match digits.parse::<u32>() {
                    Ok(k) if k >= 1 => k,
                    _ => {
                        return Err(ParseError {
                            span: span(j - i),
                            expected: "indeterminacy index >= 1".into(),
                            found: format!("`I{digits}`"),
                        })
                    }
                }
            };
            out.push((Tok::I(k), span(j - i)));
            col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = if word == "u" { Tok::Union } else { Tok::Ident(word) };
            out.push((tok, span(j - i)));
            col += j - i;
            i = j;
            continue;
        }
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '+' => (Tok::Plus, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            '-' | '\u{2212}' => (Tok::Minus, 1),
            '*' | '\u{b7}' => (Tok::Star, 1),
            '/' => (Tok::Slash, 1),
            '^' => (Tok::Caret, 1),
            '<' | '\u{27e8}' => (Tok::Lt, 1),
            '>' | '\u{27e9}' => (Tok::Gt, 1),
            '=' => (Tok::Eq, 1),
            '\u{222a}' => (Tok::Union, 1),
            '_' => (Tok::Underscore, 1),
            '?' => (Tok::Question, 1),
            '\u{221e}' => (Tok::Ident("inf".into()), 1),
            '\u{2192}' => (Tok::Arrow, 1),
            other => {
                return Err(ParseError {
                    span: span(1),
                    expected: "a token".into(),
                    found: format!("character `{other}`"),
                })
            }
        };
        out.push((tok, span(len)));
        i += len;
        col += len;
    }
    out.push((Tok::Eof, SourceSpan { line, column: col, length: 0 }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        lex(s, 1).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn juxtaposed_variable_and_indeterminacy() {
        assert_eq!(kinds("2xI1"), vec![Tok::Num(2.0), Tok::X, Tok::I(1), Tok::Eof]);
        assert_eq!(kinds("5x^3I2"), vec![Tok::Num(5.0), Tok::X, Tok::Caret, Tok::Num(3.0), Tok::I(2), Tok::Eof]);
    }

    #[test]
    fn exponent_notation_versus_exp() {
        assert_eq!(kinds("2e-3"), vec![Tok::Num(0.002), Tok::Eof]);
        assert_eq!(kinds("2exp"), vec![Tok::Num(2.0), Tok::Ident("exp".into()), Tok::Eof]);
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(kinds("[1,2] ∪ {3}")[5], Tok::Union);
        assert_eq!(kinds("−1")[0], Tok::Minus);
    }

    #[test]
    fn spans_track_lines() {
        let toks = lex("a\n  b", 3).unwrap();
        assert_eq!(toks[1].1, SourceSpan { line: 4, column: 3, length: 1 });
    }

    #[test]
    fn bad_character() {
        let err = lex("x $ 1", 1).unwrap_err();
        assert_eq!(err.span, SourceSpan { line: 1, column: 3, length: 1 });
    }
}
