//! Recursive-descent parser for polynomial expressions in X and Y.
//!
//! Accepted: integer literals, `X`/`Y` (either case), `+ - * ^`, parentheses,
//! and a leading unary minus per (sub)expression. Multiplication is always
//! explicit; decimal or rational coefficients are rejected with a pointer to
//! the exact dyadic input forms.

use super::BiPoly;
use num_bigint::BigInt;

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::X => "'X'".into(),
            Tok::Y => "'Y'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::X | Tok::Y | Tok::LParen)
    }
}

fn err(msg: impl Into<String>) -> crate::Error {
    crate::Error::Parse(msg.into())
}

fn lex(s: &str) -> crate::Result<Vec<(Tok, usize)>> {
    let bytes = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            'x' | 'X' => {
                toks.push((Tok::X, i));
                i += 1;
            }
            'y' | 'Y' => {
                toks.push((Tok::Y, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(err(format!(
                        "decimal coefficient at position {start}; polynomial coefficients must be integers"
                    )));
                }
                if i < bytes.len() && bytes[i] == b'/' {
                    return Err(err(format!(
                        "rational coefficient at position {start}; polynomial coefficients must be integers"
                    )));
                }
                let n: BigInt = s[start..i].parse().expect("digits parse");
                toks.push((Tok::Int(n), start));
            }
            _ => {
                return Err(err(format!(
                    "unexpected character {c:?} at position {i}; variables are X and Y"
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> crate::Result<BiPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> crate::Result<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(t) if t.starts_atom() => {
                    let (t, at) = self.toks[self.pos].clone();
                    return Err(err(format!(
                        "missing '*' before {} at position {at}; multiplication must be explicit",
                        t.describe()
                    )));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> crate::Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some((Tok::Int(n), at)) => {
                    let k = u32::try_from(&n)
                        .ok()
                        .filter(|&k| k <= 64)
                        .ok_or_else(|| {
                            err(format!("exponent at position {at} must be an integer in 0..=64"))
                        })?;
                    Ok(base.pow(k))
                }
                Some((t, at)) => Err(err(format!(
                    "expected an integer exponent after '^', found {} at position {at}",
                    t.describe()
                ))),
                None => Err(err("expected an integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> crate::Result<BiPoly> {
        match self.next() {
            Some((Tok::Int(n), _)) => Ok(BiPoly::normalized(vec![vec![n]])),
            Some((Tok::X, _)) => Ok(BiPoly::var_x()),
            Some((Tok::Y, _)) => Ok(BiPoly::var_y()),
            Some((Tok::LParen, at)) => {
                let e = self.expr()?;
                match self.next() {
                    Some((Tok::RParen, _)) => Ok(e),
                    _ => Err(err(format!("unclosed '(' at position {at}"))),
                }
            }
            Some((t, at)) => Err(err(format!(
                "expected a number, X, Y or '(', found {} at position {at}",
                t.describe()
            ))),
            None => Err(err("unexpected end of polynomial")),
        }
    }
}

pub(super) fn parse_bipoly(s: &str) -> crate::Result<BiPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut p = Parser { toks, pos: 0 };
    let poly = p.expr()?;
    if let Some((t, at)) = p.toks.get(p.pos) {
        return Err(err(format!(
            "trailing {} at position {at}",
            t.describe()
        )));
    }
    Ok(poly)
}
