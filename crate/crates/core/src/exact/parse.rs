//! Parser for the canonical text form (and ordinary hand-written input).
//!
//! Grammar: sums of products of powers; `^` takes an integer exponent,
//! identifiers are polynomial variables first, then tower generators.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, FieldElement, MultiPoly, Tower};

type Res<T> = Result<T, AlgebraError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Res<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

trait Domain {
    type E: Clone;
    fn num(&self, n: BigInt) -> Self::E;
    fn ident(&self, name: &str) -> Res<Self::E>;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn div(&self, a: &Self::E, b: &Self::E) -> Res<Self::E>;
    fn pow(&self, a: &Self::E, e: i64) -> Res<Self::E>;
}

struct Parser<'a, D: Domain> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    dom: &'a D,
}

impl<D: Domain> Parser<'_, D> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: &str) -> Res<T> {
        Err(AlgebraError::Parse { pos: self.at(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Res<D::E> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { self.dom.add(&acc, &t) } else { self.dom.sub(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Res<D::E> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.unary()?;
            acc = if c == '*' { self.dom.mul(&acc, &t) } else { self.dom.div(&acc, &t)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Res<D::E> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                let u = self.unary()?;
                Ok(self.dom.neg(&u))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Res<D::E> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return self.err("expected integer exponent");
            };
            self.pos += 1;
            let e: i64 = i64::try_from(n).or_else(|_| self.err("exponent too large"))?;
            return self.dom.pow(&base, if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Res<D::E> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.dom.num(n))
            }
            Some(Tok::Ident(name)) => {
                let at = self.at();
                self.pos += 1;
                self.dom.ident(&name).map_err(|e| match e {
                    AlgebraError::UnknownSymbol(s) => {
                        AlgebraError::Parse { pos: at, msg: format!("unknown symbol {s}") }
                    }
                    e => e,
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected number, symbol or '('"),
        }
    }
}

fn run<D: Domain>(dom: &D, text: &str) -> Res<D::E> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, len: text.len(), dom };
    if p.toks.is_empty() {
        return p.err("empty input");
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

struct FieldDom<'a>(&'a Tower);

impl Domain for FieldDom<'_> {
    type E = FieldElement;
    fn num(&self, n: BigInt) -> FieldElement {
        self.0.rational(&BigRational::from_integer(n))
    }
    fn ident(&self, name: &str) -> Res<FieldElement> {
        self.0.gen(name)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a + b
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a - b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a * b
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        -a
    }
    fn div(&self, a: &FieldElement, b: &FieldElement) -> Res<FieldElement> {
        a.checked_div(b)
    }
    fn pow(&self, a: &FieldElement, e: i64) -> Res<FieldElement> {
        a.powi(e)
    }
}

struct PolyDom<'a> {
    tower: &'a Tower,
    vars: &'a [&'a str],
}

impl Domain for PolyDom<'_> {
    type E = MultiPoly;
    fn num(&self, n: BigInt) -> MultiPoly {
        MultiPoly::constant(self.tower, self.vars, &self.tower.rational(&BigRational::from_integer(n)))
    }
    fn ident(&self, name: &str) -> Res<MultiPoly> {
        if self.vars.contains(&name) {
            MultiPoly::var(self.tower, self.vars, name)
        } else {
            Ok(MultiPoly::constant(self.tower, self.vars, &self.tower.gen(name)?))
        }
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a + b
    }
    fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a - b
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a * b
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        -a
    }
    fn div(&self, a: &MultiPoly, b: &MultiPoly) -> Res<MultiPoly> {
        match b.constant_value() {
            Some(c) => Ok(a.scale(&c.inv()?)),
            None => Err(AlgebraError::Inexact("division by a non-constant polynomial".into())),
        }
    }
    fn pow(&self, a: &MultiPoly, e: i64) -> Res<MultiPoly> {
        if e >= 0 {
            return Ok(a.pow(e as u32));
        }
        match a.constant_value() {
            Some(c) => Ok(a.constant_like(&c.powi(e)?)),
            None => Err(AlgebraError::Inexact("negative power of a non-constant polynomial".into())),
        }
    }
}

pub(crate) fn parse_field(tower: &Tower, text: &str) -> Res<FieldElement> {
    run(&FieldDom(tower), text)
}

pub(crate) fn parse_poly(tower: &Tower, vars: &[&str], text: &str) -> Res<MultiPoly> {
    for v in vars {
        if tower.has_generator(v) {
            return Err(AlgebraError::InvalidTower(format!("variable {v} shadows a generator")));
        }
    }
    run(&PolyDom { tower, vars }, text)
}
