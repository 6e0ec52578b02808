//! Text front end for operators, polynomials and elements of the Laplace
//! ring.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := number | symbol | 'log' '(' expr ')' | '(' expr ')'
//! exponent := '-'? number | '(' constant expr ')'
//! ```
//!
//! Numbers are read exactly; `0.125` is `1/8`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::laplace::RElement;
use crate::poly::Poly;
use crate::quartic::Quartic;
use crate::rational::{parse_q, q, Q};
use crate::weyl::WeylOperator;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Sym(char),
    Log,
    Op(char),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = parse_q(&s).map_err(|_| Error::Parse { pos: start, msg: format!("bad number {s:?}") })?;
            out.push((Tok::Num(v), start));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if word == "log" {
                out.push((Tok::Log, start));
            } else {
                // runs like "zD" are products of single-letter symbols
                out.extend(word.chars().enumerate().map(|(k, ch)| (Tok::Sym(ch), start + k)));
            }
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// A ring the parser can build values in.
trait Target: Sized + Clone {
    fn constant(c: Q) -> Self;
    fn symbol(name: char, pos: usize) -> Result<Self>;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn raise(self, e: &Q, pos: usize) -> Result<Self>;
    fn as_constant(&self) -> Option<Q>;
    fn log(_arg: Self, pos: usize) -> Result<Self> {
        Err(Error::Parse { pos, msg: "log is not available here".into() })
    }

    fn neg(self) -> Self {
        self.mul(Self::constant(q(-1)))
    }
}

fn int_exponent(e: &Q, pos: usize, allow_negative: bool) -> Result<i64> {
    let bad = || Error::Parse { pos, msg: format!("unsupported exponent {e}") };
    if !e.is_integer() || (!allow_negative && e.is_negative()) {
        return Err(bad());
    }
    e.to_integer().to_i64().filter(|v| v.abs() <= 1 << 16).ok_or_else(bad)
}

struct Parser<'a, T> {
    toks: &'a [(Tok, usize)],
    i: usize,
    _t: std::marker::PhantomData<T>,
}

impl<'a, T: Target> Parser<'a, T> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Op(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Parse { pos: self.pos(), msg: format!("expected {c:?}") })
        }
    }

    fn expr(&mut self) -> Result<T> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.i += 1;
                    acc = acc.add(self.term()?);
                }
                Tok::Op('-') => {
                    self.i += 1;
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<T> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.i += 1;
                    acc = acc.mul(self.unary()?);
                }
                Tok::Op('/') => {
                    self.i += 1;
                    let pos = self.pos();
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.mul(T::constant(Q::one() / c)),
                        Some(_) => return Err(Error::Parse { pos, msg: "division by zero".into() }),
                        None => return Err(Error::Parse { pos, msg: "can only divide by a constant".into() }),
                    }
                }
                Tok::Num(_) | Tok::Sym(_) | Tok::Log | Tok::Op('(') => acc = acc.mul(self.unary()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<T> {
        match self.peek() {
            Tok::Op('-') => {
                self.i += 1;
                Ok(self.unary()?.neg())
            }
            Tok::Op('+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<T> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Op('^') {
            self.i += 1;
            let pos = self.pos();
            let e = self.exponent()?;
            base = base.raise(&e, pos)?;
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Q> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.i += 1;
                Ok(v)
            }
            Tok::Op('-') => {
                self.i += 1;
                Ok(-self.exponent()?)
            }
            Tok::Op('(') => {
                self.i += 1;
                let mut sub = Parser::<Const> { toks: self.toks, i: self.i, _t: std::marker::PhantomData };
                let v = sub.expr()?;
                self.i = sub.i;
                self.expect(')')?;
                Ok(v.0)
            }
            _ => Err(Error::Parse { pos, msg: "expected exponent".into() }),
        }
    }

    fn atom(&mut self) -> Result<T> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.i += 1;
                Ok(T::constant(v))
            }
            Tok::Sym(c) => {
                self.i += 1;
                T::symbol(c, pos)
            }
            Tok::Log => {
                self.i += 1;
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                T::log(arg, pos)
            }
            Tok::Op('(') => {
                self.i += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::End => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
            t => Err(Error::Parse { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

fn run<T: Target>(text: &str) -> Result<T> {
    let toks = tokenize(text)?;
    let mut p = Parser::<T> { toks: &toks, i: 0, _t: std::marker::PhantomData };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::Parse { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(v)
}

/// Rational constants, used for exponents.
#[derive(Clone)]
struct Const(Q);

impl Target for Const {
    fn constant(c: Q) -> Self {
        Const(c)
    }
    fn symbol(name: char, pos: usize) -> Result<Self> {
        Err(Error::Parse { pos, msg: format!("exponent must be constant, found {name:?}") })
    }
    fn add(self, o: Self) -> Self {
        Const(self.0 + o.0)
    }
    fn mul(self, o: Self) -> Self {
        Const(self.0 * o.0)
    }
    fn raise(self, e: &Q, pos: usize) -> Result<Self> {
        let k = int_exponent(e, pos, true)?;
        if self.0.is_zero() && k < 0 {
            return Err(Error::Parse { pos, msg: "division by zero".into() });
        }
        Ok(Const(num_traits::pow::Pow::pow(&self.0, k as i32)))
    }
    fn as_constant(&self) -> Option<Q> {
        Some(self.0.clone())
    }
}

impl Target for WeylOperator {
    fn constant(c: Q) -> Self {
        WeylOperator::constant(c)
    }
    fn symbol(name: char, pos: usize) -> Result<Self> {
        match name {
            'z' => Ok(WeylOperator::z()),
            'D' => Ok(WeylOperator::d()),
            'T' => Ok(WeylOperator::theta()),
            _ => Err(Error::Parse { pos, msg: format!("unknown symbol {name:?}; expected z, D or T") }),
        }
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn raise(self, e: &Q, pos: usize) -> Result<Self> {
        let k = int_exponent(e, pos, true)?;
        if k >= 0 {
            return Ok(WeylOperator::pow(&self, k as u32));
        }
        // negative powers only for monomials in z
        let terms: Vec<_> = self.terms().collect();
        match terms.as_slice() {
            [(i, 0, c)] if c.is_one() && *i != 0 => Ok(WeylOperator::monomial(Q::one(), i * k, 0)),
            _ => Err(Error::Parse { pos, msg: "negative powers are only allowed for z".into() }),
        }
    }
    fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        let terms: Vec<_> = self.terms().collect();
        match terms.as_slice() {
            [(0, 0, c)] => Some((*c).clone()),
            _ => None,
        }
    }
}

/// Polynomial in one named variable.
#[derive(Clone)]
struct NamedPoly {
    var: char,
    p: Poly,
}

thread_local! {
    static POLY_VAR: std::cell::Cell<char> = const { std::cell::Cell::new('x') };
}

impl Target for NamedPoly {
    fn constant(c: Q) -> Self {
        NamedPoly { var: POLY_VAR.get(), p: Poly::constant(c) }
    }
    fn symbol(name: char, pos: usize) -> Result<Self> {
        let var = POLY_VAR.get();
        if name != var {
            return Err(Error::Parse { pos, msg: format!("unknown symbol {name:?}; the variable is {var:?}") });
        }
        Ok(NamedPoly { var, p: Poly::t() })
    }
    fn add(self, o: Self) -> Self {
        NamedPoly { var: self.var, p: self.p + o.p }
    }
    fn mul(self, o: Self) -> Self {
        NamedPoly { var: self.var, p: &self.p * &o.p }
    }
    fn raise(self, e: &Q, pos: usize) -> Result<Self> {
        let k = int_exponent(e, pos, false)?;
        let p = (0..k).fold(Poly::one(), |acc, _| &acc * &self.p);
        Ok(NamedPoly { var: self.var, p })
    }
    fn as_constant(&self) -> Option<Q> {
        match self.p.degree() {
            None => Some(Q::zero()),
            Some(0) => Some(self.p.coeff(0)),
            _ => None,
        }
    }
}

/// Finite sums of `c z^a log(z)^b` with rational `c`.
#[derive(Clone, Debug, PartialEq)]
struct LogPoly(BTreeMap<(Q, u32), Q>);

impl LogPoly {
    fn single(c: Q, a: Q, b: u32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((a, b), c);
        }
        LogPoly(m)
    }
}

impl Target for LogPoly {
    fn constant(c: Q) -> Self {
        LogPoly::single(c, Q::zero(), 0)
    }
    fn symbol(name: char, pos: usize) -> Result<Self> {
        match name {
            'z' => Ok(LogPoly::single(Q::one(), Q::one(), 0)),
            _ => Err(Error::Parse { pos, msg: format!("unknown symbol {name:?}; expected z or log(z)") }),
        }
    }
    fn add(mut self, o: Self) -> Self {
        for (k, c) in o.0 {
            let e = self.0.entry(k.clone()).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                self.0.remove(&k);
            }
        }
        self
    }
    fn mul(self, o: Self) -> Self {
        let mut out = LogPoly(BTreeMap::new());
        for ((a1, b1), c1) in &self.0 {
            for ((a2, b2), c2) in &o.0 {
                out = out.add(LogPoly::single(c1 * c2, a1 + a2, b1 + b2));
            }
        }
        out
    }
    fn raise(self, e: &Q, pos: usize) -> Result<Self> {
        if let [((a, b), c)] = self.0.iter().collect::<Vec<_>>().as_slice() {
            if c.is_one() && *b == 0 {
                return Ok(LogPoly::single(Q::one(), a * e, 0));
            }
        }
        let k = int_exponent(e, pos, false)?;
        Ok((0..k).fold(LogPoly::constant(Q::one()), |acc, _| acc.mul(self.clone())))
    }
    fn as_constant(&self) -> Option<Q> {
        match self.0.iter().collect::<Vec<_>>().as_slice() {
            [] => Some(Q::zero()),
            [((a, 0), c)] if a.is_zero() => Some((*c).clone()),
            _ => None,
        }
    }
    fn log(arg: Self, pos: usize) -> Result<Self> {
        if arg == LogPoly::single(Q::one(), Q::one(), 0) {
            Ok(LogPoly::single(Q::one(), Q::zero(), 1))
        } else {
            Err(Error::Parse { pos, msg: "only log(z) is supported".into() })
        }
    }
}

/// Parses an operator in `z`, `D` (the derivative) and `T` (`z*D`).
pub fn parse_operator(text: &str) -> Result<WeylOperator> {
    run::<WeylOperator>(text)
}

/// Parses a univariate polynomial in `var`.
pub fn parse_polynomial(text: &str, var: char) -> Result<Poly> {
    POLY_VAR.set(var);
    run::<NamedPoly>(text).map(|p| p.p)
}

/// Parses a monic quartic in `x`, e.g. `"x^4 - x^2 + x"`.
pub fn parse_quartic(text: &str) -> Result<Quartic> {
    Quartic::from_poly(&parse_polynomial(text, 'x')?)
}

/// Parses a rational constant expression such as `"3/2"` or `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Q> {
    run::<Const>(text).map(|c| c.0)
}

/// Parses a sum of `c*z^(a)*log(z)^b` terms.
pub fn parse_r_element(text: &str) -> Result<RElement> {
    let lp = run::<LogPoly>(text)?;
    let mut out = RElement::zero();
    for ((a, b), c) in lp.0 {
        out = out + RElement::rational_monomial(c, a, b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn operators() {
        let z = WeylOperator::z();
        let d = WeylOperator::d();
        let t = WeylOperator::theta();
        assert_eq!(parse_operator("z*D + 1").unwrap(), z.clone() * d.clone() + WeylOperator::one());
        assert_eq!(
            parse_operator("(z-1)*D - z").unwrap(),
            (z.clone() - WeylOperator::one()) * d.clone() - z.clone()
        );
        assert_eq!(parse_operator("T^3 - z*T^2").unwrap(), t.pow(3) - z.clone() * t.pow(2));
        assert_eq!(parse_operator("2zD").unwrap(), (z.clone() * d.clone()).scale(&q(2)));
        assert_eq!(parse_operator("D z").unwrap(), d.clone() * z.clone());
        assert_eq!(parse_operator("T/4 - 0.5").unwrap(), t.scale(&qr(1, 4)) - WeylOperator::constant(qr(1, 2)));
        let neg = parse_operator("-1/2*z^(-2)*D").unwrap();
        assert_eq!(neg, WeylOperator::monomial(qr(-1, 2), -2, 1));
        assert!(neg.is_punctured());
    }

    #[test]
    fn operator_errors() {
        assert!(matches!(parse_operator("z + x"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_operator("z *"), Err(Error::Parse { pos: 3, .. })));
        assert!(parse_operator("D^(-1)").is_err());
        assert!(parse_operator("z/D").is_err());
        assert!(parse_operator("(z").is_err());
        assert!(parse_operator("z^(1/2)").is_err());
    }

    #[test]
    fn operator_round_trip() {
        for text in ["z*D - D - z", "-1/2*z^(-2)*D", "z^3*D^2 + 7/3*D - 1"] {
            let op = parse_operator(text).unwrap();
            assert_eq!(op.to_string(), text);
            assert_eq!(parse_operator(&op.to_string()).unwrap(), op);
        }
    }

    #[test]
    fn polynomials() {
        let f = parse_quartic("x^4 - x^2 + x").unwrap();
        assert_eq!(f.params(), [q(0), q(1), q(-1), q(0)]);
        let f = parse_quartic("x^4 + x").unwrap();
        assert_eq!(f.params(), [q(0), q(0), q(-1), q(0)]);
        let f = parse_quartic("x^4 - 2x^2 + x/4").unwrap();
        assert_eq!(f.params(), [q(0), q(2), qr(-1, 4), q(0)]);
        assert_eq!(parse_polynomial("y^3", 'y').unwrap(), Poly::from_i64(&[0, 0, 0, 1]));
        assert!(parse_polynomial("y^3", 'x').is_err());
        assert!(parse_quartic("2x^4").is_err());
        assert!(parse_polynomial("x^(-1)", 'x').is_err());
        let p = parse_polynomial("(t - 1/2)^2 (t+3)", 't').unwrap();
        assert_eq!(parse_polynomial(&p.to_string_var("t"), 't').unwrap(), p);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), qr(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), qr(-1, 4));
        assert_eq!(parse_rational("2^(-3)").unwrap(), qr(1, 8));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn r_elements() {
        let e = parse_r_element("3*z^(-1/2)*log(z)^2 - 1").unwrap();
        assert_eq!(e.to_string(), "3*z^(-1/2)*log(z)^2 - 1");
        let e2 = parse_r_element("z^(1/3) z^(2/3) log(z)").unwrap();
        assert_eq!(e2, RElement::rational_monomial(q(1), q(1), 1));
        assert!(parse_r_element("log(z+1)").is_err());
        assert!(parse_r_element("D").is_err());
    }
}
