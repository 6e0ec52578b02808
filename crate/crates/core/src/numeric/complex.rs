//! Complex numbers over [`BigFloat`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::bigfloat::BigFloat;
use super::elementary::Ctx;
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(BigFloat::from_i64(1, prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.prec();
        Self::new(re, BigFloat::zero(prec))
    }

    pub fn from_q(re: &Q, im: &Q, prec: u32) -> Self {
        Self::new(BigFloat::from_q(re, prec), BigFloat::from_q(im, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    /// `i^k`, exactly.
    pub fn i_pow(k: i64, prec: u32) -> Self {
        let (re, im) = match k.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        Self::new(BigFloat::from_i64(re, prec), BigFloat::from_i64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// Largest of `|re|`, `|im|`: a cheap norm within a factor `sqrt 2`.
    pub fn max_abs(&self) -> BigFloat {
        BigFloat::max_value(self.re.abs(), self.im.abs())
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn mul_i(&self) -> Self {
        Self::new(-&self.im, self.re.clone())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prec());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn arg(&self, ctx: &Ctx) -> BigFloat {
        ctx.atan2(&self.im, &self.re)
    }

    pub fn exp(&self, ctx: &Ctx) -> Self {
        let m = ctx.exp(&self.re);
        let (s, c) = ctx.sin_cos(&self.im);
        Self::new(&m * &c, &m * &s)
    }

    /// Principal logarithm.
    pub fn ln(&self, ctx: &Ctx) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let r = ctx.ln(&self.abs())?;
        Ok(Self::new(r, self.arg(ctx)))
    }

    /// Principal power `self^w = exp(w log self)`.
    pub fn pow(&self, w: &BigComplex, ctx: &Ctx) -> Result<Self> {
        Ok((&self.ln(ctx)? * w).exp(ctx))
    }

    /// Principal power with a rational exponent.
    pub fn pow_q(&self, w: &Q, ctx: &Ctx) -> Result<Self> {
        let w = BigComplex::from_real(ctx.q(w));
        self.pow(&w, ctx)
    }

    pub fn from_polar(r: &BigFloat, theta: &BigFloat, ctx: &Ctx) -> Self {
        let (s, c) = ctx.sin_cos(theta);
        Self::new(r * &c, r * &s)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_sci(&self, digits: usize) -> (String, String) {
        (self.re.to_sci(digits), self.im.to_sci(digits))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or_else(|| self.re.decimal_digits());
        let (re, im) = self.to_sci(d);
        match im.strip_prefix('-') {
            Some(abs) => write!(f, "{re} - {abs}i"),
            None => write!(f, "{re} + {im}i"),
        }
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigComplex({:.20})", self)
    }
}

fn add(a: &BigComplex, b: &BigComplex) -> BigComplex {
    BigComplex::new(&a.re + &b.re, &a.im + &b.im)
}

fn sub(a: &BigComplex, b: &BigComplex) -> BigComplex {
    BigComplex::new(&a.re - &b.re, &a.im - &b.im)
}

fn mul(a: &BigComplex, b: &BigComplex) -> BigComplex {
    BigComplex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
}

fn div(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let d = b.norm_sqr();
    let n = mul(a, &b.conj());
    BigComplex::new(n.re.div(&d), n.im.div(&d))
}

macro_rules! cbinop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&BigComplex> for &BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                $f(self, rhs)
            }
        }
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                $f(&self, &rhs)
            }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                $f(&self, rhs)
            }
        }
    };
}

cbinop!(Add, add, add);
cbinop!(Sub, sub, sub);
cbinop!(Mul, mul, mul);
cbinop!(Div, div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn small(x: &BigComplex, bits: i64) -> bool {
        x.max_abs().magnitude_bits().is_none_or(|m| m < -bits)
    }

    #[test]
    fn field_ops() {
        let p = 160;
        let a = BigComplex::from_q(&qr(1, 3), &q(2), p);
        let b = BigComplex::from_q(&q(-5), &qr(1, 7), p);
        assert!(small(&(&(&a * &b) / &b - &a), 150));
        assert!(small(&(&BigComplex::i(p) * &BigComplex::i(p) + BigComplex::one(p)), 150));
        assert_eq!(BigComplex::i_pow(3, p), -BigComplex::i(p));
    }

    #[test]
    fn exp_log_pow() {
        let ctx = Ctx::new(200);
        let z = BigComplex::from_q(&qr(-3, 2), &qr(7, 3), 200);
        let back = z.exp(&ctx).ln(&ctx).unwrap();
        assert!(small(&(back - &z), 180));
        // e^{i pi} = -1
        let ipi = BigComplex::new(BigFloat::zero(200), ctx.pi());
        assert!(small(&(ipi.exp(&ctx) + BigComplex::one(200)), 180));
        // principal fourth root of -1 is e^{i pi/4}
        let r = BigComplex::from_q(&q(-1), &q(0), 200).pow_q(&qr(1, 4), &ctx).unwrap();
        assert!(small(&(r.powi(4) + BigComplex::one(200)), 180));
        assert!(r.re.signum() > 0 && r.im.signum() > 0);
    }
}
