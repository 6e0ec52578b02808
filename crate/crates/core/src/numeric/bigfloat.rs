//! Binary floating point on top of `BigInt`: value = `mant * 2^exp`, with the
//! mantissa rounded to `prec` bits after every operation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::rational::Q;

#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

/// `m / 2^s`, rounded to nearest (ties away from zero).
pub(crate) fn round_shift(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let (sign, mag) = (m.sign(), m.magnitude());
    let mut q = mag >> s;
    if mag.bit(s - 1) {
        q += 1u32;
    }
    BigInt::from_biguint(if q.is_zero() { Sign::NoSign } else { sign }, q)
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        BigFloat { mant: v.clone(), exp: 0, prec }.normalize()
    }

    /// `2^e`, exactly.
    pub fn pow2(e: i64, prec: u32) -> Self {
        BigFloat { mant: BigInt::from(1), exp: e, prec }
    }

    pub fn from_q(x: &Q, prec: u32) -> Self {
        let n = Self::from_bigint(x.numer(), prec + 8);
        let d = Self::from_bigint(x.denom(), prec + 8);
        n.div(&d).with_prec(prec)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        BigFloat { mant: BigInt::from(m) * sign, exp: e, prec }.normalize()
    }

    /// Builds from a fixed-point integer `v * 2^-wp`.
    pub(crate) fn from_fixed(v: BigInt, wp: u32, prec: u32) -> Self {
        BigFloat { mant: v, exp: -(wp as i64), prec }.normalize()
    }

    /// `round(self * 2^wp)`.
    pub(crate) fn to_fixed(&self, wp: u32) -> BigInt {
        let shift = self.exp + wp as i64;
        if shift >= 0 {
            &self.mant << (shift as u64)
        } else {
            round_shift(&self.mant, (-shift) as u64)
        }
    }

    fn normalize(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let excess = self.mant.bits() as i64 - self.prec as i64;
        if excess > 0 {
            self.mant = round_shift(&self.mant, excess as u64);
            self.exp += excess;
        }
        self
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Rounds (or widens) to a new precision.
    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    /// Position of the leading bit: `|x|` lies in `[2^(m-1), 2^m)`.
    /// Returns `None` for zero.
    pub fn magnitude_bits(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    /// Multiplies by `2^k`, exactly.
    pub fn mul_2k(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = round_shift(&self.mant, drop as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + drop;
        // split the scaling so that intermediate powers stay finite
        let e = e.clamp(-4000, 4000) as i32;
        let half = e / 2;
        top * 2f64.powi(half) * 2f64.powi(e - half)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let prec = self.prec.max(o.prec);
        if o.is_zero() {
            return self.clone().with_prec(prec);
        }
        if self.is_zero() {
            return o.clone().with_prec(prec);
        }
        let ta = self.magnitude_bits().unwrap();
        let tb = o.magnitude_bits().unwrap();
        let gap = prec as i64 + 4;
        if ta > tb + gap {
            return self.clone().with_prec(prec);
        }
        if tb > ta + gap {
            return o.clone().with_prec(prec);
        }
        let e = self.exp.min(o.exp);
        let m = (&self.mant << ((self.exp - e) as u64)) + (&o.mant << ((o.exp - e) as u64));
        BigFloat { mant: m, exp: e, prec }.normalize()
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let prec = self.prec.max(o.prec);
        BigFloat { mant: &self.mant * &o.mant, exp: self.exp + o.exp, prec }.normalize()
    }

    /// Division; panics on a zero divisor.
    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 3 + o.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << (shift as u64);
        BigFloat { mant: num / &o.mant, exp: self.exp - o.exp - shift, prec }.normalize()
    }

    /// Square root; panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * self.prec as i64 + 4;
        let mut s = (want - self.mant.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = (&self.mant << (s as u64)).sqrt();
        BigFloat { mant: m, exp: (self.exp - s) / 2, prec: self.prec }.normalize()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::from_i64(1, self.prec);
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        match self.sub_ref(o).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn max_value(a: Self, b: Self) -> Self {
        if a.cmp_value(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    /// Rounds to the nearest integer.
    pub fn round_int(&self) -> BigInt {
        self.to_fixed(0)
    }

    /// Scientific notation with `digits` significant decimal digits,
    /// e.g. `3.5418150251780138428897733150e0`.
    pub fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let mag = self.abs();
        let log10 = (mag.magnitude_bits().unwrap() as f64) * std::f64::consts::LOG10_2;
        let mut e10 = log10.floor() as i64;
        let work = self.prec + 16 + (digits as f64 * 3.33) as u32;
        let text = loop {
            let shift = digits as i64 - 1 - e10;
            let ten = BigFloat::from_bigint(&num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize), work);
            let scaled = if shift >= 0 {
                mag.clone().with_prec(work).mul_ref(&ten)
            } else {
                mag.clone().with_prec(work).div(&ten)
            };
            let s = scaled.round_int().to_string();
            match s.len().cmp(&digits) {
                Ordering::Greater => e10 += 1,
                Ordering::Less => e10 -= 1,
                Ordering::Equal => break s,
            }
        };
        let (head, tail) = text.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// Decimal digits carried by the precision (`prec * log10 2`).
    pub fn decimal_digits(&self) -> usize {
        ((self.prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or_else(|| self.decimal_digits());
        f.write_str(&self.to_sci(d))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, prec={})", self.to_sci(20), self.prec)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                self.$imp(rhs)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$imp(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                (&self).$imp(rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        self.neg_ref()
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn rational_round_trip() {
        let x = BigFloat::from_q(&qr(1, 3), 200);
        let three = BigFloat::from_i64(3, 200);
        let one = BigFloat::from_i64(1, 200);
        let err = (&x * &three - &one).abs();
        assert!(err.magnitude_bits().is_none_or(|m| m < -195));
        assert_eq!(BigFloat::from_q(&qr(-7, 4), 64).to_f64(), -1.75);
    }

    #[test]
    fn f64_exact() {
        for v in [1.0, -0.1, 3.5e-300, 1e300, 123456.789] {
            assert_eq!(BigFloat::from_f64(v, 64).to_f64(), v);
        }
    }

    #[test]
    fn sqrt_two() {
        let two = BigFloat::from_i64(2, 256);
        let r = two.sqrt();
        let err = (&r * &r - &two).abs();
        assert!(err.magnitude_bits().is_none_or(|m| m < -250));
        assert_eq!(r.to_sci(30), "1.41421356237309504880168872421e0");
    }

    #[test]
    fn decimal_output() {
        assert_eq!(BigFloat::from_q(&qr(1, 8), 64).to_sci(3), "1.25e-1");
        assert_eq!(BigFloat::from_i64(-1000, 64).to_sci(2), "-1.0e3");
        assert_eq!(BigFloat::from_i64(7, 64).to_sci(1), "7e0");
    }

    #[test]
    fn negligible_addend() {
        let a = BigFloat::from_i64(1, 64);
        let b = BigFloat::pow2(-500, 64);
        assert_eq!(&a + &b, a);
        assert!(a < &a + &BigFloat::pow2(-60, 64));
    }

    #[test]
    fn abs_and_sign() {
        assert_eq!(BigFloat::from_i64(-5, 32).abs(), BigFloat::from_i64(5, 32));
        assert_eq!(BigFloat::zero(32).abs().signum(), 0);
    }
}
