//! Exact rational helpers shared by the symbolic layers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in reduced form.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// `"num/den"` for non-integers, plain integer text otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"3"`, `"-7/4"`, `"0.125"` or `"1e-3"` exactly.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let err = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {s:?}") };
    if s.is_empty() {
        return Err(err("empty number"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(|| err("bad numerator"))?;
        let d = parse_decimal(d.trim()).ok_or_else(|| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal(s).ok_or_else(|| err("bad number"))
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp10) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = q_int(&n);
    if shift >= 0 {
        v *= q_int(&num_traits::pow(ten, shift as usize));
    } else {
        v /= q_int(&num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -v } else { v })
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Rising factorial `x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: &Q, n: u64) -> Q {
    let mut acc = Q::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += Q::one();
    }
    acc
}

pub fn qpow(x: &Q, n: u64) -> Q {
    num_traits::pow(x.clone(), n as usize)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Floor of a rational as an `i64`.
pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("rational floor out of i64 range")
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn q_to_f64(x: &Q) -> f64 {
    // Scale down big operands so the quotient stays in range.
    let n = x.numer();
    let d = x.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb.max(db) - 900).max(0);
    let nf = (n >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let df = (d >> shift as usize).to_f64().unwrap_or(f64::NAN);
    if df == 0.0 {
        return if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nf / df
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(parse_q("0.25").unwrap(), qr(1, 4));
        assert_eq!(parse_q("-7/4").unwrap(), qr(-7, 4));
        assert_eq!(parse_q("1e-3").unwrap(), qr(1, 1000));
        assert_eq!(parse_q("1.5/3").unwrap(), qr(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&qr(7, 3), 0), q(1));
        assert_eq!(pochhammer(&qr(1, 4), 2), qr(5, 16));
        assert_eq!(pochhammer(&qr(-1, 4), 2), qr(-3, 16));
        assert_eq!(pochhammer(&q(-2), 3), q(0));
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_q(&qr(-3, 6)), "-1/2");
        assert_eq!(fmt_q(&q(5)), "5");
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(frac(&qr(-1, 4)), qr(3, 4));
    }
}
