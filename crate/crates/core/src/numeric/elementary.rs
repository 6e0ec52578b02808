//! Elementary functions at a fixed working precision.
//!
//! All kernels run on fixed-point integers scaled by `2^wp` where
//! `wp = prec + GUARD`; constants are computed once per [`Ctx`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{round_shift, BigFloat};
use crate::error::{Error, Result};

const GUARD: u32 = 96;

/// Precision context carrying `pi` and `ln 2` at working precision.
#[derive(Clone, Debug)]
pub struct Ctx {
    prec: u32,
    wp: u32,
    pi: BigInt,
    ln2: BigInt,
}

fn fmul(a: &BigInt, b: &BigInt, wp: u32) -> BigInt {
    round_shift(&(a * b), wp as u64)
}

/// `sum_k (-1)^k / ((2k+1) n^(2k+1))` in fixed point.
fn atan_inv(n: u64, wp: u32) -> BigInt {
    let n2 = BigInt::from(n * n);
    let mut power = (BigInt::one() << wp) / n;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power = &power / &n2;
        if power.is_zero() {
            break sum;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
}

/// `atanh(u)` for a small fixed-point `u`.
fn atanh_fixed(u: &BigInt, wp: u32) -> BigInt {
    let u2 = fmul(u, u, wp);
    let mut p = u.clone();
    let mut sum = u.clone();
    let mut k = 1u64;
    loop {
        p = fmul(&p, &u2, wp);
        if p.is_zero() {
            break sum;
        }
        sum += &p / (2 * k + 1);
        k += 1;
    }
}

impl Ctx {
    pub fn new(prec: u32) -> Self {
        let wp = prec + GUARD;
        let pi = 16 * atan_inv(5, wp) - 4 * atan_inv(239, wp);
        // ln 2 = 2 atanh(1/3)
        let third = (BigInt::one() << wp) / 3;
        let ln2 = 2 * atanh_fixed(&third, wp);
        Ctx { prec, wp, pi, ln2 }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn num(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn q(&self, x: &crate::rational::Q) -> BigFloat {
        BigFloat::from_q(x, self.prec)
    }

    fn out(&self, v: BigInt) -> BigFloat {
        BigFloat::from_fixed(v, self.wp, self.prec)
    }

    pub fn pi(&self) -> BigFloat {
        self.out(self.pi.clone())
    }

    pub fn ln2(&self) -> BigFloat {
        self.out(self.ln2.clone())
    }

    pub fn exp(&self, x: &BigFloat) -> BigFloat {
        let wp = self.wp;
        if x.is_zero() {
            return self.num(1);
        }
        let xf = x.to_f64();
        if xf < -1e15 {
            return BigFloat::zero(self.prec);
        }
        assert!(xf < 1e15, "exp argument out of range");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let r = x.to_fixed(wp) - &self.ln2 * k;
        const HALVINGS: u32 = 8;
        let r = round_shift(&r, HALVINGS as u64);
        let one = BigInt::one() << wp;
        let mut term = one.clone();
        let mut sum = one;
        let mut n = 1u64;
        loop {
            term = fmul(&term, &r, wp) / n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..HALVINGS {
            sum = fmul(&sum, &sum, wp);
        }
        self.out(sum).mul_2k(k)
    }

    pub fn ln(&self, x: &BigFloat) -> Result<BigFloat> {
        if x.signum() <= 0 {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        let wp = self.wp;
        let mut e = x.magnitude_bits().unwrap() - 1;
        let mut m = x.mul_2k(-e).to_fixed(wp);
        let one = BigInt::one() << wp;
        // sqrt(2) in fixed point
        let sqrt2 = (BigInt::from(2) << (2 * wp as u64)).sqrt_fixed();
        if m > sqrt2 {
            m = round_shift(&m, 1);
            e += 1;
        }
        let u = ((&m - &one) << wp) / (&m + &one);
        let v = 2 * atanh_fixed(&u, wp) + &self.ln2 * e;
        Ok(self.out(v))
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self, x: &BigFloat) -> (BigFloat, BigFloat) {
        let wp = self.wp;
        if x.is_zero() {
            return (BigFloat::zero(self.prec), self.num(1));
        }
        let half_pi = &self.pi >> 1u32;
        let k = (x.to_f64() / std::f64::consts::FRAC_PI_2).round() as i64;
        let r = x.to_fixed(wp) - &half_pi * k;
        let one = BigInt::one() << wp;
        let mut term = one.clone();
        let mut s = BigInt::zero();
        let mut c = one;
        let mut n = 1u64;
        loop {
            term = fmul(&term, &r, wp) / n;
            if term.is_zero() {
                break;
            }
            match n % 4 {
                1 => s += &term,
                2 => c -= &term,
                3 => s -= &term,
                _ => c += &term,
            }
            n += 1;
        }
        let (s, c) = match k.rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        };
        (self.out(s), self.out(c))
    }

    pub fn sin(&self, x: &BigFloat) -> BigFloat {
        self.sin_cos(x).0
    }

    pub fn cos(&self, x: &BigFloat) -> BigFloat {
        self.sin_cos(x).1
    }

    pub fn atan(&self, x: &BigFloat) -> BigFloat {
        if x.is_zero() {
            return BigFloat::zero(self.prec);
        }
        let wp = self.wp;
        let one = BigInt::one() << wp;
        let neg = x.is_negative();
        let ax = x.abs();
        let big = ax.magnitude_bits().unwrap() > 1 || ax.to_f64() > 1.0;
        let mut t = if big {
            (&one << wp) / ax.to_fixed(wp).max(BigInt::one())
        } else {
            ax.to_fixed(wp)
        };
        const REDUCTIONS: u32 = 3;
        for _ in 0..REDUCTIONS {
            let root = ((&one << wp) + &t * &t).sqrt_fixed();
            t = (&t << wp) / (&one + root);
        }
        let t2 = fmul(&t, &t, wp);
        let mut p = t.clone();
        let mut sum = t;
        let mut k = 1u64;
        loop {
            p = fmul(&p, &t2, wp);
            if p.is_zero() {
                break;
            }
            let term = &p / (2 * k + 1);
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
        let mut v = sum << REDUCTIONS;
        if big {
            v = (&self.pi >> 1u32) - v;
        }
        if neg {
            v = -v;
        }
        self.out(v)
    }

    /// Angle of `(x, y)` in `(-pi, pi]`; zero for the origin.
    pub fn atan2(&self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        if x.is_zero() {
            return match y.signum() {
                0 => BigFloat::zero(self.prec),
                s => self.pi().mul_2k(-1) * self.num(s as i64),
            };
        }
        let base = self.atan(&y.div(x));
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - self.pi()
        } else {
            base + self.pi()
        }
    }

    /// `x^y` for `x > 0`.
    pub fn powf(&self, x: &BigFloat, y: &BigFloat) -> Result<BigFloat> {
        Ok(self.exp(&(self.ln(x)? * y)))
    }
}

trait SqrtFixed {
    fn sqrt_fixed(&self) -> BigInt;
}

impl SqrtFixed for BigInt {
    fn sqrt_fixed(&self) -> BigInt {
        num_integer::Roots::sqrt(&self.abs())
    }
}
