//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, q_int, Q};

/// Polynomial `c[0] + c[1] t + ...`; no trailing zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    pub fn monomial(c: Q, deg: usize) -> Self {
        let mut v = vec![Q::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    /// `lead * prod (t - r)` over the given roots.
    pub fn from_roots(lead: Q, roots: &[Q]) -> Self {
        roots.iter().fold(Poly::constant(lead), |acc, r| {
            acc * Poly::new(vec![-r.clone(), Q::one()])
        })
    }

    /// Falling factorial `t (t-1) ... (t-m+1)`.
    pub fn falling(m: u32) -> Self {
        let roots: Vec<Q> = (0..m as i64).map(q).collect();
        Poly::from_roots(Q::one(), &roots)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.leading();
        self.scale(&(Q::one() / l))
    }

    /// `P(a t + b)`.
    pub fn compose_linear(&self, a: &Q, b: &Q) -> Poly {
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * lin.clone() + Poly::constant(c.clone()))
    }

    /// Composition `P(g(t))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * g.clone() + Poly::constant(c.clone()))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Yun's algorithm: monic squarefree factors `f_1, f_2, ...` with
    /// `self = lead * f_1 * f_2^2 * f_3^3 ...`. Entry `i` holds `f_{i+1}`.
    pub fn squarefree_factors(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c - b.derivative();
        loop {
            let g = b.gcd(&d);
            out.push(g.clone());
            b = b.div_rem(&g).0;
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_rem(&g).0;
            d = c - b.derivative();
        }
        // trailing trivial factors carry no information
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    /// Integer polynomial proportional to `self` with coprime coefficients.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * q_int(&den)).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// All roots with multiplicity, provided every root is rational.
    pub fn rational_roots(&self) -> Result<Vec<(Q, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidParams("zero polynomial has no root list".into()));
        }
        let mut rest = self.clone();
        let mut roots = Vec::new();
        let mut zero_mult = 0;
        while rest.coeff(0).is_zero() && rest.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(&Poly::t()).0;
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Q::zero(), zero_mult));
        }
        if rest.degree().unwrap_or(0) == 0 {
            return Ok(roots);
        }
        let ints = rest.primitive_integer();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let num_divs = divisors(&a0);
        let den_divs = divisors(&an);
        for p in &num_divs {
            for d in &den_divs {
                if !p.gcd(d).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let cand = Q::new(p * sign, d.clone());
                    let lin = Poly::new(vec![-cand.clone(), Q::one()]);
                    let mut mult = 0;
                    loop {
                        let (qt, r) = rest.div_rem(&lin);
                        if !r.is_zero() {
                            break;
                        }
                        rest = qt;
                        mult += 1;
                    }
                    if mult > 0 {
                        roots.push((cand, mult));
                    }
                }
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            return Err(Error::IrrationalRoots);
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(roots)
    }

    /// Text form in the given variable, e.g. `t^3 - 1/2*t + 2`.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&fmt_q(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), mono));
            }
        }
        out
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &(&i * &i) <= n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let other = n / &i;
            if other != i {
                out.push(other);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.clone() + rhs.clone()
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.clone() * rhs.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn arithmetic_and_eval() {
        let p = Poly::from_i64(&[1, 2, 3]);
        assert_eq!(p.eval(&q(2)), q(17));
        assert_eq!((p.clone() - p.clone()), Poly::zero());
        assert_eq!(p.derivative(), Poly::from_i64(&[2, 6]));
        assert_eq!(p.compose_linear(&q(1), &q(1)), Poly::from_i64(&[6, 8, 3]));
        assert_eq!(Poly::falling(3), Poly::from_i64(&[0, 2, -3, 1]));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_roots(q(2), &[q(1), q(2), qr(1, 3)]);
        let b = Poly::from_roots(q(1), &[q(2), q(5)]);
        let (qt, r) = a.div_rem(&b);
        assert_eq!(qt * b.clone() + r, a);
        assert_eq!(a.gcd(&b), Poly::from_roots(q(1), &[q(2)]));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let p = Poly::from_roots(qr(3, 2), &[q(0), q(0), qr(-1, 2), qr(2, 3), qr(2, 3)]);
        let roots = p.rational_roots().unwrap();
        assert_eq!(roots, vec![(qr(-1, 2), 1), (q(0), 2), (qr(2, 3), 2)]);
        let irr = Poly::from_i64(&[-2, 0, 1]);
        assert_eq!(irr.rational_roots(), Err(Error::IrrationalRoots));
    }

    #[test]
    fn squarefree() {
        let p = Poly::from_roots(q(1), &[q(1), q(1), q(2), q(3), q(3), q(3)]);
        let f = p.squarefree_factors();
        assert_eq!(f.len(), 3);
        assert_eq!(f[0], Poly::from_roots(q(1), &[q(2)]));
        assert_eq!(f[1], Poly::from_roots(q(1), &[q(1)]));
        assert_eq!(f[2], Poly::from_roots(q(1), &[q(3)]));
        assert!(!p.is_squarefree());
        assert!(Poly::from_roots(q(1), &[q(1), q(2)]).is_squarefree());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_i64(&[0, 1, -1, 0, 1]).to_string_var("x"), "x^4 - x^2 + x");
        assert_eq!(Poly::new(vec![qr(23, 256), qr(-1, 2), qr(1, 2), q(1)]).to_string_var("y"), "y^3 + 1/2*y^2 - 1/2*y + 23/256");
    }
}
