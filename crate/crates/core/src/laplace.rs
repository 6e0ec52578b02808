//! Formal Laplace transform on the ring of finite sums `c z^a log(z)^b`
//! (`a` rational, `b >= 0`), with gamma values kept as exact symbols.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::gamma::gamma_q;
use crate::numeric::{BigFloat, Ctx};
use crate::rational::{binomial, floor_i64, fmt_q, q, Q};

/// Rational combination of symbols `Gamma^(m)(x)` with `x` in `(0, 1]`.
///
/// The symbol `Gamma^(0)(1) = 1` doubles as the unit, so rational constants
/// are ordinary elements.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct GammaExpr {
    terms: BTreeMap<(u32, Q), Q>,
}

impl GammaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut g = Self::zero();
        g.add_raw(0, Q::one(), c);
        g
    }

    fn add_raw(&mut self, m: u32, x: Q, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (m, x);
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `Gamma^(m)(x)` rewritten with arguments in `(0, 1]` via
    /// `Gamma^(m)(x+1) = x Gamma^(m)(x) + m Gamma^(m-1)(x)`.
    pub fn symbol(m: u32, x: &Q) -> Result<Self> {
        thread_local! {
            static CACHE: std::cell::RefCell<HashMap<(u32, Q), GammaExpr>> = RefCell::new(HashMap::new());
        }
        if let Some(g) = CACHE.with(|c| c.borrow().get(&(m, x.clone())).cloned()) {
            return Ok(g);
        }
        let g = Self::symbol_uncached(m, x)?;
        CACHE.with(|c| {
            let mut c = c.borrow_mut();
            if c.len() > 1 << 16 {
                c.clear();
            }
            c.insert((m, x.clone()), g.clone());
        });
        Ok(g)
    }

    fn symbol_uncached(m: u32, x: &Q) -> Result<Self> {
        if x.is_integer() && !x.is_positive() {
            return Err(Error::GammaPole(fmt_q(x)));
        }
        // x = y + k, y in (0, 1]
        let mut k = floor_i64(x);
        if x.is_integer() {
            k -= 1;
        }
        let y = x - Q::from_integer(BigInt::from(k));
        // cur[j][i]: coefficient of Gamma^(i)(y) in Gamma^(j)(y + offset)
        let m = m as usize;
        let mut cur: Vec<Vec<Q>> = (0..=m)
            .map(|j| {
                let mut v = vec![Q::zero(); m + 1];
                v[j] = Q::one();
                v
            })
            .collect();
        let axpy = |acc: &mut [Q], a: &Q, v: &[Q]| {
            for (s, t) in acc.iter_mut().zip(v) {
                if !t.is_zero() {
                    *s += a * t;
                }
            }
        };
        if k > 0 {
            // integer numerators over the common denominator den(y)^k
            let (p, d) = (y.numer().clone(), y.denom().clone());
            let mut num: Vec<Vec<BigInt>> = (0..=m)
                .map(|j| (0..=m).map(|i| BigInt::from((i == j) as u8)).collect())
                .collect();
            for step in 0..k {
                let u = &p + &d * step;
                let mut next: Vec<Vec<BigInt>> = num.iter().map(|row| row.iter().map(|v| v * &u).collect()).collect();
                for j in 1..=m {
                    let f = &d * j;
                    for i in 0..=m {
                        if !num[j - 1][i].is_zero() {
                            next[j][i] += &num[j - 1][i] * &f;
                        }
                    }
                }
                num = next;
            }
            let den = num_traits::pow(d, k as usize);
            cur = num
                .into_iter()
                .map(|row| row.into_iter().map(|v| Q::new(v, den.clone())).collect())
                .collect();
        } else {
            for step in 1..=(-k) {
                // Gamma^(j)(u) = (Gamma^(j)(u+1) - j Gamma^(j-1)(u)) / u
                let u = &y - q(step);
                let inv = Q::one() / &u;
                let mut next: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
                for j in 0..=m {
                    let mut g = vec![Q::zero(); m + 1];
                    axpy(&mut g, &inv, &cur[j]);
                    if j > 0 {
                        axpy(&mut g, &(-q(j as i64) * &inv), &next[j - 1]);
                    }
                    next.push(g);
                }
                cur = next;
            }
        }
        let mut out = GammaExpr::zero();
        for (i, c) in cur.pop().unwrap().into_iter().enumerate() {
            out.add_raw(i as u32, y.clone(), c);
        }
        Ok(out)
    }

    /// `Gamma(x)` as a normalized expression.
    pub fn gamma(x: &Q) -> Result<Self> {
        Self::symbol(0, x)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, if no symbol other than the unit occurs.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&(0, Q::one())).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GammaExpr { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// `(m, x, coefficient)` triples in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q, &Q)> {
        self.terms.iter().map(|((m, x), c)| (*m, x, c))
    }

    /// Numeric value; only plain gamma symbols are supported.
    pub fn eval(&self, ctx: &Ctx) -> Result<BigFloat> {
        let mut acc = BigFloat::zero(ctx.prec());
        for ((m, x), c) in &self.terms {
            if *m > 0 {
                return Err(Error::GammaDerivative(format!("Gamma^({m})({})", fmt_q(x))));
            }
            acc = acc + gamma_q(x, ctx)? * ctx.q(c);
        }
        Ok(acc)
    }
}

fn symbol_name(m: u32, x: &Q) -> String {
    if m == 0 {
        format!("Gamma({})", fmt_q(x))
    } else {
        format!("Gamma^({m})({})", fmt_q(x))
    }
}

impl fmt::Display for GammaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for ((m, x), c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            out.push_str(match (out.is_empty(), neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            let unit = *m == 0 && x.is_one();
            match (unit, a.is_one()) {
                (true, _) => out.push_str(&fmt_q(&a)),
                (false, true) => out.push_str(&symbol_name(*m, x)),
                (false, false) => out.push_str(&format!("{}*{}", fmt_q(&a), symbol_name(*m, x))),
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for GammaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GammaExpr({self})")
    }
}

impl Add for GammaExpr {
    type Output = GammaExpr;
    fn add(mut self, rhs: GammaExpr) -> GammaExpr {
        for ((m, x), c) in rhs.terms {
            self.add_raw(m, x, c);
        }
        self
    }
}

impl Neg for GammaExpr {
    type Output = GammaExpr;
    fn neg(self) -> GammaExpr {
        self.scale(&-Q::one())
    }
}

impl Sub for GammaExpr {
    type Output = GammaExpr;
    fn sub(self, rhs: GammaExpr) -> GammaExpr {
        self + (-rhs)
    }
}

/// Finite sum `sum c z^a log(z)^b` with [`GammaExpr`] coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct RElement {
    terms: BTreeMap<(Q, u32), GammaExpr>,
}

impl RElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: GammaExpr, a: Q, b: u32) -> Self {
        let mut r = Self::zero();
        r.add_term(a, b, c);
        r
    }

    /// `c z^a log(z)^b` with a rational coefficient.
    pub fn rational_monomial(c: Q, a: Q, b: u32) -> Self {
        Self::monomial(GammaExpr::constant(c), a, b)
    }

    pub fn add_term(&mut self, a: Q, b: u32, c: GammaExpr) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let e = self.terms.entry(key.clone()).or_default();
        *e = std::mem::take(e) + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, u32, &GammaExpr)> {
        self.terms.iter().map(|((a, b), c)| (a, *b, c))
    }

    pub fn coeff(&self, a: &Q, b: u32) -> GammaExpr {
        self.terms.get(&(a.clone(), b)).cloned().unwrap_or_default()
    }

    /// The coefficient of `z^0 log^0`.
    pub fn constant_term(&self) -> GammaExpr {
        self.coeff(&Q::zero(), 0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut r = Self::zero();
        for ((a, b), g) in &self.terms {
            r.add_term(a.clone(), *b, g.scale(c));
        }
        r
    }

    /// Multiplication by `z^n`.
    pub fn shift(&self, n: &Q) -> Self {
        let mut r = Self::zero();
        for ((a, b), g) in &self.terms {
            r.add_term(a + n, *b, g.clone());
        }
        r
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let mut r = Self::zero();
        let one = Q::one();
        for ((a, b), g) in &self.terms {
            r.add_term(a - &one, *b, g.scale(a));
            if *b > 0 {
                r.add_term(a - &one, b - 1, g.scale(&q(*b as i64)));
            }
        }
        r
    }

    pub fn min_exponent(&self) -> Option<Q> {
        self.terms.keys().map(|(a, _)| a.clone()).min()
    }

    /// Polynomial coefficients `(degree, coefficient)` if the element lies
    /// in `C[z]`.
    pub fn as_polynomial(&self) -> Option<Vec<(u64, GammaExpr)>> {
        self.terms
            .iter()
            .map(|((a, b), g)| {
                if *b == 0 && a.is_integer() && !a.is_negative() {
                    a.to_integer().to_u64().map(|d| (d, g.clone()))
                } else {
                    None
                }
            })
            .collect()
    }

    fn require_rational(&self) -> Result<Vec<(Q, u32, Q)>> {
        self.terms
            .iter()
            .map(|((a, b), g)| {
                g.as_rational()
                    .map(|c| (a.clone(), *b, c))
                    .ok_or_else(|| Error::NonRationalCoefficient(g.to_string()))
            })
            .collect()
    }
}

fn fmt_exponent(a: &Q) -> String {
    if a.is_integer() && !a.is_negative() {
        fmt_q(a)
    } else {
        format!("({})", fmt_q(a))
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for ((a, b), g) in &self.terms {
            let mut factors = Vec::new();
            if !a.is_zero() {
                factors.push(if a.is_one() { "z".to_string() } else { format!("z^{}", fmt_exponent(a)) });
            }
            match b {
                0 => {}
                1 => factors.push("log(z)".to_string()),
                _ => factors.push(format!("log(z)^{b}")),
            }
            let coeff = match g.as_rational() {
                Some(c) if !factors.is_empty() && c.is_one() => None,
                Some(c) if !factors.is_empty() && c == -Q::one() => Some("-".to_string()),
                Some(c) => Some(fmt_q(&c)),
                None => Some(format!("({g})")),
            };
            let body = factors.join("*");
            parts.push(match coeff {
                None => body,
                Some(s) if s == "-" => format!("-{body}"),
                Some(s) if body.is_empty() => s,
                Some(s) => format!("{s}*{body}"),
            });
        }
        let mut out = String::new();
        for p in parts {
            if out.is_empty() {
                out = p;
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&p);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RElement({self})")
    }
}

impl Add for RElement {
    type Output = RElement;
    fn add(mut self, rhs: RElement) -> RElement {
        for ((a, b), g) in rhs.terms {
            self.add_term(a, b, g);
        }
        self
    }
}

impl Neg for RElement {
    type Output = RElement;
    fn neg(self) -> RElement {
        self.scale(&-Q::one())
    }
}

impl Sub for RElement {
    type Output = RElement;
    fn sub(self, rhs: RElement) -> RElement {
        self + (-rhs)
    }
}

/// One application of `S` to `c z^a log^b`, as `(a', b', factor)` triples.
fn primitive_terms(a: &Q, b: u32) -> Vec<(Q, u32, Q)> {
    let a1 = a + Q::one();
    if a1.is_zero() {
        return vec![(Q::zero(), b + 1, Q::one() / q(b as i64 + 1))];
    }
    // z^{a+1}/(a+1) sum_k b!/(b-k)! (-1)^k/(a+1)^k log^{b-k}
    let mut out = Vec::with_capacity(b as usize + 1);
    let mut factor = Q::one() / &a1;
    for k in 0..=b {
        out.push((a1.clone(), b - k, factor.clone()));
        factor = -factor * q((b - k) as i64) / &a1;
    }
    out
}

/// The primitive `S` with `d/dz S(h) = h`.
pub fn primitive_s(h: &RElement) -> RElement {
    let mut r = RElement::zero();
    for ((a, b), g) in &h.terms {
        for (a1, b1, f) in primitive_terms(a, *b) {
            r.add_term(a1, b1, g.scale(&f));
        }
    }
    r
}

/// `S^n` on rational coefficients.
fn primitive_s_rational(terms: Vec<(Q, u32, Q)>, n: u32) -> Vec<(Q, u32, Q)> {
    let mut cur: BTreeMap<(Q, u32), Q> = BTreeMap::new();
    for (a, b, c) in terms {
        *cur.entry((a, b)).or_insert_with(Q::zero) += c;
    }
    for _ in 0..n {
        let mut next: BTreeMap<(Q, u32), Q> = BTreeMap::new();
        for ((a, b), c) in &cur {
            for (a1, b1, f) in primitive_terms(a, *b) {
                *next.entry((a1, b1)).or_insert_with(Q::zero) += f * c;
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

/// Transform of a single `z^a log^b` with `a > -1`:
/// `z^{-a-1} sum_k C(b,k) (-1)^k Gamma^(b-k)(a+1) log^k`.
fn laplace_base(a: &Q, b: u32) -> Result<RElement> {
    let mut r = RElement::zero();
    let e = -a - Q::one();
    for k in 0..=b {
        let c = Q::from_integer(binomial(b as u64, k as u64)) * if k % 2 == 0 { q(1) } else { q(-1) };
        r.add_term(e.clone(), k, GammaExpr::symbol(b - k, &(a + Q::one()))?.scale(&c));
    }
    Ok(r)
}

/// Smallest depth `n` such that every exponent of `S^n h` exceeds `-1`.
pub fn minimal_depth(h: &RElement) -> u32 {
    match h.min_exponent() {
        None => 0,
        Some(a) => {
            // a + n > -1
            let n = floor_i64(&(-a - Q::one())) + 1;
            n.max(0) as u32
        }
    }
}

/// `z^n L(S^n h)` for an explicit depth `n`.
pub fn laplace_r_depth(h: &RElement, n: u32) -> Result<RElement> {
    let terms = h.require_rational()?;
    if n < minimal_depth(h) {
        return Err(Error::Domain(format!("reduction depth {n} is too small (need {})", minimal_depth(h))));
    }
    let mut out = RElement::zero();
    for (a, b, c) in primitive_s_rational(terms, n) {
        out = out + laplace_base(&a, b)?.scale(&c);
    }
    Ok(out.shift(&q(n as i64)))
}

/// The Laplace transform on the ring; computed at the minimal depth and
/// one deeper, and the two results are required to agree.
pub fn laplace_r(h: &RElement) -> Result<RElement> {
    let n = minimal_depth(h);
    let r = laplace_r_depth(h, n)?;
    let r2 = laplace_r_depth(h, n + 1)?;
    if r != r2 {
        return Err(Error::Domain(format!("transform depends on the reduction depth: {r} vs {r2}")));
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    /// `L(z h) + d/dz L(h)`.
    pub rule1_defect: RElement,
    /// The defect is a polynomial of degree at most this (negative: zero).
    pub rule1_degree_bound: i64,
    pub rule1_holds: bool,
    /// `L(h') - z L(h) + h(0)`.
    pub rule2_residual: RElement,
    pub rule2_holds: bool,
}

/// Degree bound for the rule-1 defect: polynomial terms only come from
/// integer exponents `a <= -2`, each contributing degree `-a - 2`.
pub fn rule1_degree_bound(h: &RElement) -> i64 {
    minimal_depth(h) as i64 - 2
}

pub fn laplace_rule_check(h: &RElement) -> Result<RuleReport> {
    let lh = laplace_r(h)?;
    let bound = rule1_degree_bound(h);
    let rule1_defect = laplace_r(&h.shift(&Q::one()))? + lh.derivative();
    let rule2_residual = laplace_r(&h.derivative())? - lh.shift(&Q::one())
        + RElement::monomial(h.constant_term(), Q::zero(), 0);
    Ok(RuleReport {
        rule1_holds: match rule1_defect.as_polynomial() {
            Some(p) => p.iter().all(|(d, _)| (*d as i64) <= bound),
            None => false,
        },
        rule1_defect,
        rule1_degree_bound: bound,
        rule2_holds: rule2_residual.is_zero(),
        rule2_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn mono(a: Q, b: u32) -> RElement {
        RElement::rational_monomial(Q::one(), a, b)
    }

    #[test]
    fn gamma_normalization() {
        assert_eq!(GammaExpr::gamma(&q(2)).unwrap(), GammaExpr::constant(q(1)));
        assert_eq!(GammaExpr::gamma(&q(5)).unwrap(), GammaExpr::constant(q(24)));
        let g34 = GammaExpr::gamma(&qr(3, 4)).unwrap();
        assert_eq!(GammaExpr::gamma(&qr(-1, 4)).unwrap(), g34.scale(&q(-4)));
        let g14 = GammaExpr::gamma(&qr(1, 4)).unwrap();
        assert_eq!(GammaExpr::gamma(&qr(9, 4)).unwrap(), g14.scale(&qr(5, 16)));
        // Gamma'(2) = Gamma'(1) + Gamma(1)
        let d2 = GammaExpr::symbol(1, &q(2)).unwrap();
        assert_eq!(d2, GammaExpr::symbol(1, &q(1)).unwrap() + GammaExpr::constant(q(1)));
        // downward then upward is the identity
        let x = qr(-7, 3);
        let down = GammaExpr::symbol(2, &x).unwrap();
        assert!(down.terms().all(|(_, a, _)| a == &qr(2, 3)));
        assert!(GammaExpr::symbol(0, &q(0)).is_err());
        assert!(GammaExpr::symbol(3, &q(-2)).is_err());
        assert_eq!(GammaExpr::constant(qr(3, 2)).as_rational(), Some(qr(3, 2)));
        assert_eq!(g14.as_rational(), None);
    }

    #[test]
    fn derivative_symbol_functional_equation() {
        // Gamma^(2)(x+1) = x Gamma^(2)(x) + 2 Gamma'(x) at x = -5/3
        let x = qr(-5, 3);
        let lhs = GammaExpr::symbol(2, &(&x + q(1))).unwrap();
        let rhs = GammaExpr::symbol(2, &x).unwrap().scale(&x) + GammaExpr::symbol(1, &x).unwrap().scale(&q(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_s(&mono(q(-1), 0)), mono(q(0), 1));
        assert_eq!(primitive_s(&mono(q(0), 1)), mono(q(1), 1) - mono(q(1), 0));
        assert_eq!(primitive_s(&mono(q(0), 0)), mono(q(1), 0));
        let h = mono(qr(-3, 2), 2) + mono(q(-1), 3).scale(&qr(2, 5));
        assert_eq!(primitive_s(&h).derivative(), h);
    }

    #[test]
    fn transform_examples() {
        assert_eq!(laplace_r(&mono(q(0), 0)).unwrap(), mono(q(-1), 0));
        let half = laplace_r(&mono(qr(-1, 2), 0)).unwrap();
        assert_eq!(half, RElement::monomial(GammaExpr::gamma(&qr(1, 2)).unwrap(), qr(-1, 2), 0));
        assert_eq!(laplace_r(&mono(q(1), 0)).unwrap(), mono(q(-2), 0));
        assert_eq!(laplace_r(&mono(q(-1), 0)).unwrap(), laplace_r_depth(&mono(q(-1), 0), 4).unwrap());
    }

    #[test]
    fn rule_examples() {
        for h in [mono(q(0), 0), mono(q(0), 1), mono(qr(-3, 2), 0)] {
            let r = laplace_rule_check(&h).unwrap();
            assert!(r.rule1_holds, "{h}: {}", r.rule1_defect);
            assert!(r.rule2_holds, "{h}: {}", r.rule2_residual);
        }
    }

    #[test]
    fn display() {
        let h = mono(qr(-1, 2), 2).scale(&q(3)) - mono(q(0), 0);
        assert_eq!(h.to_string(), "3*z^(-1/2)*log(z)^2 - 1");
        let g = GammaExpr::gamma(&qr(1, 4)).unwrap().scale(&qr(1, 2)) - GammaExpr::symbol(1, &q(1)).unwrap();
        assert_eq!(g.to_string(), "1/2*Gamma(1/4) - Gamma^(1)(1)");
    }
}
