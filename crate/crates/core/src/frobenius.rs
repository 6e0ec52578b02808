//! Truncated solution bases of `Hyp(P, Q)` at `z = 0` by the Frobenius method,
//! in the algebra of series `sum z^a log(z)^b F(z)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergeometric::HypParams;
use crate::poly::Poly;
use crate::rational::{binomial, factorial, fmt_q, frac, q, q_int, Q};
use crate::weyl::WeylOperator;

pub use crate::rational::pochhammer;

pub const DEFAULT_ORDER: usize = 40;

/// One term `z^start log(z)^b (c_0 + c_1 z + ... + c_{N-1} z^{N-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    pub start: Q,
    pub b: u32,
    pub coeffs: Vec<Q>,
}

/// A finite sum of [`LogTerm`]s sharing a truncation order `N`: every
/// coefficient vector has length `N`, and terms are keyed by
/// `(start mod 1, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSeries {
    order: usize,
    terms: BTreeMap<(Q, u32), LogTerm>,
}

impl LogSeries {
    pub fn zero(order: usize) -> Self {
        LogSeries { order, terms: BTreeMap::new() }
    }

    /// `z^a log(z)^b`, known to `N` coefficients.
    pub fn monomial(a: Q, b: u32, order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut coeffs = vec![Q::zero(); order];
        if order > 0 {
            coeffs[0] = Q::one();
        }
        s.add_term(a, b, coeffs);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = &LogTerm> {
        self.terms.values()
    }

    /// Adds `z^a log^b sum coeffs[n] z^n`; entries beyond the truncation
    /// order are dropped.
    pub fn add_term(&mut self, a: Q, b: u32, coeffs: Vec<Q>) {
        let key = (frac(&a), b);
        let n = self.order;
        let entry = self.terms.entry(key.clone()).or_insert_with(|| LogTerm {
            start: a.clone(),
            b,
            coeffs: vec![Q::zero(); n],
        });
        if a < entry.start {
            let shift = (&entry.start - &a).to_integer();
            let shift = usize::try_from(shift).unwrap_or(usize::MAX).min(n);
            let mut moved = vec![Q::zero(); n];
            moved[shift..].clone_from_slice(&entry.coeffs[..n - shift]);
            entry.coeffs = moved;
            entry.start = a.clone();
        }
        let offset = usize::try_from((&a - &entry.start).to_integer()).unwrap_or(usize::MAX);
        for (i, c) in coeffs.into_iter().enumerate() {
            match offset.checked_add(i) {
                Some(k) if k < n => entry.coeffs[k] += c,
                _ => break,
            }
        }
        if entry.coeffs.iter().all(Zero::is_zero) {
            self.terms.remove(&key);
        }
    }

    fn truncated(&self, order: usize) -> LogSeries {
        let mut out = LogSeries::zero(order);
        for t in self.terms.values() {
            out.add_term(t.start.clone(), t.b, t.coeffs.iter().take(order).cloned().collect());
        }
        out
    }

    pub fn add(&self, other: &LogSeries) -> LogSeries {
        let mut out = self.truncated(self.order.min(other.order));
        for t in other.terms.values() {
            out.add_term(t.start.clone(), t.b, t.coeffs.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> LogSeries {
        let mut out = LogSeries::zero(self.order);
        if !c.is_zero() {
            for t in self.terms.values() {
                out.add_term(t.start.clone(), t.b, t.coeffs.iter().map(|x| x * c).collect());
            }
        }
        out
    }

    pub fn sub(&self, other: &LogSeries) -> LogSeries {
        self.add(&other.scale(&q(-1)))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `z^e log(z)^b`.
    pub fn coeff(&self, e: &Q, b: u32) -> Q {
        let Some(t) = self.terms.get(&(frac(e), b)) else { return Q::zero() };
        let off = e - &t.start;
        if !off.is_integer() || off < Q::zero() {
            return Q::zero();
        }
        usize::try_from(off.to_integer()).ok().and_then(|i| t.coeffs.get(i).cloned()).unwrap_or_default()
    }

    /// All non-zero `((exponent, log-power), coefficient)` entries.
    pub fn monomials(&self) -> Vec<((Q, u32), Q)> {
        let mut out = Vec::new();
        for t in self.terms.values() {
            for (i, c) in t.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    out.push(((&t.start + q(i as i64), t.b), c.clone()));
                }
            }
        }
        out
    }

    /// Highest log-power present, and the lowest exponent carrying it.
    pub fn leading_pair(&self) -> Option<(Q, u32)> {
        self.monomials()
            .into_iter()
            .map(|(k, _)| k)
            .max_by(|(ea, ba), (eb, bb)| ba.cmp(bb).then(eb.cmp(ea)))
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for t in self.terms.values() {
            let mut inner = Vec::new();
            for (i, c) in t.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                inner.push(match i {
                    0 => fmt_q(c),
                    1 => format!("{}*z", fmt_q(c)),
                    _ => format!("{}*z^{i}", fmt_q(c)),
                });
            }
            let mut head = Vec::new();
            if !t.start.is_zero() {
                head.push(format!("z^({})", fmt_q(&t.start)));
            }
            match t.b {
                0 => {}
                1 => head.push("log(z)".into()),
                b => head.push(format!("log(z)^{b}")),
            }
            head.push(format!("({})", inner.join(" + ")));
            parts.push(head.join("*"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(z^{})", parts.join(" + "), self.order)
    }
}

/// `sum_n prod (a_i)_n lambda^n / prod (b_j)_n z^n`, for `n < N`.
pub fn hypergeometric_series_coeffs(a: &[Q], b: &[Q], lambda: &Q, order: usize) -> Result<Vec<Q>> {
    if let Some(bad) = b.iter().find(|x| x.is_integer() && **x <= Q::zero()) {
        return Err(Error::IllegalLowerParameter(fmt_q(bad)));
    }
    let mut out = Vec::with_capacity(order);
    let mut c = Q::one();
    for n in 0..order {
        out.push(c.clone());
        let k = q(n as i64);
        for ai in a {
            c *= ai + &k;
        }
        for bj in b {
            c /= bj + &k;
        }
        c *= lambda;
    }
    Ok(out)
}

/// A power series in `eps` written as `eps^v * u` with `u(0) != 0`, kept to
/// `len` coefficients.
#[derive(Clone, Debug)]
struct Valued {
    v: i64,
    u: Vec<Q>,
}

impl Valued {
    fn one(len: usize) -> Self {
        let mut u = vec![Q::zero(); len];
        u[0] = Q::one();
        Valued { v: 0, u }
    }

    /// `f(beta + eps)`.
    fn of_poly(f: &Poly, beta: &Q, len: usize) -> Self {
        let shifted = f.compose_linear(&Q::one(), beta);
        let c = shifted.coeffs();
        let v = c.iter().position(|x| !x.is_zero()).expect("non-zero polynomial");
        let u = (0..len).map(|i| c.get(v + i).cloned().unwrap_or_default()).collect();
        Valued { v: v as i64, u }
    }

    fn mul(&self, other: &Valued) -> Valued {
        let len = self.u.len();
        let mut u = vec![Q::zero(); len];
        for (i, a) in self.u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.u.iter().take(len - i).enumerate() {
                u[i + j] += a * b;
            }
        }
        Valued { v: self.v + other.v, u }
    }

    fn div(&self, other: &Valued) -> Valued {
        let len = self.u.len();
        let inv0 = Q::one() / &other.u[0];
        let mut u: Vec<Q> = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = self.u[i].clone();
            for j in 1..=i {
                acc -= &other.u[j] * &u[i - j];
            }
            u.push(acc * &inv0);
        }
        Valued { v: self.v - other.v, u }
    }

    /// Coefficient of `eps^j`.
    fn taylor(&self, j: usize) -> Q {
        let idx = j as i64 - self.v;
        if idx < 0 {
            Q::zero()
        } else {
            self.u.get(idx as usize).cloned().unwrap_or_default()
        }
    }
}

/// Roots of `Q` grouped into classes mod 1; each class sorted by decreasing
/// value and listed with multiplicity.
pub fn resonance_classes(qpoly: &Poly) -> Result<Vec<Vec<Q>>> {
    let roots = qpoly.rational_roots()?;
    let mut classes: BTreeMap<Q, Vec<Q>> = BTreeMap::new();
    for (r, m) in roots {
        classes.entry(frac(&r)).or_default().extend(std::iter::repeat_n(r, m));
    }
    Ok(classes
        .into_values()
        .map(|mut v| {
            v.sort_by(|a, b| b.cmp(a));
            v
        })
        .collect())
}

/// `d^k/dt^k w(z, t)` at `t = beta`, where `w = sum_n c_n(t) z^{t+n}`,
/// `c_0(t) = Q(t+1)...Q(t+d)` and `c_n = P(t+n-1)/Q(t+n) c_{n-1}`.
fn frobenius_member(params: &HypParams, beta: &Q, d: usize, k: usize, order: usize) -> LogSeries {
    let len = k + 1;
    let p = params.p();
    let qp = params.q();
    let mut c = Valued::one(len);
    for i in 1..=d {
        c = c.mul(&Valued::of_poly(qp, &(beta + q(i as i64)), len));
    }
    // derivs[j][n] = c_n^{(j)}(beta)
    let mut derivs = vec![Vec::with_capacity(order); len];
    for n in 0..order {
        if n > 0 {
            let num = Valued::of_poly(p, &(beta + q(n as i64 - 1)), len);
            let den = Valued::of_poly(qp, &(beta + q(n as i64)), len);
            c = c.mul(&num).div(&den);
            debug_assert!(c.v >= 0, "c_n must be analytic at beta");
        }
        for (j, dj) in derivs.iter_mut().enumerate() {
            dj.push(c.taylor(j) * q_int(&factorial(j as u64)));
        }
    }
    let mut s = LogSeries::zero(order);
    for (j, dj) in derivs.into_iter().enumerate() {
        let binom = q_int(&binomial(k as u64, j as u64));
        s.add_term(beta.clone(), (k - j) as u32, dj.into_iter().map(|x| x * &binom).collect());
    }
    s
}

/// A basis of `deg Q` truncated solutions of `Hyp(P, Q)` at `z = 0`.
pub fn frobenius_basis(params: &HypParams, order: usize) -> Result<Vec<LogSeries>> {
    let mut jobs = Vec::new();
    for class in resonance_classes(params.q())? {
        let top = class[0].clone();
        let d = usize::try_from((&top - class.last().unwrap()).to_integer()).expect("sorted class");
        for (k, beta) in class.into_iter().enumerate() {
            jobs.push((beta, d, k));
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(beta, d, k)| frobenius_member(params, &beta, d, k, order))
        .collect())
}

/// Applies `L` term by term. The result's truncation order is `N - span`,
/// where `span` is the spread of z-degrees in the theta-form of `L`.
pub fn apply_operator(l: &WeylOperator, s: &LogSeries) -> Result<LogSeries> {
    let form = l.to_theta_form();
    let slices = form.slices();
    let (Some(&jmin), Some(&jmax)) = (slices.keys().next(), slices.keys().next_back()) else {
        return Ok(LogSeries::zero(s.order));
    };
    let span = (jmax - jmin) as usize;
    if s.order <= span {
        return Err(Error::InsufficientTruncation { order: s.order, span });
    }
    let out_order = s.order - span;
    let mut out = LogSeries::zero(out_order);
    for t in s.terms.values() {
        let base = &t.start + q(jmin);
        for (&j, tj) in slices {
            let deg = tj.degree().unwrap_or(0) as u32;
            let off = (j - jmin) as usize;
            // acc[b'] holds coefficients of z^{base + i} log^{b'}
            let mut acc: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
            for (n, c) in t.coeffs.iter().enumerate() {
                let idx = n + off;
                if idx >= out_order {
                    break;
                }
                if c.is_zero() {
                    continue;
                }
                let e = &t.start + q(n as i64);
                let taylor = tj.compose_linear(&Q::one(), &e);
                let mut falling = BigInt::one();
                for i in 0..=t.b.min(deg) {
                    if i > 0 {
                        falling *= t.b - i + 1;
                    }
                    let ti = taylor.coeff(i as usize);
                    if ti.is_zero() {
                        continue;
                    }
                    let slot = acc.entry(t.b - i).or_insert_with(|| vec![Q::zero(); out_order]);
                    slot[idx] += ti * q_int(&falling) * c;
                }
            }
            for (b, coeffs) in acc {
                out.add_term(base.clone(), b, coeffs);
            }
        }
    }
    Ok(out)
}

/// Rank of the coefficient matrix of the given series over all monomials.
pub fn exact_rank(series: &[LogSeries]) -> usize {
    let mut cols: BTreeMap<(Q, u32), usize> = BTreeMap::new();
    let rows: Vec<Vec<((Q, u32), Q)>> = series.iter().map(LogSeries::monomials).collect();
    for r in &rows {
        for (k, _) in r {
            let n = cols.len();
            cols.entry(k.clone()).or_insert(n);
        }
    }
    let mut m: Vec<Vec<Q>> = rows
        .into_iter()
        .map(|r| {
            let mut row = vec![Q::zero(); cols.len()];
            for (k, c) in r {
                row[cols[&k]] = c;
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = Q::one() / &m[rank][col];
        for i in rank + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] * &inv;
            for c in col..cols.len() {
                let delta = &f * &m[rank][c];
                m[i][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub leading_pairs: Vec<Option<(Q, u32)>>,
    pub leading_distinct: bool,
    pub rank: usize,
}

impl IndependenceReport {
    pub fn independent(&self) -> bool {
        self.rank == self.leading_pairs.len()
    }
}

pub fn independence(basis: &[LogSeries]) -> IndependenceReport {
    let leading_pairs: Vec<_> = basis.iter().map(LogSeries::leading_pair).collect();
    let mut seen = std::collections::BTreeSet::new();
    let leading_distinct = leading_pairs.iter().all(|p| p.is_some() && seen.insert(p.clone()));
    IndependenceReport { leading_pairs, leading_distinct, rank: exact_rank(basis) }
}
