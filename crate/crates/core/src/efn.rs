//! Exact coefficients of the E-functions `E_0`, `E_2` attached to a monic
//! quartic, the Gamma-valued expansion of `P(z^4)`, the monodromy split and
//! a finite-sample denominator audit.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laplace::GammaExpr;
use crate::quartic::Quartic;
use crate::rational::{factorial, lcm, pochhammer, q, q_int, qr, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfnCoefficients {
    /// Residue class, 0 or 2.
    pub r: u32,
    pub quartic: Quartic,
    /// `e_n` for `n < N`.
    pub coeffs: Vec<Q>,
}

impl EfnCoefficients {
    /// `a_n = n! e_n`.
    pub fn factorial_scaled(&self) -> Vec<Q> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, e)| e * q_int(&factorial(n as u64)))
            .collect()
    }
}

fn powers(a: &Q, n: usize) -> Vec<Q> {
    let mut v = Vec::with_capacity(n + 1);
    let mut p = Q::one();
    for _ in 0..=n {
        v.push(p.clone());
        p *= a;
    }
    v
}

fn inv_factorials(n: usize) -> Vec<Q> {
    let mut v = Vec::with_capacity(n + 1);
    let mut f = BigInt::one();
    for i in 0..=n {
        if i > 0 {
            f *= i;
        }
        v.push(Q::new(BigInt::one(), f.clone()));
    }
    v
}

/// Largest usable exponent for a parameter: unbounded unless it is zero.
fn cap(a: &Q, bound: usize) -> usize {
    if a.is_zero() {
        0
    } else {
        bound
    }
}

/// `e_n = sum a3^k3 a2^k2 a1^k1 a0^k0 ((1-r)/4)_{k-n} / (k3! k2! k1! k0!)`
/// over `k3 + 2k2 + 3k1 + 4k0 = 4n + r`, `k = k0 + k1 + k2 + k3`.
pub fn er_coefficients(f: &Quartic, r: u32, n_terms: usize) -> Result<EfnCoefficients> {
    if r != 0 && r != 2 {
        return Err(Error::InvalidResidue(r));
    }
    if n_terms == 0 {
        return Err(Error::InvalidParams("at least one term is required".into()));
    }
    let top = 4 * (n_terms - 1) + r as usize;
    let [a3, a2, a1, a0] = f.params();
    let (p3, p2, p1, p0) = (powers(&a3, top), powers(&a2, top / 2), powers(&a1, top / 3), powers(&a0, top / 4));
    let inv = inv_factorials(top);
    let shift = qr(1 - r as i64, 4);
    let coeffs = (0..n_terms)
        .into_par_iter()
        .map(|n| {
            let t = 4 * n + r as usize;
            let mut sum = Q::zero();
            for k1 in 0..=cap(&a1, t / 3) {
                let rest1 = t - 3 * k1;
                for k2 in 0..=cap(&a2, rest1 / 2) {
                    let rest2 = rest1 - 2 * k2;
                    // k3 + 4 k0 = rest2
                    let mut k3 = rest2 % 4;
                    while k3 <= rest2 {
                        let k0 = (rest2 - k3) / 4;
                        if (k3 == 0 || !a3.is_zero()) && (k0 == 0 || !a0.is_zero()) {
                            let k = k0 + k1 + k2 + k3;
                            let mono = &p3[k3] * &p2[k2] * &p1[k1] * &p0[k0];
                            let den = &inv[k3] * &inv[k2] * &inv[k1] * &inv[k0];
                            sum += mono * den * pochhammer(&shift, (k - n) as u64);
                        }
                        k3 += 4;
                    }
                }
            }
            sum
        })
        .collect();
    Ok(EfnCoefficients { r, quartic: f.clone(), coeffs })
}

/// `e_n = sum_{m <= 2n/3} (1/4)_{n-m} / ((2n-3m)! (2m)!)`, the specialisation
/// of `E_0` to `x^4 - x^2 + x`.
pub fn e0_closed_form(n_terms: usize) -> EfnCoefficients {
    let quarter = qr(1, 4);
    let coeffs = (0..n_terms)
        .map(|n| {
            (0..=2 * n / 3)
                .map(|m| {
                    pochhammer(&quarter, (n - m) as u64)
                        / q_int(&(factorial((2 * n - 3 * m) as u64) * factorial(2 * m as u64)))
                })
                .fold(Q::zero(), |a, b| a + b)
        })
        .collect();
    EfnCoefficients {
        r: 0,
        quartic: Quartic::new(q(0), q(1), q(-1), q(0)),
        coeffs,
    }
}

/// Laurent coefficients of `P(z^4)` indexed by the exponent of `z`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaSeries {
    pub coeffs: BTreeMap<i64, GammaExpr>,
}

impl GammaSeries {
    pub fn coeff(&self, e: i64) -> GammaExpr {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// The same series in the variable `w = z^4`: `(exponent in w, coefficient)`.
    pub fn in_fourth_root_variable(&self) -> Vec<(Q, GammaExpr)> {
        self.coeffs.iter().map(|(e, c)| (qr(*e, 4), c.clone())).collect()
    }
}

/// Expands `P(z^4) = sum a3^k3 a2^k2 a1^k1 a0^k0 / (2 k3! k2! k1! k0!)
/// Gamma((3k3 + 2k2 + k1 + 1)/4) z^{k3 + 2k2 + 3k1 + 4k0 - 1}` over
/// `k1 + k3` even, through `z^{4N+1}`.
pub fn pz4_symbolic_expansion(f: &Quartic, n_terms: usize) -> Result<GammaSeries> {
    let smax = 4 * n_terms as i64 + 2;
    let [a3, a2, a1, a0] = f.params();
    let s = smax as usize;
    let (p3, p2, p1, p0) = (powers(&a3, s), powers(&a2, s / 2), powers(&a1, s / 3), powers(&a0, s / 4));
    let inv = inv_factorials(s);
    let mut gammas: HashMap<usize, GammaExpr> = HashMap::new();
    let mut out: BTreeMap<i64, GammaExpr> = BTreeMap::new();
    let half = qr(1, 2);
    for k0 in 0..=cap(&a0, s / 4) {
        for k1 in 0..=cap(&a1, (s - 4 * k0) / 3) {
            for k2 in 0..=cap(&a2, (s - 4 * k0 - 3 * k1) / 2) {
                for k3 in 0..=cap(&a3, s - 4 * k0 - 3 * k1 - 2 * k2) {
                    if (k1 + k3) % 2 == 1 {
                        continue;
                    }
                    let weight = 3 * k3 + 2 * k2 + k1;
                    let g = match gammas.get(&weight) {
                        Some(g) => g.clone(),
                        None => {
                            let g = GammaExpr::gamma(&qr(weight as i64 + 1, 4))?;
                            gammas.insert(weight, g.clone());
                            g
                        }
                    };
                    let c = &half * &p3[k3] * &p2[k2] * &p1[k1] * &p0[k0] * &inv[k3] * &inv[k2] * &inv[k1] * &inv[k0];
                    let e = (k3 + 2 * k2 + 3 * k1 + 4 * k0) as i64 - 1;
                    let slot = out.entry(e).or_default();
                    *slot = std::mem::take(slot) + g.scale(&c);
                }
            }
        }
    }
    out.retain(|_, g| !g.is_zero());
    Ok(GammaSeries { coeffs: out })
}

/// Splits `s = sum_j z^{j/n} s_j` into the `n` integer-exponent streams.
pub fn monodromy_split<T: Clone>(stream: &[(Q, T)], n: u32) -> Result<Vec<Vec<(i64, T)>>> {
    if n == 0 {
        return Err(Error::InvalidParams("branching order must be positive".into()));
    }
    let nq = q(n as i64);
    let mut parts: Vec<Vec<(i64, T)>> = vec![Vec::new(); n as usize];
    for (e, c) in stream {
        let scaled = e * &nq;
        if !scaled.is_integer() {
            return Err(Error::InvalidParams(format!(
                "exponent {} has denominator not dividing {n}",
                crate::rational::fmt_q(e)
            )));
        }
        let s: i64 = scaled.to_integer().try_into().map_err(|_| Error::Domain("exponent too large".into()))?;
        let j = s.rem_euclid(n as i64);
        parts[j as usize].push(((s - j) / n as i64, c.clone()));
    }
    Ok(parts)
}

/// Inverse of [`monodromy_split`].
pub fn monodromy_merge<T: Clone>(parts: &[Vec<(i64, T)>]) -> Vec<(Q, T)> {
    let n = parts.len() as i64;
    let mut out: Vec<(Q, T)> = parts
        .iter()
        .enumerate()
        .flat_map(|(j, p)| p.iter().map(move |(e, c)| (qr(e * n + j as i64, n), c.clone())))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[derive(Clone, Debug)]
pub struct DenominatorAudit {
    /// `a_n = n! e_n`.
    pub scaled: Vec<Q>,
    /// `d_n = lcm(den a_0, ..., den a_n)`.
    pub d: Vec<BigInt>,
    /// `max_{n >= 1} d_n^{1/n}`.
    pub inferred_c: f64,
    /// `max_{n >= 1} |a_n|^{1/n}`.
    pub growth: f64,
}

fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(&x.abs()).unwrap_or(f64::INFINITY);
        return v.ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(x.abs() >> shift)).unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_abs_q(x: &Q) -> f64 {
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}

/// Growth profile of the coefficients `e_n` (given unscaled).
pub fn denominator_audit(e: &[Q]) -> Result<DenominatorAudit> {
    if e.len() < 8 {
        return Err(Error::InvalidParams("the audit needs at least 8 coefficients".into()));
    }
    let scaled: Vec<Q> = e
        .iter()
        .enumerate()
        .map(|(n, x)| x * q_int(&factorial(n as u64)))
        .collect();
    let mut d = Vec::with_capacity(scaled.len());
    let mut acc = BigInt::one();
    for a in &scaled {
        acc = lcm(&acc, a.denom());
        d.push(acc.clone());
    }
    let mut inferred_c: f64 = 0.0;
    let mut growth: f64 = 0.0;
    for n in 1..scaled.len() {
        inferred_c = inferred_c.max((ln_abs_bigint(&d[n]) / n as f64).exp());
        if !scaled[n].is_zero() {
            growth = growth.max((ln_abs_q(&scaled[n]) / n as f64).exp());
        }
    }
    Ok(DenominatorAudit { scaled, d, inferred_c, growth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro() -> Quartic {
        Quartic::new(q(0), q(1), q(-1), q(0))
    }

    /// Brute force over all four indices, bounded by the lattice equation.
    fn brute_er(f: &Quartic, r: u32, n: usize) -> Q {
        let t = 4 * n + r as usize;
        let [a3, a2, a1, a0] = f.params();
        let mut s = Q::zero();
        for k0 in 0..=t / 4 {
            for k1 in 0..=t / 3 {
                for k2 in 0..=t / 2 {
                    for k3 in 0..=t {
                        if k3 + 2 * k2 + 3 * k1 + 4 * k0 != t {
                            continue;
                        }
                        let k = k0 + k1 + k2 + k3;
                        let m = crate::rational::qpow(&a3, k3 as u64)
                            * crate::rational::qpow(&a2, k2 as u64)
                            * crate::rational::qpow(&a1, k1 as u64)
                            * crate::rational::qpow(&a0, k0 as u64);
                        let den = factorial(k3 as u64) * factorial(k2 as u64) * factorial(k1 as u64) * factorial(k0 as u64);
                        s += m * pochhammer(&qr(1 - r as i64, 4), (k - n) as u64) / q_int(&den);
                    }
                }
            }
        }
        s
    }

    #[test]
    fn small_coefficients() {
        let e0 = er_coefficients(&intro(), 0, 3).unwrap();
        assert_eq!(e0.coeffs, vec![q(1), qr(1, 8), qr(53, 384)]);
        let e2 = er_coefficients(&intro(), 2, 1).unwrap();
        assert_eq!(e2.coeffs, vec![qr(-1, 4)]);
        assert!(matches!(er_coefficients(&intro(), 1, 3), Err(Error::InvalidResidue(1))));
    }

    #[test]
    fn brute_force_agreement() {
        let f = Quartic::new(qr(1, 2), q(-2), qr(3, 5), q(1));
        for r in [0, 2] {
            let fast = er_coefficients(&f, r, 6).unwrap();
            for n in 0..6 {
                assert_eq!(fast.coeffs[n], brute_er(&f, r, n), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn closed_form_matches() {
        assert_eq!(e0_closed_form(3).coeffs, vec![q(1), qr(1, 8), qr(53, 384)]);
        assert_eq!(er_coefficients(&intro(), 0, 20).unwrap().coeffs, e0_closed_form(20).coeffs);
    }

    #[test]
    fn zero_quartic() {
        let f = Quartic::new(q(0), q(0), q(0), q(0));
        let e = er_coefficients(&f, 0, 5).unwrap();
        assert_eq!(e.coeffs, vec![q(1), q(0), q(0), q(0), q(0)]);
        let g = pz4_symbolic_expansion(&f, 4).unwrap();
        assert_eq!(g.coeffs.len(), 1);
        assert_eq!(g.coeff(-1), GammaExpr::gamma(&qr(1, 4)).unwrap().scale(&qr(1, 2)));
    }

    #[test]
    fn gamma_series_examples() {
        let g = pz4_symbolic_expansion(&intro(), 3).unwrap();
        assert_eq!(g.coeff(-1), GammaExpr::gamma(&qr(1, 4)).unwrap().scale(&qr(1, 2)));
        let g34 = GammaExpr::gamma(&qr(3, 4)).unwrap();
        // 1/2 Gamma(-1/4) e_{2,0} = 1/2 (-4 Gamma(3/4)) (-1/4)
        assert_eq!(g.coeff(1), g34.scale(&qr(1, 2)));
        assert!(g.coeffs.keys().all(|e| e.rem_euclid(4) == 1 || e.rem_euclid(4) == 3));
    }

    #[test]
    fn split_merge() {
        let s = vec![(qr(-1, 4), 1), (qr(1, 4), 2), (qr(7, 4), 4), (q(2), 3)];
        let parts = monodromy_split(&s, 4).unwrap();
        assert_eq!(parts[3], vec![(-1, 1), (1, 4)]);
        assert_eq!(parts[1], vec![(0, 2)]);
        assert_eq!(parts[0], vec![(2, 3)]);
        assert!(parts[2].is_empty());
        assert_eq!(monodromy_merge(&parts), s);
        assert!(monodromy_split(&[(qr(1, 3), 0)], 4).is_err());
    }

    #[test]
    fn audits() {
        let exp: Vec<Q> = (0..12).map(|n| Q::new(BigInt::one(), factorial(n))).collect();
        let a = denominator_audit(&exp).unwrap();
        assert!(a.d.iter().all(|d| d.is_one()));
        assert_eq!(a.inferred_c, 1.0);
        let geo: Vec<Q> = (0..12)
            .map(|n| Q::new(BigInt::one(), factorial(n) * (BigInt::one() << n)))
            .collect();
        let a = denominator_audit(&geo).unwrap();
        assert!((a.inferred_c - 2.0).abs() < 1e-12);
        assert!(denominator_audit(&exp[..5]).is_err());
    }
}
