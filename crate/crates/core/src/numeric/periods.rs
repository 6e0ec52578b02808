//! Exponential period integrals of a monic quartic:
//! `F_{a,b}(z) = int_0^inf e^{-z f(x)} x^{b-1} dx - i^{ab} int_0^inf e^{-z f(i^a x)} x^{b-1} dx`
//! (rows `a`, columns `b`, both in `{1, 2, 3}`), the determinant law and the
//! check of `P(z) = 1/2 Gamma(1/4) z^{-1/4} E_0(z) + 1/2 Gamma(-1/4) z^{1/4} E_2(z)`.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::bigfloat::BigFloat;
use super::complex::BigComplex;
use super::elementary::Ctx;
use super::gamma::gamma_q;
use super::quad::{exp_sinh, QuadOptions, QuadResult};
use crate::efn::er_coefficients;
use crate::error::{Error, Result};
use crate::geometry::critical::critical_value_polynomial;
use crate::quartic::Quartic;
use crate::rational::{fmt_q, q, qr, Q};

/// The path `t -> -t zeta^a` for `t <= 0`, `t -> t` for `t >= 0`, with
/// `zeta = i` (the quartic case).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BentRay {
    pub a: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    BentRay(BentRay),
    RealLine,
}

fn check_half_plane(z: &BigComplex) -> Result<()> {
    if z.re.signum() <= 0 {
        return Err(Error::Domain("the period integrals need Re(z) > 0".into()));
    }
    Ok(())
}

/// Beyond this radius `Re(z f(c x)) >= Re(z) x^4 / 2` for every unit `c`
/// with `c^4 = 1`, and the integrand is below `2^-(prec+64)`.
fn cutoff(f: &Quartic, z: &BigComplex, max_weight: u32, prec: u32) -> f64 {
    let (zr, zi) = z.to_f64();
    let absz = zr.hypot(zi);
    let mass: f64 = f.params().iter().map(|a| crate::rational::q_to_f64(a).abs()).sum();
    let r = (2.0 * absz * mass / zr).max(1.0);
    let target = (prec as f64 + 64.0) * std::f64::consts::LN_2;
    let mut x = r;
    for _ in 0..4 {
        let need = 2.0 * (target + max_weight as f64 * x.ln().max(0.0) + 8.0) / zr;
        x = r.max(need.powf(0.25));
    }
    x * 1.05
}

/// `int_0^inf e^{-z f(c x)} x^{b-1} dx` for `c = i^k` and `b = 1..=bmax`.
fn ray_integrals(f: &Quartic, k: u32, z: &BigComplex, bmax: u32, ctx: &Ctx) -> Result<QuadResult> {
    check_half_plane(z)?;
    let prec = ctx.prec();
    let coeffs: Vec<BigComplex> = f.to_poly().coeffs().iter().map(|c| BigComplex::from_real(ctx.q(c))).collect();
    let c = BigComplex::i_pow(k as i64, prec);
    let neg_z = -z;
    let g = |x: &BigFloat| -> Vec<BigComplex> {
        let w = c.scale(x);
        let fw = coeffs.iter().rev().fold(BigComplex::zero(prec), |acc, a| &acc * &w + a);
        let e = (&neg_z * &fw).exp(ctx);
        let mut out = Vec::with_capacity(bmax as usize);
        let mut v = e;
        for _ in 0..bmax {
            out.push(v.clone());
            v = v.scale(x);
        }
        out
    };
    let opts = QuadOptions::new(cutoff(f, z, bmax, prec));
    exp_sinh(g, bmax as usize, &opts, ctx)
}

/// Integral along a path with weight `x^{b-1}`.
pub fn integrate_decay(f: &Quartic, b: u32, path: Path, z: &BigComplex, ctx: &Ctx) -> Result<(BigComplex, BigFloat)> {
    if b == 0 {
        return Err(Error::InvalidParams("the weight exponent b must be >= 1".into()));
    }
    let prec = ctx.prec();
    let pick = |r: &QuadResult| r.values[b as usize - 1].clone();
    let right = ray_integrals(f, 0, z, b, ctx)?;
    // the real line is the bent ray with a = 2
    let k = match path {
        Path::RealLine => 2,
        Path::BentRay(BentRay { a }) => a % 4,
    };
    let other = ray_integrals(f, k, z, b, ctx)?;
    // int over the path = int_0^inf g(x) dx - zeta^{a b} int_0^inf g(zeta^a x) dx
    let factor = BigComplex::i_pow((k * b) as i64, prec);
    let value = pick(&right) - &factor * &pick(&other);
    let err = right.error + other.error;
    Ok((value, err))
}

#[derive(Clone, Debug)]
pub struct FundamentalMatrix {
    /// `entries[a-1][b-1]`.
    pub entries: Vec<Vec<BigComplex>>,
    /// Largest quadrature error estimate among the underlying integrals.
    pub error: BigFloat,
}

impl FundamentalMatrix {
    pub fn det(&self) -> BigComplex {
        let m = &self.entries;
        let minor = |i: usize, j: usize, k: usize, l: usize| &(&m[i][k] * &m[j][l]) - &(&m[i][l] * &m[j][k]);
        &(&(&m[0][0] * &minor(1, 2, 1, 2)) - &(&m[0][1] * &minor(1, 2, 0, 2))) + &(&m[0][2] * &minor(1, 2, 0, 1))
    }
}

pub fn fundamental_matrix(f: &Quartic, z: &BigComplex, ctx: &Ctx) -> Result<FundamentalMatrix> {
    check_half_plane(z)?;
    let prec = ctx.prec();
    let rays: Vec<Result<QuadResult>> = (0..4u32).into_par_iter().map(|k| ray_integrals(f, k, z, 3, ctx)).collect();
    let rays: Vec<QuadResult> = rays.into_iter().collect::<Result<_>>()?;
    let error = rays.iter().fold(BigFloat::zero(prec), |e, r| BigFloat::max_value(e, r.error.clone()));
    let entries = (1..=3u32)
        .map(|a| {
            (1..=3u32)
                .map(|b| {
                    let w = BigComplex::i_pow((a * b) as i64, prec);
                    &rays[0].values[b as usize - 1] - &(&w * &rays[a as usize].values[b as usize - 1])
                })
                .collect()
        })
        .collect();
    Ok(FundamentalMatrix { entries, error })
}

#[derive(Clone, Debug)]
pub struct DetSample {
    pub z: Q,
    pub det: BigComplex,
    /// `det F(z) e^{z alpha}`.
    pub normalized: BigComplex,
    /// `det F(z) e^{z alpha} z^{3/2}`.
    pub normalized_power: BigComplex,
}

#[derive(Clone, Debug)]
pub struct DetReport {
    pub alpha: Q,
    pub samples: Vec<DetSample>,
    /// Largest pairwise `|u - v| / max(|u|, |v|)` of `det F e^{z alpha}`.
    pub max_rel_deviation: BigFloat,
    /// Same statistic after the extra `z^{3/2}` factor.
    pub max_rel_deviation_power: BigFloat,
}

fn max_rel_dev(values: &[BigComplex], prec: u32) -> BigFloat {
    let mut worst = BigFloat::zero(prec);
    for (i, u) in values.iter().enumerate() {
        for v in &values[i + 1..] {
            let den = BigFloat::max_value(u.abs(), v.abs());
            if den.is_zero() {
                continue;
            }
            worst = BigFloat::max_value(worst, (u - v).abs().div(&den));
        }
    }
    worst
}

/// Evaluates `det F(z_i) e^{z_i alpha}` with `alpha` the sum of the critical
/// values (minus the `y^2` coefficient of the critical cubic), together
/// with the `z^{3/2}`-weighted variant.
pub fn det_exponential_check(f: &Quartic, zs: &[Q], ctx: &Ctx) -> Result<DetReport> {
    if zs.len() < 2 {
        return Err(Error::InvalidParams("at least two sample points are needed".into()));
    }
    if let Some(z) = zs.iter().find(|z| !z.is_positive()) {
        return Err(Error::Domain(format!("sample z = {} is not in Re(z) > 0", fmt_q(z))));
    }
    let prec = ctx.prec();
    let alpha = -critical_value_polynomial(f).coeff(2);
    let samples = zs
        .iter()
        .map(|z| {
            let zc = BigComplex::from_q(z, &q(0), prec);
            let det = fundamental_matrix(f, &zc, ctx)?.det();
            let e = ctx.exp(&ctx.q(&(z * &alpha)));
            let normalized = det.scale(&e);
            let pow = ctx.powf(&ctx.q(z), &ctx.q(&qr(3, 2)))?;
            let normalized_power = normalized.scale(&pow);
            Ok(DetSample { z: z.clone(), det, normalized, normalized_power })
        })
        .collect::<Result<Vec<_>>>()?;
    let a: Vec<BigComplex> = samples.iter().map(|s| s.normalized.clone()).collect();
    let b: Vec<BigComplex> = samples.iter().map(|s| s.normalized_power.clone()).collect();
    Ok(DetReport {
        alpha,
        max_rel_deviation: max_rel_dev(&a, prec),
        max_rel_deviation_power: max_rel_dev(&b, prec),
        samples,
    })
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub quadrature: BigComplex,
    pub quadrature_error: BigFloat,
    pub series: BigComplex,
    pub difference: BigFloat,
    /// Heuristic bound on the neglected terms of both series.
    pub tail_bound: BigFloat,
    pub target: BigFloat,
    pub insufficient_terms: bool,
}

fn eval_series(coeffs: &[Q], z: &BigComplex, ctx: &Ctx) -> BigComplex {
    coeffs
        .iter()
        .rev()
        .fold(BigComplex::zero(ctx.prec()), |acc, c| &acc * z + BigComplex::from_real(ctx.q(c)))
}

/// `sum_{n >= N} (C |z|)^n / n!` bounded by a geometric tail, with
/// `C = max |n! e_n|^{1/n}` over the computed coefficients.
fn tail_estimate(coeffs: &[Q], absz: f64) -> f64 {
    let n_terms = coeffs.len();
    let mut ln_fact = 0.0;
    let mut c: f64 = 0.0;
    for (n, e) in coeffs.iter().enumerate() {
        if n > 0 {
            ln_fact += (n as f64).ln();
            if !e.is_zero() {
                let ln_e = crate::rational::q_to_f64(&e.abs()).ln();
                let ln_e = if ln_e.is_finite() { ln_e } else { ln_q(&e.abs()) };
                c = c.max(((ln_e + ln_fact) / n as f64).exp());
            }
        }
    }
    let nn = n_terms as f64;
    let ln_fact_n = ln_fact + nn.ln();
    let x = c * absz;
    let ratio = x / (nn + 1.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    (nn * x.ln() - ln_fact_n).exp() / (1.0 - ratio)
}

fn ln_q(x: &Q) -> f64 {
    let lb = |v: &num_bigint::BigInt| {
        let bits = v.bits();
        let shift = bits.saturating_sub(64);
        (v >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
    };
    lb(x.numer()) - lb(x.denom())
}

/// Compares the real-line integral `P(z)` with its decomposition into the
/// two E-function series truncated at `N` terms.
pub fn verify_decomposition(f: &Quartic, z: &Q, n_terms: usize, ctx: &Ctx, target: Option<BigFloat>) -> Result<DecompositionReport> {
    if !z.is_positive() {
        return Err(Error::Domain("verification needs a positive rational z".into()));
    }
    let prec = ctx.prec();
    let zc = BigComplex::from_q(z, &q(0), prec);
    let (quadrature, quadrature_error) = integrate_decay(f, 1, Path::RealLine, &zc, ctx)?;

    let e0 = er_coefficients(f, 0, n_terms)?;
    let e2 = er_coefficients(f, 2, n_terms)?;
    let g14 = gamma_q(&qr(1, 4), ctx)?;
    let gm14 = gamma_q(&qr(-1, 4), ctx)?;
    let z_m = zc.pow_q(&qr(-1, 4), ctx)?;
    let z_p = zc.pow_q(&qr(1, 4), ctx)?;
    let s0 = eval_series(&e0.coeffs, &zc, ctx);
    let s2 = eval_series(&e2.coeffs, &zc, ctx);
    let series = (&z_m * &s0).scale(&g14.mul_2k(-1)) + (&z_p * &s2).scale(&gm14.mul_2k(-1));

    let absz = crate::rational::q_to_f64(z);
    let t0 = tail_estimate(&e0.coeffs, absz) * g14.to_f64().abs() / 2.0 * absz.powf(-0.25);
    let t2 = tail_estimate(&e2.coeffs, absz) * gm14.to_f64().abs() / 2.0 * absz.powf(0.25);
    let tail = t0 + t2;
    let tail_bound = if tail.is_finite() { BigFloat::from_f64(tail, prec) } else { BigFloat::pow2(1 << 20, prec) };
    let target = target.unwrap_or_else(|| BigFloat::pow2(-(prec as i64) / 2, prec));
    let difference = (&quadrature - &series).abs();
    Ok(DecompositionReport {
        insufficient_terms: tail_bound > target,
        quadrature,
        quadrature_error,
        series,
        difference,
        tail_bound,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro() -> Quartic {
        Quartic::new(q(0), q(1), q(-1), q(0))
    }

    #[test]
    fn pure_quartic_real_line() {
        // int_R e^{-x^4} dx = Gamma(1/4)/2
        let ctx = Ctx::new(128);
        let f = Quartic::new(q(0), q(0), q(0), q(0));
        let one = BigComplex::one(128);
        let (v, _) = integrate_decay(&f, 1, Path::RealLine, &one, &ctx).unwrap();
        let exact = gamma_q(&qr(1, 4), &ctx).unwrap().mul_2k(-1);
        assert!((&v.re - &exact).abs().magnitude_bits().is_none_or(|m| m < -110));
        assert!(v.im.abs().magnitude_bits().is_none_or(|m| m < -110));
    }

    #[test]
    fn headline_p_of_one() {
        let ctx = Ctx::new(128);
        let one = BigComplex::one(128);
        let (v, _) = integrate_decay(&intro(), 1, Path::RealLine, &one, &ctx).unwrap();
        // reference value from an independent arbitrary-precision quadrature
        assert!(v.re.to_sci(30).starts_with("3.5418150251780138428897733150"), "{}", v.re.to_sci(30));
        let m = fundamental_matrix(&intro(), &one, &ctx).unwrap();
        assert!((&m.entries[1][0] - &v).max_abs().magnitude_bits().is_none_or(|b| b < -100));
        assert!(!m.det().is_zero());
    }

    #[test]
    fn decomposition_small() {
        let ctx = Ctx::new(128);
        let r = verify_decomposition(&intro(), &q(1), 60, &ctx, None).unwrap();
        assert!(r.difference.to_f64() < 1e-30, "{:?}", r.difference);
        assert!(!r.insufficient_terms);
        let r = verify_decomposition(&intro(), &q(1), 5, &ctx, None).unwrap();
        assert!(r.insufficient_terms);
        let pure = Quartic::new(q(0), q(0), q(0), q(0));
        let r = verify_decomposition(&pure, &qr(1, 2), 4, &ctx, None).unwrap();
        assert!(r.difference.to_f64() < 1e-30);
    }

    #[test]
    fn rejects_left_half_plane() {
        let ctx = Ctx::new(64);
        let z = BigComplex::from_q(&q(-1), &q(0), 64);
        assert!(fundamental_matrix(&intro(), &z, &ctx).is_err());
        assert!(det_exponential_check(&intro(), &[q(1)], &ctx).is_err());
    }
}
