//! Polynomial roots: exact squarefree splitting, then Aberth–Ehrlich
//! iteration on each squarefree factor (a coarse 64-bit pass followed by
//! refinement at the target precision).

use rayon::prelude::*;

use super::bigfloat::BigFloat;
use super::complex::BigComplex;
use super::elementary::Ctx;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{fmt_q, q_to_f64};

/// A root together with its multiplicity.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: BigComplex,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<Root>,
    /// Largest `|p(root)|` over the returned roots, with `p` the squarefree
    /// factor the root was extracted from.
    pub max_residual: BigFloat,
    pub iterations: usize,
}

fn horner(coeffs: &[BigComplex], x: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = x.prec();
    let mut p = BigComplex::zero(prec);
    let mut dp = BigComplex::zero(prec);
    for c in coeffs.iter().rev() {
        dp = &dp * x + &p;
        p = &p * x + c;
    }
    (p, dp)
}

/// Aberth iteration until every correction is below `2^-stop_bits` relative
/// to the root magnitude; returns the number of sweeps used.
fn aberth(coeffs: &[BigComplex], z: &mut [BigComplex], stop_bits: i64, max_iter: usize) -> Option<usize> {
    let prec = coeffs[0].prec();
    let one = BigComplex::one(prec);
    for it in 0..max_iter {
        let mut done = true;
        for k in 0..z.len() {
            let (p, dp) = horner(coeffs, &z[k]);
            if p.is_zero() {
                continue;
            }
            if dp.is_zero() {
                // nudge off a critical point
                z[k] = &z[k] + &BigComplex::from_f64(1e-3, 1e-3, prec);
                done = false;
                continue;
            }
            let w = &p / &dp;
            let mut s = BigComplex::zero(prec);
            for j in 0..z.len() {
                if j != k {
                    let d = &z[k] - &z[j];
                    if !d.is_zero() {
                        s = s + &one / &d;
                    }
                }
            }
            let denom = &one - &(&w * &s);
            let step = if denom.is_zero() { w } else { &w / &denom };
            let scale = z[k].max_abs().magnitude_bits().unwrap_or(0).max(0);
            if step.max_abs().magnitude_bits().is_some_and(|m| m > scale - stop_bits) {
                done = false;
            }
            z[k] = &z[k] - &step;
        }
        if done {
            return Some(it + 1);
        }
    }
    None
}

fn squarefree_roots(f: &Poly, ctx: &Ctx) -> Result<(Vec<BigComplex>, BigFloat, usize)> {
    let prec = ctx.prec();
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok((Vec::new(), BigFloat::zero(prec), 0));
    }
    if n == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        return Ok((vec![BigComplex::from_real(ctx.q(&r))], BigFloat::zero(prec), 0));
    }
    let monic = f.monic();
    // Cauchy radius
    let radius = 1.0
        + monic.coeffs()[..n]
            .iter()
            .map(|c| q_to_f64(c).abs())
            .fold(0.0, f64::max);
    let coarse_prec = 64;
    let coarse: Vec<BigComplex> = monic
        .coeffs()
        .iter()
        .map(|c| BigComplex::from_real(BigFloat::from_q(c, coarse_prec)))
        .collect();
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            BigComplex::from_f64(radius * a.cos(), radius * a.sin(), coarse_prec)
        })
        .collect();
    let fail = |stage: &str| {
        Error::RootIteration(format!(
            "Aberth iteration did not converge ({stage}) for {}; coefficients [{}]",
            monic.to_string_var("y"),
            monic.coeffs().iter().map(fmt_q).collect::<Vec<_>>().join(", ")
        ))
    };
    let it1 = aberth(&coarse, &mut z, 48, 500).ok_or_else(|| fail("64-bit pass"))?;
    // Evaluation noise grows like radius^n; refine with that many guard bits.
    let guard = 32 + (n as f64 * radius.log2()).ceil() as u32;
    let wp = prec + guard;
    let wctx = Ctx::new(wp);
    let fine: Vec<BigComplex> = monic
        .coeffs()
        .iter()
        .map(|c| BigComplex::from_real(wctx.q(c)))
        .collect();
    let mut z: Vec<BigComplex> = z.into_iter().map(|x| x.with_prec(wp)).collect();
    let it2 = aberth(&fine, &mut z, prec as i64 + 8, 200).ok_or_else(|| fail("refinement"))?;
    let mut worst = BigFloat::zero(prec);
    for x in &z {
        let r = horner(&fine, x).0.abs().with_prec(prec);
        worst = BigFloat::max_value(worst, r);
    }
    Ok((z.into_iter().map(|x| x.with_prec(prec)).collect(), worst, it1 + it2))
}

/// All complex roots of a rational polynomial with multiplicities.
///
/// Residuals are certified below `2^-(prec/2)`; failure to reach that is
/// reported as [`Error::RootIteration`].
pub fn poly_roots(p: &Poly, ctx: &Ctx) -> Result<RootReport> {
    if p.is_zero() {
        return Err(Error::Domain("roots of the zero polynomial".into()));
    }
    let factors = p.squarefree_factors();
    let solved: Vec<Result<(usize, Vec<BigComplex>, BigFloat, usize)>> = factors
        .par_iter()
        .enumerate()
        .map(|(i, f)| squarefree_roots(f, ctx).map(|(r, res, it)| (i + 1, r, res, it)))
        .collect();
    let prec = ctx.prec();
    let bound = BigFloat::pow2(-(prec as i64 / 2), prec);
    let mut roots = Vec::new();
    let mut max_residual = BigFloat::zero(prec);
    let mut iterations = 0;
    for s in solved {
        let (mult, rs, res, it) = s?;
        if res > bound {
            return Err(Error::RootIteration(format!(
                "residual {} exceeds 2^-{}",
                res.to_sci(6),
                prec / 2
            )));
        }
        max_residual = BigFloat::max_value(max_residual, res);
        iterations += it;
        roots.extend(rs.into_iter().map(|value| Root { value, multiplicity: mult }));
    }
    Ok(RootReport { roots, max_residual, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn near(a: &BigComplex, re: f64, im: f64) -> bool {
        let (x, y) = a.to_f64();
        (x - re).abs() < 1e-12 && (y - im).abs() < 1e-12
    }

    #[test]
    fn cube_roots_of_unity() {
        let ctx = Ctx::new(256);
        let p = Poly::from_i64(&[-1, 0, 0, 1]);
        let rep = poly_roots(&p, &ctx).unwrap();
        assert_eq!(rep.roots.len(), 3);
        let s3 = 3f64.sqrt() / 2.0;
        for (re, im) in [(1.0, 0.0), (-0.5, s3), (-0.5, -s3)] {
            assert!(rep.roots.iter().any(|r| near(&r.value, re, im)));
        }
        assert!(rep.max_residual.magnitude_bits().is_none_or(|m| m < -240));
    }

    #[test]
    fn multiplicities() {
        let ctx = Ctx::new(128);
        // y (y + 1)^2
        let p = Poly::from_i64(&[0, 1, 2, 1]);
        let rep = poly_roots(&p, &ctx).unwrap();
        let mut got: Vec<(f64, usize)> = rep.roots.iter().map(|r| (r.value.to_f64().0, r.multiplicity)).collect();
        got.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(got.len(), 2);
        assert!((got[0].0 + 1.0).abs() < 1e-30 && got[0].1 == 2);
        assert!(got[1].0.abs() < 1e-30 && got[1].1 == 1);
        let rep = poly_roots(&Poly::from_i64(&[0, 0, 0, 1]), &ctx).unwrap();
        assert_eq!(rep.roots.len(), 1);
        assert_eq!(rep.roots[0].multiplicity, 3);
    }

    #[test]
    fn headline_cubic_roots_sum() {
        let ctx = Ctx::new(256);
        let p = Poly::new(vec![qr(23, 256), qr(-1, 2), qr(1, 2), q(1)]);
        let rep = poly_roots(&p, &ctx).unwrap();
        let sum = rep
            .roots
            .iter()
            .fold(BigComplex::zero(256), |acc, r| acc + &r.value);
        let target = BigComplex::from_q(&qr(-1, 2), &q(0), 256);
        assert!((sum - target).max_abs().magnitude_bits().is_none_or(|m| m < -240));
    }
}
