//! Gamma function at rational arguments.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigfloat::BigFloat;
use super::elementary::Ctx;
use crate::error::{Error, Result};
use crate::rational::{factorial, floor_i64, fmt_q, Q};

/// `Gamma(x)` for rational `x`, rejecting the poles `0, -1, -2, ...`.
pub fn gamma_q(x: &Q, ctx: &Ctx) -> Result<BigFloat> {
    if x.is_integer() {
        let n = x.to_integer();
        if !n.is_positive() {
            return Err(Error::GammaPole(fmt_q(x)));
        }
        let n = n.to_u64().ok_or_else(|| Error::Domain("gamma argument too large".into()))?;
        return Ok(BigFloat::from_bigint(&factorial(n - 1), ctx.prec()));
    }
    // shift into (0, 1)
    let k = floor_i64(x);
    let y = x - Q::from_integer(BigInt::from(k));
    let mut g = gamma_unit(&y, ctx)?;
    if k > 0 {
        for j in 0..k {
            g = g * ctx.q(&(&y + Q::from_integer(BigInt::from(j))));
        }
    } else {
        for j in k..0 {
            g = g.div(&ctx.q(&(&y + Q::from_integer(BigInt::from(j)))));
        }
    }
    Ok(g)
}

/// `Gamma(y)` for `0 < y < 1` via the lower incomplete gamma series
/// `gamma(y, N) = N^y e^-N sum_k N^k / (y (y+1) ... (y+k))`; the neglected
/// upper tail is below `N^(y-1) e^-N`, which is under `2^-(prec+64)` for the
/// chosen `N`.
fn gamma_unit(y: &Q, ctx: &Ctx) -> Result<BigFloat> {
    let prec = ctx.prec();
    let wp = prec + 64;
    let n = ((wp as f64) * std::f64::consts::LN_2).ceil() as u64 + 2;
    let (p, q) = (y.numer().clone(), y.denom().clone());
    if !p.is_positive() || p >= q {
        return Err(Error::Domain(format!("gamma_unit argument {} outside (0,1)", fmt_q(y))));
    }
    // term_k = N^k / (y)_{k+1}, in fixed point; all terms are positive
    let mut term = (BigInt::one() << wp) * &q / &p;
    let mut sum = term.clone();
    let mut k = 1u64;
    loop {
        term = term * n * &q / (&p + &q * k);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    let big = Ctx::new(wp);
    let yf = big.q(y);
    let nf = big.num(n as i64);
    let scale = big.exp(&(yf * big.ln(&nf)? - nf));
    Ok((scale * BigFloat::from_fixed(sum, wp, wp)).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn close(a: &BigFloat, b: &BigFloat, bits: i64) -> bool {
        (a - b).magnitude_bits().is_none_or(|m| m < -bits)
    }

    fn agm(a: BigFloat, b: BigFloat, bits: i64) -> BigFloat {
        let (mut a, mut b) = (a, b);
        let two = BigFloat::from_i64(2, a.prec());
        while !close(&a, &b, bits) {
            let next = (&a + &b).div(&two);
            b = (&a * &b).sqrt();
            a = next;
        }
        a
    }

    #[test]
    fn gamma_quarter_agm_oracle() {
        let ctx = Ctx::new(256);
        let g = gamma_q(&qr(1, 4), &ctx).unwrap();
        // Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(1, sqrt 2)
        let two_pi = ctx.pi() * ctx.num(2);
        let rhs = (&two_pi * &two_pi * &two_pi).sqrt().div(&agm(ctx.num(1), ctx.num(2).sqrt(), 250));
        assert!(close(&(&g * &g), &rhs, 245));
        assert!(g.to_sci(12).starts_with("3.6256099082"));
    }

    #[test]
    fn half_and_reflection() {
        let ctx = Ctx::new(200);
        let h = gamma_q(&qr(1, 2), &ctx).unwrap();
        assert!(close(&(&h * &h), &ctx.pi(), 190));
        // Gamma(1/4) Gamma(3/4) = pi sqrt 2
        let prod = gamma_q(&qr(1, 4), &ctx).unwrap() * gamma_q(&qr(3, 4), &ctx).unwrap();
        assert!(close(&prod, &(ctx.pi() * ctx.num(2).sqrt()), 190));
        // Gamma(1/3) Gamma(2/3) = 2 pi / sqrt 3
        let prod = gamma_q(&qr(1, 3), &ctx).unwrap() * gamma_q(&qr(2, 3), &ctx).unwrap();
        assert!(close(&prod, &(ctx.pi() * ctx.num(2)).div(&ctx.num(3).sqrt()), 190));
    }

    #[test]
    fn recurrence_and_poles() {
        let ctx = Ctx::new(128);
        assert_eq!(gamma_q(&q(1), &ctx).unwrap(), ctx.num(1));
        assert_eq!(gamma_q(&q(6), &ctx).unwrap(), ctx.num(120));
        let gm = gamma_q(&qr(-1, 4), &ctx).unwrap();
        let g3 = gamma_q(&qr(3, 4), &ctx).unwrap();
        assert!(close(&gm, &(g3 * ctx.num(-4)), 120));
        let g9 = gamma_q(&qr(9, 4), &ctx).unwrap();
        let g1 = gamma_q(&qr(1, 4), &ctx).unwrap();
        assert!(close(&g9, &(g1 * ctx.q(&qr(5, 16))), 120));
        assert!(matches!(gamma_q(&q(0), &ctx), Err(Error::GammaPole(_))));
        assert!(matches!(gamma_q(&q(-3), &ctx), Err(Error::GammaPole(_))));
    }
}
