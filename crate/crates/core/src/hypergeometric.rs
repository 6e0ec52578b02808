//! Hypergeometric operators `Hyp(P, Q) = Q(theta) - z P(theta)` and their
//! Kummer pullbacks `Q(theta/m) - z^m P(theta/m)`, `m = deg Q - deg P`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::divisor::{Divisor, ExactPoint};
use crate::numeric::BigFloat;
use crate::poly::Poly;
use crate::rational::{fmt_q, frac, q, qpow, qr, Q};
use crate::weyl::{Substitution, ThetaForm, WeylOperator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypParams {
    p: Poly,
    q: Poly,
}

impl HypParams {
    /// Both polynomials must be non-zero and `deg P <= deg Q`.
    pub fn new(p: Poly, q: Poly) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::InvalidParams("P and Q must be non-zero".into()));
        }
        if p.degree() > q.degree() {
            return Err(Error::InvalidParams(format!(
                "deg P = {} exceeds deg Q = {}",
                p.degree().unwrap(),
                q.degree().unwrap()
            )));
        }
        Ok(HypParams { p, q })
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn p_degree(&self) -> usize {
        self.p.degree().unwrap()
    }

    pub fn q_degree(&self) -> usize {
        self.q.degree().unwrap()
    }

    /// `m = q - p`.
    pub fn m(&self) -> usize {
        self.q_degree() - self.p_degree()
    }

    pub fn lambda_p(&self) -> Q {
        self.p.leading()
    }

    pub fn lambda_q(&self) -> Q {
        self.q.leading()
    }

    fn require_e_type(&self) -> Result<()> {
        if self.m() == 0 {
            return Err(Error::InvalidParams("E-hypergeometric operators need deg P < deg Q".into()));
        }
        Ok(())
    }
}

impl fmt::Display for HypParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}, Q = {}", self.p.to_string_var("t"), self.q.to_string_var("t"))
    }
}

/// `Q(theta) - z P(theta)`.
pub fn hyp(params: &HypParams) -> WeylOperator {
    ThetaForm::from_slices([(0, params.q.clone()), (1, -params.p.clone())]).to_operator()
}

/// `Q(theta/m) - z^m P(theta/m)`.
pub fn e_hyp(params: &HypParams) -> Result<WeylOperator> {
    params.require_e_type()?;
    let m = params.m();
    let inv = Q::one() / q(m as i64);
    let qs = params.q.compose_linear(&inv, &Q::zero());
    let ps = params.p.compose_linear(&inv, &Q::zero());
    Ok(ThetaForm::from_slices([(0, qs), (m as i64, -ps)]).to_operator())
}

/// `(P(-2-t), Q(-1-t))`, the parameters of the adjoint.
pub fn hyp_adjoint_params(params: &HypParams) -> HypParams {
    HypParams {
        p: params.p.compose_linear(&q(-1), &q(-2)),
        q: params.q.compose_linear(&q(-1), &q(-1)),
    }
}

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectivePoint {
    Finite(Q),
    Infinity,
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(x) => f.write_str(&fmt_q(x)),
            ProjectivePoint::Infinity => f.write_str("oo"),
        }
    }
}

/// `{0, oo}` if `p < q`, `{0, lambda_Q/lambda_P, oo}` if `p = q`.
pub fn singular_locus(params: &HypParams) -> Vec<ProjectivePoint> {
    let mut pts = vec![ProjectivePoint::Finite(Q::zero())];
    if params.m() == 0 {
        pts.push(ProjectivePoint::Finite(params.lambda_q() / params.lambda_p()));
    }
    pts.push(ProjectivePoint::Infinity);
    pts
}

#[derive(Clone, Debug)]
pub struct KatzReport {
    pub holds: bool,
    /// `+1` or `-1` when the identity holds.
    pub sign: i32,
    pub lhs: WeylOperator,
    pub rhs: WeylOperator,
}

/// Compares `FT(D^m e_hyp(P, Q))` with the Kummer pullback of
/// `Hyp(Q(-t-1/m), R(-t-1/m))`, `R(t) = (mt+1)(mt+2)...(mt+m) P(t)`.
pub fn katz_ft_identity_check(params: &HypParams) -> Result<KatzReport> {
    params.require_e_type()?;
    let m = params.m();
    let mq = q(m as i64);
    let lhs = (WeylOperator::d().pow(m as u32) * e_hyp(params)?).fourier_transform()?;
    let r = (1..=m as i64).fold(params.p.clone(), |acc, k| &acc * &Poly::new(vec![q(k), mq.clone()]));
    let shift = -(Q::one() / &mq);
    let new_p = params.q.compose_linear(&q(-1), &shift);
    let new_q = r.compose_linear(&q(-1), &shift);
    let rhs = hyp(&HypParams::new(new_p, new_q)?).substitute(&Substitution::Kummer(m as u32))?;
    let sign = if lhs == rhs {
        1
    } else if lhs == -rhs.clone() {
        -1
    } else {
        0
    };
    Ok(KatzReport { holds: sign != 0, sign, lhs, rhs })
}

/// Exact rational `m`-th root, if there is one.
fn rational_root(x: &Q, m: u32) -> Option<Q> {
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(m);
        (num_traits::pow(r.clone(), m as usize) == *n).then_some(r)
    };
    Some(Q::new(root(x.numer())?, root(x.denom())?))
}

/// `p [0] + sum_k [m rho e^{2 pi i k/m}]` with `rho` the principal `m`-th root
/// of `lambda_P / lambda_Q`.
pub fn e_hyp_divisor(params: &HypParams, prec: u32) -> Result<Divisor> {
    params.require_e_type()?;
    let m = params.m() as u32;
    let c = params.lambda_p() / params.lambda_q();
    let modulus_pow = qpow(&q(m as i64), m as u64) * c.abs();
    let base_turn = if c.is_negative() { qr(1, 2 * m as i64) } else { Q::zero() };
    let mut d = Divisor::new(BigFloat::pow2(-(prec as i64) / 2, prec));
    if params.p_degree() > 0 {
        d.add_exact(ExactPoint::Rational { re: Q::zero(), im: Q::zero() }, params.p_degree() as i64, prec);
    }
    let radius = rational_root(&modulus_pow, m);
    for k in 0..m {
        let turns = frac(&(&base_turn + qr(k as i64, m as i64)));
        let exact = match &radius {
            Some(r) if turns.is_zero() => ExactPoint::Rational { re: r.clone(), im: Q::zero() },
            Some(r) if turns == qr(1, 2) => ExactPoint::Rational { re: -r.clone(), im: Q::zero() },
            Some(r) if turns == qr(1, 4) => ExactPoint::Rational { re: Q::zero(), im: r.clone() },
            Some(r) if turns == qr(3, 4) => ExactPoint::Rational { re: Q::zero(), im: -r.clone() },
            _ => ExactPoint::Polar { modulus_pow: modulus_pow.clone(), m, turns },
        };
        d.add_exact(exact, 1, prec);
    }
    Ok(d)
}
