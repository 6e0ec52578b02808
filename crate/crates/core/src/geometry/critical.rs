//! Critical values of a monic quartic.
//!
//! The cubic with roots `{f(a) : f'(a) = 0}` is the characteristic
//! polynomial of multiplication by `f` on `Q[x]/(f')`, which equals the
//! monic normalisation of `Res_x(f'(x), y - f(x))`.

use num_traits::Zero;

use crate::error::Result;
use crate::numeric::roots::{poly_roots, Root};
use crate::numeric::{BigFloat, Ctx};
use crate::poly::Poly;
use crate::quartic::Quartic;
use crate::rational::{q, Q};

use super::divisor::Divisor;

#[derive(Clone, Debug)]
pub struct CriticalData {
    pub quartic: Quartic,
    pub cubic: Poly,
    pub roots: Vec<Root>,
    pub max_residual: BigFloat,
}

impl CriticalData {
    /// `sum [f(a)]` over critical points with multiplicity.
    pub fn divisor(&self, tol: BigFloat) -> Divisor {
        let mut d = Divisor::new(tol);
        for r in &self.roots {
            d.add_point(r.value.clone(), None, r.multiplicity as i64);
        }
        d
    }
}

/// Characteristic polynomial of a square rational matrix (Faddeev–LeVerrier).
pub fn charpoly(a: &[Vec<Q>]) -> Poly {
    let n = a.len();
    let matmul = |x: &[Vec<Q>], y: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + &x[i][k] * &y[k][j])).collect())
            .collect()
    };
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = q(1);
    let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = matmul(a, &next);
        let trace = (0..n).fold(Q::zero(), |s, i| s + &am[i][i]);
        coeffs[n - k] = -trace / q(k as i64);
        m = next;
    }
    Poly::new(coeffs)
}

/// Exact monic cubic whose roots are the critical values of `f`.
pub fn critical_value_polynomial(f: &Quartic) -> Poly {
    let fp = f.to_poly();
    let g = fp.derivative().monic();
    // column j: x^j f mod f'
    let cols: Vec<Poly> = (0..3)
        .map(|j| (&Poly::monomial(q(1), j) * &fp).div_rem(&g).1)
        .collect();
    let a: Vec<Vec<Q>> = (0..3).map(|i| (0..3).map(|j| cols[j].coeff(i)).collect()).collect();
    charpoly(&a)
}

/// Critical cubic together with its roots at the context precision.
pub fn critical_divisor(f: &Quartic, ctx: &Ctx) -> Result<CriticalData> {
    let cubic = critical_value_polynomial(f);
    let rep = poly_roots(&cubic, ctx)?;
    Ok(CriticalData { quartic: f.clone(), cubic, roots: rep.roots, max_residual: rep.max_residual })
}
