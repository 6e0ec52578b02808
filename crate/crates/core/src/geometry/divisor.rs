//! Finite formal sums `sum m_i [s_i]` of points of `C`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{BigComplex, BigFloat, Ctx};
use crate::rational::{fmt_q, q, Q};

/// Exact description of a point, when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactPoint {
    /// `re + i im`.
    Rational { re: Q, im: Q },
    /// `R^(1/m) e^(2 pi i turns)` with `R > 0`.
    Polar { modulus_pow: Q, m: u32, turns: Q },
}

impl ExactPoint {
    pub fn to_complex(&self, ctx: &Ctx) -> BigComplex {
        match self {
            ExactPoint::Rational { re, im } => BigComplex::from_q(re, im, ctx.prec()),
            ExactPoint::Polar { modulus_pow, m, turns } => {
                let r = ctx
                    .powf(&ctx.q(modulus_pow), &ctx.q(&(Q::one() / q(*m as i64))))
                    .expect("positive modulus");
                let theta = ctx.pi() * ctx.num(2) * ctx.q(turns);
                BigComplex::from_polar(&r, &theta, ctx)
            }
        }
    }

    fn neg(&self) -> ExactPoint {
        match self {
            ExactPoint::Rational { re, im } => ExactPoint::Rational { re: -re.clone(), im: -im.clone() },
            ExactPoint::Polar { modulus_pow, m, turns } => {
                let mut t = turns + crate::rational::qr(1, 2);
                t = crate::rational::frac(&t);
                ExactPoint::Polar { modulus_pow: modulus_pow.clone(), m: *m, turns: t }
            }
        }
    }

    fn add(&self, other: &ExactPoint) -> Option<ExactPoint> {
        match (self, other) {
            (ExactPoint::Rational { re: a, im: b }, ExactPoint::Rational { re: c, im: d }) => {
                Some(ExactPoint::Rational { re: a + c, im: b + d })
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ExactPoint::Rational { re, im } if im.is_zero() => fmt_q(re),
            ExactPoint::Rational { re, im } => format!("{} + {}i", fmt_q(re), fmt_q(im)),
            ExactPoint::Polar { modulus_pow, m, turns } => {
                format!("({})^(1/{m})*exp(2*pi*i*{})", fmt_q(modulus_pow), fmt_q(turns))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct DivisorEntry {
    pub point: BigComplex,
    pub exact: Option<ExactPoint>,
    pub multiplicity: i64,
}

/// Points are merged when they agree exactly (both rational) or lie within
/// the absolute merge tolerance.
#[derive(Clone, Debug)]
pub struct Divisor {
    entries: Vec<DivisorEntry>,
    tol: BigFloat,
}

impl Divisor {
    pub fn new(tol: BigFloat) -> Self {
        Divisor { entries: Vec::new(), tol }
    }

    /// Divisor of rational points, `sum m [re + i im]`.
    pub fn from_rational(points: &[(Q, Q, i64)], prec: u32) -> Self {
        let mut d = Divisor::new(BigFloat::pow2(-(prec as i64) / 2, prec));
        for (re, im, m) in points {
            d.add_exact(ExactPoint::Rational { re: re.clone(), im: im.clone() }, *m, prec);
        }
        d
    }

    pub fn tol(&self) -> &BigFloat {
        &self.tol
    }

    pub fn entries(&self) -> &[DivisorEntry] {
        &self.entries
    }

    pub fn add_exact(&mut self, p: ExactPoint, mult: i64, prec: u32) {
        let point = match &p {
            ExactPoint::Rational { re, im } => BigComplex::from_q(re, im, prec),
            ExactPoint::Polar { .. } => p.to_complex(&Ctx::new(prec)),
        };
        self.add_point(point, Some(p), mult);
    }

    pub fn add_point(&mut self, point: BigComplex, exact: Option<ExactPoint>, mult: i64) {
        if mult == 0 {
            return;
        }
        let hit = self.entries.iter().position(|e| match (&e.exact, &exact) {
            (Some(a @ ExactPoint::Rational { .. }), Some(b @ ExactPoint::Rational { .. })) => a == b,
            _ => (&e.point - &point).max_abs() <= self.tol,
        });
        match hit {
            Some(i) => {
                self.entries[i].multiplicity += mult;
                if self.entries[i].multiplicity == 0 {
                    self.entries.remove(i);
                }
            }
            None => self.entries.push(DivisorEntry { point, exact, multiplicity: mult }),
        }
    }

    /// `sum m_i`.
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `sum m_i s_i`.
    pub fn evaluation(&self) -> BigComplex {
        let prec = self.tol.prec();
        self.entries.iter().fold(BigComplex::zero(prec), |acc, e| {
            acc + e.point.scale(&BigFloat::from_i64(e.multiplicity, prec))
        })
    }

    /// Exact evaluation when every point is rational.
    pub fn evaluation_exact(&self) -> Option<(Q, Q)> {
        let mut re = Q::zero();
        let mut im = Q::zero();
        for e in &self.entries {
            match &e.exact {
                Some(ExactPoint::Rational { re: a, im: b }) => {
                    re += a * q(e.multiplicity);
                    im += b * q(e.multiplicity);
                }
                _ => return None,
            }
        }
        Some((re, im))
    }

    /// `sum m_i [-s_i]`.
    pub fn inversion(&self) -> Divisor {
        let mut d = Divisor::new(self.tol.clone());
        for e in &self.entries {
            d.add_point(-&e.point, e.exact.as_ref().map(ExactPoint::neg), e.multiplicity);
        }
        d
    }

    /// Group-ring product `[a] * [b] = [a + b]`.
    pub fn convolve(&self, other: &Divisor) -> Divisor {
        let tol = BigFloat::max_value(self.tol.clone(), other.tol.clone());
        let mut d = Divisor::new(tol);
        for a in &self.entries {
            for b in &other.entries {
                let exact = match (&a.exact, &b.exact) {
                    (Some(x), Some(y)) => x.add(y),
                    _ => None,
                };
                d.add_point(&a.point + &b.point, exact, a.multiplicity * b.multiplicity);
            }
        }
        d
    }

    /// Formal sum of divisors.
    pub fn sum(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for e in &other.entries {
            d.add_point(e.point.clone(), e.exact.clone(), e.multiplicity);
        }
        d
    }

    pub fn scale_multiplicities(&self, k: i64) -> Divisor {
        let mut d = Divisor::new(self.tol.clone());
        for e in &self.entries {
            d.add_point(e.point.clone(), e.exact.clone(), e.multiplicity * k);
        }
        d
    }

    /// Equality as formal sums, up to the merge tolerance.
    pub fn same_as(&self, other: &Divisor) -> bool {
        self.sum(&other.scale_multiplicities(-1)).entries.is_empty()
    }

    /// Points repeated according to (positive) multiplicity.
    pub fn points_with_multiplicity(&self) -> Vec<BigComplex> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.point.clone(), e.multiplicity.max(0) as usize))
            .collect()
    }
}

/// `sum_{i != j} [s_i - s_j]` for a divisor of three simple points.
pub fn difference_divisor(d: &Divisor) -> Result<Divisor> {
    if d.entries.len() != 3 || d.entries.iter().any(|e| e.multiplicity != 1) {
        return Err(Error::Divisor(format!(
            "expected three distinct simple points, got degree {} with {} distinct points",
            d.degree(),
            d.entries.len()
        )));
    }
    let mut out = Divisor::new(d.tol.clone());
    for (i, a) in d.entries.iter().enumerate() {
        for (j, b) in d.entries.iter().enumerate() {
            if i == j {
                continue;
            }
            let exact = match (&a.exact, &b.exact) {
                (Some(x), Some(y)) => x.add(&y.neg()),
                _ => None,
            };
            out.add_point(&a.point - &b.point, exact, 1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(points: &[(i64, i64)]) -> Divisor {
        let pts: Vec<(Q, Q, i64)> = points.iter().map(|(p, m)| (q(*p), q(0), *m)).collect();
        Divisor::from_rational(&pts, 128)
    }

    #[test]
    fn convolution_examples() {
        let d = rd(&[(1, 1), (-1, 1)]);
        let sq = d.convolve(&d);
        assert!(sq.same_as(&rd(&[(2, 1), (0, 2), (-2, 1)])));
        assert!(d.convolve(&rd(&[(0, 1)])).same_as(&d));
        assert_eq!(sq.degree(), 4);
    }

    #[test]
    fn stats() {
        let d = rd(&[(3, 1)]);
        assert_eq!(d.degree(), 1);
        assert_eq!(d.evaluation_exact(), Some((q(3), q(0))));
        assert!(d.inversion().same_as(&rd(&[(-3, 1)])));
    }

    #[test]
    fn differences() {
        let d = rd(&[(0, 1), (1, 1), (2, 1)]);
        let diff = difference_divisor(&d).unwrap();
        assert!(diff.same_as(&rd(&[(1, 2), (-1, 2), (2, 1), (-2, 1)])));
        assert_eq!(diff.evaluation_exact(), Some((q(0), q(0))));
        assert!(difference_divisor(&rd(&[(0, 3)])).is_err());
    }

    #[test]
    fn polar_points() {
        let ctx = Ctx::new(128);
        // 8^(1/3) e^{2 pi i / 2} = -2
        let p = ExactPoint::Polar { modulus_pow: q(8), m: 3, turns: crate::rational::qr(1, 2) };
        let (re, im) = p.to_complex(&ctx).to_f64();
        assert!((re + 2.0).abs() < 1e-30 && im.abs() < 1e-30);
        let n = p.neg().to_complex(&ctx).to_f64();
        assert!((n.0 - 2.0).abs() < 1e-30);
    }
}
