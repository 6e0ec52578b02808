//! Certificate that a quartic's critical values are distinct, not collinear
//! and not the vertices of an equilateral triangle.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::numeric::{BigComplex, BigFloat, Ctx};
use crate::poly::Poly;
use crate::quartic::Quartic;
use crate::rational::{q, Q};

use super::critical::{critical_divisor, critical_value_polynomial};
use super::shape::{shape_test, ShapeMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefusalReason {
    NotDistinct,
    Collinear,
    Equilateral,
}

impl fmt::Display for RefusalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefusalReason::NotDistinct => "not distinct",
            RefusalReason::Collinear => "collinear",
            RefusalReason::Equilateral => "equilateral",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refused(RefusalReason),
}

/// Whether a flag was decided by exact rational arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    Exact,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub input: Quartic,
    pub cubic: Poly,
    pub distinct: bool,
    pub collinear: bool,
    pub equilateral: bool,
    pub verdict: Verdict,
    pub precision_bits: u32,
    pub tolerance: BigFloat,
    /// Critical values (with multiplicity) at `precision_bits`.
    pub critical_values: Vec<BigComplex>,
    pub collinear_grade: Grade,
    pub equilateral_grade: Grade,
    /// Numeric shape-test outcomes; `None` when the points are not distinct.
    pub collinear_numeric: Option<bool>,
    pub equilateral_numeric: Option<bool>,
}

/// Depressed form `t^3 + p t + q` of a monic cubic (`y = t - c2/3`).
pub fn depressed(cubic: &Poly) -> (Q, Q) {
    let (c2, c1, c0) = (cubic.coeff(2), cubic.coeff(1), cubic.coeff(0));
    let three = q(3);
    let p = &c1 - &c2 * &c2 / &three;
    let qq = q(2) * &c2 * &c2 * &c2 / q(27) - &c2 * &c1 / &three + &c0;
    (p, qq)
}

/// Default tolerance `2^-(prec/4)`.
pub fn default_tolerance(prec: u32) -> BigFloat {
    BigFloat::pow2(-(prec as i64 / 4), prec)
}

pub fn certify(f: &Quartic, prec: u32, tol: Option<BigFloat>) -> Result<Certificate> {
    let ctx = Ctx::new(prec);
    let tol = tol.unwrap_or_else(|| default_tolerance(prec));
    let cubic = critical_value_polynomial(f);
    let distinct = cubic.is_squarefree();
    let data = critical_divisor(f, &ctx)?;
    let values: Vec<BigComplex> = data
        .roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value.clone(), r.multiplicity))
        .collect();

    let (p, qq) = depressed(&cubic);
    // for a real cubic with simple roots: all roots real (disc >= 0), or the
    // real root sits on the axis of the conjugate pair (q = 0)
    let disc = -q(4) * &p * &p * &p - q(27) * &qq * &qq;
    let (collinear_numeric, equilateral_numeric) = if distinct {
        (
            Some(shape_test(&values, ShapeMode::Collinear, &tol, &ctx)?),
            Some(shape_test(&values, ShapeMode::Equilateral, &tol, &ctx)?),
        )
    } else {
        (None, None)
    };
    let (collinear, equilateral) = if distinct {
        (!disc.is_negative() || qq.is_zero(), p.is_zero())
    } else {
        (true, false)
    };
    let verdict = if !distinct {
        Verdict::Refused(RefusalReason::NotDistinct)
    } else if collinear {
        Verdict::Refused(RefusalReason::Collinear)
    } else if equilateral {
        Verdict::Refused(RefusalReason::Equilateral)
    } else {
        Verdict::Certified
    };
    Ok(Certificate {
        input: f.clone(),
        cubic,
        distinct,
        collinear,
        equilateral,
        verdict,
        precision_bits: prec,
        tolerance: tol,
        critical_values: values,
        collinear_grade: Grade::Exact,
        equilateral_grade: Grade::Exact,
        collinear_numeric,
        equilateral_numeric,
    })
}

impl Certificate {
    /// True when the numeric shape tests agree with the exact decisions.
    pub fn numeric_agrees(&self) -> bool {
        self.collinear_numeric.is_none_or(|c| c == self.collinear)
            && self.equilateral_numeric.is_none_or(|e| e == self.equilateral)
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(c: &[Q]) -> Quartic {
        Quartic::from_poly(&Poly::new(c.to_vec())).unwrap()
    }

    #[test]
    fn headline_and_refusals() {
        let cases = [
            (vec![q(0), q(1), q(-1), q(0), q(1)], Verdict::Certified),
            (vec![q(0), q(1), q(0), q(0), q(1)], Verdict::Refused(RefusalReason::Equilateral)),
            (vec![q(0), q(0), q(-2), q(0), q(1)], Verdict::Refused(RefusalReason::NotDistinct)),
            (
                vec![q(0), crate::rational::qr(1, 4), q(-2), q(0), q(1)],
                Verdict::Refused(RefusalReason::Collinear),
            ),
        ];
        for (c, want) in cases {
            let cert = certify(&quartic(&c), 256, None).unwrap();
            assert_eq!(cert.verdict, want, "{}", cert.input);
            assert!(cert.numeric_agrees(), "{}", cert.input);
        }
    }

    #[test]
    fn headline_flags() {
        let cert = certify(&quartic(&[q(0), q(1), q(-1), q(0), q(1)]), 256, None).unwrap();
        assert!(cert.distinct && !cert.collinear && !cert.equilateral);
    }

    #[test]
    fn vertical_line_is_collinear() {
        // critical cubic with q = 0 and p > 0: values 0, +-i sqrt(p) after centring
        let cubic = Poly::from_i64(&[0, 1, 0, 1]);
        let (p, qq) = depressed(&cubic);
        assert_eq!((p, qq), (q(1), q(0)));
    }
}
