//! Monic rational quartics `f(x) = x^4 - a3 x^3 - a2 x^2 - a1 x - a0`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quartic {
    pub a3: Q,
    pub a2: Q,
    pub a1: Q,
    pub a0: Q,
}

impl Quartic {
    pub fn new(a3: Q, a2: Q, a1: Q, a0: Q) -> Self {
        Quartic { a3, a2, a1, a0 }
    }

    /// Reads the parameters off a monic degree-4 polynomial.
    pub fn from_poly(f: &Poly) -> Result<Self> {
        if f.degree() != Some(4) {
            return Err(Error::NotMonicQuartic(format!("degree of {} is not 4", f.to_string_var("x"))));
        }
        if !f.leading().is_one() {
            return Err(Error::NotMonicQuartic(format!("{} is not monic", f.to_string_var("x"))));
        }
        Ok(Quartic {
            a3: -f.coeff(3),
            a2: -f.coeff(2),
            a1: -f.coeff(1),
            a0: -f.coeff(0),
        })
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![
            -self.a0.clone(),
            -self.a1.clone(),
            -self.a2.clone(),
            -self.a3.clone(),
            Q::one(),
        ])
    }

    /// `(a3, a2, a1, a0)`.
    pub fn params(&self) -> [Q; 4] {
        [self.a3.clone(), self.a2.clone(), self.a1.clone(), self.a0.clone()]
    }

    pub fn is_pure(&self) -> bool {
        self.params().iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Quartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly().to_string_var("x"))
    }
}
