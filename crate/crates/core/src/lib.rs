//! Exact and multiprecision tools for E-functions attached to quartic
//! exponential integrals.
//!
//! The crate is layered bottom-up: exact rationals and polynomials, the Weyl
//! algebra of differential operators, hypergeometric operators with their
//! Frobenius solution bases, the formal Laplace transform on `z^a log(z)^b`,
//! divisor geometry and the non-hypergeometricity certificate, exact series
//! for the E-functions `E_0` and `E_2`, and the multiprecision numerics
//! (gamma values, double-exponential quadrature, fundamental matrices).

pub mod efn;
pub mod error;
pub mod frobenius;
pub mod geometry;
pub mod hypergeometric;
pub mod laplace;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod quartic;
pub mod rational;
pub mod weyl;

pub use error::{Error, Result};
pub use poly::Poly;
pub use quartic::Quartic;
pub use rational::Q;
pub use weyl::{Substitution, ThetaForm, WeylOperator};
