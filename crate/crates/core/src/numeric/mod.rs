//! Multiprecision numerics: floats, complex numbers, gamma values,
//! double-exponential quadrature, polynomial roots and the period integrals.

pub mod bigfloat;
pub mod complex;
pub mod elementary;
pub mod gamma;
pub mod periods;
pub mod quad;
pub mod roots;

pub use bigfloat::BigFloat;
pub use complex::BigComplex;
pub use elementary::Ctx;
