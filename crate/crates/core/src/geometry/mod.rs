//! Divisors in the group ring `Z[C]`, shape tests on critical values and the
//! non-hypergeometricity certificate for quartic exponential integrals.

pub mod certify;
pub mod critical;
pub mod divisor;
pub mod shape;

pub use certify::{certify, Certificate, Grade, RefusalReason, Verdict};
pub use critical::{critical_divisor, critical_value_polynomial, CriticalData};
pub use divisor::{difference_divisor, Divisor, DivisorEntry, ExactPoint};
pub use shape::{classify_difference_pattern, shape_test, DifferencePattern, ShapeMode};
