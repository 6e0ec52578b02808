//! Shared fixtures for the benchmarks.

use efunc_core::hypergeometric::HypParams;
use efunc_core::laplace::RElement;
use efunc_core::parse::{parse_operator, parse_polynomial, parse_r_element};
use efunc_core::rational::q;
use efunc_core::{Quartic, WeylOperator};

/// The quartic x^4 - x^2 + x.
pub fn headline_quartic() -> Quartic {
    Quartic::new(q(0), q(1), q(-1), q(0))
}

/// A resonant third-order hypergeometric operator (logarithmic solutions).
pub fn resonant_params() -> HypParams {
    let p = parse_polynomial("(t + 1/2)^2", 't').unwrap();
    let q = parse_polynomial("t^3", 't').unwrap();
    HypParams::new(p, q).unwrap()
}

pub fn laplace_input() -> RElement {
    parse_r_element("z^(1/3)*log(z)^2 - 2*z^(-5/4)*log(z) + z^3").unwrap()
}

pub fn operator_pair() -> (WeylOperator, WeylOperator) {
    (
        parse_operator("z^3*D^4 - 2*z*D^2 + z^5 + D").unwrap(),
        parse_operator("D^3*z^2 + 3*z^4*D - 7").unwrap(),
    )
}
