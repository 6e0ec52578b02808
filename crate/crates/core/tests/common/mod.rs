#![allow(dead_code)]

use std::collections::BTreeMap;

use efunc_core::geometry::Divisor;
use efunc_core::laplace::RElement;
use efunc_core::numeric::{BigComplex, BigFloat, Ctx};
use efunc_core::poly::Poly;
use efunc_core::rational::{q, qr};
use efunc_core::{WeylOperator, Q};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_q(rng: &mut impl Rng, num: i64, den: i64) -> Q {
    qr(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn rand_nonzero_q(rng: &mut impl Rng, num: i64, den: i64) -> Q {
    loop {
        let x = rand_q(rng, num, den);
        if x != q(0) {
            return x;
        }
    }
}

/// Up to five terms `c z^i D^j` with `i, j < 4`.
pub fn rand_operator(rng: &mut impl Rng) -> WeylOperator {
    let n = rng.gen_range(1..=5);
    WeylOperator::from_terms(
        (0..n).map(|_| ((rng.gen_range(0..4), rng.gen_range(0..4u32)), rand_q(rng, 9, 4))),
    )
}

/// Up to four terms `c z^a log(z)^b`, `a` with denominator dividing 12.
pub fn rand_r_element(rng: &mut impl Rng) -> RElement {
    let n = rng.gen_range(1..=4);
    (0..n).fold(RElement::zero(), |acc, _| {
        let a = qr(rng.gen_range(-36..=24), [1, 2, 3, 4, 6, 12][rng.gen_range(0..6)]);
        acc + RElement::rational_monomial(rand_q(rng, 9, 5), a, rng.gen_range(0..=3))
    })
}

pub fn rand_poly(rng: &mut impl Rng, deg: usize) -> Poly {
    let mut c: Vec<Q> = (0..deg).map(|_| rand_q(rng, 6, 4)).collect();
    c.push(rand_nonzero_q(rng, 4, 3));
    Poly::new(c)
}

/// Random rational divisor with `n` entries of small multiplicity.
pub fn rand_rational_divisor(rng: &mut impl Rng, n: usize, prec: u32) -> Divisor {
    let pts: Vec<(Q, Q, i64)> = (0..n)
        .map(|_| {
            let m = [-2, -1, 1, 1, 2, 3][rng.gen_range(0..6)];
            (rand_q(rng, 12, 3), rand_q(rng, 12, 3), m)
        })
        .collect();
    Divisor::from_rational(&pts, prec)
}

/// The divisor as an exact multiset of rational points.
pub fn exact_multiset(d: &Divisor) -> BTreeMap<(Q, Q), i64> {
    use efunc_core::geometry::ExactPoint;
    let mut m = BTreeMap::new();
    for e in d.entries() {
        match &e.exact {
            Some(ExactPoint::Rational { re, im }) => *m.entry((re.clone(), im.clone())).or_insert(0) += e.multiplicity,
            other => panic!("expected a rational point, found {other:?}"),
        }
    }
    m.retain(|_, v| *v != 0);
    m
}

pub fn cq(re: &Q, im: &Q, prec: u32) -> BigComplex {
    BigComplex::from_q(re, im, prec)
}

/// `c + r e^{i phi} w^k`, `k = 0, 1, 2`, with `w` a primitive cube root of unity.
pub fn equilateral_triple(rng: &mut impl Rng, ctx: &Ctx) -> Vec<BigComplex> {
    let prec = ctx.prec();
    let c = cq(&rand_q(rng, 20, 7), &rand_q(rng, 20, 7), prec);
    let r = ctx.q(&qr(rng.gen_range(1..=40), rng.gen_range(1..=9)));
    let phi = ctx.q(&qr(rng.gen_range(0..=1000), 159));
    let third = ctx.pi() * ctx.num(2) * ctx.q(&qr(1, 3));
    (0..3)
        .map(|k| {
            let angle = &phi + &(&third * &ctx.num(k));
            c.clone() + &BigComplex::from_polar(&r, &angle, ctx)
        })
        .collect()
}

pub fn big(x: f64, prec: u32) -> BigFloat {
    BigFloat::from_f64(x, prec)
}
