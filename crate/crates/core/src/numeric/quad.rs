//! Double-exponential quadrature on `(0, inf)` with the exp-sinh map
//! `x = exp(pi/2 sinh t)`.
//!
//! The step is halved level by level (reusing previous nodes) until two
//! successive levels agree; the final difference is the reported error
//! estimate.

use rayon::prelude::*;

use super::bigfloat::BigFloat;
use super::complex::BigComplex;
use super::elementary::Ctx;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub values: Vec<BigComplex>,
    /// `max_i |S_L - S_{L-1}|` over the components at the accepting level.
    pub error: BigFloat,
    pub levels: u32,
    pub nodes: usize,
    /// Bits of the working precision not claimed by the acceptance test.
    pub guard_bits: u32,
}

#[derive(Clone, Debug)]
pub struct QuadOptions {
    /// Upper end of the `x` range; the integrand is assumed negligible beyond.
    pub x_max: f64,
    pub guard_bits: u32,
    pub min_levels: u32,
    pub max_levels: u32,
}

impl QuadOptions {
    pub fn new(x_max: f64) -> Self {
        QuadOptions { x_max, guard_bits: 16, min_levels: 3, max_levels: 12 }
    }
}

/// Abscissa and weight `(x(t), x'(t))` at `t = k 2^-level`.
fn node(k: i64, level: u32, ctx: &Ctx) -> (BigFloat, BigFloat) {
    let prec = ctx.prec();
    let t = BigFloat::from_i64(k, prec).mul_2k(-(level as i64));
    let et = ctx.exp(&t);
    let inv = ctx.num(1).div(&et);
    let half_pi = ctx.pi().mul_2k(-1);
    let sinh = (&et - &inv).mul_2k(-1);
    let cosh = (&et + &inv).mul_2k(-1);
    let x = ctx.exp(&(&half_pi * &sinh));
    let w = &half_pi * &cosh * &x;
    (x, w)
}

/// Integrates the vector-valued `g` over `(0, inf)`.
///
/// `g` must decay at least like a power of `x` near 0 and be negligible
/// (below `2^-prec` in magnitude) beyond `opts.x_max`.
pub fn exp_sinh<F>(g: F, width: usize, opts: &QuadOptions, ctx: &Ctx) -> Result<QuadResult>
where
    F: Fn(&BigFloat) -> Vec<BigComplex> + Sync,
{
    let prec = ctx.prec();
    let wp = prec as f64 + 32.0;
    let t_min = -(2.0 * wp * std::f64::consts::LN_2 / std::f64::consts::PI).asinh();
    let t_max = (2.0 * opts.x_max.max(1.0).ln() / std::f64::consts::PI).asinh().max(1.0);

    let eval = |k: i64, level: u32| -> (Vec<BigComplex>, BigFloat) {
        let (x, w) = node(k, level, ctx);
        let v: Vec<BigComplex> = g(&x).into_iter().map(|c| c.scale(&w)).collect();
        let mass = v.iter().fold(BigFloat::zero(prec), |m, c| BigFloat::max_value(m, c.max_abs()));
        (v, mass)
    };

    let mut raw = vec![BigComplex::zero(prec); width];
    let mut mass = BigFloat::zero(prec);
    let mut prev: Option<Vec<BigComplex>> = None;
    let mut nodes = 0usize;
    for level in 0..=opts.max_levels {
        let scale = (1i64 << level) as f64;
        let lo = (t_min * scale).floor() as i64;
        let hi = (t_max * scale).ceil() as i64;
        let ks: Vec<i64> = (lo..=hi).filter(|k| level == 0 || k.rem_euclid(2) == 1).collect();
        let fresh: Vec<(Vec<BigComplex>, BigFloat)> = ks.par_iter().map(|&k| eval(k, level)).collect();
        nodes += fresh.len();
        for (v, m) in fresh {
            for (acc, c) in raw.iter_mut().zip(v) {
                *acc = &*acc + &c;
            }
            mass = mass + m;
        }
        let h = level as i64;
        let current: Vec<BigComplex> = raw
            .iter()
            .map(|c| BigComplex::new(c.re.mul_2k(-h), c.im.mul_2k(-h)))
            .collect();
        if let Some(p) = &prev {
            let err = current
                .iter()
                .zip(p)
                .fold(BigFloat::zero(prec), |e, (a, b)| BigFloat::max_value(e, (a - b).max_abs()));
            let target = mass.mul_2k(-h).mul_2k(-((prec - opts.guard_bits) as i64));
            if level >= opts.min_levels && err <= target {
                return Ok(QuadResult {
                    values: current,
                    error: err,
                    levels: level + 1,
                    nodes,
                    guard_bits: opts.guard_bits,
                });
            }
        }
        prev = Some(current);
    }
    Err(Error::Quadrature(format!(
        "no agreement between successive levels after {} levels ({nodes} nodes)",
        opts.max_levels + 1
    )))
}
