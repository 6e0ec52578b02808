//! Shape predicates for finite point sets: collinear, equilateral, regular
//! polygon; plus a classifier for the difference-divisor patterns.

use crate::error::{Error, Result};
use crate::numeric::{BigComplex, BigFloat, Ctx};

use super::divisor::Divisor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeMode {
    Collinear,
    Equilateral,
    RegularMgon(usize),
}

fn max_pairwise(points: &[BigComplex], prec: u32) -> BigFloat {
    let mut m = BigFloat::zero(prec);
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            m = BigFloat::max_value(m, (a - b).abs());
        }
    }
    m
}

/// Shape test with relative tolerance `tol * scale`, `scale` the largest
/// pairwise distance. Coincident points (closer than `tol * scale`) are
/// rejected.
///
/// The collinearity test compares the cross product, a quantity of
/// dimension length², against `tol * scale²`.
pub fn shape_test(points: &[BigComplex], mode: ShapeMode, tol: &BigFloat, ctx: &Ctx) -> Result<bool> {
    let prec = ctx.prec();
    if points.len() < 2 {
        return Err(Error::Domain("shape tests need at least two points".into()));
    }
    let scale = max_pairwise(points, prec);
    let bound = tol * &scale;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if (a - b).abs() <= bound {
                return Err(Error::CoincidentPoints(format!("{a:.12} and {b:.12}")));
            }
        }
    }
    match mode {
        ShapeMode::Collinear => {
            let s1 = &points[0];
            let u = &points[1] - s1;
            let bound2 = &bound * &scale;
            Ok(points[2..].iter().all(|s| {
                let v = s - s1;
                let cross = (&u * &v.conj()).im;
                cross.abs() <= bound2
            }))
        }
        ShapeMode::Equilateral => {
            if points.len() != 3 {
                return Err(Error::Domain("equilateral test needs exactly three points".into()));
            }
            let d = [
                (&points[0] - &points[1]).abs(),
                (&points[1] - &points[2]).abs(),
                (&points[2] - &points[0]).abs(),
            ];
            Ok((0..3).all(|i| (&d[i] - &d[(i + 1) % 3]).abs() <= bound))
        }
        ShapeMode::RegularMgon(m) => {
            if points.len() != m || m < 3 {
                return Ok(false);
            }
            let nf = BigFloat::from_i64(m as i64, prec);
            let centroid = points.iter().fold(BigComplex::zero(prec), |acc, p| acc + p);
            let centroid = BigComplex::new(centroid.re.div(&nf), centroid.im.div(&nf));
            let mut rel: Vec<BigComplex> = points.iter().map(|p| p - &centroid).collect();
            let r0 = rel[0].abs();
            if rel.iter().any(|r| (&r.abs() - &r0).abs() > bound) {
                return Ok(false);
            }
            rel.sort_by(|a, b| {
                let (x, y) = a.to_f64();
                let (u, v) = b.to_f64();
                y.atan2(x).partial_cmp(&v.atan2(u)).unwrap_or(std::cmp::Ordering::Equal)
            });
            let angle = ctx.pi() * ctx.num(2) * ctx.num(1).div(&nf);
            let omega = BigComplex::from_polar(&ctx.num(1), &angle, ctx);
            Ok((0..m).all(|k| {
                let next = &rel[(k + 1) % m];
                (next - &(&rel[k] * &omega)).abs() <= bound
            }))
        }
    }
}

/// The three symmetric patterns a difference divisor `sum_{i != j}[s_i - s_j]`
/// can take when it is invariant under rotation.
#[derive(Clone, Debug, PartialEq)]
pub enum DifferencePattern {
    /// Six simple points forming a regular hexagon (equilateral triple).
    RegularHexagon,
    /// `[-2l] + 2[-l] + 2[l] + [2l]` (equally spaced collinear triple).
    EquallySpacedLine { lambda: (f64, f64) },
    /// `2[-l] + 2[0] + 2[l]` (one repeated point).
    DoubledLine { lambda: (f64, f64) },
}

/// Matches a difference divisor against the three patterns.
pub fn classify_difference_pattern(d: &Divisor, tol: &BigFloat, ctx: &Ctx) -> Option<DifferencePattern> {
    let entries = d.entries();
    let mults: Vec<i64> = {
        let mut m: Vec<i64> = entries.iter().map(|e| e.multiplicity).collect();
        m.sort();
        m
    };
    let prec = ctx.prec();
    let pts: Vec<BigComplex> = entries.iter().map(|e| e.point.clone()).collect();
    let scale = if pts.len() >= 2 { max_pairwise(&pts, prec) } else { BigFloat::zero(prec) };
    let bound = tol * &scale;
    let near = |a: &BigComplex, b: &BigComplex| (a - b).abs() <= bound;
    match mults.as_slice() {
        [1, 1, 1, 1, 1, 1] => shape_test(&pts, ShapeMode::RegularMgon(6), tol, ctx)
            .ok()
            .filter(|&ok| ok)
            .map(|_| DifferencePattern::RegularHexagon),
        [1, 1, 2, 2] => {
            let l = entries.iter().find(|e| e.multiplicity == 2)?.point.clone();
            let two = l.scale(&ctx.num(2));
            let has = |p: &BigComplex, m: i64| entries.iter().any(|e| e.multiplicity == m && near(&e.point, p));
            (has(&-&l, 2) && has(&two, 1) && has(&-&two, 1))
                .then(|| DifferencePattern::EquallySpacedLine { lambda: l.to_f64() })
        }
        [2, 2, 2] => {
            let zero = BigComplex::zero(prec);
            let l = entries.iter().find(|e| !near(&e.point, &zero))?.point.clone();
            let has = |p: &BigComplex| entries.iter().any(|e| near(&e.point, p));
            (has(&zero) && has(&-&l)).then(|| DifferencePattern::DoubledLine { lambda: l.to_f64() })
        }
        _ => None,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::divisor::difference_divisor;
    use crate::rational::q;

    fn cube_roots(ctx: &Ctx) -> Vec<BigComplex> {
        (0..3)
            .map(|k| {
                let t = ctx.pi() * ctx.num(2 * k).div(&ctx.num(3));
                BigComplex::from_polar(&ctx.num(1), &t, ctx)
            })
            .collect()
    }

    #[test]
    fn basic_shapes() {
        let ctx = Ctx::new(128);
        let tol = BigFloat::pow2(-32, 128);
        let line: Vec<BigComplex> = [-1, 0, 1].iter().map(|&x| BigComplex::from_q(&q(x), &q(0), 128)).collect();
        assert!(shape_test(&line, ShapeMode::Collinear, &tol, &ctx).unwrap());
        assert!(!shape_test(&line, ShapeMode::Equilateral, &tol, &ctx).unwrap());
        let tri = cube_roots(&ctx);
        assert!(shape_test(&tri, ShapeMode::Equilateral, &tol, &ctx).unwrap());
        assert!(!shape_test(&tri, ShapeMode::Collinear, &tol, &ctx).unwrap());
        assert!(shape_test(&tri, ShapeMode::RegularMgon(3), &tol, &ctx).unwrap());
        let dup = vec![line[0].clone(), line[0].clone(), line[1].clone()];
        assert!(matches!(shape_test(&dup, ShapeMode::Collinear, &tol, &ctx), Err(Error::CoincidentPoints(_))));
    }

    #[test]
    fn hexagon_from_equilateral() {
        let ctx = Ctx::new(128);
        let tol = BigFloat::pow2(-32, 128);
        let mut d = Divisor::new(tol.clone());
        for p in cube_roots(&ctx) {
            d.add_point(p, None, 1);
        }
        let diff = difference_divisor(&d).unwrap();
        assert_eq!(classify_difference_pattern(&diff, &tol, &ctx), Some(DifferencePattern::RegularHexagon));
    }

    #[test]
    fn line_patterns() {
        let ctx = Ctx::new(128);
        let tol = BigFloat::pow2(-32, 128);
        let d = Divisor::from_rational(&[(q(0), q(0), 1), (q(1), q(0), 1), (q(2), q(0), 1)], 128);
        let diff = difference_divisor(&d).unwrap();
        assert!(matches!(
            classify_difference_pattern(&diff, &tol, &ctx),
            Some(DifferencePattern::EquallySpacedLine { .. })
        ));
        let doubled = Divisor::from_rational(&[(q(1), q(0), 2), (q(0), q(0), 2), (q(-1), q(0), 2)], 128);
        assert!(matches!(
            classify_difference_pattern(&doubled, &tol, &ctx),
            Some(DifferencePattern::DoubledLine { .. })
        ));
    }
}
