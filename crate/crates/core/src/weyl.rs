//! Differential operators in the Weyl algebra `Q[z, D]` (and its localisation
//! at `z`), stored in the normal form `sum c_ij z^i D^j` with every power of
//! `z` to the left.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{binomial, fmt_q, q, qpow, Q};

/// Element of `Q[z, D]`, or of `Q[z, 1/z, D]` when flagged as punctured.
///
/// Keys are `(z-degree, D-degree)`; zero coefficients are never stored.
#[derive(Clone, Default)]
pub struct WeylOperator {
    terms: BTreeMap<(i64, u32), Q>,
    punctured: bool,
}

impl PartialEq for WeylOperator {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for WeylOperator {}

/// Ring maps `[h]^*` induced by the substitutions the toolkit needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `z -> lambda z`, `D -> D / lambda`.
    Scale(Q),
    /// `z -> z + s`, `D -> D`.
    Translate(Q),
    /// Kummer pullback along `z -> z^m`: `z -> z^m`, `theta -> theta / m`.
    Kummer(u32),
    /// `z -> -z`, `D -> -D`.
    Negate,
}

/// Falling factorial `c (c-1) ... (c-k+1)` for a possibly negative integer `c`.
fn falling_int(c: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * (c - i))
}

impl WeylOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn z() -> Self {
        Self::monomial(Q::one(), 1, 0)
    }

    /// The derivation `D = d/dz`.
    pub fn d() -> Self {
        Self::monomial(Q::one(), 0, 1)
    }

    /// `theta = z D`.
    pub fn theta() -> Self {
        Self::monomial(Q::one(), 1, 1)
    }

    /// `c z^i D^j`.
    pub fn monomial(c: Q, i: i64, j: u32) -> Self {
        let mut op = Self::zero();
        op.add_term(i, j, c);
        op
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, u32), Q)>>(terms: I) -> Self {
        let mut op = Self::zero();
        for ((i, j), c) in terms {
            op.add_term(i, j, c);
        }
        op
    }

    fn add_term(&mut self, i: i64, j: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        if i < 0 {
            self.punctured = true;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// Same operator, viewed on the punctured line.
    pub fn on_punctured_line(mut self) -> Self {
        self.punctured = true;
        self
    }

    pub fn is_punctured(&self) -> bool {
        self.punctured
    }

    pub fn has_negative_powers(&self) -> bool {
        self.terms.keys().any(|&(i, _)| i < 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32, &Q)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: i64, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `D`; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::from_terms(self.terms.iter().map(|(&k, v)| (k, v * c)));
        out.punctured |= self.punctured;
        out
    }

    /// Normal form of `D^m z^n` (Leibniz rule; `n` may be negative).
    fn d_pow_times_z_pow(m: u32, n: i64) -> Vec<((i64, u32), Q)> {
        (0..=m)
            .filter_map(|k| {
                let c = binomial(m as u64, k as u64) * falling_int(n, k);
                if c.is_zero() {
                    None
                } else {
                    Some(((n - k as i64, m - k), Q::from_integer(c)))
                }
            })
            .collect()
    }

    /// Composition `self ∘ rhs`, renormalised.
    pub fn multiply(&self, rhs: &WeylOperator) -> WeylOperator {
        let mut out = WeylOperator::zero();
        out.punctured = self.punctured || rhs.punctured;
        for (&(a, b), c1) in &self.terms {
            for (&(c, d), c2) in &rhs.terms {
                let coeff = c1 * c2;
                for ((i, j), k) in Self::d_pow_times_z_pow(b, c) {
                    out.add_term(a + i, j + d, &coeff * k);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> WeylOperator {
        (0..n).fold(WeylOperator::one(), |acc, _| acc.multiply(self))
    }

    /// The automorphism `z -> -D`, `D -> z`.
    pub fn fourier_transform(&self) -> Result<WeylOperator> {
        if self.has_negative_powers() {
            return Err(Error::NegativePowers("Fourier transform"));
        }
        // z^i D^j -> (-D)^i z^j
        let mut out = WeylOperator::zero();
        for (&(i, j), c) in &self.terms {
            let sign = if i % 2 == 0 { c.clone() } else { -c.clone() };
            for (k, v) in Self::d_pow_times_z_pow(i as u32, j as i64) {
                out.add_term(k.0, k.1, &sign * v);
            }
        }
        Ok(out)
    }

    /// Adjoint, `(z^n D^m)^* = (-D)^m z^n`. Also valid with negative `n`.
    pub fn adjoint(&self) -> WeylOperator {
        let mut out = WeylOperator::zero();
        out.punctured = self.punctured;
        for (&(n, m), c) in &self.terms {
            let sign = if m % 2 == 0 { c.clone() } else { -c.clone() };
            for (k, v) in Self::d_pow_times_z_pow(m, n) {
                out.add_term(k.0, k.1, &sign * v);
            }
        }
        out
    }

    /// Rewrites the operator as `sum_j z^j T_j(theta)`.
    pub fn to_theta_form(&self) -> ThetaForm {
        let mut slices: BTreeMap<i64, Poly> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            // z^i D^j = z^(i-j) theta (theta-1) ... (theta-j+1)
            let p = Poly::falling(j).scale(c);
            let e = slices.entry(i - j as i64).or_insert_with(Poly::zero);
            *e = &*e + &p;
        }
        slices.retain(|_, p| !p.is_zero());
        ThetaForm { slices }
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<WeylOperator> {
        let mut out = WeylOperator::zero();
        out.punctured = self.punctured;
        match sub {
            Substitution::Scale(lambda) => {
                if lambda.is_zero() {
                    return Err(Error::InvalidSubstitution("scale factor must be non-zero".into()));
                }
                for (&(i, j), c) in &self.terms {
                    let f = pow_signed(lambda, i - j as i64);
                    out.add_term(i, j, c * f);
                }
            }
            Substitution::Translate(s) => {
                if s.is_zero() {
                    return Ok(self.clone());
                }
                if self.has_negative_powers() {
                    return Err(Error::InvalidSubstitution(
                        "translation of an operator with negative z-powers".into(),
                    ));
                }
                for (&(i, j), c) in &self.terms {
                    for k in 0..=i as u64 {
                        let b = Q::from_integer(binomial(i as u64, k)) * qpow(s, i as u64 - k);
                        out.add_term(k as i64, j, c * b);
                    }
                }
            }
            Substitution::Negate => {
                for (&(i, j), c) in &self.terms {
                    let odd = (i + j as i64).rem_euclid(2) == 1;
                    out.add_term(i, j, if odd { -c.clone() } else { c.clone() });
                }
            }
            Substitution::Kummer(m) => {
                if *m == 0 {
                    return Err(Error::InvalidSubstitution("Kummer degree must be >= 1".into()));
                }
                let mq = q(*m as i64);
                let theta = self.to_theta_form();
                let slices = theta.slices.into_iter().map(|(j, t)| {
                    (j * *m as i64, t.compose_linear(&(Q::one() / &mq), &Q::zero()))
                });
                let mut r = ThetaForm::from_slices(slices).to_operator();
                r.punctured |= self.punctured;
                return Ok(r);
            }
        }
        Ok(out)
    }

    /// Lowest z-power slice of the theta form, returned with its index.
    pub fn indicial_polynomial_at_zero(&self) -> Result<(i64, Poly)> {
        let theta = self.to_theta_form();
        theta
            .slices
            .into_iter()
            .next()
            .ok_or(Error::ZeroOperator)
    }
}

fn pow_signed(x: &Q, e: i64) -> Q {
    if e >= 0 {
        qpow(x, e as u64)
    } else {
        Q::one() / qpow(x, (-e) as u64)
    }
}

/// `sum_j z^j T_j(theta)`; slice indices may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaForm {
    slices: BTreeMap<i64, Poly>,
}

impl ThetaForm {
    pub fn from_slices<I: IntoIterator<Item = (i64, Poly)>>(slices: I) -> Self {
        let mut map: BTreeMap<i64, Poly> = BTreeMap::new();
        for (j, p) in slices {
            let e = map.entry(j).or_insert_with(Poly::zero);
            *e = &*e + &p;
        }
        map.retain(|_, p| !p.is_zero());
        ThetaForm { slices: map }
    }

    pub fn slices(&self) -> &BTreeMap<i64, Poly> {
        &self.slices
    }

    pub fn slice(&self, j: i64) -> Poly {
        self.slices.get(&j).cloned().unwrap_or_else(Poly::zero)
    }

    /// Expands back into z/D normal form.
    pub fn to_operator(&self) -> WeylOperator {
        let theta = WeylOperator::theta();
        let mut out = WeylOperator::zero();
        for (&j, t) in &self.slices {
            let body = t
                .coeffs()
                .iter()
                .rev()
                .fold(WeylOperator::zero(), |acc, c| {
                    acc.multiply(&theta) + WeylOperator::constant(c.clone())
                });
            for (i, k, c) in body.terms() {
                out.add_term(i + j, k, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for ThetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slices.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .slices
            .iter()
            .map(|(j, p)| {
                let body = p.to_string_var("T");
                match j {
                    0 => format!("({body})"),
                    1 => format!("z*({body})"),
                    _ if *j < 0 => format!("z^({j})*({body})"),
                    _ => format!("z^{j}*({body})"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn fmt_pow(var: &str, e: i64) -> String {
    match e {
        1 => var.to_string(),
        e if e < 0 => format!("{var}^({e})"),
        e => format!("{var}^{e}"),
    }
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        for (i, j) in keys {
            let c = &self.terms[&(i, j)];
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if i != 0 {
                factors.push(fmt_pow("z", i));
            }
            if j != 0 {
                factors.push(fmt_pow("D", j as i64));
            }
            if factors.is_empty() {
                out.push_str(&fmt_q(&a));
            } else if a.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), factors.join("*")));
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOperator({self})")
    }
}

impl Add for WeylOperator {
    type Output = WeylOperator;
    fn add(mut self, rhs: WeylOperator) -> WeylOperator {
        self.punctured |= rhs.punctured;
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl Neg for WeylOperator {
    type Output = WeylOperator;
    fn neg(self) -> WeylOperator {
        let p = self.punctured;
        let mut out = WeylOperator::from_terms(self.terms.into_iter().map(|(k, c)| (k, -c)));
        out.punctured |= p;
        out
    }
}

impl Sub for WeylOperator {
    type Output = WeylOperator;
    fn sub(self, rhs: WeylOperator) -> WeylOperator {
        self + (-rhs)
    }
}

impl Mul for WeylOperator {
    type Output = WeylOperator;
    fn mul(self, rhs: WeylOperator) -> WeylOperator {
        self.multiply(&rhs)
    }
}

impl<'a> Mul<&'a WeylOperator> for &'a WeylOperator {
    type Output = WeylOperator;
    fn mul(self, rhs: &WeylOperator) -> WeylOperator {
        self.multiply(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn z() -> WeylOperator {
        WeylOperator::z()
    }
    fn d() -> WeylOperator {
        WeylOperator::d()
    }
    fn c(n: i64) -> WeylOperator {
        WeylOperator::constant(q(n))
    }

    #[test]
    fn defining_relation() {
        assert_eq!(d() * z(), z() * d() + c(1));
        let zz = z().pow(2);
        let dd = d().pow(2);
        assert_eq!(&zz * &dd, WeylOperator::monomial(q(1), 2, 2));
        // D^2 z^2 = z^2 D^2 + 4 z D + 2
        assert_eq!(
            &dd * &zz,
            WeylOperator::monomial(q(1), 2, 2) + WeylOperator::monomial(q(4), 1, 1) + c(2)
        );
    }

    #[test]
    fn theta_products() {
        let t = WeylOperator::theta();
        let lhs = (t.clone() - z()) * t.pow(2);
        let rhs = t.pow(3) - z() * t.pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn fourier_examples() {
        assert_eq!(z().fourier_transform().unwrap(), -d());
        let l = (z() - c(1)) * d() - z();
        let expected = (c(1) - z()) * d() - (z() + c(1));
        assert_eq!(l.fourier_transform().unwrap(), expected);
        let t = WeylOperator::theta();
        let ft2 = t.fourier_transform().unwrap().fourier_transform().unwrap();
        assert_eq!(ft2, t);
        let punct = WeylOperator::monomial(q(1), -1, 0);
        assert!(matches!(punct.fourier_transform(), Err(Error::NegativePowers(_))));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(d().adjoint(), -d());
        assert_eq!(z().adjoint(), z());
        assert_eq!(WeylOperator::theta().adjoint(), -(z() * d()) - c(1));
    }

    #[test]
    fn theta_form_examples() {
        let op = WeylOperator::monomial(q(1), 2, 2);
        let tf = op.to_theta_form();
        assert_eq!(tf.slice(0), Poly::from_i64(&[0, -1, 1]));
        assert_eq!(tf.to_operator(), op);

        let tf = d().to_theta_form();
        assert_eq!(tf.slices().len(), 1);
        assert_eq!(tf.slice(-1), Poly::t());
        assert_eq!(tf.to_operator(), d());

        let pp = Poly::from_i64(&[1, 2]);
        let qq = Poly::from_i64(&[0, 0, 3]);
        let built = ThetaForm::from_slices([(0, qq.clone()), (1, -pp.clone())]).to_operator();
        let back = built.to_theta_form();
        assert_eq!(back.slice(0), qq);
        assert_eq!(back.slice(1), -pp);
    }

    #[test]
    fn substitutions() {
        let t = WeylOperator::theta();
        let hyp = t.clone() - z();
        assert_eq!(hyp.substitute(&Substitution::Translate(q(0))).unwrap(), hyp);
        assert_eq!(
            hyp.substitute(&Substitution::Scale(q(3))).unwrap(),
            t.clone() - z().scale(&q(3))
        );
        assert!(hyp.substitute(&Substitution::Scale(q(0))).is_err());
        // Kummer m=2 on theta - z gives theta/2 - z^2
        assert_eq!(
            hyp.substitute(&Substitution::Kummer(2)).unwrap(),
            t.scale(&qr(1, 2)) - z().pow(2)
        );
        // translation: z D under z -> z+1 is (z+1) D
        assert_eq!(
            t.substitute(&Substitution::Translate(q(1))).unwrap(),
            z() * d() + d()
        );
        assert_eq!(t.substitute(&Substitution::Negate).unwrap(), t);
        assert_eq!(z().substitute(&Substitution::Negate).unwrap(), -z());
    }

    #[test]
    fn indicial_examples() {
        let t = WeylOperator::theta();
        let op = t.pow(3) - z() * t.pow(2);
        assert_eq!(op.indicial_polynomial_at_zero().unwrap(), (0, Poly::from_i64(&[0, 0, 0, 1])));
        assert_eq!(d().indicial_polynomial_at_zero().unwrap(), (-1, Poly::t()));
        assert_eq!(WeylOperator::zero().indicial_polynomial_at_zero(), Err(Error::ZeroOperator));
    }

    #[test]
    fn display_forms() {
        let op = (z() - c(1)) * d() - z();
        assert_eq!(op.to_string(), "z*D - D - z");
        let p = WeylOperator::monomial(qr(-1, 2), -2, 1);
        assert_eq!(p.to_string(), "-1/2*z^(-2)*D");
    }
}
