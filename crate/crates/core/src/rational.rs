//! Rational functions of one complex variable, stored as coefficient sequences.

use serde::{Deserialize, Serialize};

use crate::io::complex_vec;
use crate::{Error, Result, C64};

/// Ascending-degree polynomial helpers.
pub mod poly {
    use crate::C64;

    pub fn trim(mut p: Vec<C64>) -> Vec<C64> {
        while p.len() > 1 && *p.last().unwrap() == C64::new(0.0, 0.0) {
            p.pop();
        }
        if p.is_empty() {
            p.push(C64::new(0.0, 0.0));
        }
        p
    }

    pub fn is_zero(p: &[C64]) -> bool {
        p.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    pub fn eval(p: &[C64], z: C64) -> C64 {
        p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
        let n = a.len().max(b.len());
        let zero = C64::new(0.0, 0.0);
        trim(
            (0..n)
                .map(|i| *a.get(i).unwrap_or(&zero) + *b.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
        trim(a.iter().map(|c| c * s).collect())
    }

    pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn derivative(a: &[C64]) -> Vec<C64> {
        if a.len() <= 1 {
            return vec![C64::new(0.0, 0.0)];
        }
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at `z0`.
    pub fn antiderivative(a: &[C64], z0: C64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0)];
        out.extend(a.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        let at = eval(&out, z0);
        out[0] -= at;
        trim(out)
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(a: &[C64]) -> usize {
        trim(a.to_vec()).len() - 1
    }
}

/// `p(z)/q(z)` with the leading coefficient of `q` normalized to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRational", into = "RawRational")]
pub struct RationalFunction {
    num: Vec<C64>,
    den: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct RawRational {
    #[serde(with = "complex_vec")]
    num: Vec<C64>,
    #[serde(with = "complex_vec", default = "one_vec")]
    den: Vec<C64>,
}

fn one_vec() -> Vec<C64> {
    vec![C64::new(1.0, 0.0)]
}

impl TryFrom<RawRational> for RationalFunction {
    type Error = Error;
    fn try_from(r: RawRational) -> Result<Self> {
        RationalFunction::new(r.num, r.den)
    }
}

impl From<RationalFunction> for RawRational {
    fn from(r: RationalFunction) -> Self {
        RawRational {
            num: r.num,
            den: r.den,
        }
    }
}

impl RationalFunction {
    pub fn new(num: Vec<C64>, den: Vec<C64>) -> Result<Self> {
        let num = poly::trim(num);
        let den = poly::trim(den);
        if poly::is_zero(&den) {
            return Err(Error::Domain("zero denominator polynomial".into()));
        }
        let lead = *den.last().unwrap();
        if lead == C64::new(1.0, 0.0) {
            return Ok(Self { num, den });
        }
        Ok(Self {
            num: poly::scale(&num, lead.inv()),
            den: den.iter().map(|c| c / lead).collect(),
        })
    }

    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        Self {
            num: poly::trim(coeffs),
            den: one_vec(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(C64::new(0.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::polynomial(vec![c])
    }

    /// `c·zᵏ`.
    pub fn monomial(c: C64, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); k + 1];
        v[k] = c;
        Self::polynomial(v)
    }

    pub fn numerator(&self) -> &[C64] {
        &self.num
    }

    pub fn denominator(&self) -> &[C64] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        poly::is_zero(&self.num)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    /// Coefficients of the polynomial this function equals, if its denominator is constant.
    pub fn as_polynomial(&self) -> Option<Vec<C64>> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// `max(deg p, deg q)`.
    pub fn degree_bound(&self) -> usize {
        poly::degree(&self.num).max(poly::degree(&self.den))
    }

    /// Value at `z`; a vanishing denominator is a pole error.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let q = poly::eval(&self.den, z);
        if q.norm() <= 1e-300 || (self.den.len() > 1 && q.norm() < 1e-13 * self.den_scale(z)) {
            return Err(Error::Pole(format!("denominator vanishes at z = {z}")));
        }
        Ok(poly::eval(&self.num, z) / q)
    }

    fn den_scale(&self, z: C64) -> f64 {
        let r = z.norm().max(1.0);
        self.den
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.powi(k as i32))
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(poly::add(&self.num, &other.num), self.den.clone()).unwrap();
        }
        let num = poly::add(&poly::mul(&self.num, &other.den), &poly::mul(&other.num, &self.den));
        Self::new(num, poly::mul(&self.den, &other.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            num: poly::scale(&self.num, s),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(poly::mul(&self.num, &other.num), poly::mul(&self.den, &other.den)).unwrap()
    }

    /// Quotient; dividing by the zero function is a domain error.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division by the zero function".into()));
        }
        Self::new(poly::mul(&self.num, &other.den), poly::mul(&self.den, &other.num))
    }

    /// Derivative by the quotient rule.
    pub fn derivative(&self) -> Self {
        if self.is_polynomial() {
            return Self::new(poly::derivative(&self.num), self.den.clone()).unwrap();
        }
        let num = poly::add(
            &poly::mul(&poly::derivative(&self.num), &self.den),
            &poly::scale(
                &poly::mul(&self.num, &poly::derivative(&self.den)),
                C64::new(-1.0, 0.0),
            ),
        );
        Self::new(num, poly::mul(&self.den, &self.den)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn normalizes_leading_denominator() {
        let r = RationalFunction::new(vec![c(2.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(*r.denominator().last().unwrap(), c(1.0, 0.0));
        let z = c(0.3, -0.2);
        let direct = c(2.0, 0.0) / (c(1.0, 0.0) + c(0.0, 2.0) * z);
        assert!((r.eval(z).unwrap() - direct).norm() < 1e-15);
        assert!(RationalFunction::new(vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn pole_is_reported() {
        let r = RationalFunction::new(vec![c(1.0, 0.0)], vec![c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(r.eval(c(1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn derivative_of_quotient() {
        // d/dz 1/(1+z) = -1/(1+z)^2
        let r = RationalFunction::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let d = r.derivative();
        let z = c(0.4, 0.9);
        let want = -(c(1.0, 0.0) + z).powi(-2);
        assert!((d.eval(z).unwrap() - want).norm() < 1e-14);
        let p = RationalFunction::polynomial(vec![c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(p.derivative().numerator(), &[c(0.0, 0.0), c(6.0, 0.0)]);
    }

    #[test]
    fn antiderivative_vanishes_at_base() {
        let a = vec![c(1.0, 0.0), c(0.0, 2.0)];
        let z0 = c(0.5, 0.5);
        let f = poly::antiderivative(&a, z0);
        assert!(poly::eval(&f, z0).norm() < 1e-15);
        assert_eq!(poly::derivative(&f), poly::trim(a));
    }

    #[test]
    fn product_with_reciprocal_is_one() {
        let p = RationalFunction::new(
            vec![c(1.0, 0.5), c(0.0, 1.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let q = RationalFunction::new(p.denominator().to_vec(), p.numerator().to_vec()).unwrap();
        let one = p.mul(&q);
        for k in 0..20 {
            let z = C64::from_polar(0.3 + 0.03 * k as f64, 1.7 * k as f64);
            assert!((one.eval(z).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
