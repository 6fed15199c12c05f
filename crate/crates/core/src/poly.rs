//! Multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exterior::{Coefficient, Scalar};

/// Coefficient types that can be differentiated along a coordinate axis.
pub trait Partial: Coefficient {
    /// `∂/∂x_{axis+1}`.
    fn partial(&self, axis: usize) -> Self;
}

/// Σ c_α x^α with rational `c_α ≠ 0`.
///
/// Exponent vectors are stored with trailing zeros trimmed, so the same
/// polynomial has a single representation regardless of the ambient
/// dimension.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyScalar {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn trim(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl PolyScalar {
    pub fn constant(c: BigRational) -> Self {
        PolyScalar::monomial(c, Vec::new())
    }

    pub fn monomial(c: BigRational, exps: Vec<u32>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps), c);
        }
        PolyScalar { terms }
    }

    /// The coordinate `x_{axis+1}`.
    pub fn var(axis: usize) -> Self {
        let mut exps = vec![0; axis + 1];
        exps[axis] = 1;
        PolyScalar::monomial(BigRational::one(), exps)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms.get(&trim(exps.to_vec())).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant term, or `None` if the polynomial is not constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return PolyScalar::default();
        }
        PolyScalar {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Evaluates at a floating point (missing coordinates read as 0).
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| x.get(i).copied().unwrap_or(0.0).powi(k as i32))
                    .product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }
}

impl Partial for PolyScalar {
    fn partial(&self, axis: usize) -> Self {
        let mut out = PolyScalar::default();
        for (e, c) in &self.terms {
            let k = e.get(axis).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut de = e.clone();
            de[axis] -= 1;
            out.add_term(trim(de), c * BigRational::from_integer(k.into()));
        }
        out
    }
}

impl Add for PolyScalar {
    type Output = PolyScalar;
    fn add(mut self, rhs: PolyScalar) -> PolyScalar {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for PolyScalar {
    type Output = PolyScalar;
    fn sub(mut self, rhs: PolyScalar) -> PolyScalar {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Neg for PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        PolyScalar {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for PolyScalar {
    type Output = PolyScalar;
    fn mul(self, rhs: PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let len = ea.len().max(eb.len());
                let exps: Vec<u32> = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Zero for PolyScalar {
    fn zero() -> Self {
        PolyScalar::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for PolyScalar {
    fn one() -> Self {
        PolyScalar::constant(BigRational::one())
    }
}

impl Scalar for PolyScalar {
    fn half(&self) -> Self {
        self.scale(&BigRational::new(1.into(), 2.into()))
    }

    fn within(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn approx_f64(&self) -> f64 {
        match self.as_constant() {
            Some(c) => c.to_f64().unwrap_or(f64::NAN),
            None => f64::NAN,
        }
    }
}

impl From<BigRational> for PolyScalar {
    fn from(c: BigRational) -> Self {
        PolyScalar::constant(c)
    }
}

impl fmt::Debug for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::rational;

    fn x(i: usize) -> PolyScalar {
        PolyScalar::var(i)
    }

    #[test]
    fn arithmetic_cancels_to_canonical_zero() {
        let p = x(0) * x(1) + PolyScalar::one();
        let q = p.clone() - p;
        assert!(q.is_zero());
        assert_eq!(q, PolyScalar::zero());
    }

    #[test]
    fn partial_derivatives() {
        // f = x1^2 x2 + 3 x3
        let f = x(0) * x(0) * x(1) + x(2).scale(&rational(3, 1));
        assert_eq!(f.partial(0), (x(0) * x(1)).scale(&rational(2, 1)));
        assert_eq!(f.partial(1), x(0) * x(0));
        assert_eq!(f.partial(2), PolyScalar::constant(rational(3, 1)));
        assert!(f.partial(5).is_zero());
    }

    #[test]
    fn trailing_zero_exponents_are_trimmed() {
        let a = PolyScalar::monomial(rational(1, 1), vec![1, 0, 0]);
        assert_eq!(a, x(0));
        assert_eq!(x(2).partial(2), PolyScalar::one());
        assert_eq!(PolyScalar::one().as_constant(), Some(rational(1, 1)));
    }

    #[test]
    fn leibniz_rule_on_products() {
        let f = x(0) * x(1) + x(2) * x(2);
        let g = x(1) - PolyScalar::constant(rational(1, 2));
        for axis in 0..3 {
            let lhs = (f.clone() * g.clone()).partial(axis);
            let rhs = f.partial(axis) * g.clone() + f.clone() * g.partial(axis);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluation() {
        let f = x(0) * x(1) + PolyScalar::constant(rational(1, 2));
        assert!((f.eval_f64(&[2.0, 3.0]) - 6.5).abs() < 1e-15);
        assert_eq!(f.total_degree(), 2);
    }
}
