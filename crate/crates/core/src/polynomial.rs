//! Dense real polynomials in ascending coefficient order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A dense polynomial `coeffs[0] + coeffs[1] x + ... + coeffs[n] x^n`.
///
/// The coefficient vector is never empty and carries no trailing exact
/// zeros, except that the zero polynomial is stored as `[0.0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, rejecting NaN and infinities.
    /// An empty vector yields the zero polynomial.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::NonFiniteCoefficient { index, value });
        }
        Ok(Self::from_vec(coeffs))
    }

    pub(crate) fn from_vec(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_vec(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Evaluates by Horner's rule.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// The `k`-th derivative. Differentiating past the degree gives zero.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k > self.degree() {
            return Self::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| self.coeffs[i] * falling_factorial(i, k))
            .collect();
        Self::from_vec(coeffs)
    }

    /// The antiderivative that vanishes at zero.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c / (i + 1) as f64),
        );
        Self::from_vec(coeffs)
    }

    /// `∫_lo^hi p(x) dx` in closed form.
    pub fn definite_integral(&self, lo: f64, hi: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let n = (i + 1) as i32;
                c * (hi.powi(n) - lo.powi(n)) / n as f64
            })
            .sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_vec(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Returns `t -> p(shift + scale * t)`, expanded by nested multiplication.
    pub fn compose_affine(&self, shift: f64, scale: f64) -> Self {
        let mut acc = vec![0.0; self.coeffs.len()];
        let mut len = 0;
        for &c in self.coeffs.iter().rev() {
            // acc <- acc * (shift + scale t) + c
            for i in (0..=len).rev() {
                let lower = if i > 0 { acc[i - 1] * scale } else { 0.0 };
                let here = if i < len { acc[i] * shift } else { 0.0 };
                acc[i] = here + lower;
            }
            acc[0] += c;
            len = (len + 1).min(self.coeffs.len());
        }
        Self::from_vec(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_vec(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Self::from_vec(
            (0..n)
                .map(|i| f(at(&self.coeffs, i), at(&other.coeffs, i)))
                .collect(),
        )
    }
}

/// `i! / (i-k)!` as a float.
pub(crate) fn falling_factorial(i: usize, k: usize) -> f64 {
    ((i + 1 - k)..=i).map(|m| m as f64).product()
}

impl Default for Polynomial {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, " + {c}*x")?,
                _ => write!(f, " + {c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                Polynomial::$method(self, rhs)
            }
        }
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                Polynomial::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec()).unwrap()
    }

    fn eval_by_terms(p: &Polynomial, x: f64) -> f64 {
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * x.powi(i as i32))
            .sum()
    }

    fn simpson(p: &Polynomial, lo: f64, hi: f64, panels: usize) -> f64 {
        let n = panels * 2;
        let h = (hi - lo) / n as f64;
        let mut s = p.eval(lo) + p.eval(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * p.eval(lo + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(&[0.75, 0.5, 0.058594]).eval(0.0), 0.75);
        assert_eq!(Polynomial::zero().eval(123.0), 0.0);
        let lg = poly(&[0.797468, 0.5, 0.056369]);
        // 0.797468 + 4 + 0.056369 * 64
        let expected = 8.405084;
        assert!((lg.eval(8.0) - expected).abs() < 1e-12);
        assert!((eval_by_terms(&lg, 8.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            Polynomial::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteCoefficient { index: 1, .. })
        ));
        assert!(Polynomial::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn normalization_is_exact() {
        assert_eq!(poly(&[1.0, 0.0, 0.0]).coeffs(), &[1.0]);
        assert_eq!(poly(&[0.0, 0.0]).coeffs(), &[0.0]);
        assert_eq!(poly(&[]).coeffs(), &[0.0]);
        assert_eq!(poly(&[1.0, 1e-300]).degree(), 1);
    }

    #[test]
    fn derivative_examples() {
        let (c, b, a) = (0.3, -1.2, 2.5);
        assert_eq!(poly(&[c, b, a]).derivative(1).coeffs(), &[b, 2.0 * a]);
        assert_eq!(poly(&[5.0]).derivative(1).coeffs(), &[0.0]);
        let cubic = poly(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(cubic.derivative(3).coeffs(), &[6.0]);
        let stepwise = cubic.derivative(1).derivative(1).derivative(1);
        assert_eq!(stepwise, cubic.derivative(3));
        assert!(cubic.derivative(4).is_zero());
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(poly(&[1.0]).antiderivative().coeffs(), &[0.0, 1.0]);
        assert_eq!(poly(&[0.0, 1.0]).antiderivative().coeffs(), &[0.0, 0.0, 0.5]);
        let p = poly(&[0.0, 2.0, 3.0]);
        assert_eq!(p.derivative(1).antiderivative(), p);
    }

    #[test]
    fn arithmetic_examples() {
        assert!((&poly(&[0.0, 1.0]) - &poly(&[0.0, 1.0])).is_zero());
        assert_eq!((&poly(&[0.0, 1.0]) * &poly(&[0.0, 1.0])).coeffs(), &[0.0, 0.0, 1.0]);
        let prod = &poly(&[1.0, 1.0]) * &poly(&[1.0, -1.0]);
        assert_eq!(prod.coeffs(), &[1.0, 0.0, -1.0]);
        for x in [-2.0, -0.5, 0.0, 1.5, 3.0] {
            assert!((prod.eval(x) - (1.0 + x) * (1.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn definite_integral_examples() {
        let x4 = Polynomial::monomial(4);
        assert!((x4.definite_integral(0.0, 8.0) - 6553.6).abs() < 1e-9);
        assert!((simpson(&x4, 0.0, 8.0, 10_000) / 6553.6 - 1.0).abs() < 1e-10);
        assert_eq!(Polynomial::constant(1.0).definite_integral(-2.0, 5.0), 7.0);
        let x2 = Polynomial::monomial(2);
        let v = x2.definite_integral(-8.0, 8.0);
        assert!((v - 1024.0 / 3.0).abs() < 1e-10);
        assert!((simpson(&x2, -8.0, 8.0, 10_000) / v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn compose_affine_matches_substitution() {
        let p = poly(&[1.0, -2.0, 0.5, 3.0]);
        let q = p.compose_affine(0.7, -1.3);
        for t in [-1.0, -0.3, 0.0, 0.4, 1.0] {
            assert!((q.eval(t) - p.eval(0.7 - 1.3 * t)).abs() < 1e-12);
        }
        assert_eq!(Polynomial::constant(4.0).compose_affine(2.0, 3.0).coeffs(), &[4.0]);
    }

    fn coeff_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-12.0f64..12.0, 1..=max_len)
    }

    // integer-valued coefficients keep every factorial product exact
    fn integer_coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec((-12i32..=12).prop_map(f64::from), 1..=max_len)
    }

    proptest! {
        #[test]
        fn add_and_mul_commute_with_eval(p in coeff_vec(8), q in coeff_vec(8), x in -10.0f64..10.0) {
            let (p, q) = (poly(&p), poly(&q));
            let magnitude = |r: &Polynomial| -> f64 {
                r.coeffs().iter().enumerate().map(|(i, c)| c.abs() * x.abs().powi(i as i32)).sum()
            };
            let (mp, mq) = (magnitude(&p), magnitude(&q));
            let sum = (&p + &q).eval(x);
            prop_assert!((sum - (p.eval(x) + q.eval(x))).abs() <= 1e-9 * (mp + mq).max(1e-300));
            let prod = (&p * &q).eval(x);
            prop_assert!((prod - p.eval(x) * q.eval(x)).abs() <= 1e-9 * (mp * mq).max(1e-300));
        }

        #[test]
        fn antiderivative_then_derivative_is_identity(p in integer_coeffs(12)) {
            let p = poly(&p);
            prop_assert_eq!(p.antiderivative().derivative(1), p);
        }

        #[test]
        fn derivative_orders_compose(p in integer_coeffs(12), j in 0usize..5, k in 0usize..5) {
            let p = poly(&p);
            prop_assert_eq!(p.derivative(j).derivative(k), p.derivative(j + k));
        }

        #[test]
        fn integral_matches_simpson(p in coeff_vec(11), a in -8.0f64..8.0, b in -8.0f64..8.0) {
            let p = poly(&p);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let exact = p.definite_integral(lo, hi);
            let quad = simpson(&p, lo, hi, 10_000);
            let abs_scale: f64 = p.coeffs().iter().enumerate()
                .map(|(i, c)| c.abs() * 8f64.powi(i as i32 + 1)).sum();
            prop_assert!((exact - quad).abs() <= 1e-8 * exact.abs().max(1e-6 * abs_scale));
        }

        #[test]
        fn integral_is_additive(p in coeff_vec(10), mut pts in prop::collection::vec(-8.0f64..8.0, 3)) {
            let p = poly(&p);
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let (a, b, c) = (pts[0], pts[1], pts[2]);
            let whole = p.definite_integral(a, c);
            let parts = p.definite_integral(a, b) + p.definite_integral(b, c);
            let abs_scale: f64 = p.coeffs().iter().enumerate()
                .map(|(i, c)| c.abs() * 8f64.powi(i as i32 + 1)).sum();
            prop_assert!((whole - parts).abs() <= 1e-10 * abs_scale.max(1.0));
        }
    }
}
