//! Second-order forward-mode jets of holomorphic functions.
//!
//! A [`Jet2`] over `n` complex variables carries a value, the gradient and
//! the (symmetric) Hessian with respect to those variables. Arithmetic on
//! jets applies the product and quotient rules, so evaluating a rational
//! expression on jets yields its exact derivatives up to order two.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Numbers the evaluators in this crate are generic over.
///
/// Implemented by plain complex numbers and by [`Jet2`].
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant of the same shape as `self`.
    fn lift(&self, c: Complex64) -> Self;
    fn value(&self) -> Complex64;
    fn scale(&self, c: Complex64) -> Self;
    fn add_const(&self, c: Complex64) -> Self;

    fn powu(&self, n: u32) -> Self {
        let mut acc = self.lift(Complex64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn lift(&self, c: Complex64) -> Self {
        c
    }
    fn value(&self) -> Complex64 {
        *self
    }
    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
    fn add_const(&self, c: Complex64) -> Self {
        self + c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: Complex64,
    pub grad: Vec<Complex64>,
    /// Row-major `n x n`.
    pub hess: Vec<Complex64>,
}

impl Jet2 {
    pub fn constant(n: usize, c: Complex64) -> Self {
        Jet2 {
            value: c,
            grad: vec![Complex64::new(0.0, 0.0); n],
            hess: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// The coordinate function `z_k` evaluated at `c`.
    pub fn variable(n: usize, k: usize, c: Complex64) -> Self {
        let mut j = Jet2::constant(n, c);
        j.grad[k] = Complex64::new(1.0, 0.0);
        j
    }

    /// Seeds one jet per coordinate of the base point.
    pub fn seed(base: &[Complex64]) -> Vec<Jet2> {
        let n = base.len();
        base.iter()
            .enumerate()
            .map(|(k, &c)| Jet2::variable(n, k, c))
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn hess_at(&self, k: usize, l: usize) -> Complex64 {
        self.hess[k * self.nvars() + l]
    }

    pub fn recip(&self) -> Jet2 {
        let n = self.nvars();
        let r = self.value.inv();
        let r2 = r * r;
        let two_r3 = 2.0 * r2 * r;
        let grad = self.grad.iter().map(|g| -r2 * g).collect();
        let mut hess = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                hess[i * n + j] = -r2 * self.hess[i * n + j] + two_r3 * self.grad[i] * self.grad[j];
            }
        }
        Jet2 {
            value: r,
            grad,
            hess,
        }
    }

    fn zip(&self, other: &Jet2, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet2 {
        debug_assert_eq!(self.nvars(), other.nvars());
        Jet2 {
            value: f(self.value, other.value),
            grad: self.grad.iter().zip(&other.grad).map(|(a, b)| f(*a, *b)).collect(),
            hess: self.hess.iter().zip(&other.hess).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Jet2 {
        Jet2 {
            value: f(self.value),
            grad: self.grad.iter().map(|a| f(*a)).collect(),
            hess: self.hess.iter().map(|a| f(*a)).collect(),
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.map(|a| -a)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let n = self.nvars();
        let (a, b) = (self.value, rhs.value);
        let grad = (0..n).map(|i| a * rhs.grad[i] + b * self.grad[i]).collect();
        let mut hess = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                hess[i * n + j] = a * rhs.hess[i * n + j]
                    + b * self.hess[i * n + j]
                    + (self.grad[i] * rhs.grad[j] + rhs.grad[i] * self.grad[j]);
            }
        }
        Jet2 {
            value: a * b,
            grad,
            hess,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet2) -> Jet2 {
        self * rhs.recip()
    }
}

impl Scalar for Jet2 {
    fn lift(&self, c: Complex64) -> Self {
        Jet2::constant(self.nvars(), c)
    }
    fn value(&self) -> Complex64 {
        self.value
    }
    fn scale(&self, c: Complex64) -> Self {
        self.map(|a| a * c)
    }
    fn add_const(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.value += c;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_of_variables() {
        let z = Jet2::seed(&[c(0.3, 0.1), c(-0.2, 0.5)]);
        let p = z[0].clone() * z[1].clone();
        assert_eq!(p.value, c(0.3, 0.1) * c(-0.2, 0.5));
        assert_eq!(p.grad, vec![c(-0.2, 0.5), c(0.3, 0.1)]);
        assert_eq!(p.hess_at(0, 1), c(1.0, 0.0));
        assert_eq!(p.hess_at(1, 0), c(1.0, 0.0));
        assert_eq!(p.hess_at(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn square_has_second_derivative_two() {
        let z = Jet2::seed(&[c(0.0, 0.0), c(0.0, 0.0)]);
        let sq = z[1].powu(2);
        assert_eq!(sq.hess_at(1, 1), c(2.0, 0.0));
        assert_eq!(sq.hess_at(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn reciprocal_matches_closed_form() {
        // 1/(1+z) at z0: f' = -1/(1+z0)^2, f'' = 2/(1+z0)^3
        let z0 = c(0.4, -0.3);
        let z = Jet2::variable(1, 0, z0);
        let r = z.add_const(c(1.0, 0.0)).recip();
        let w = c(1.0, 0.0) + z0;
        assert!((r.grad[0] + 1.0 / (w * w)).norm() < 1e-14);
        assert!((r.hess[0] - 2.0 / (w * w * w)).norm() < 1e-14);
    }

    #[test]
    fn powu_matches_repeated_product() {
        let z = Jet2::variable(1, 0, c(0.7, 0.2));
        let p5 = z.powu(5);
        let z0 = c(0.7, 0.2);
        assert!((p5.value - z0.powu(5)).norm() < 1e-14);
        assert!((p5.grad[0] - 5.0 * z0.powu(4)).norm() < 1e-13);
        assert!((p5.hess[0] - 20.0 * z0.powu(3)).norm() < 1e-13);
        assert_eq!(z.powu(0).value, c(1.0, 0.0));
    }
}
