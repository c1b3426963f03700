//! Double-double complex numbers.
//!
//! Used where a Siegel-coordinate evaluation is rescaled by `e^{τ}` after a
//! cancellation near the base point, so that the rescaled values keep full
//! double precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::jet::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        Dd::renorm(p, e + (self.hi * y.lo + self.lo * y.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y.mul_f64(q1);
        let q2 = r.hi / y.hi;
        let r = r - y.mul_f64(q2);
        let q3 = r.hi / y.hi;
        let (a, b) = quick_two_sum(q1, q2);
        Dd { hi: a, lo: b } + Dd::new(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn from_c64(c: Complex64) -> Self {
        DdComplex {
            re: Dd::new(c.re),
            im: Dd::new(c.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn lift_slice(z: &[Complex64]) -> Vec<DdComplex> {
        z.iter().map(|c| DdComplex::from_c64(*c)).collect()
    }
}

impl Add for DdComplex {
    type Output = Self;
    fn add(self, y: Self) -> Self {
        DdComplex {
            re: self.re + y.re,
            im: self.im + y.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = Self;
    fn sub(self, y: Self) -> Self {
        DdComplex {
            re: self.re - y.re,
            im: self.im - y.im,
        }
    }
}

impl Neg for DdComplex {
    type Output = Self;
    fn neg(self) -> Self {
        DdComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = Self;
    fn mul(self, y: Self) -> Self {
        DdComplex {
            re: self.re * y.re - self.im * y.im,
            im: self.re * y.im + self.im * y.re,
        }
    }
}

impl Div for DdComplex {
    type Output = Self;
    fn div(self, y: Self) -> Self {
        let den = y.re * y.re + y.im * y.im;
        let num = self * DdComplex { re: y.re, im: -y.im };
        DdComplex {
            re: num.re / den,
            im: num.im / den,
        }
    }
}

impl Scalar for DdComplex {
    fn lift(&self, c: Complex64) -> Self {
        DdComplex::from_c64(c)
    }
    fn value(&self) -> Complex64 {
        self.to_c64()
    }
    fn scale(&self, c: Complex64) -> Self {
        DdComplex {
            re: self.re.mul_f64(c.re) - self.im.mul_f64(c.im),
            im: self.re.mul_f64(c.im) + self.im.mul_f64(c.re),
        }
    }
    fn add_const(&self, c: Complex64) -> Self {
        *self + DdComplex::from_c64(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        let tiny = 1e-20;
        let x = Dd::new(1.0) + Dd::new(tiny);
        assert_eq!((x - Dd::new(1.0)).to_f64(), tiny);
    }

    #[test]
    fn division_is_accurate() {
        let q = Dd::new(1.0) / Dd::new(3.0);
        let back = q.mul_f64(3.0) - Dd::new(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_quotient() {
        let a = DdComplex::from_c64(Complex64::new(0.3, -1.2));
        let b = DdComplex::from_c64(Complex64::new(-0.7, 0.4));
        let want = Complex64::new(0.3, -1.2) / Complex64::new(-0.7, 0.4);
        assert!(((a / b).to_c64() - want).norm() < 1e-15);
        let r = (a / b) * b - a;
        assert!(r.to_c64().norm() < 1e-30);
    }
}
