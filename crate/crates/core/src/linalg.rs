//! Small dense complex linear algebra shared by the group and rescaling code.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Residual norm below which a Gram–Schmidt candidate is treated as dependent.
pub const GS_THRESHOLD: f64 = 1e-8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `sum x_i conj(y_i)`
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    norm_sqr(x).sqrt()
}

pub fn dist(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn scale(x: &[Complex64], s: f64) -> Vec<Complex64> {
    x.iter().map(|a| a * s).collect()
}

pub fn basis(n: usize, k: usize) -> Vec<Complex64> {
    let mut e = vec![ZERO; n];
    e[k] = ONE;
    e
}

/// `sum_{i<j} |x_i y_j - x_j y_i|^2`, which equals `|x|^2 |y|^2 - |<x,y>|^2`
/// without the cancellation.
pub fn wedge_sqr(x: &[Complex64], y: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            s += (x[i] * y[j] - x[j] * y[i]).norm_sqr();
        }
    }
    s
}

/// Completes orthonormal `seeds` to an orthonormal basis of `C^n`.
///
/// Candidates are the standard basis vectors in order; a candidate whose
/// residual after two projection passes has norm below [`GS_THRESHOLD`] is
/// skipped. Returns the basis as the columns of an `n x n` matrix, seeds
/// first.
pub fn complete_orthonormal(seeds: &[Vec<Complex64>], n: usize) -> Result<CMatrix> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for s in seeds {
        if s.len() != n {
            return Err(Error::input("seed vector has the wrong length"));
        }
        cols.push(s.clone());
    }
    if cols.len() > n {
        return Err(Error::input("more seed vectors than dimensions"));
    }
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut r = basis(n, k);
        for _ in 0..2 {
            for q in &cols {
                let p = inner(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= p * qi;
                }
            }
        }
        let nr = norm(&r);
        if nr < GS_THRESHOLD {
            continue;
        }
        cols.push(scale(&r, 1.0 / nr));
    }
    if cols.len() < n {
        return Err(Error::numeric("Gram-Schmidt completion is degenerate"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry of `U* U - I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let g = u.adjoint() * u;
    max_abs(&(g - CMatrix::identity(u.ncols(), u.ncols())))
}

pub fn random_gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v = random_gaussian_vector(n, rng);
        let nv = norm(&v);
        if nv > 1e-6 {
            return scale(&v, 1.0 / nv);
        }
    }
}

/// A uniformly random point of the open ball of radius `r_max`.
pub fn random_ball_coords<R: Rng + ?Sized>(n: usize, r_max: f64, rng: &mut R) -> Vec<Complex64> {
    let v = random_unit_vector(n, rng);
    let u: f64 = rng.random();
    scale(&v, r_max * u.powf(1.0 / (2.0 * n as f64)))
}

/// Haar-ish random unitary obtained by orthonormalizing a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut r = random_gaussian_vector(n, rng);
        for _ in 0..2 {
            for q in &cols {
                let p = inner(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= p * qi;
                }
            }
        }
        let nr = norm(&r);
        if nr > 1e-6 {
            cols.push(scale(&r, 1.0 / nr));
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}
