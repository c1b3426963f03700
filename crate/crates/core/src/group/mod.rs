//! `PU(m,1)` acting on the unit ball and on the Siegel domain.
//!
//! The ball is `B^m = {z in C^m : |z| < 1}`; the Siegel domain is
//! `P^m = {w : Im w_1 > |w_2|^2 + ... + |w_m|^2}`. Automorphisms act on the
//! ball by `z -> (A z + b) / (c^T z + d)`.

mod automorphism;
mod cayley;

pub use automorphism::{
    cartan, cartan_decomposition, conjugate_by_cartan, rotation_mapping_e1, transport_to_origin,
    Automorphism, CartanDecomposition,
};
pub use cayley::{
    cartan_siegel, cartan_siegel_scalars, cayley_to_ball, cayley_to_siegel, from_siegel_coords,
    siegel_action, to_siegel_coords,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default membership and closure tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound on `|g* J g - J|` certifying membership in `U(m,1)`.
    pub group: f64,
    /// Slack allowed when testing membership in a closed domain.
    pub closure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            group: 1e-10,
            closure: 1e-9,
        }
    }
}

/// `z_1 conj(w_1) + ... + z_m conj(w_m) - z_{m+1} conj(w_{m+1})`
pub fn hermitian_form(z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::input(format!(
            "hermitian_form: lengths {} and {} differ",
            z.len(),
            w.len()
        )));
    }
    if z.len() < 2 {
        return Err(Error::input("hermitian_form: vectors need length >= 2"));
    }
    let n = z.len() - 1;
    Ok(linalg::inner(&z[..n], &w[..n]) - z[n] * w[n].conj())
}

fn check_finite(coords: &[Complex64]) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::input("point must have at least one coordinate"));
    }
    if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::input("point has non-finite coordinates"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
struct Polar {
    direction: Vec<Complex64>,
    gap: f64,
}

/// A point of the closed unit ball.
///
/// Points built with [`BallPoint::from_polar`] remember their distance to
/// the sphere exactly, which keeps distances accurate when `1 - |z|` is far
/// below machine epsilon relative to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct BallPoint {
    coords: Vec<Complex64>,
    polar: Option<Polar>,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(coords, Tolerances::default().closure)
    }

    pub fn with_tolerance(coords: Vec<Complex64>, closure: f64) -> Result<Self> {
        check_finite(&coords)?;
        let n = linalg::norm(&coords);
        if n > 1.0 + closure {
            return Err(Error::input(format!(
                "point of norm {n} lies outside the closed ball"
            )));
        }
        Ok(BallPoint {
            coords,
            polar: None,
        })
    }

    pub(crate) fn unchecked(coords: Vec<Complex64>) -> Self {
        BallPoint {
            coords,
            polar: None,
        }
    }

    /// The point `(1 - gap) * direction` with `gap` tracked exactly.
    pub fn from_polar(direction: &[Complex64], gap: f64) -> Result<Self> {
        check_finite(direction)?;
        let nd = linalg::norm(direction);
        if (nd - 1.0).abs() > Tolerances::default().closure {
            return Err(Error::input("polar direction is not a unit vector"));
        }
        if !(0.0..=1.0).contains(&gap) {
            return Err(Error::input(format!("gap {gap} outside [0, 1]")));
        }
        Ok(BallPoint {
            coords: linalg::scale(direction, 1.0 - gap),
            polar: Some(Polar {
                direction: direction.to_vec(),
                gap,
            }),
        })
    }

    pub fn origin(m: usize) -> Self {
        BallPoint::unchecked(vec![linalg::ZERO; m])
    }

    /// The boundary point `e_{k+1}` (0-based `k`).
    pub fn basis(m: usize, k: usize) -> Self {
        BallPoint::unchecked(linalg::basis(m, k))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }

    /// `1 - |z|`, exact for points built from a polar description.
    pub fn gap(&self) -> f64 {
        match &self.polar {
            Some(p) => p.gap,
            None => 1.0 - self.norm(),
        }
    }

    /// `1 - |z|^2` evaluated as `g (2 - g)` with `g` the gap.
    pub fn one_minus_norm_sqr(&self) -> f64 {
        let g = self.gap();
        g * (2.0 - g)
    }

    pub fn is_interior(&self) -> bool {
        self.gap() > 0.0
    }

    pub(crate) fn polar_parts(&self) -> Option<(&[Complex64], f64)> {
        self.polar.as_ref().map(|p| (p.direction.as_slice(), p.gap))
    }
}

impl TryFrom<Vec<Complex64>> for BallPoint {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        BallPoint::new(v)
    }
}

impl From<BallPoint> for Vec<Complex64> {
    fn from(p: BallPoint) -> Self {
        p.coords
    }
}

/// A point of the closed Siegel domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct SiegelPoint {
    coords: Vec<Complex64>,
}

impl SiegelPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(coords, Tolerances::default().closure)
    }

    pub fn with_tolerance(coords: Vec<Complex64>, closure: f64) -> Result<Self> {
        check_finite(&coords)?;
        let p = SiegelPoint { coords };
        let rho = p.defining_value();
        if rho < -closure {
            return Err(Error::input(format!(
                "point with defining value {rho} lies outside the closed Siegel domain"
            )));
        }
        Ok(p)
    }

    pub(crate) fn unchecked(coords: Vec<Complex64>) -> Self {
        SiegelPoint { coords }
    }

    pub fn origin(m: usize) -> Self {
        SiegelPoint::unchecked(vec![linalg::ZERO; m])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.coords
    }

    /// `Im w_1 - sum_{k>=2} |w_k|^2`
    pub fn defining_value(&self) -> f64 {
        self.coords[0].im - linalg::norm_sqr(&self.coords[1..])
    }

    pub fn is_interior(&self) -> bool {
        self.defining_value() > 0.0
    }
}

impl TryFrom<Vec<Complex64>> for SiegelPoint {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        SiegelPoint::new(v)
    }
}

impl From<SiegelPoint> for Vec<Complex64> {
    fn from(p: SiegelPoint) -> Self {
        p.coords
    }
}
