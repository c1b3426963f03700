//! Cayley transforms between the ball and the Siegel domain.
//!
//! `F(z) = (i (1 - z_1) / (1 + z_1), z_2 / (1 + z_1), ...)` sends the ball to
//! the Siegel domain with `F(e_1) = 0` and `F(0) = (i, 0, ..., 0)`. Its inverse
//! is `F^{-1}(w) = ((i - w_1) / (i + w_1), 2i w_2 / (i + w_1), ...)`.

use num_complex::Complex64;

use super::{Automorphism, BallPoint, SiegelPoint};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::linalg::{I, ONE};

/// `F` on raw coordinates, generic over jets.
pub fn to_siegel_coords<S: Scalar>(z: &[S]) -> Result<Vec<S>> {
    let den = z[0].add_const(ONE);
    if den.value().norm() == 0.0 {
        return Err(Error::numeric(
            "Cayley transform is undefined at the excluded boundary point z_1 = -1",
        ));
    }
    let mut out = Vec::with_capacity(z.len());
    out.push((-z[0].clone()).add_const(ONE).scale(I) / den.clone());
    for zk in &z[1..] {
        out.push(zk.clone() / den.clone());
    }
    Ok(out)
}

/// `F^{-1}` on raw coordinates, generic over jets.
pub fn from_siegel_coords<S: Scalar>(w: &[S]) -> Result<Vec<S>> {
    let den = w[0].add_const(I);
    if den.value().norm() == 0.0 {
        return Err(Error::numeric(
            "inverse Cayley transform is undefined at the excluded point w_1 = -i",
        ));
    }
    let mut out = Vec::with_capacity(w.len());
    out.push((-w[0].clone()).add_const(I) / den.clone());
    for wk in &w[1..] {
        out.push(wk.scale(Complex64::new(0.0, 2.0)) / den.clone());
    }
    Ok(out)
}

pub fn cayley_to_siegel(z: &BallPoint) -> Result<SiegelPoint> {
    Ok(SiegelPoint::unchecked(to_siegel_coords(z.coords())?))
}

pub fn cayley_to_ball(w: &SiegelPoint) -> Result<BallPoint> {
    Ok(BallPoint::unchecked(from_siegel_coords(w.coords())?))
}

/// `(e^{-t} w_1, e^{-t/2} w_2, ..., e^{-t/2} w_m)`
pub fn cartan_siegel_scalars<S: Scalar>(t: f64, w: &[S]) -> Vec<S> {
    let s1 = Complex64::new((-t).exp(), 0.0);
    let s2 = Complex64::new((-0.5 * t).exp(), 0.0);
    w.iter()
        .enumerate()
        .map(|(k, wk)| wk.scale(if k == 0 { s1 } else { s2 }))
        .collect()
}

/// The Cartan flow in Siegel coordinates.
///
/// It scales the defining function `Im w_1 - |w'|^2` by `e^{-t}`.
pub fn cartan_siegel(t: f64, w: &SiegelPoint) -> SiegelPoint {
    SiegelPoint::unchecked(cartan_siegel_scalars(t, w.coords()))
}

/// `F ∘ g ∘ F^{-1}` on raw Siegel coordinates.
pub fn siegel_action<S: Scalar>(g: &Automorphism, w: &[S]) -> Result<Vec<S>> {
    let z = from_siegel_coords(w)?;
    to_siegel_coords(&g.apply(&z)?)
}
