//! Kobayashi geometry of the unit ball.

mod curve;
mod morse;

pub use curve::{
    certify_quasi_geodesic, geodesic_segment, hausdorff_pseudo_distance, radial_geodesic,
    CurveModel, HausdorffEstimate, QuasiGeodesicCertificate, SampledCurve,
};
pub use morse::{estimate_morse_constant, estimate_morse_constant_with, MorseConfig, MorseEstimate};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{transport_to_origin, BallPoint};
use crate::linalg;

/// Kobayashi distance on the ball,
/// `acosh sqrt(|1 - <z,w>|^2 / ((1 - |z|^2)(1 - |w|^2)))`.
///
/// Nearby points go through `artanh` of the pseudo-hyperbolic distance,
/// whose numerator `|z - w|^2 - (|z|^2|w|^2 - |<z,w>|^2)` is formed without
/// cancellation. Points carrying an exact gap to the sphere are handled in
/// polar form.
pub fn dist_ball(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    if z.dim() != w.dim() {
        return Err(Error::input(format!(
            "dist_ball: dimensions {} and {} differ",
            z.dim(),
            w.dim()
        )));
    }
    if !z.is_interior() || !w.is_interior() {
        return Err(Error::InfiniteDistance(
            "a point lies on the boundary sphere".into(),
        ));
    }
    let (a, num) = match (z.polar_parts(), w.polar_parts()) {
        (Some((u, gz)), Some((v, gw))) => {
            let uv = linalg::inner(u, v);
            let duv2 = linalg::dist(u, v).powi(2);
            let one_minus_uv = Complex64::new(0.5 * duv2, -uv.im);
            let a = one_minus_uv + uv * (gz + gw - gz * gw);
            let rr = (1.0 - gz) * (1.0 - gw);
            let num = (gz - gw).powi(2) + rr * duv2 - rr * rr * linalg::wedge_sqr(u, v);
            (a, num)
        }
        _ => {
            let a = linalg::ONE - linalg::inner(z.coords(), w.coords());
            let num = linalg::dist(z.coords(), w.coords()).powi(2)
                - linalg::wedge_sqr(z.coords(), w.coords());
            (a, num)
        }
    };
    let big_a = a.norm_sqr();
    let num = num.max(0.0);
    let rho2 = num / big_a;
    if rho2 < 0.25 {
        return Ok(rho2.sqrt().atanh());
    }
    let big_b = z.one_minus_norm_sqr() * w.one_minus_norm_sqr();
    let x = (big_a / big_b).sqrt().max(1.0);
    Ok((x + ((x - 1.0) * (x + 1.0)).sqrt()).ln())
}

/// `dist(0, p)`, computed from the gap as `½ ln((2 - g) / g)`.
pub fn dist_from_origin(p: &BallPoint) -> Result<f64> {
    if !p.is_interior() {
        return Err(Error::InfiniteDistance(
            "a point lies on the boundary sphere".into(),
        ));
    }
    let r = p.norm();
    if r < 0.5 {
        return Ok(r.atanh());
    }
    let g = p.gap();
    Ok(0.5 * ((2.0 - g) / g).ln())
}

/// The point at distance `r` from `p` in the direction `u` (a unit vector
/// read in the chart centred at `p`).
pub fn offset_point(p: &BallPoint, u: &[Complex64], r: f64) -> Result<BallPoint> {
    let back = transport_to_origin(p)?.inverse();
    let local = BallPoint::unchecked(linalg::scale(u, r.tanh()));
    back.apply_ball(&local)
}

/// Constants entering the radial-deviation bound of a proper map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialBoundConstants {
    /// Boundary Lipschitz constant: `1 - |f(z)| <= C (1 - |z|)`.
    pub c: f64,
    /// Empirical Morse constant.
    pub d: f64,
    /// `dist(0, f(0))`.
    pub base_offset: f64,
}

impl RadialBoundConstants {
    /// `½ log(2C) + dist(0, f(0))`
    pub fn beta(&self) -> f64 {
        0.5 * (2.0 * self.c).ln() + self.base_offset
    }

    /// `2D + β + dist(0, f(0))`
    pub fn radial_bound(&self) -> f64 {
        2.0 * self.d + self.beta() + self.base_offset
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cartan, Automorphism};
    use crate::linalg::{random_ball_coords, random_unitary, ONE, ZERO};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn radial(r: f64) -> f64 {
        0.5 * ((1.0 + r) / (1.0 - r)).ln()
    }

    #[test]
    fn distance_examples() {
        let o = BallPoint::origin(2);
        assert_eq!(dist_ball(&o, &o).unwrap(), 0.0);
        let h = BallPoint::new(vec![c(0.5)]).unwrap();
        let d = dist_ball(&BallPoint::origin(1), &h).unwrap();
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-15);
        // the acosh branch agrees with the radial formula
        let x = 1.0 / (1.0f64 - 0.25).sqrt();
        assert!((d - x.acosh()).abs() < 1e-15);
    }

    #[test]
    fn boundary_is_infinite() {
        let e = BallPoint::basis(2, 0);
        assert!(matches!(
            dist_ball(&BallPoint::origin(2), &e),
            Err(Error::InfiniteDistance(_))
        ));
        assert!(matches!(
            dist_ball(&BallPoint::origin(2), &BallPoint::origin(3)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn near_boundary_radial_values() {
        for k in 1..=12 {
            let r = 1.0 - 10f64.powi(-k);
            let p = BallPoint::new(vec![c(r), ZERO]).unwrap();
            let d = dist_ball(&BallPoint::origin(2), &p).unwrap();
            let want = radial(r);
            assert!(((d - want) / want).abs() < 5e-7, "k={k}: {d} vs {want}");
        }
    }

    #[test]
    fn polar_points_are_exact_far_out() {
        let e1 = [ONE, ZERO];
        let g1 = 2.0 / ((2.0 * 12.0f64).exp() + 1.0);
        let g2 = 2.0 / ((2.0 * 12.25f64).exp() + 1.0);
        let p = BallPoint::from_polar(&e1, g1).unwrap();
        let q = BallPoint::from_polar(&e1, g2).unwrap();
        assert!((dist_ball(&p, &q).unwrap() - 0.25).abs() < 1e-13);
        assert!((dist_from_origin(&p).unwrap() - 12.0).abs() < 1e-13);
    }

    #[test]
    fn invariance_under_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in 1..4 {
            for _ in 0..50 {
                let k = Automorphism::unitary_block(&random_unitary(m, &mut rng)).unwrap();
                let g = k.compose(&cartan(rng.random_range(-1.5..1.5), m));
                let z = BallPoint::new(random_ball_coords(m, 0.9, &mut rng)).unwrap();
                let w = BallPoint::new(random_ball_coords(m, 0.9, &mut rng)).unwrap();
                let d0 = dist_ball(&z, &w).unwrap();
                let d1 = dist_ball(&g.apply_ball(&z).unwrap(), &g.apply_ball(&w).unwrap()).unwrap();
                assert!((d0 - d1).abs() < 1e-11, "{d0} vs {d1}");
            }
        }
    }

    #[test]
    fn offset_point_has_requested_distance() {
        let p = BallPoint::new(vec![c(0.3), Complex64::new(0.1, 0.4)]).unwrap();
        let u = [Complex64::new(0.0, 1.0), ZERO];
        let q = offset_point(&p, &u, 0.7).unwrap();
        assert!((dist_ball(&p, &q).unwrap() - 0.7).abs() < 1e-13);
    }

    #[test]
    fn beta_of_linear_embedding() {
        let k = RadialBoundConstants {
            c: 1.0,
            d: 0.0,
            base_offset: 0.0,
        };
        assert!((k.beta() - 0.5 * 2f64.ln()).abs() < 1e-16);
        assert!((k.beta() - 0.3466).abs() < 1e-4);
    }
}
