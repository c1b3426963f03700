//! Monte Carlo lower estimates of the Morse constant of the ball.
//!
//! Each trial draws a geodesic segment `σ` through the origin, moves its
//! endpoints by at most `R`, and builds an `(α, β)`-quasi-geodesic from the
//! geodesic joining the moved endpoints: a piecewise-linear time change with
//! slopes in `[1/α, α]` followed by a jitter of size at most `β/2` at every
//! interior sample. Candidates are certified before use. The estimate is
//! the largest Hausdorff pseudo-distance between a candidate and `σ`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{certify_quasi_geodesic, geodesic_segment, hausdorff_pseudo_distance, offset_point};
use crate::error::{Error, Result};
use crate::group::{rotation_mapping_e1, BallPoint};
use crate::linalg::{self, random_unit_vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorseConfig {
    /// Samples per curve.
    pub samples: usize,
    pub min_length: f64,
    pub max_length: f64,
    /// Pieces of the piecewise-linear time change.
    pub pieces: usize,
    /// Violation tolerated by the certificate (rounding only).
    pub certify_tol: f64,
}

impl Default for MorseConfig {
    fn default() -> Self {
        MorseConfig {
            samples: 48,
            min_length: 2.0,
            max_length: 8.0,
            pieces: 4,
            certify_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorseEstimate {
    /// Largest sampled Hausdorff pseudo-distance.
    pub d: f64,
    /// Largest discretization slack over the accepted trials.
    pub slack: f64,
    pub accepted: usize,
    pub rejected: usize,
}

pub fn estimate_morse_constant(
    m: usize,
    alpha: f64,
    beta: f64,
    r: f64,
    trials: usize,
    seed: u64,
) -> Result<MorseEstimate> {
    estimate_morse_constant_with(m, alpha, beta, r, trials, seed, &MorseConfig::default())
}

struct Trial {
    d: f64,
    slack: f64,
    accepted: bool,
}

pub fn estimate_morse_constant_with(
    m: usize,
    alpha: f64,
    beta: f64,
    r: f64,
    trials: usize,
    seed: u64,
    cfg: &MorseConfig,
) -> Result<MorseEstimate> {
    if m == 0 {
        return Err(Error::input("estimate_morse_constant: dimension must be positive"));
    }
    if !(alpha >= 1.0) || !(beta >= 0.0) || !(r >= 0.0) || !(alpha * beta * r).is_finite() {
        return Err(Error::input(
            "estimate_morse_constant: need finite alpha >= 1, beta >= 0, R >= 0",
        ));
    }
    if cfg.samples < 3 || cfg.pieces == 0 || !(cfg.min_length > 0.0 && cfg.max_length >= cfg.min_length) {
        return Err(Error::input("estimate_morse_constant: invalid configuration"));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(m, alpha, beta, r, seed, i as u64, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut est = MorseEstimate {
        d: 0.0,
        slack: 0.0,
        accepted: 0,
        rejected: 0,
    };
    for t in results {
        if t.accepted {
            est.d = est.d.max(t.d);
            est.slack = est.slack.max(t.slack);
            est.accepted += 1;
        } else {
            est.rejected += 1;
        }
    }
    Ok(est)
}

fn signed_radial(v: &[Complex64], x: f64) -> Result<BallPoint> {
    let gap = 2.0 / ((2.0 * x.abs()).exp() + 1.0);
    if x >= 0.0 {
        BallPoint::from_polar(v, gap)
    } else {
        BallPoint::from_polar(&linalg::scale(v, -1.0), gap)
    }
}

fn run_trial(
    m: usize,
    alpha: f64,
    beta: f64,
    r: f64,
    seed: u64,
    index: u64,
    cfg: &MorseConfig,
) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = cfg.samples;

    let len = rng.random_range(cfg.min_length..=cfg.max_length);
    let v = random_unit_vector(m, &mut rng);
    let half = 0.5 * len;
    let ref_params: Vec<f64> = (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect();
    let ref_points = ref_params
        .iter()
        .map(|&s| signed_radial(&v, s - half))
        .collect::<Result<Vec<_>>>()?;
    let reference = super::SampledCurve::ball(ref_params, ref_points.clone())?;

    let mut endpoint = |p: &BallPoint| -> Result<BallPoint> {
        let u = random_unit_vector(m, &mut rng);
        let s: f64 = rng.random();
        offset_point(p, &u, r * s)
    };
    let q0 = endpoint(&ref_points[0])?;
    let q1 = endpoint(&ref_points[n - 1])?;

    let backbone = geodesic_segment(&q0, &q1, 2)?;
    let ell = backbone.params()[1];

    // time change: equal shares of the backbone, random slopes in [1/α, α]
    let log_a = alpha.ln();
    let slopes: Vec<f64> = (0..cfg.pieces)
        .map(|_| (rng.random_range(-1.0..=1.0) * log_a).exp())
        .collect();
    let share = ell / cfg.pieces as f64;
    let durations: Vec<f64> = slopes.iter().map(|s| share / s).collect();
    let total: f64 = durations.iter().sum();
    let params: Vec<f64> = (0..n).map(|i| total * i as f64 / (n - 1) as f64).collect();
    let phi = |s: f64| -> f64 {
        let mut acc_t = 0.0;
        let mut acc_x = 0.0;
        for (d, sl) in durations.iter().zip(&slopes) {
            if s <= acc_t + d {
                return acc_x + (s - acc_t) * sl;
            }
            acc_t += d;
            acc_x += share;
        }
        ell
    };

    let to_origin = crate::group::transport_to_origin(&q0)?;
    let w = to_origin.apply_ball(&q1)?;
    let k = rotation_mapping_e1(&linalg::scale(w.coords(), 1.0 / w.norm()))?;
    let back = to_origin.inverse().compose(&k);
    let mut points = Vec::with_capacity(n);
    for (i, &s) in params.iter().enumerate() {
        let mut x = vec![linalg::ZERO; m];
        x[0] = Complex64::new(phi(s).min(ell).tanh(), 0.0);
        let on_backbone = back.apply_ball(&BallPoint::unchecked(x))?;
        let u = random_unit_vector(m, &mut rng);
        let size: f64 = rng.random();
        if i == 0 || i == n - 1 || beta == 0.0 {
            points.push(on_backbone);
        } else {
            points.push(offset_point(&on_backbone, &u, 0.5 * beta * size)?);
        }
    }
    let candidate = super::SampledCurve::ball(params, points)?;
    let cert = certify_quasi_geodesic(&candidate, alpha, beta)?;
    if !cert.holds(cfg.certify_tol) {
        return Ok(Trial {
            d: 0.0,
            slack: 0.0,
            accepted: false,
        });
    }
    let h = hausdorff_pseudo_distance(&candidate, &reference)?;
    Ok(Trial {
        d: h.value,
        slack: h.slack,
        accepted: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_geodesics_give_slack_sized_estimate() {
        let e = estimate_morse_constant(2, 1.0, 0.0, 0.0, 20, 3).unwrap();
        assert_eq!(e.rejected, 0);
        assert!(e.d <= e.slack, "{} > {}", e.d, e.slack);
        assert!(e.d < 1e-9);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = estimate_morse_constant(1, 1.5, 1.0, 0.5, 30, 7).unwrap();
        let b = estimate_morse_constant(1, 1.5, 1.0, 0.5, 30, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(estimate_morse_constant(1, 0.5, 1.0, 0.0, 1, 0).is_err());
        assert!(estimate_morse_constant(1, 1.0, -1.0, 0.0, 1, 0).is_err());
        assert!(estimate_morse_constant(0, 1.0, 1.0, 0.0, 1, 0).is_err());
    }
}
