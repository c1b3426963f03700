//! Boundary behaviour of proper maps: the Lipschitz constant in
//! `1 - |f(z)| <= C (1 - |z|)`, the quasi-geodesic constant β, and the
//! deviation of `f(t v)` from the radial geodesic towards `f(v)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{boundary_samples, BallMap};
use crate::error::{Error, Result};
use crate::group::BallPoint;
use crate::linalg;
use crate::metric::{dist_ball, dist_from_origin, radial_geodesic, SampledCurve};

const DIRECTION_SEED: u64 = 0xC0FFEE;
const SWEEP_SEED: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzEstimate {
    /// Largest ratio `(1 - |f(z)|) / (1 - |z|)` on the grid.
    pub c: f64,
    pub grid_size: usize,
    pub directions: usize,
    pub radii: usize,
}

fn radii(density: usize) -> Vec<f64> {
    let k = 8 * density;
    let mut r = vec![0.0, 0.25, 0.5, 0.75];
    for i in 0..k {
        let e = -1.0 - 7.0 * i as f64 / (k - 1) as f64;
        r.push(1.0 - 10f64.powf(e));
    }
    r
}

/// Maximizes `(1 - |f(z)|) / (1 - |z|)` over `64 * density` directions and
/// radii `{0, ¼, ½, ¾}` together with `8 * density` radii whose gaps
/// `1 - |z|` are log-spaced from `1e-1` to `1e-8`.
pub fn lipschitz_boundary_constant<F: BallMap>(f: &F, density: usize) -> Result<LipschitzEstimate> {
    if density == 0 {
        return Err(Error::input("grid density must be positive"));
    }
    let m = f.domain_dim();
    let dirs = boundary_samples(m, 64 * density, DIRECTION_SEED);
    let rs = radii(density);
    let c = dirs
        .par_iter()
        .map(|v| -> Result<f64> {
            let mut best = f64::NEG_INFINITY;
            for &r in &rs {
                let z = linalg::scale(v, r);
                let w = f.eval_scalars(&z)?;
                let ratio = (1.0 - linalg::norm(&w)) / (1.0 - linalg::norm(&z));
                best = best.max(ratio);
            }
            Ok(best)
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::numeric(format!("boundary Lipschitz estimate {c} is not positive")));
    }
    Ok(LipschitzEstimate {
        c,
        grid_size: dirs.len() * rs.len(),
        directions: dirs.len(),
        radii: rs.len(),
    })
}

/// `½ log(2C) + dist(0, f(0))`, after checking `C` against the coarse grid.
pub fn beta_constant<F: BallMap>(f: &F, c: f64) -> Result<f64> {
    let est = lipschitz_boundary_constant(f, 1)?;
    if !(c >= est.c * (1.0 - 1e-12)) {
        return Err(Error::input(format!(
            "C = {c} is below the sampled ratio supremum {}",
            est.c
        )));
    }
    let f0 = f.eval(&BallPoint::origin(f.domain_dim()))?;
    Ok(0.5 * (2.0 * c).ln() + dist_from_origin(&f0)?)
}

/// `1 - 10^{-k}` for `k = 1..=6`.
pub fn sweep_times() -> Vec<f64> {
    (1..=6).map(|k| 1.0 - 10f64.powi(-k)).collect()
}

/// Deterministic sweep directions (axes and pair combinations first).
pub fn sweep_directions(m: usize, count: usize) -> Vec<Vec<Complex64>> {
    boundary_samples(m, count, SWEEP_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub direction: usize,
    pub t: f64,
    /// `dist(f(t v), t f(v))`
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSweep {
    pub directions: Vec<Vec<Complex64>>,
    pub t_values: Vec<f64>,
    /// Row-major over (direction, t).
    pub rows: Vec<SweepRow>,
    pub sup: f64,
}

impl RadialSweep {
    pub fn deviation(&self, direction: usize, t_index: usize) -> f64 {
        self.rows[direction * self.t_values.len() + t_index].deviation
    }

    /// Largest change of the deviation between two t-grid positions.
    pub fn max_change(&self, a: usize, b: usize) -> f64 {
        (0..self.directions.len())
            .map(|d| (self.deviation(d, a) - self.deviation(d, b)).abs())
            .fold(0.0, f64::max)
    }
}

/// Tabulates `dist(f(t v), t f(v))` over directions and times in `[0, 1)`.
pub fn radial_deviation_sweep<F: BallMap>(
    f: &F,
    directions: &[Vec<Complex64>],
    t_values: &[f64],
) -> Result<RadialSweep> {
    let m = f.domain_dim();
    if t_values.iter().any(|t| !(0.0..1.0).contains(t)) {
        return Err(Error::input("sweep times must lie in [0, 1)"));
    }
    let mut images = Vec::with_capacity(directions.len());
    for v in directions {
        if v.len() != m || (linalg::norm(v) - 1.0).abs() > 1e-12 {
            return Err(Error::input("sweep directions must be unit vectors of the domain"));
        }
        let fv = f.eval_scalars(v)?;
        let n = linalg::norm(&fv);
        if (n - 1.0).abs() > super::PROPERNESS_TOL {
            return Err(Error::input(format!(
                "map is not proper: |f(v)| = {n} on the boundary"
            )));
        }
        images.push(linalg::scale(&fv, 1.0 / n));
    }
    let cells: Vec<(usize, f64)> = (0..directions.len())
        .flat_map(|d| t_values.iter().map(move |&t| (d, t)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(d, t)| -> Result<SweepRow> {
            let z = BallPoint::unchecked(f.eval_scalars(&linalg::scale(&directions[d], t))?);
            let w = BallPoint::from_polar(&images[d], 1.0 - t)?;
            Ok(SweepRow {
                direction: d,
                t,
                deviation: dist_ball(&z, &w)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(RadialSweep {
        directions: directions.to_vec(),
        t_values: t_values.to_vec(),
        rows,
        sup,
    })
}

/// `t -> f(tanh(t) v)`, the image of a radial geodesic, sampled at `t_values`.
pub fn radial_image_curve<F: BallMap>(f: &F, v: &[Complex64], t_values: &[f64]) -> Result<SampledCurve> {
    let c = radial_geodesic(v, t_values)?;
    let points = c
        .ball_points()?
        .par_iter()
        .map(|p| f.eval(p))
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::ball(t_values.to_vec(), points)
}
