use std::borrow::Cow;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dist_ball;
use crate::error::{Error, Result};
use crate::group::{cayley_to_ball, rotation_mapping_e1, transport_to_origin, BallPoint, SiegelPoint};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveModel {
    Ball,
    Siegel,
}

#[derive(Debug, Clone, PartialEq)]
enum CurvePoints {
    Ball(Vec<BallPoint>),
    Siegel(Vec<SiegelPoint>),
}

/// A curve sampled at strictly increasing parameters, in either model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveFile", into = "CurveFile")]
pub struct SampledCurve {
    params: Vec<f64>,
    points: CurvePoints,
}

#[derive(Serialize, Deserialize)]
struct CurveFile {
    model: CurveModel,
    params: Vec<f64>,
    points: Vec<Vec<Complex64>>,
}

impl TryFrom<CurveFile> for SampledCurve {
    type Error = Error;
    fn try_from(f: CurveFile) -> Result<Self> {
        match f.model {
            CurveModel::Ball => {
                let pts = f
                    .points
                    .into_iter()
                    .map(BallPoint::new)
                    .collect::<Result<Vec<_>>>()?;
                SampledCurve::ball(f.params, pts)
            }
            CurveModel::Siegel => {
                let pts = f
                    .points
                    .into_iter()
                    .map(SiegelPoint::new)
                    .collect::<Result<Vec<_>>>()?;
                SampledCurve::siegel(f.params, pts)
            }
        }
    }
}

impl From<SampledCurve> for CurveFile {
    fn from(c: SampledCurve) -> Self {
        let model = c.model();
        let points = match c.points {
            CurvePoints::Ball(p) => p.into_iter().map(BallPoint::into_coords).collect(),
            CurvePoints::Siegel(p) => p.into_iter().map(SiegelPoint::into_coords).collect(),
        };
        CurveFile {
            model,
            params: c.params,
            points,
        }
    }
}

fn check_params(params: &[f64], npoints: usize) -> Result<()> {
    if params.is_empty() {
        return Err(Error::input("curve has no samples"));
    }
    if params.len() != npoints {
        return Err(Error::input(format!(
            "curve has {} parameters but {npoints} points",
            params.len()
        )));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::input("curve parameters must be finite"));
    }
    if params.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("curve parameters must be strictly increasing"));
    }
    Ok(())
}

impl SampledCurve {
    pub fn ball(params: Vec<f64>, points: Vec<BallPoint>) -> Result<Self> {
        check_params(&params, points.len())?;
        let m = points[0].dim();
        if points.iter().any(|p| p.dim() != m) {
            return Err(Error::input("curve points have mixed dimensions"));
        }
        if points.iter().any(|p| !p.is_interior()) {
            return Err(Error::input("curve points must lie in the open ball"));
        }
        Ok(SampledCurve {
            params,
            points: CurvePoints::Ball(points),
        })
    }

    pub fn siegel(params: Vec<f64>, points: Vec<SiegelPoint>) -> Result<Self> {
        check_params(&params, points.len())?;
        let m = points[0].dim();
        if points.iter().any(|p| p.dim() != m) {
            return Err(Error::input("curve points have mixed dimensions"));
        }
        if points.iter().any(|p| !p.is_interior()) {
            return Err(Error::input("curve points must lie in the open Siegel domain"));
        }
        Ok(SampledCurve {
            params,
            points: CurvePoints::Siegel(points),
        })
    }

    pub fn model(&self) -> CurveModel {
        match self.points {
            CurvePoints::Ball(_) => CurveModel::Ball,
            CurvePoints::Siegel(_) => CurveModel::Siegel,
        }
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Samples as ball points, converting Siegel samples through the inverse
    /// Cayley transform.
    pub fn ball_points(&self) -> Result<Cow<'_, [BallPoint]>> {
        match &self.points {
            CurvePoints::Ball(p) => Ok(Cow::Borrowed(p)),
            CurvePoints::Siegel(p) => Ok(Cow::Owned(
                p.iter().map(cayley_to_ball).collect::<Result<Vec<_>>>()?,
            )),
        }
    }

    /// Largest distance between consecutive samples.
    pub fn max_step(&self) -> Result<f64> {
        let pts = self.ball_points()?;
        let mut s: f64 = 0.0;
        for w in pts.windows(2) {
            s = s.max(dist_ball(&w[0], &w[1])?);
        }
        Ok(s)
    }
}

/// `t -> tanh(t) v` sampled at `t_values`.
///
/// Samples keep their exact gap `1 - tanh t = 2 / (e^{2t} + 1)`.
pub fn radial_geodesic(v: &[Complex64], t_values: &[f64]) -> Result<SampledCurve> {
    if t_values.iter().any(|t| *t < 0.0) {
        return Err(Error::input("radial_geodesic: times must be nonnegative"));
    }
    let points = t_values
        .iter()
        .map(|&t| BallPoint::from_polar(v, 2.0 / ((2.0 * t).exp() + 1.0)))
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::ball(t_values.to_vec(), points)
}

/// The unit-speed geodesic from `p` towards `q`, sampled at `n >= 2`
/// equally spaced times covering `[0, dist(p, q)]`.
pub fn geodesic_segment(p: &BallPoint, q: &BallPoint, n: usize) -> Result<SampledCurve> {
    if n < 2 {
        return Err(Error::input("geodesic_segment: need at least two samples"));
    }
    let to_origin = transport_to_origin(p)?;
    let w = to_origin.apply_ball(q)?;
    let r = w.norm();
    if r == 0.0 {
        return Err(Error::input("geodesic_segment: endpoints coincide"));
    }
    let len = dist_ball(p, q)?;
    let k = rotation_mapping_e1(&linalg::scale(w.coords(), 1.0 / r))?;
    let back = to_origin.inverse().compose(&k);
    let m = p.dim();
    let params: Vec<f64> = (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect();
    let points = params
        .iter()
        .map(|&s| {
            let mut x = vec![linalg::ZERO; m];
            x[0] = Complex64::new(s.tanh(), 0.0);
            back.apply_ball(&BallPoint::unchecked(x))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::ball(params, points)
}

/// Outcome of checking `(1/α)|t-s| - β <= d(σ(s), σ(t)) <= α|t-s| + β` on
/// every pair of samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiGeodesicCertificate {
    pub alpha: f64,
    pub beta: f64,
    /// Worst signed violation; positive means an inequality fails.
    pub max_violation: f64,
    /// Parameters `(s, t)` of the worst pair.
    pub worst_pair: (f64, f64),
    pub pairs: usize,
}

impl QuasiGeodesicCertificate {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

#[derive(Clone, Copy)]
struct Worst {
    v: f64,
    i: usize,
    j: usize,
}

fn worse(a: Worst, b: Worst) -> Worst {
    if a.v > b.v || (a.v == b.v && (a.i, a.j) <= (b.i, b.j)) {
        a
    } else {
        b
    }
}

pub fn certify_quasi_geodesic(c: &SampledCurve, alpha: f64, beta: f64) -> Result<QuasiGeodesicCertificate> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::input(format!("alpha = {alpha} must be a finite value >= 1")));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::input(format!("beta = {beta} must be a finite value >= 0")));
    }
    let n = c.len();
    if n < 2 {
        return Err(Error::input("certify_quasi_geodesic: need at least two samples"));
    }
    let pts = c.ball_points()?;
    let params = c.params();
    let init = Worst {
        v: f64::NEG_INFINITY,
        i: 0,
        j: 1,
    };
    let w = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Worst> {
            let mut best = init;
            for j in i + 1..n {
                let d = dist_ball(&pts[i], &pts[j])?;
                let dt = params[j] - params[i];
                let lower = dt / alpha - beta - d;
                let upper = d - alpha * dt - beta;
                best = worse(best, Worst { v: lower.max(upper), i, j });
            }
            Ok(best)
        })
        .try_reduce(|| init, |a, b| Ok(worse(a, b)))?;
    Ok(QuasiGeodesicCertificate {
        alpha,
        beta,
        max_violation: w.v,
        worst_pair: (params[w.i], params[w.j]),
        pairs: n * (n - 1) / 2,
    })
}

/// Sampled Hausdorff pseudo-distance with its discretization slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    /// Larger of the two curves' maximal adjacent-sample distances.
    pub slack: f64,
}

fn directed(a: &[BallPoint], b: &[BallPoint]) -> Result<f64> {
    a.par_iter()
        .map(|p| -> Result<f64> {
            let mut best = f64::INFINITY;
            for q in b {
                best = best.min(dist_ball(p, q)?);
            }
            Ok(best)
        })
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
}

pub fn hausdorff_pseudo_distance(c1: &SampledCurve, c2: &SampledCurve) -> Result<HausdorffEstimate> {
    if c1.model() != c2.model() {
        return Err(Error::input("hausdorff_pseudo_distance: curves use different models"));
    }
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::input("hausdorff_pseudo_distance: empty curve"));
    }
    let a = c1.ball_points()?;
    let b = c2.ball_points()?;
    if a[0].dim() != b[0].dim() {
        return Err(Error::input("hausdorff_pseudo_distance: dimension mismatch"));
    }
    let value = directed(&a, &b)?.max(directed(&b, &a)?);
    let slack = c1.max_step()?.max(c2.max_step()?);
    Ok(HausdorffEstimate { value, slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cayley_to_siegel;
    use crate::linalg::{ONE, ZERO};

    fn grid(t_max: f64, step: f64) -> Vec<f64> {
        let n = (t_max / step).round() as usize;
        (0..=n).map(|i| i as f64 * step).collect()
    }

    #[test]
    fn radial_geodesic_values() {
        let c = radial_geodesic(&[ONE, ZERO], &[0.0, 1.0]).unwrap();
        let pts = c.ball_points().unwrap();
        assert_eq!(pts[0].norm(), 0.0);
        assert!((pts[1].coords()[0].re - 0.761594).abs() < 1e-6);
        assert!((pts[1].coords()[0].re - 1f64.tanh()).abs() < 1e-16);
    }

    #[test]
    fn radial_geodesic_is_isometric() {
        let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let c = radial_geodesic(&v, &grid(12.0, 0.25)).unwrap();
        let cert = certify_quasi_geodesic(&c, 1.0, 0.0).unwrap();
        assert!(cert.max_violation <= 1e-12, "{}", cert.max_violation);
    }

    #[test]
    fn time_doubled_curve_fails() {
        let t = grid(3.0, 0.5);
        let doubled: Vec<f64> = t.iter().map(|s| 2.0 * s).collect();
        let pts = radial_geodesic(&[ONE], &doubled).unwrap().ball_points().unwrap().into_owned();
        let c = SampledCurve::ball(t, pts).unwrap();
        let cert = certify_quasi_geodesic(&c, 1.0, 0.0).unwrap();
        assert!(cert.max_violation > 0.0);
        assert!((cert.max_violation - 3.0).abs() < 1e-9);
        assert_eq!(cert.worst_pair, (0.0, 3.0));
    }

    #[test]
    fn certificate_rejects_bad_arguments() {
        let c = radial_geodesic(&[ONE], &[0.0]).unwrap();
        assert!(certify_quasi_geodesic(&c, 1.0, 0.0).is_err());
        let c = radial_geodesic(&[ONE], &[0.0, 1.0]).unwrap();
        assert!(certify_quasi_geodesic(&c, 0.5, 0.0).is_err());
        assert!(certify_quasi_geodesic(&c, 1.0, -1.0).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let v = [ONE, ZERO];
        let c = radial_geodesic(&v, &grid(5.0, 0.25)).unwrap();
        let h = hausdorff_pseudo_distance(&c, &c).unwrap();
        assert_eq!(h.value, 0.0);
        let longer = radial_geodesic(&v, &grid(6.0, 0.25)).unwrap();
        let h = hausdorff_pseudo_distance(&c, &longer).unwrap();
        assert!((h.value - 1.0).abs() <= h.slack);
        assert!((h.value - 1.0).abs() < 1e-12);
        let w = [Complex64::new(0.0, 1.0), ZERO];
        let other = radial_geodesic(&w, &grid(3.0, 0.5)).unwrap();
        let short = radial_geodesic(&v, &grid(3.0, 0.5)).unwrap();
        let a = hausdorff_pseudo_distance(&short, &other).unwrap();
        let b = hausdorff_pseudo_distance(&other, &short).unwrap();
        assert!(a.value.is_finite() && a.value >= 0.0);
        assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_model_mismatch() {
        let c = radial_geodesic(&[ONE], &[0.0, 1.0]).unwrap();
        let s = SampledCurve::siegel(
            vec![0.0],
            vec![cayley_to_siegel(&BallPoint::origin(1)).unwrap()],
        )
        .unwrap();
        assert!(matches!(hausdorff_pseudo_distance(&c, &s), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn siegel_curves_are_converted() {
        let c = radial_geodesic(&[ONE, ZERO], &grid(2.0, 0.5)).unwrap();
        let pts: Vec<SiegelPoint> = c
            .ball_points()
            .unwrap()
            .iter()
            .map(|p| cayley_to_siegel(p).unwrap())
            .collect();
        let s = SampledCurve::siegel(c.params().to_vec(), pts).unwrap();
        assert!(certify_quasi_geodesic(&s, 1.0, 0.0).unwrap().max_violation < 1e-12);
    }

    #[test]
    fn geodesic_segment_is_isometric() {
        let p = BallPoint::new(vec![Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.0)]).unwrap();
        let q = BallPoint::new(vec![Complex64::new(-0.5, 0.2), Complex64::new(0.1, 0.6)]).unwrap();
        let c = geodesic_segment(&p, &q, 20).unwrap();
        assert!(certify_quasi_geodesic(&c, 1.0, 0.0).unwrap().max_violation < 1e-12);
        let pts = c.ball_points().unwrap();
        assert!(linalg::dist(pts[0].coords(), p.coords()) < 1e-14);
        assert!(linalg::dist(pts[19].coords(), q.coords()) < 1e-13);
    }

    #[test]
    fn curve_file_roundtrip() {
        let c = radial_geodesic(&[ONE, ZERO], &[0.0, 0.5, 1.25]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: SampledCurve = serde_json::from_str(&s).unwrap();
        assert_eq!(back.params(), c.params());
        let a = c.ball_points().unwrap();
        let b = back.ball_points().unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.coords(), y.coords());
        }
        assert!(serde_json::from_str::<SampledCurve>(
            r#"{"model":"ball","params":[1.0,0.5],"points":[[[0,0]],[[0.1,0]]]}"#
        )
        .is_err());
    }
}
