//! Maps between Siegel domains and their second-order jets at the origin.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BallMap;
use crate::dd::DdComplex;
use crate::error::{Error, Result};
use crate::group::{cartan_siegel_scalars, from_siegel_coords, to_siegel_coords, SiegelPoint};
use crate::jet::{Jet2, Scalar};
use crate::linalg::{self, ZERO};

/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-4;
/// Finite-difference disagreement treated as a wrong derivative.
pub const FD_FAIL: f64 = 1e-4;

/// A holomorphic map `P^m -> P^M` with exact jets.
pub trait SiegelMap: Send + Sync {
    fn domain_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    fn eval(&self, w: &[Complex64]) -> Result<Vec<Complex64>>;
    fn eval_jet(&self, w: &[Jet2]) -> Result<Vec<Jet2>>;
    fn eval_dd(&self, w: &[DdComplex]) -> Result<Vec<DdComplex>>;

    /// Finite-difference step along each domain coordinate.
    fn fd_steps(&self) -> Vec<f64> {
        vec![FD_STEP; self.domain_dim()]
    }

    /// Size of a unit coefficient of `∂_k g_j` (`l = None`) or
    /// `∂_k ∂_l g_j`, used as the floor of relative jet errors.
    fn coefficient_floor(&self, _j: usize, _k: usize, _l: Option<usize>) -> f64 {
        1.0
    }
}

/// `F_M ∘ f ∘ F_m^{-1}` for a ball map `f`.
#[derive(Debug, Clone)]
pub struct SiegelConjugate<F> {
    pub map: F,
}

pub fn siegel_conjugate<F: BallMap>(map: F) -> SiegelConjugate<F> {
    SiegelConjugate { map }
}

impl<F: BallMap> SiegelConjugate<F> {
    fn run<S: Scalar>(&self, w: &[S]) -> Result<Vec<S>> {
        if w.len() != self.map.domain_dim() {
            return Err(Error::input("Siegel map evaluated at a point of the wrong dimension"));
        }
        let z = from_siegel_coords(w)?;
        to_siegel_coords(&self.map.eval_scalars(&z)?)
    }
}

impl<F: BallMap> SiegelMap for SiegelConjugate<F> {
    fn domain_dim(&self) -> usize {
        self.map.domain_dim()
    }
    fn target_dim(&self) -> usize {
        self.map.target_dim()
    }
    fn eval(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        self.run(w)
    }
    fn eval_jet(&self, w: &[Jet2]) -> Result<Vec<Jet2>> {
        self.run(w)
    }
    fn eval_dd(&self, w: &[DdComplex]) -> Result<Vec<DdComplex>> {
        self.run(w)
    }
}

/// `w -> A_{-τ}(g(A_τ w))` where `A_τ w = (e^{-τ} w_1, e^{-τ/2} w')`.
#[derive(Debug, Clone)]
pub struct CartanRescaled<G> {
    pub inner: G,
    pub tau: f64,
}

impl<G: SiegelMap> CartanRescaled<G> {
    fn run<S: Scalar>(&self, w: &[S], inner: impl Fn(&[S]) -> Result<Vec<S>>) -> Result<Vec<S>> {
        let v = cartan_siegel_scalars(self.tau, w);
        Ok(cartan_siegel_scalars(-self.tau, &inner(&v)?))
    }

    fn weight(&self, idx: usize) -> f64 {
        if idx == 0 {
            (-self.tau).exp()
        } else {
            (-0.5 * self.tau).exp()
        }
    }
}

impl<G: SiegelMap> SiegelMap for CartanRescaled<G> {
    fn domain_dim(&self) -> usize {
        self.inner.domain_dim()
    }
    fn target_dim(&self) -> usize {
        self.inner.target_dim()
    }
    fn eval(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        self.run(w, |v| self.inner.eval(v))
    }
    fn eval_jet(&self, w: &[Jet2]) -> Result<Vec<Jet2>> {
        self.run(w, |v| self.inner.eval_jet(v))
    }
    fn eval_dd(&self, w: &[DdComplex]) -> Result<Vec<DdComplex>> {
        self.run(w, |v| self.inner.eval_dd(v))
    }
    fn fd_steps(&self) -> Vec<f64> {
        self.inner
            .fd_steps()
            .iter()
            .enumerate()
            .map(|(k, h)| h / self.weight(k))
            .collect()
    }
    fn coefficient_floor(&self, j: usize, k: usize, l: Option<usize>) -> f64 {
        let mut s = self.inner.coefficient_floor(j, k, l) * self.weight(k) / self.weight(j);
        if let Some(l) = l {
            s *= self.weight(l);
        }
        s
    }
}

/// Value, first and second derivatives of a Siegel map at a base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetExpansion {
    pub base: SiegelPoint,
    pub value: Vec<Complex64>,
    /// `first[j][k] = ∂g_j/∂z_k`
    pub first: Vec<Vec<Complex64>>,
    /// `second[j][k][l] = ∂²g_j/∂z_k∂z_l`, symmetric in `k, l`.
    pub second: Vec<Vec<Vec<Complex64>>>,
    /// Largest relative disagreement with central finite differences.
    pub error_norm: f64,
}

impl JetExpansion {
    /// Assembles a jet from per-component [`Jet2`] values, mirroring the
    /// upper triangle of each Hessian so the result is exactly symmetric.
    pub fn from_jets(base: SiegelPoint, jets: &[Jet2]) -> Self {
        let m = base.dim();
        let value = jets.iter().map(|j| j.value).collect();
        let first = jets.iter().map(|j| j.grad.clone()).collect();
        let second = jets
            .iter()
            .map(|j| {
                (0..m)
                    .map(|k| (0..m).map(|l| j.hess_at(k.min(l), k.max(l))).collect())
                    .collect()
            })
            .collect();
        JetExpansion {
            base,
            value,
            first,
            second,
            error_norm: 0.0,
        }
    }

    /// A jet with the given coefficients at the origin.
    pub fn at_origin(
        value: Vec<Complex64>,
        first: Vec<Vec<Complex64>>,
        second: Vec<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        let big_m = value.len();
        let m = first.first().map_or(0, Vec::len);
        if m == 0 || first.len() != big_m || second.len() != big_m {
            return Err(Error::input("jet: inconsistent component counts"));
        }
        if first.iter().any(|r| r.len() != m)
            || second.iter().any(|s| s.len() != m || s.iter().any(|r| r.len() != m))
        {
            return Err(Error::input("jet: inconsistent derivative shapes"));
        }
        for s in &second {
            for k in 0..m {
                for l in 0..k {
                    if s[k][l] != s[l][k] {
                        return Err(Error::input("jet: second derivatives are not symmetric"));
                    }
                }
            }
        }
        Ok(JetExpansion {
            base: SiegelPoint::origin(m),
            value,
            first,
            second,
            error_norm: 0.0,
        })
    }

    pub fn domain_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.value.len()
    }

    /// Largest coefficient difference (value, first and second order).
    pub fn max_difference(&self, other: &JetExpansion) -> f64 {
        let mut d: f64 = 0.0;
        for j in 0..self.target_dim() {
            d = d.max((self.value[j] - other.value[j]).norm());
            for k in 0..self.domain_dim() {
                d = d.max((self.first[j][k] - other.first[j][k]).norm());
                for l in 0..self.domain_dim() {
                    d = d.max((self.second[j][k][l] - other.second[j][k][l]).norm());
                }
            }
        }
        d
    }
}

/// The quadratic Taylor polynomial `value + first·w + ½ wᵀ second w`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticMap {
    pub jet: JetExpansion,
}

impl QuadraticMap {
    pub fn new(jet: JetExpansion) -> Self {
        QuadraticMap { jet }
    }

    fn run<S: Scalar>(&self, w: &[S]) -> Result<Vec<S>> {
        let m = self.jet.domain_dim();
        if w.len() != m {
            return Err(Error::input("quadratic map evaluated at a point of the wrong dimension"));
        }
        let b = &self.jet.base;
        let d: Vec<S> = w.iter().zip(b.coords()).map(|(x, c)| x.add_const(-c)).collect();
        Ok((0..self.jet.target_dim())
            .map(|j| {
                let mut acc = d[0].lift(self.jet.value[j]);
                for k in 0..m {
                    acc = acc + d[k].scale(self.jet.first[j][k]);
                    for l in 0..m {
                        let c = self.jet.second[j][k][l] * 0.5;
                        if c != ZERO {
                            acc = acc + (d[k].clone() * d[l].clone()).scale(c);
                        }
                    }
                }
                acc
            })
            .collect())
    }
}

impl SiegelMap for QuadraticMap {
    fn domain_dim(&self) -> usize {
        self.jet.domain_dim()
    }
    fn target_dim(&self) -> usize {
        self.jet.target_dim()
    }
    fn eval(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        self.run(w)
    }
    fn eval_jet(&self, w: &[Jet2]) -> Result<Vec<Jet2>> {
        self.run(w)
    }
    fn eval_dd(&self, w: &[DdComplex]) -> Result<Vec<DdComplex>> {
        self.run(w)
    }
}

/// Exact jet of `g` at the origin, cross-checked against central finite
/// differences.
///
/// `error_norm` is the largest `|exact - fd| / max(|exact|, floor)` with the
/// floor from [`SiegelMap::coefficient_floor`]. A disagreement above `1e-4`
/// is reported as a numeric error.
pub fn jet_at_zero(g: &dyn SiegelMap) -> Result<JetExpansion> {
    let m = g.domain_dim();
    let big_m = g.target_dim();
    let zero = vec![ZERO; m];
    let jets = g.eval_jet(&Jet2::seed(&zero))?;
    if jets.len() != big_m {
        return Err(Error::numeric("Siegel map returned the wrong number of components"));
    }
    let mut jet = JetExpansion::from_jets(SiegelPoint::origin(m), &jets);

    let h = g.fd_steps();
    let at = |pts: &[(usize, f64)]| -> Result<Vec<Complex64>> {
        let mut w = zero.clone();
        for &(k, s) in pts {
            w[k] += Complex64::new(s, 0.0);
        }
        g.eval(&w)
    };
    let f0 = g.eval(&zero)?;
    let mut err: f64 = 0.0;
    let mut check = |exact: Complex64, approx: Complex64, floor: f64| {
        let e = (exact - approx).norm() / exact.norm().max(floor);
        err = err.max(e);
    };
    let mut plus = Vec::with_capacity(m);
    let mut minus = Vec::with_capacity(m);
    for k in 0..m {
        plus.push(at(&[(k, h[k])])?);
        minus.push(at(&[(k, -h[k])])?);
    }
    for k in 0..m {
        for j in 0..big_m {
            let d1 = (plus[k][j] - minus[k][j]) / (2.0 * h[k]);
            check(jet.first[j][k], d1, g.coefficient_floor(j, k, None));
            let d2 = (plus[k][j] - 2.0 * f0[j] + minus[k][j]) / (h[k] * h[k]);
            check(jet.second[j][k][k], d2, g.coefficient_floor(j, k, Some(k)));
        }
        for l in k + 1..m {
            let pp = at(&[(k, h[k]), (l, h[l])])?;
            let pm = at(&[(k, h[k]), (l, -h[l])])?;
            let mp = at(&[(k, -h[k]), (l, h[l])])?;
            let mm = at(&[(k, -h[k]), (l, -h[l])])?;
            for j in 0..big_m {
                let d2 = (pp[j] - pm[j] - mp[j] + mm[j]) / (4.0 * h[k] * h[l]);
                check(jet.second[j][k][l], d2, g.coefficient_floor(j, k, Some(l)));
            }
        }
    }
    if err > FD_FAIL {
        return Err(Error::numeric(format!(
            "jet disagrees with finite differences: relative error {err:.3e}"
        )));
    }
    jet.error_norm = err;
    Ok(jet)
}

/// Seeded interior points of the Siegel domain of moderate size:
/// `w' ~ N(0, ¼)`, `w_1 = x + i(|w'|^2 + y)` with `x ∈ [-1, 1]`,
/// `y ∈ [0.05, 1]`.
pub fn sample_siegel_points(m: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let tail = linalg::scale(&linalg::random_gaussian_vector(m - 1, &mut rng), 0.5);
            let x: f64 = rng.random_range(-1.0..=1.0);
            let y: f64 = rng.random_range(0.05..=1.0);
            let mut w = vec![Complex64::new(x, linalg::norm_sqr(&tail) + y)];
            w.extend(tail);
            w
        })
        .collect()
}
