//! Polynomial proper maps between balls.

mod boundary;
mod catalog;
mod siegel;
mod symmetry;

pub use boundary::{
    beta_constant, lipschitz_boundary_constant, radial_deviation_sweep, radial_image_curve, sweep_directions,
    sweep_times, LipschitzEstimate, RadialSweep, SweepRow,
};
pub use catalog::{catalog, CatalogMap};
pub use siegel::{
    jet_at_zero, sample_siegel_points, siegel_conjugate, CartanRescaled, JetExpansion,
    QuadraticMap, SiegelConjugate, SiegelMap, FD_STEP,
};
pub use symmetry::{block_extend, verify_symmetry_pair, SymmetryPair, SYMMETRY_TOL};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Automorphism, BallPoint};
use crate::jet::Scalar;
use crate::linalg::{self, ONE, ZERO};

/// Largest admissible total degree of a map spec.
pub const MAX_DEGREE: u32 = 8;
/// Largest admissible coefficient modulus of a map spec.
pub const MAX_COEF: f64 = 10.0;
/// Bound on `| |f(v)| - 1 |` over the boundary sample.
pub const PROPERNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coef: Complex64,
}

/// A polynomial map `C^m -> C^M` given by monomial lists, one per output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecFile", into = "SpecFile")]
pub struct ProperMapSpec {
    domain_dim: usize,
    target_dim: usize,
    components: Vec<Vec<Monomial>>,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    domain_dim: usize,
    target_dim: usize,
    components: Vec<Vec<Monomial>>,
}

impl TryFrom<SpecFile> for ProperMapSpec {
    type Error = Error;
    fn try_from(f: SpecFile) -> Result<Self> {
        ProperMapSpec::new(f.domain_dim, f.target_dim, f.components)
    }
}

impl From<ProperMapSpec> for SpecFile {
    fn from(s: ProperMapSpec) -> Self {
        SpecFile {
            domain_dim: s.domain_dim,
            target_dim: s.target_dim,
            components: s.components,
        }
    }
}

impl ProperMapSpec {
    /// Checks dimensions, degrees and coefficients; properness is checked by [`Self::validate`].
    pub fn new(domain_dim: usize, target_dim: usize, components: Vec<Vec<Monomial>>) -> Result<Self> {
        if domain_dim == 0 {
            return Err(Error::input("map spec: domain_dim must be positive"));
        }
        if target_dim < domain_dim {
            return Err(Error::input(format!(
                "map spec: target_dim {target_dim} is below domain_dim {domain_dim}"
            )));
        }
        if components.len() != target_dim {
            return Err(Error::input(format!(
                "map spec: {} components for target_dim {target_dim}",
                components.len()
            )));
        }
        for mono in components.iter().flatten() {
            if mono.exponents.len() != domain_dim {
                return Err(Error::input(format!(
                    "map spec: exponent vector of length {} for domain_dim {domain_dim}",
                    mono.exponents.len()
                )));
            }
            if !mono.coef.re.is_finite() || !mono.coef.im.is_finite() {
                return Err(Error::input("map spec: non-finite coefficient"));
            }
        }
        Ok(ProperMapSpec {
            domain_dim,
            target_dim,
            components,
        })
    }

    pub fn components(&self) -> &[Vec<Monomial>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .flatten()
            .map(|m| m.exponents.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .map(|m| m.coef.norm())
            .fold(0.0, f64::max)
    }

    /// `max | |f(v)| - 1 |` over [`boundary_samples`] with `32 m` points.
    pub fn properness_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for v in boundary_samples(self.domain_dim, 32 * self.domain_dim, 0x5eed) {
            let w = self.eval_scalars(&v)?;
            worst = worst.max((linalg::norm(&w) - 1.0).abs());
        }
        Ok(worst)
    }

    /// Degree and coefficient caps plus the properness certificate.
    pub fn validate(&self) -> Result<f64> {
        if self.degree() > MAX_DEGREE {
            return Err(Error::input(format!(
                "map spec: degree {} exceeds {MAX_DEGREE}",
                self.degree()
            )));
        }
        if self.max_coefficient() > MAX_COEF {
            return Err(Error::input(format!(
                "map spec: coefficient modulus {} exceeds {MAX_COEF}",
                self.max_coefficient()
            )));
        }
        let r = self.properness_residual()?;
        if r > PROPERNESS_TOL {
            return Err(Error::input(format!(
                "map spec is not proper: boundary residual {r:.3e} exceeds {PROPERNESS_TOL:.0e}"
            )));
        }
        Ok(r)
    }
}

/// A holomorphic map between balls, evaluable on plain numbers and on jets.
pub trait BallMap: Send + Sync {
    fn domain_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    fn eval_scalars<S: Scalar>(&self, z: &[S]) -> Result<Vec<S>>;

    fn eval(&self, z: &BallPoint) -> Result<BallPoint> {
        Ok(BallPoint::unchecked(self.eval_scalars(z.coords())?))
    }
}

impl BallMap for ProperMapSpec {
    fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    fn target_dim(&self) -> usize {
        self.target_dim
    }

    fn eval_scalars<S: Scalar>(&self, z: &[S]) -> Result<Vec<S>> {
        if z.len() != self.domain_dim {
            return Err(Error::input(format!(
                "map of domain_dim {} evaluated at a point of dimension {}",
                self.domain_dim,
                z.len()
            )));
        }
        let zero = z[0].lift(ZERO);
        let deg = self.degree() as usize;
        // powers[i][e] = z_i^e
        let powers: Vec<Vec<S>> = z
            .iter()
            .map(|zi| {
                let mut p = Vec::with_capacity(deg + 1);
                p.push(zi.lift(ONE));
                for e in 1..=deg {
                    let next = p[e - 1].clone() * zi.clone();
                    p.push(next);
                }
                p
            })
            .collect();
        Ok(self
            .components
            .iter()
            .map(|comp| {
                comp.iter().fold(zero.clone(), |acc, mono| {
                    let mut term: Option<S> = None;
                    for (i, &e) in mono.exponents.iter().enumerate() {
                        if e > 0 {
                            let f = powers[i][e as usize].clone();
                            term = Some(match term {
                                Some(t) => t * f,
                                None => f,
                            });
                        }
                    }
                    let term = match term {
                        Some(t) => t.scale(mono.coef),
                        None => zero.lift(mono.coef),
                    };
                    acc + term
                })
            })
            .collect())
    }
}

/// `post ∘ f ∘ pre` for a polynomial `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedMap {
    pub pre: Automorphism,
    pub spec: ProperMapSpec,
    pub post: Automorphism,
}

impl ComposedMap {
    pub fn new(spec: ProperMapSpec) -> Self {
        ComposedMap {
            pre: Automorphism::identity(spec.domain_dim),
            post: Automorphism::identity(spec.target_dim),
            spec,
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Automorphism) -> Result<ComposedMap> {
        if g.dim() != self.spec.target_dim {
            return Err(Error::input("post-composition has the wrong dimension"));
        }
        Ok(ComposedMap {
            pre: self.pre.clone(),
            spec: self.spec.clone(),
            post: g.compose(&self.post),
        })
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &Automorphism) -> Result<ComposedMap> {
        if g.dim() != self.spec.domain_dim {
            return Err(Error::input("pre-composition has the wrong dimension"));
        }
        Ok(ComposedMap {
            pre: self.pre.compose(g),
            spec: self.spec.clone(),
            post: self.post.clone(),
        })
    }
}

impl From<ProperMapSpec> for ComposedMap {
    fn from(spec: ProperMapSpec) -> Self {
        ComposedMap::new(spec)
    }
}

impl BallMap for ComposedMap {
    fn domain_dim(&self) -> usize {
        self.spec.domain_dim
    }

    fn target_dim(&self) -> usize {
        self.spec.target_dim
    }

    fn eval_scalars<S: Scalar>(&self, z: &[S]) -> Result<Vec<S>> {
        let a = self.pre.apply(z)?;
        let b = self.spec.eval_scalars(&a)?;
        self.post.apply(&b)
    }
}

/// Deterministic unit vectors: the axes, the pair combinations
/// `(e_k + e_l)/√2` and `(e_k + i e_l)/√2`, then seeded random directions.
pub fn boundary_samples(m: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(count);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..m {
        out.push(linalg::basis(m, k));
    }
    for k in 0..m {
        for l in k + 1..m {
            let mut a = vec![ZERO; m];
            a[k] = Complex64::new(s, 0.0);
            a[l] = Complex64::new(s, 0.0);
            let mut b = vec![ZERO; m];
            b[k] = Complex64::new(s, 0.0);
            b[l] = Complex64::new(0.0, s);
            out.push(a);
            out.push(b);
        }
    }
    out.truncate(count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        out.push(linalg::random_unit_vector(m, &mut rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn linear_embedding_appends_zeros() {
        let f = catalog::linear(2, 4).unwrap();
        let z = [Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.4)];
        let w = f.eval_scalars(&z).unwrap();
        assert_eq!(w, vec![z[0], z[1], ZERO, ZERO]);
    }

    #[test]
    fn whitney_on_the_diagonal() {
        let f = catalog::whitney(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let w = f.eval_scalars(&[c(s), c(s)]).unwrap();
        assert!((w[0] - c(s)).norm() < 1e-16);
        assert!((w[1] - c(0.5)).norm() < 1e-15);
        assert!((w[2] - c(0.5)).norm() < 1e-15);
        assert!((linalg::norm_sqr(&w) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn malformed_maps_are_rejected() {
        let mono = |e: Vec<u32>| Monomial {
            exponents: e,
            coef: ONE,
        };
        assert!(ProperMapSpec::new(2, 1, vec![vec![]]).is_err());
        assert!(ProperMapSpec::new(1, 2, vec![vec![mono(vec![1])]]).is_err());
        assert!(ProperMapSpec::new(1, 1, vec![vec![mono(vec![1, 0])]]).is_err());
        let not_proper = ProperMapSpec::new(1, 1, vec![vec![Monomial {
            exponents: vec![1],
            coef: c(0.5),
        }]])
        .unwrap();
        assert!(not_proper.validate().is_err());
        let too_high = ProperMapSpec::new(1, 1, vec![vec![mono(vec![9])]]).unwrap();
        assert!(too_high.validate().is_err());
    }

    #[test]
    fn spec_file_roundtrip_is_bit_exact() {
        let f = catalog::power(3, 3).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: ProperMapSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
        let weird = ProperMapSpec::new(1, 1, vec![vec![Monomial {
            exponents: vec![1],
            coef: Complex64::new(0.1 + 0.2, 1.0 / 3.0),
        }]])
        .unwrap();
        let back: ProperMapSpec = serde_json::from_str(&serde_json::to_string(&weird).unwrap()).unwrap();
        assert_eq!(weird, back);
    }

    #[test]
    fn spec_jets_match_hand_derivatives() {
        let f = catalog::whitney(2).unwrap();
        let z0 = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.2)];
        let j = f.eval_scalars(&Jet2::seed(&z0)).unwrap();
        // second component z1 z2
        assert_eq!(j[1].grad, vec![z0[1], z0[0]]);
        assert_eq!(j[1].hess_at(0, 1), ONE);
        // third component z2^2
        assert_eq!(j[2].hess_at(1, 1), c(2.0));
    }

    #[test]
    fn composed_map_orders_factors() {
        let f = ComposedMap::new(catalog::linear(1, 1).unwrap());
        let g = crate::group::cartan(0.5, 1);
        let h = f.then(&g).unwrap();
        let w = h.eval(&BallPoint::origin(1)).unwrap();
        assert!((w.coords()[0] - c(0.5f64.tanh())).norm() < 1e-15);
        let h = f.after(&g).unwrap();
        let w = h.eval(&BallPoint::origin(1)).unwrap();
        assert!((w.coords()[0] - c(0.5f64.tanh())).norm() < 1e-15);
    }

    #[test]
    fn boundary_samples_are_unit() {
        let s = boundary_samples(3, 96, 1);
        assert_eq!(s.len(), 96);
        assert!(s.iter().all(|v| (linalg::norm(v) - 1.0).abs() < 1e-15));
    }
}
