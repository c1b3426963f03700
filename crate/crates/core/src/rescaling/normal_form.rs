use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CoefficientClass;
use crate::error::{Error, Result};
use crate::group::{cartan_siegel_scalars, siegel_action, Automorphism};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::maps::{boundary_samples, sample_siegel_points, JetExpansion, SiegelMap};

/// Default tolerance for the vanishing pattern of a limit jet.
pub const TOL_PATTERN: f64 = 1e-6;
/// Allowed `|Im λ| / |λ|` for the leading coefficient.
const LAMBDA_PHASE_TOL: f64 = 1e-6;
/// Boundary-identity residual required before flattening.
const BOUNDARY_TOL: f64 = 1e-8;
const THETA_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormResiduals {
    /// Largest coefficient that must vanish.
    pub vanishing_pattern: f64,
    /// `max |U*U - λ I|`
    pub unitarity: f64,
    /// `max |L_{kl}|`
    pub l_norm: f64,
    pub final_flatten: Option<f64>,
}

/// `g(w) = (λ w_1 + Σ L_{kl} w_k w_l, U w') + ...` near the Siegel origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticNormalForm {
    pub lambda: f64,
    /// Argument of the leading coefficient that was discarded.
    pub lambda_phase: f64,
    /// Rows of the `(M-1) x (m-1)` block `∂g_j/∂z_k`, `j, k ≥ 2`.
    pub u: Vec<Vec<Complex64>>,
    /// Rows of the symmetric `(m-1) x (m-1)` block `½ ∂²g_1/∂z_k∂z_l`, `k, l ≥ 2`.
    pub l: Vec<Vec<Complex64>>,
    /// Rows of the unitary completion of `U / √λ`, once computed.
    pub u_prime: Option<Vec<Vec<Complex64>>>,
    pub residuals: NormalFormResiduals,
}

fn to_matrix(rows: &[Vec<Complex64>], nrows: usize, ncols: usize) -> CMatrix {
    CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

fn to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl QuadraticNormalForm {
    pub fn domain_dim(&self) -> usize {
        self.l.len() + 1
    }

    pub fn target_dim(&self) -> usize {
        self.u.len() + 1
    }

    pub fn u_matrix(&self) -> CMatrix {
        to_matrix(&self.u, self.target_dim() - 1, self.domain_dim() - 1)
    }

    pub fn l_matrix(&self) -> CMatrix {
        let n = self.domain_dim() - 1;
        to_matrix(&self.l, n, n)
    }

    pub fn u_prime_matrix(&self) -> Option<CMatrix> {
        let n = self.target_dim() - 1;
        self.u_prime.as_ref().map(|r| to_matrix(r, n, n))
    }
}

/// Checks the vanishing pattern of a limit jet at the Siegel origin and
/// reads off `λ`, `U` and `L`.
pub fn quadratic_normal_form(jet: &JetExpansion, tol_pattern: f64) -> Result<QuadraticNormalForm> {
    if jet.base.coords().iter().any(|c| *c != ZERO) {
        return Err(Error::input("quadratic_normal_form needs a jet at the origin"));
    }
    let (m, big_m) = (jet.domain_dim(), jet.target_dim());
    let mut worst: Vec<(CoefficientClass, f64)> = Vec::new();
    let mut note = |class: CoefficientClass, c: Complex64| {
        match worst.iter_mut().find(|(k, _)| *k == class) {
            Some((_, v)) => *v = v.max(c.norm()),
            None => worst.push((class, c.norm())),
        }
    };
    for j in 0..big_m {
        note(CoefficientClass::Value, jet.value[j]);
        for k in 0..m {
            match (j, k) {
                (0, 0) => {}
                (0, _) => note(CoefficientClass::FirstTangential, jet.first[j][k]),
                (_, 0) => note(CoefficientClass::FirstNormal, jet.first[j][k]),
                _ => {}
            }
            for l in 0..m {
                if j > 0 {
                    note(CoefficientClass::SecondNormal, jet.second[j][k][l]);
                } else if k == 0 || l == 0 {
                    note(CoefficientClass::SecondMixed, jet.second[j][k][l]);
                }
            }
        }
    }
    let vanishing_pattern = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    if let Some(&(class, magnitude)) = worst
        .iter()
        .filter(|w| !(w.1 <= tol_pattern))
        .max_by(|a, b| a.1.total_cmp(&b.1))
    {
        return Err(Error::Pattern {
            class,
            magnitude,
            tolerance: tol_pattern,
        });
    }
    let lam = jet.first[0][0];
    let phase = lam.arg();
    if !(lam.re > 0.0 && lam.im.abs() <= LAMBDA_PHASE_TOL * lam.norm()) {
        return Err(Error::Pattern {
            class: CoefficientClass::Lambda,
            magnitude: phase.abs(),
            tolerance: LAMBDA_PHASE_TOL,
        });
    }
    let lambda = lam.re;
    let u: Vec<Vec<Complex64>> = (1..big_m).map(|j| (1..m).map(|k| jet.first[j][k]).collect()).collect();
    let l: Vec<Vec<Complex64>> = (1..m)
        .map(|k| (1..m).map(|q| jet.second[0][k][q] * 0.5).collect())
        .collect();
    let mut nf = QuadraticNormalForm {
        lambda,
        lambda_phase: phase,
        u,
        l,
        u_prime: None,
        residuals: NormalFormResiduals {
            vanishing_pattern,
            unitarity: 0.0,
            l_norm: 0.0,
            final_flatten: None,
        },
    };
    let um = nf.u_matrix();
    let gram = um.adjoint() * &um - CMatrix::identity(m - 1, m - 1) * Complex64::new(lambda, 0.0);
    nf.residuals.unitarity = linalg::max_abs(&gram);
    nf.residuals.l_norm = linalg::max_abs(&nf.l_matrix());
    Ok(nf)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResiduals {
    /// `max |Im(e^{2iθ} wᵀ L w)|`
    pub quadratic: f64,
    /// `max | |Uw|^2 - λ |w|^2 |`
    pub isometry: f64,
    pub samples: usize,
}

/// Evaluates both halves of the boundary identity on unit vectors `w`
/// (axes, pair combinations, then seeded random directions) and a grid of
/// sixteen angles `θ ∈ [0, π)`.
pub fn verify_boundary_identity(nf: &QuadraticNormalForm, samples: usize, seed: u64) -> BoundaryResiduals {
    let n = nf.domain_dim() - 1;
    let mut out = BoundaryResiduals {
        quadratic: 0.0,
        isometry: 0.0,
        samples: 0,
    };
    if n == 0 {
        return out;
    }
    let (u, l) = (nf.u_matrix(), nf.l_matrix());
    for w in boundary_samples(n, samples, seed) {
        let wv = nalgebra::DVector::from_column_slice(&w);
        let q = (wv.transpose() * &l * &wv)[(0, 0)];
        for s in 0..THETA_STEPS {
            let theta = PI * s as f64 / THETA_STEPS as f64;
            let rot = Complex64::from_polar(1.0, 2.0 * theta);
            out.quadratic = out.quadratic.max((rot * q).im.abs());
        }
        let uw = &u * &wv;
        out.isometry = out.isometry.max((uw.norm_squared() - nf.lambda * wv.norm_squared()).abs());
        out.samples += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalNormalization {
    /// `diag(1, U'^{-1})` as an automorphism of `B^M`.
    pub a: Automorphism,
    pub u_prime: Vec<Vec<Complex64>>,
    /// `max |U'[:, ..m-1] - U/√λ|`
    pub completion_residual: f64,
    /// `max |(A ∘ a_{log λ} ∘ g)(w) - (w, 0)|` over the samples.
    pub flatten_residual: f64,
    pub samples: usize,
}

/// Completes `U/√λ` to a unitary `U'`, forms `A = diag(1, U'^{-1})` and
/// measures how far `A ∘ a_{log λ} ∘ g` is from `w ↦ (w, 0)` at seeded
/// Siegel points. The Cartan factor is the Siegel flow
/// `w ↦ (w_1/λ, w'/√λ)`.
pub fn final_normalization(
    nf: &QuadraticNormalForm,
    boundary: &BoundaryResiduals,
    g: &dyn SiegelMap,
    samples: usize,
    seed: u64,
) -> Result<FinalNormalization> {
    if !(boundary.quadratic <= BOUNDARY_TOL && boundary.isometry <= BOUNDARY_TOL) {
        return Err(Error::numeric(format!(
            "boundary identity residuals ({:.3e}, {:.3e}) exceed {BOUNDARY_TOL:.0e}",
            boundary.quadratic, boundary.isometry
        )));
    }
    let (m, big_m) = (nf.domain_dim(), nf.target_dim());
    if g.domain_dim() != m || g.target_dim() != big_m {
        return Err(Error::input("final_normalization: map and normal form dimensions differ"));
    }
    let c = nf.u_matrix() / Complex64::new(nf.lambda.sqrt(), 0.0);
    let gram = c.adjoint() * &c - CMatrix::identity(m - 1, m - 1);
    if !(linalg::max_abs(&gram) <= BOUNDARY_TOL) {
        return Err(Error::numeric(format!(
            "U/√λ is not an isometry ({:.3e}); the completion is degenerate",
            linalg::max_abs(&gram)
        )));
    }
    let mut seeds: Vec<Vec<Complex64>> = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let mut v: Vec<Complex64> = c.column(k).iter().copied().collect();
        for _ in 0..2 {
            for q in &seeds {
                let p = linalg::inner(&v, q);
                for (a, b) in v.iter_mut().zip(q) {
                    *a -= p * b;
                }
            }
        }
        let nv = linalg::norm(&v);
        if nv < linalg::GS_THRESHOLD {
            return Err(Error::numeric("U/√λ has dependent columns"));
        }
        seeds.push(linalg::scale(&v, 1.0 / nv));
    }
    let u_prime = linalg::complete_orthonormal(&seeds, big_m - 1)?;
    let mut completion_residual: f64 = 0.0;
    for k in 0..m - 1 {
        for i in 0..big_m - 1 {
            completion_residual = completion_residual.max((u_prime[(i, k)] - c[(i, k)]).norm());
        }
    }
    let mut block = CMatrix::identity(big_m, big_m);
    for i in 1..big_m {
        for j in 1..big_m {
            block[(i, j)] = u_prime[(j - 1, i - 1)].conj();
        }
    }
    block[(0, 0)] = ONE;
    let a = Automorphism::unitary_block(&block)?;
    let log_lambda = nf.lambda.ln();
    let mut flatten_residual: f64 = 0.0;
    let points = sample_siegel_points(m, samples, seed);
    for w in &points {
        let y = cartan_siegel_scalars(log_lambda, &g.eval(w)?);
        let y = siegel_action(&a, &y)?;
        let mut target = w.clone();
        target.resize(big_m, ZERO);
        flatten_residual = flatten_residual.max(linalg::dist(&y, &target));
    }
    Ok(FinalNormalization {
        a,
        u_prime: to_rows(&u_prime),
        completion_residual,
        flatten_residual,
        samples: points.len(),
    })
}
