use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BallMap;
use crate::error::{Error, Result};
use crate::group::Automorphism;
use crate::linalg;

/// Residual below which `(φ, ψ)` is accepted as a symmetry of `f`.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// A candidate pair with `ψ ∘ f = f ∘ φ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryPair {
    pub phi: Automorphism,
    pub psi: Automorphism,
    /// `max |ψ(f(z)) - f(φ(z))|` over the sample.
    pub residual: f64,
}

impl SymmetryPair {
    pub fn is_member(&self) -> bool {
        self.residual <= SYMMETRY_TOL
    }
}

/// Evaluates `|ψ(f(z)) - f(φ(z))|` on `sample_count` seeded points of the
/// ball of radius 0.95.
pub fn verify_symmetry_pair<F: BallMap>(
    f: &F,
    phi: &Automorphism,
    psi: &Automorphism,
    sample_count: usize,
    seed: u64,
) -> Result<SymmetryPair> {
    if phi.dim() != f.domain_dim() || psi.dim() != f.target_dim() {
        return Err(Error::input(format!(
            "symmetry pair of dimensions ({}, {}) for a map C^{} -> C^{}",
            phi.dim(),
            psi.dim(),
            f.domain_dim(),
            f.target_dim()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..sample_count)
        .map(|_| linalg::random_ball_coords(f.domain_dim(), 0.95, &mut rng))
        .collect();
    let residual = samples
        .par_iter()
        .map(|z| -> Result<f64> {
            let lhs = psi.apply(&f.eval_scalars(z)?)?;
            let rhs = f.eval_scalars(&phi.apply(z)?)?;
            Ok(linalg::dist(&lhs, &rhs))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    Ok(SymmetryPair {
        phi: phi.clone(),
        psi: psi.clone(),
        residual,
    })
}

/// `[[A, b], [c^T, d]]` placed so that it acts on the first `m` coordinates
/// of `B^M` and fixes the rest.
pub fn block_extend(phi: &Automorphism, big_m: usize) -> Result<Automorphism> {
    phi.block_extend(big_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cartan;
    use crate::linalg::{random_unitary, CMatrix, ONE, ZERO};
    use crate::maps::catalog;
    use num_complex::Complex64;
    use rand::Rng;

    #[test]
    fn linear_embedding_commutes_with_extensions() {
        let f = catalog("linear", &[2, 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..5 {
            let k = Automorphism::unitary_block(&random_unitary(2, &mut rng)).unwrap();
            let phi = k.compose(&cartan(rng.random_range(-2.0..2.0), 2));
            let psi = block_extend(&phi, 4).unwrap();
            let pair = verify_symmetry_pair(&f, &phi, &psi, 64, 1).unwrap();
            assert!(pair.residual <= 1e-12, "{}", pair.residual);
            assert!(pair.is_member());
        }
    }

    #[test]
    fn whitney_rotations() {
        let f = catalog("whitney", &[]).unwrap();
        let theta = 0.7;
        let e = Complex64::from_polar(1.0, theta);
        let phi = Automorphism::unitary_block(&CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, e])).unwrap();
        let psi = Automorphism::unitary_block(&CMatrix::from_row_slice(
            3,
            3,
            &[ONE, ZERO, ZERO, ZERO, e, ZERO, ZERO, ZERO, e * e],
        ))
        .unwrap();
        let pair = verify_symmetry_pair(&f, &phi, &psi, 64, 2).unwrap();
        assert!(pair.residual <= 1e-12);
    }

    #[test]
    fn whitney_rejects_cartan() {
        let f = catalog("whitney", &[]).unwrap();
        let pair = verify_symmetry_pair(&f, &cartan(1.0, 2), &Automorphism::identity(3), 64, 3).unwrap();
        assert!(pair.residual > 0.1);
        assert!(!pair.is_member());
    }

    #[test]
    fn dimension_mismatch() {
        let f = catalog("whitney", &[]).unwrap();
        assert!(verify_symmetry_pair(&f, &cartan(1.0, 2), &cartan(1.0, 2), 4, 0).is_err());
    }
}
