use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BallPoint, Tolerances};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::linalg::{self, CMatrix, ONE, ZERO};

/// An element of `PU(m,1)` stored as a phase-normalized `(m+1) x (m+1)` matrix.
///
/// The phase is fixed so that the entry of largest modulus in the last row
/// (the first one on ties) is real and positive. Construction does not
/// certify membership; use [`Automorphism::verify_membership`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRows", into = "MatrixRows")]
pub struct Automorphism {
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct MatrixRows {
    rows: Vec<Vec<Complex64>>,
}

impl TryFrom<MatrixRows> for Automorphism {
    type Error = Error;
    fn try_from(r: MatrixRows) -> Result<Self> {
        Automorphism::from_rows(&r.rows)
    }
}

impl From<Automorphism> for MatrixRows {
    fn from(g: Automorphism) -> Self {
        MatrixRows { rows: g.rows() }
    }
}

fn normalize_phase(mut m: CMatrix) -> CMatrix {
    let last = m.nrows() - 1;
    let mut best = 0;
    let mut best_abs = -1.0;
    for j in 0..m.ncols() {
        let a = m[(last, j)].norm();
        if a > best_abs {
            best_abs = a;
            best = j;
        }
    }
    let e = m[(last, best)];
    if e.im != 0.0 || e.re < 0.0 {
        let phase = (e / e.norm()).conj();
        m *= phase;
    }
    m
}

impl Automorphism {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n < 2 || matrix.ncols() != n {
            return Err(Error::input(format!(
                "automorphism matrix must be square of size >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::input("automorphism matrix has non-finite entries"));
        }
        if (0..n).all(|j| matrix[(n - 1, j)] == ZERO) {
            return Err(Error::input("automorphism matrix has a vanishing last row"));
        }
        Ok(Automorphism {
            matrix: normalize_phase(matrix),
        })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("automorphism rows must form a square matrix"));
        }
        Self::from_matrix(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(m: usize) -> Self {
        Automorphism {
            matrix: CMatrix::identity(m + 1, m + 1),
        }
    }

    /// The stabilizer element `diag(u, 1)` for a unitary `m x m` block.
    pub fn unitary_block(u: &CMatrix) -> Result<Self> {
        let m = u.nrows();
        if m == 0 || u.ncols() != m {
            return Err(Error::input("unitary block must be square and nonempty"));
        }
        let mut g = CMatrix::identity(m + 1, m + 1);
        g.view_mut((0, 0), (m, m)).copy_from(u);
        Self::from_matrix(g)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.matrix.nrows())
            .map(|i| self.matrix.row(i).iter().copied().collect())
            .collect()
    }

    /// Largest entry of `g* J g - J`.
    pub fn verify_membership(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut j = CMatrix::identity(n, n);
        j[(n - 1, n - 1)] = -ONE;
        let r = self.matrix.adjoint() * &j * &self.matrix - j;
        linalg::max_abs(&r)
    }

    pub fn is_member(&self, tol: &Tolerances) -> bool {
        self.verify_membership() <= tol.group
    }

    /// `self ∘ other`.
    ///
    /// # Panics
    /// If the dimensions differ.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.dim(), other.dim(), "compose: dimension mismatch");
        Automorphism {
            matrix: normalize_phase(&self.matrix * &other.matrix),
        }
    }

    /// `J g* J`, the inverse of a group element.
    pub fn inverse(&self) -> Automorphism {
        let n = self.matrix.nrows();
        let sign = |i: usize| if i == n - 1 { -1.0 } else { 1.0 };
        let m = CMatrix::from_fn(n, n, |i, j| self.matrix[(j, i)].conj() * (sign(i) * sign(j)));
        Automorphism {
            matrix: normalize_phase(m),
        }
    }

    /// Fractional-linear action on raw coordinates, generic over jets.
    pub fn apply<S: Scalar>(&self, z: &[S]) -> Result<Vec<S>> {
        let m = self.dim();
        if z.len() != m {
            return Err(Error::input(format!(
                "automorphism of dimension {m} applied to a point of dimension {}",
                z.len()
            )));
        }
        let g = &self.matrix;
        let row = |i: usize| -> S {
            let mut acc = z[0].scale(g[(i, 0)]);
            for j in 1..m {
                acc = acc + z[j].scale(g[(i, j)]);
            }
            acc.add_const(g[(i, m)])
        };
        let den = row(m);
        if den.value() == ZERO {
            return Err(Error::numeric("vanishing denominator in fractional-linear action"));
        }
        Ok((0..m).map(|i| row(i) / den.clone()).collect())
    }

    pub fn apply_ball(&self, z: &BallPoint) -> Result<BallPoint> {
        let w = self.apply(z.coords())?;
        BallPoint::new(w).map_err(|_| {
            Error::numeric("image leaves the closed ball; the matrix is not a group element")
        })
    }

    /// `g(0) = b / d`.
    pub fn origin_image(&self) -> Vec<Complex64> {
        let m = self.dim();
        let d = self.matrix[(m, m)];
        (0..m).map(|i| self.matrix[(i, m)] / d).collect()
    }

    /// Largest entry of the difference of the normalized matrices.
    pub fn distance_to(&self, other: &Automorphism) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        linalg::max_abs(&(&self.matrix - &other.matrix))
    }

    /// Acts as `self` on the first `m` coordinates of `B^big_m` and as the
    /// identity on the remaining ones.
    pub fn block_extend(&self, big_m: usize) -> Result<Automorphism> {
        let m = self.dim();
        if big_m < m {
            return Err(Error::input(format!(
                "block_extend: target dimension {big_m} is below {m}"
            )));
        }
        let mut g = CMatrix::identity(big_m + 1, big_m + 1);
        for i in 0..=m {
            for j in 0..=m {
                let bi = if i == m { big_m } else { i };
                let bj = if j == m { big_m } else { j };
                g[(bi, bj)] = self.matrix[(i, j)];
            }
        }
        Automorphism::from_matrix(g)
    }
}

/// The Cartan element `a_t`, with `a_t(0) = (tanh t, 0, ..., 0)`.
pub fn cartan(t: f64, m: usize) -> Automorphism {
    assert!(m >= 1, "cartan: dimension must be positive");
    let mut g = CMatrix::identity(m + 1, m + 1);
    let (c, s) = (t.cosh(), t.sinh());
    g[(0, 0)] = Complex64::new(c, 0.0);
    g[(0, m)] = Complex64::new(s, 0.0);
    g[(m, 0)] = Complex64::new(s, 0.0);
    g[(m, m)] = Complex64::new(c, 0.0);
    Automorphism { matrix: g }
}

/// A unitary rotation `k` with `k(e_1) = v`.
///
/// The columns of the unitary block are `v` followed by the Gram–Schmidt
/// completion over `e_1, ..., e_m`.
pub fn rotation_mapping_e1(v: &[Complex64]) -> Result<Automorphism> {
    if v.is_empty() {
        return Err(Error::input("rotation_mapping_e1: empty vector"));
    }
    let n = linalg::norm(v);
    if !n.is_finite() || (n - 1.0).abs() > Tolerances::default().closure {
        return Err(Error::input(format!(
            "rotation_mapping_e1: |v| = {n} is not 1"
        )));
    }
    let m = v.len();
    let v = if n == 1.0 {
        v.to_vec()
    } else {
        linalg::scale(v, 1.0 / n)
    };
    let u = linalg::complete_orthonormal(&[v], m)?;
    Automorphism::unitary_block(&u)
}

/// An automorphism `g` with `g(p) = 0`, namely `(k a_t)^{-1}` where
/// `t = artanh |p|` and `k(e_1) = p / |p|`.
pub fn transport_to_origin(p: &BallPoint) -> Result<Automorphism> {
    if !p.is_interior() {
        return Err(Error::input("transport_to_origin: point is not interior"));
    }
    let m = p.dim();
    let (direction, gap) = match p.polar_parts() {
        Some((d, g)) if g < 1.0 => (d.to_vec(), g),
        _ => {
            let r = p.norm();
            if r == 0.0 {
                return Ok(Automorphism::identity(m));
            }
            (linalg::scale(p.coords(), 1.0 / r), 1.0 - r)
        }
    };
    // artanh(1 - g) = ½ ln((2 - g) / g)
    let t = 0.5 * ((2.0 - gap) / gap).ln();
    let k = rotation_mapping_e1(&direction)?;
    Ok(cartan(-t, m).compose(&k.inverse()))
}

/// `g = rotation ∘ a_t ∘ stabilizer` with both outer factors in `U(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanDecomposition {
    pub rotation: Automorphism,
    pub t: f64,
    pub stabilizer: Automorphism,
}

/// Splits a group element as `k a_t u` with `k(e_1) = g(0)/|g(0)|`.
///
/// `t = asinh |b|` is read off the last column and `u` is recovered row by
/// row from `k^{-1} g` (then re-orthonormalized), which avoids subtracting
/// the `cosh t`-sized entries of `a_t` from `g`.
pub fn cartan_decomposition(g: &Automorphism) -> Result<CartanDecomposition> {
    let m = g.dim();
    let mat = g.matrix();
    let d = mat[(m, m)];
    let b: Vec<Complex64> = (0..m).map(|i| mat[(i, m)]).collect();
    let nb = linalg::norm(&b);
    if d.norm() <= nb {
        return Err(Error::input(
            "cartan_decomposition: g(0) is not an interior point",
        ));
    }
    if nb == 0.0 {
        return Ok(CartanDecomposition {
            rotation: Automorphism::identity(m),
            t: 0.0,
            stabilizer: g.clone(),
        });
    }
    let t = nb.asinh();
    let k = rotation_mapping_e1(&linalg::scale(&b, 1.0 / nb))?;
    let p = k.inverse().matrix() * mat;
    let corner = p[(m, m)];
    let cosh = t.cosh();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    rows.push((0..m).map(|j| p[(0, j)] / corner).collect());
    for i in 1..m {
        rows.push((0..m).map(|j| p[(i, j)] * cosh / corner).collect());
    }
    let v = orthonormalize_rows(rows)?;
    Ok(CartanDecomposition {
        rotation: k,
        t,
        stabilizer: Automorphism::unitary_block(&v)?,
    })
}

fn orthonormalize_rows(mut rows: Vec<Vec<Complex64>>) -> Result<CMatrix> {
    let m = rows.len();
    for i in 0..m {
        for _ in 0..2 {
            for j in 0..i {
                let p = linalg::inner(&rows[i], &rows[j]);
                let q = rows[j].clone();
                for (a, b) in rows[i].iter_mut().zip(&q) {
                    *a -= p * b;
                }
            }
        }
        let n = linalg::norm(&rows[i]);
        if n < linalg::GS_THRESHOLD {
            return Err(Error::numeric("cartan_decomposition: degenerate stabilizer"));
        }
        rows[i] = linalg::scale(&rows[i], 1.0 / n);
    }
    Ok(CMatrix::from_fn(m, m, |i, j| rows[i][j]))
}

/// `a_{-t} ∘ w ∘ a_t`, evaluated in the light-cone basis
/// `p = x_1 + x_{m+1}`, `q = x_1 - x_{m+1}` where `a_t` is diagonal.
///
/// Elements that commute with `a_t` come back unchanged up to rounding of
/// the basis change, which is exact for the entries involved.
pub fn conjugate_by_cartan(w: &Automorphism, t: f64) -> Automorphism {
    let n = w.dim() + 1;
    let last = n - 1;
    let src = w.matrix();
    // rows: (p, x_2, ..., x_m, q)
    let mut tw = src.clone();
    for j in 0..n {
        let a = src[(0, j)];
        let b = src[(last, j)];
        tw[(0, j)] = a + b;
        tw[(last, j)] = a - b;
    }
    // columns: x_1 = (p + q)/2, x_{m+1} = (p - q)/2
    let mut lc = tw.clone();
    for i in 0..n {
        let a = tw[(i, 0)];
        let b = tw[(i, last)];
        lc[(i, 0)] = (a + b) * 0.5;
        lc[(i, last)] = (a - b) * 0.5;
    }
    let scale = |k: usize| -> f64 {
        if k == 0 {
            t
        } else if k == last {
            -t
        } else {
            0.0
        }
    };
    for i in 0..n {
        for j in 0..n {
            let e = scale(j) - scale(i);
            if e != 0.0 {
                lc[(i, j)] *= e.exp();
            }
        }
    }
    let mut back = lc.clone();
    for i in 0..n {
        let p = lc[(i, 0)];
        let q = lc[(i, last)];
        back[(i, 0)] = p + q;
        back[(i, last)] = p - q;
    }
    let mut out = back.clone();
    for j in 0..n {
        let p = back[(0, j)];
        let q = back[(last, j)];
        out[(0, j)] = (p + q) * 0.5;
        out[(last, j)] = (p - q) * 0.5;
    }
    Automorphism {
        matrix: normalize_phase(out),
    }
}
