use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dd::DdComplex;
use crate::error::{Error, Result};
use crate::group::{
    cartan, cartan_decomposition, conjugate_by_cartan, rotation_mapping_e1, transport_to_origin,
    Automorphism, BallPoint,
};
use crate::jet::Jet2;
use crate::linalg;
use crate::maps::{
    jet_at_zero, sample_siegel_points, siegel_conjugate, verify_symmetry_pair, BallMap,
    CartanRescaled, ComposedMap, JetExpansion, SiegelConjugate, SiegelMap, SYMMETRY_TOL,
};
use crate::metric::{dist_from_origin, RadialBoundConstants};

/// Largest Cartan time accepted for a sequence element; beyond it the gap
/// `1 - tanh t` is below a few ulps of 1.
pub const T_CAP: f64 = 18.0;

const SYMMETRY_SEED: u64 = 0x5157;
const F0_TOL: f64 = 1e-12;

/// `(φ_n, ψ_n)` with `ψ_n ∘ f = f ∘ φ_n` (to be certified).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePair {
    pub n: u32,
    pub phi: Automorphism,
    pub psi: Automorphism,
}

/// `φ_n = a_n` on `B^m` and `ψ_n = a_n` block-extended to `B^M`.
pub fn cartan_sequence(m: usize, big_m: usize, n_start: u32, n_end: u32) -> Result<Vec<SequencePair>> {
    if m == 0 || big_m < m {
        return Err(Error::input(format!("cartan sequence for C^{m} -> C^{big_m}")));
    }
    if n_start > n_end {
        return Err(Error::input(format!("empty index range {n_start}..={n_end}")));
    }
    (n_start..=n_end)
        .map(|n| {
            let phi = cartan(f64::from(n), m);
            let psi = phi.block_extend(big_m)?;
            Ok(SequencePair { n, phi, psi })
        })
        .collect()
}

/// `1 - |g(0)|`, computed as `1 / (|d| (|d| + |b|))` for group elements so
/// that it keeps full relative precision near the boundary.
///
/// Membership is judged relative to the squared size of the entries, since
/// `g* J g - J` carries rounding of order `eps |d|^2`.
pub fn escape_gap(g: &Automorphism) -> f64 {
    let m = g.dim();
    let mat = g.matrix();
    let d = mat[(m, m)].norm();
    let b = (0..m).map(|i| mat[(i, m)].norm_sqr()).sum::<f64>().sqrt();
    let size = linalg::max_abs(mat).max(1.0);
    if g.verify_membership() <= 1e-12 * size * size {
        1.0 / (d * (d + b))
    } else {
        1.0 - b / d
    }
}

fn time_from_gap(gap: f64) -> f64 {
    0.5 * ((2.0 - gap) / gap).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub indices: Vec<u32>,
    pub phi_gaps: Vec<f64>,
    pub psi_gaps: Vec<f64>,
    /// Both gap sequences strictly decrease over at least two indices.
    pub escaping: bool,
}

fn escape_report(pairs: &[SequencePair]) -> Result<EscapeReport> {
    let phi_gaps: Vec<f64> = pairs.iter().map(|p| escape_gap(&p.phi)).collect();
    let psi_gaps: Vec<f64> = pairs.iter().map(|p| escape_gap(&p.psi)).collect();
    for (p, &g) in pairs.iter().zip(&phi_gaps) {
        if g > 0.0 && time_from_gap(g) > T_CAP {
            return Err(Error::input(format!(
                "sequence element n = {} has t = {:.3} beyond the cap {T_CAP}",
                p.n,
                time_from_gap(g)
            )));
        }
    }
    let decreasing = |g: &[f64]| g.windows(2).all(|w| w[1] < w[0]) && g.iter().all(|&x| x > 0.0);
    Ok(EscapeReport {
        indices: pairs.iter().map(|p| p.n).collect(),
        escaping: pairs.len() >= 2 && decreasing(&phi_gaps) && decreasing(&psi_gaps),
        phi_gaps,
        psi_gaps,
    })
}

/// Checks that `|φ_n(0)|` and `|ψ_n(0)|` increase towards 1; a sequence that
/// does not escape is reported as a diagnostic.
pub fn escape_check(pairs: &[SequencePair]) -> Result<EscapeReport> {
    let r = escape_report(pairs)?;
    if !r.escaping {
        return Err(Error::Diagnostic(format!(
            "sequence does not escape to the boundary: gaps 1-|φ_n(0)| = {:?}, 1-|ψ_n(0)| = {:?}",
            r.phi_gaps, r.psi_gaps
        )));
    }
    Ok(r)
}

/// `f` normalized to fix the origin, with the limit directions rotated to
/// `e_1` and `e_1'`, and the sequence conjugated accordingly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedMap {
    pub map: ComposedMap,
    pub pairs: Vec<SequencePair>,
    pub transport: Automorphism,
    pub pre_rotation: Automorphism,
    pub post_rotation: Automorphism,
    /// Symmetry residual of each normalized pair.
    pub residuals: Vec<f64>,
}

/// Symmetry residual of every pair.
pub(crate) fn certify_pairs<F: BallMap>(f: &F, pairs: &[SequencePair], samples: usize) -> Result<Vec<f64>> {
    pairs
        .par_iter()
        .map(|p| Ok(verify_symmetry_pair(f, &p.phi, &p.psi, samples, SYMMETRY_SEED)?.residual))
        .collect()
}

fn check_members(res: &[f64], pairs: &[SequencePair], what: &str) -> Result<()> {
    if let Some((i, &r)) = res
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .filter(|(_, &r)| !(r <= SYMMETRY_TOL))
    {
        return Err(Error::input(format!(
            "{what}: pair n = {} is not a symmetry of f (residual {r:.6e})",
            pairs[i].n
        )));
    }
    Ok(())
}

fn direction_rotation(p: &[Complex64]) -> Result<Automorphism> {
    let r = linalg::norm(p);
    if r == 0.0 {
        return Ok(Automorphism::identity(p.len()));
    }
    rotation_mapping_e1(&linalg::scale(p, 1.0 / r))
}

/// Moves `f(0)` to the origin and rotates the last sequence element's
/// directions to `e_1` and `e_1'`.
pub fn normalize_map(f: &ComposedMap, pairs: &[SequencePair]) -> Result<NormalizedMap> {
    normalize_map_with(f, pairs, 64)
}

pub(crate) fn normalize_map_with(
    f: &ComposedMap,
    pairs: &[SequencePair],
    samples: usize,
) -> Result<NormalizedMap> {
    let last = pairs.last().ok_or_else(|| Error::input("empty sequence"))?;
    check_members(&certify_pairs(f, pairs, samples)?, pairs, "normalize_map")?;
    let m = f.domain_dim();
    let f0 = f.eval(&BallPoint::origin(m))?;
    let transport = transport_to_origin(&f0)?;
    let t_inv = transport.inverse();
    let psi_last = transport.compose(&last.psi).compose(&t_inv);
    let pre_rotation = direction_rotation(&last.phi.origin_image())?;
    let post_rotation = direction_rotation(&psi_last.origin_image())?;
    let (rp_inv, rq_inv) = (pre_rotation.inverse(), post_rotation.inverse());
    let map = f.then(&transport)?.then(&rq_inv)?.after(&pre_rotation)?;
    let pairs: Vec<SequencePair> = pairs
        .iter()
        .map(|p| SequencePair {
            n: p.n,
            phi: rp_inv.compose(&p.phi).compose(&pre_rotation),
            psi: rq_inv
                .compose(&transport)
                .compose(&p.psi)
                .compose(&t_inv)
                .compose(&post_rotation),
        })
        .collect();
    let res = certify_pairs(&map, &pairs, samples)?;
    check_members(&res, &pairs, "normalize_map (after normalization)")?;
    Ok(NormalizedMap {
        map,
        pairs,
        transport,
        pre_rotation,
        post_rotation,
        residuals: res,
    })
}

/// How the jet of `g_n` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GRoute {
    /// `β_n ∘ f ∘ α_n^{-1}`, valid for certified symmetry pairs.
    Definitional,
    /// `a_{-t_n} ∘ h_n ∘ a_{t_n}`.
    Conjugation,
}

/// `g_n` as a Siegel map.
#[derive(Debug, Clone)]
pub enum GMap {
    Definitional(SiegelConjugate<ComposedMap>),
    Conjugation(CartanRescaled<SiegelConjugate<ComposedMap>>),
}

macro_rules! delegate {
    ($self:ident, $g:ident => $e:expr) => {
        match $self {
            GMap::Definitional($g) => $e,
            GMap::Conjugation($g) => $e,
        }
    };
}

impl SiegelMap for GMap {
    fn domain_dim(&self) -> usize {
        delegate!(self, g => g.domain_dim())
    }
    fn target_dim(&self) -> usize {
        delegate!(self, g => g.target_dim())
    }
    fn eval(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        delegate!(self, g => g.eval(w))
    }
    fn eval_jet(&self, w: &[Jet2]) -> Result<Vec<Jet2>> {
        delegate!(self, g => g.eval_jet(w))
    }
    fn eval_dd(&self, w: &[DdComplex]) -> Result<Vec<DdComplex>> {
        delegate!(self, g => g.eval_dd(w))
    }
    fn fd_steps(&self) -> Vec<f64> {
        delegate!(self, g => g.fd_steps())
    }
    fn coefficient_floor(&self, j: usize, k: usize, l: Option<usize>) -> f64 {
        delegate!(self, g => g.coefficient_floor(j, k, l))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub n: u32,
    /// `artanh |φ_n(0)|`
    pub t: f64,
    /// Time of the Siegel-model Cartan flow conjugating `h_n` to `g_n`.
    pub siegel_time: f64,
    pub k: Automorphism,
    pub ell: Automorphism,
    pub alpha: Automorphism,
    pub beta: Automorphism,
    pub jet_h: JetExpansion,
    pub jet_g: JetExpansion,
    pub route: GRoute,
    pub symmetry_residual: f64,
    /// Largest difference between `β_n f α_n^{-1}` and `a_{-t} h_n a_t` at
    /// sample points (certified pairs only).
    pub conjugation_residual: Option<f64>,
    /// `dist(a_{-t_n} ℓ_n^{-1} ψ_n(0), 0)`
    pub compactness_distance: f64,
    pub phi_gap: f64,
    pub psi_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactnessCheck {
    pub constants: RadialBoundConstants,
    pub bound: f64,
    pub max_distance: f64,
    /// The sampled distances exceed the bound; with an empirical `D` this is
    /// a flag rather than a failure.
    pub exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescalingTrace {
    /// The normalized map the trace was built from.
    pub map: ComposedMap,
    pub entries: Vec<TraceEntry>,
    pub escape: EscapeReport,
    pub compactness: Option<CompactnessCheck>,
}

impl RescalingTrace {
    pub fn domain_dim(&self) -> usize {
        self.map.domain_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.map.target_dim()
    }

    /// `h_n = ℓ_n^{-1} ∘ f ∘ k_n`.
    pub fn h_map(&self, i: usize) -> Result<ComposedMap> {
        let e = &self.entries[i];
        self.map.after(&e.k)?.then(&e.ell.inverse())
    }

    /// `g_n` along the route recorded for the entry.
    pub fn g_map(&self, i: usize) -> Result<GMap> {
        let e = &self.entries[i];
        g_map(&self.map, e.route, &e.alpha, &e.beta, || self.h_map(i), e.siegel_time)
    }

    /// Attaches the bound `2D + β + dist(0, f(0))` and flags entries beyond it.
    pub fn with_compactness(mut self, constants: RadialBoundConstants) -> Self {
        let bound = constants.radial_bound();
        let max_distance = self
            .entries
            .iter()
            .map(|e| e.compactness_distance)
            .fold(0.0, f64::max);
        self.compactness = Some(CompactnessCheck {
            constants,
            bound,
            max_distance,
            exceeded: max_distance > bound,
        });
        self
    }
}

fn g_map(
    f: &ComposedMap,
    route: GRoute,
    alpha: &Automorphism,
    beta: &Automorphism,
    h: impl FnOnce() -> Result<ComposedMap>,
    tau: f64,
) -> Result<GMap> {
    Ok(match route {
        GRoute::Definitional => GMap::Definitional(siegel_conjugate(f.after(&alpha.inverse())?.then(beta)?)),
        GRoute::Conjugation => GMap::Conjugation(CartanRescaled {
            inner: siegel_conjugate(h()?),
            tau,
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub symmetry_samples: usize,
    pub conjugation_samples: usize,
    pub seed: u64,
    /// Build the trace even if the sequence does not escape.
    pub allow_non_escaping: bool,
    /// Allowed `| |f(v)| - 1 |` for the boundary value along the direction.
    pub boundary_tol: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            symmetry_samples: 64,
            conjugation_samples: 20,
            seed: 0,
            allow_non_escaping: false,
            boundary_tol: 1e-9,
        }
    }
}

/// Builds `t_n, k_n, ℓ_n, α_n, β_n` and the Siegel jets of `h_n` and `g_n`
/// for every pair, in index order.
///
/// `α_n = a_{-t} k_n^{-1} φ_n` is the stabilizer factor of the Cartan
/// decomposition of `φ_n`, and `β_n = a_{-t} ℓ_n^{-1} ψ_n` is assembled from
/// the decomposition `ℓ_n^{-1} ψ_n = r a_s u` as `(a_{-t} r a_t) a_{s-t} u`,
/// so neither is formed by cancelling `cosh t`-sized entries.
pub fn build_sequence(f: &ComposedMap, pairs: &[SequencePair], opts: &BuildOptions) -> Result<RescalingTrace> {
    if pairs.is_empty() {
        return Err(Error::input("empty sequence"));
    }
    let m = f.domain_dim();
    let f0 = f.eval(&BallPoint::origin(m))?;
    if f0.norm() > F0_TOL {
        return Err(Error::input(format!("build_sequence needs f(0) = 0, got |f(0)| = {:.3e}", f0.norm())));
    }
    let escape = escape_report(pairs)?;
    if !escape.escaping && !opts.allow_non_escaping {
        return Err(Error::Diagnostic(format!(
            "sequence does not escape to the boundary: gaps 1-|φ_n(0)| = {:?}",
            escape.phi_gaps
        )));
    }
    let entries = pairs
        .par_iter()
        .map(|p| build_entry(f, p, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(RescalingTrace {
        map: f.clone(),
        entries,
        escape,
        compactness: None,
    })
}

fn build_entry(f: &ComposedMap, pair: &SequencePair, opts: &BuildOptions) -> Result<TraceEntry> {
    let (m, big_m) = (f.domain_dim(), f.target_dim());
    if pair.phi.dim() != m || pair.psi.dim() != big_m {
        return Err(Error::input(format!("pair n = {} has the wrong dimensions", pair.n)));
    }
    let symmetry_residual =
        verify_symmetry_pair(f, &pair.phi, &pair.psi, opts.symmetry_samples, SYMMETRY_SEED)?.residual;

    let dec = cartan_decomposition(&pair.phi)?;
    let t = dec.t;
    let k = dec.rotation;
    let direction: Vec<Complex64> = (0..m).map(|i| k.matrix()[(i, 0)]).collect();
    let image = f.eval_scalars(&direction)?;
    let r = linalg::norm(&image);
    if !((r - 1.0).abs() <= opts.boundary_tol) {
        return Err(Error::input(format!(
            "n = {}: |f(φ_n(0)/|φ_n(0)|)| = {r:.15} is not on the boundary",
            pair.n
        )));
    }
    let ell = rotation_mapping_e1(&linalg::scale(&image, 1.0 / r))?;
    let psi_dec = cartan_decomposition(&ell.inverse().compose(&pair.psi))?;
    let beta = conjugate_by_cartan(&psi_dec.rotation, t)
        .compose(&cartan(psi_dec.t - t, big_m))
        .compose(&psi_dec.stabilizer);
    let alpha = dec.stabilizer;

    let h = f.after(&k)?.then(&ell.inverse())?;
    let h_siegel = siegel_conjugate(h.clone());
    let jet_h = jet_at_zero(&h_siegel)?;
    let siegel_time = 2.0 * t;
    let route = if symmetry_residual <= SYMMETRY_TOL {
        GRoute::Definitional
    } else {
        GRoute::Conjugation
    };
    let g = g_map(f, route, &alpha, &beta, || Ok(h.clone()), siegel_time)?;
    let jet_g = jet_at_zero(&g)?;

    let conjugation_residual = match route {
        GRoute::Definitional => {
            let rescaled = CartanRescaled {
                inner: h_siegel,
                tau: siegel_time,
            };
            let mut worst: f64 = 0.0;
            for w in sample_siegel_points(m, opts.conjugation_samples, opts.seed) {
                let w = DdComplex::lift_slice(&w);
                let a = g.eval_dd(&w)?;
                let b = rescaled.eval_dd(&w)?;
                let d: f64 = a
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| (*x - *y).to_c64().norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(d);
            }
            Some(worst)
        }
        GRoute::Conjugation => None,
    };

    let b0 = BallPoint::new(beta.origin_image())?;
    Ok(TraceEntry {
        n: pair.n,
        t,
        siegel_time,
        k,
        ell,
        alpha,
        beta,
        jet_h,
        jet_g,
        route,
        symmetry_residual,
        conjugation_residual,
        compactness_distance: dist_from_origin(&b0)?,
        phi_gap: escape_gap(&pair.phi),
        psi_gap: escape_gap(&pair.psi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::catalog;
    use crate::rescaling::verify_scaling_law;

    fn linear(m: usize, big_m: usize) -> ComposedMap {
        ComposedMap::new(catalog("linear", &[m, big_m]).unwrap())
    }

    #[test]
    fn cartan_gaps_match_closed_form() {
        let pairs = cartan_sequence(2, 4, 1, 10).unwrap();
        for p in &pairs {
            let n = f64::from(p.n);
            let want = 2.0 * (-2.0 * n).exp() / (1.0 + (-2.0 * n).exp());
            assert!((escape_gap(&p.phi) / want - 1.0).abs() < 1e-14);
        }
        let g = escape_gap(&pairs[9].phi);
        assert!((g - 4.1e-9).abs() < 0.05e-9, "{g}");
        assert!(escape_check(&pairs).unwrap().escaping);
    }

    #[test]
    fn constant_sequence_is_diagnostic() {
        let id = SequencePair {
            n: 0,
            phi: Automorphism::identity(2),
            psi: Automorphism::identity(3),
        };
        let pairs = vec![id.clone(), SequencePair { n: 1, ..id }];
        assert!(matches!(escape_check(&pairs), Err(Error::Diagnostic(_))));
        let f = linear(2, 3);
        assert!(matches!(
            build_sequence(&f, &pairs, &BuildOptions::default()),
            Err(Error::Diagnostic(_))
        ));
    }

    #[test]
    fn time_cap() {
        let pairs = cartan_sequence(1, 1, 17, 19).unwrap();
        assert!(matches!(escape_check(&pairs), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn linear_normalization_is_trivial() {
        let f = linear(2, 4);
        let pairs = cartan_sequence(2, 4, 1, 4).unwrap();
        let nm = normalize_map(&f, &pairs).unwrap();
        assert_eq!(nm.map, f);
        assert_eq!(nm.pairs, pairs);
    }

    #[test]
    fn shifted_linear_map_is_recentred() {
        let lin = linear(2, 3);
        let p = BallPoint::new(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0), Complex64::new(0.0, 0.4)]).unwrap();
        let shift = transport_to_origin(&p).unwrap().inverse();
        let f = lin.then(&shift).unwrap();
        let pairs: Vec<SequencePair> = cartan_sequence(2, 3, 1, 5)
            .unwrap()
            .into_iter()
            .map(|q| SequencePair {
                psi: shift.compose(&q.psi).compose(&shift.inverse()),
                ..q
            })
            .collect();
        let nm = normalize_map(&f, &pairs).unwrap();
        let f0 = nm.map.eval(&BallPoint::origin(2)).unwrap();
        assert!(f0.norm() <= 1e-12, "{}", f0.norm());
        assert!(nm.residuals.iter().all(|&r| r <= SYMMETRY_TOL));
    }

    #[test]
    fn rotated_sequence_points_along_e1() {
        let f = linear(2, 3);
        let v = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let r = rotation_mapping_e1(&v).unwrap();
        let pairs: Vec<SequencePair> = cartan_sequence(2, 3, 1, 6)
            .unwrap()
            .into_iter()
            .map(|q| {
                let phi = r.compose(&q.phi).compose(&r.inverse());
                let psi = phi.block_extend(3).unwrap();
                SequencePair { phi, psi, ..q }
            })
            .collect();
        let nm = normalize_map(&f, &pairs).unwrap();
        for p in &nm.pairs {
            let d = p.phi.origin_image();
            let d = linalg::scale(&d, 1.0 / linalg::norm(&d));
            assert!(linalg::dist(&d, &linalg::basis(2, 0)) <= 1e-8);
        }
    }

    #[test]
    fn linear_trace() {
        let f = linear(2, 4);
        let pairs = cartan_sequence(2, 4, 1, 8).unwrap();
        let trace = build_sequence(&f, &pairs, &BuildOptions::default()).unwrap();
        for (i, e) in trace.entries.iter().enumerate() {
            let n = f64::from(e.n);
            assert!((e.t - n).abs() <= 1e-12);
            assert_eq!(e.route, GRoute::Definitional);
            assert!(e.k.distance_to(&Automorphism::identity(2)) <= 1e-15);
            assert!(e.ell.distance_to(&Automorphism::identity(4)) <= 1e-15);
            assert!(e.compactness_distance <= 1e-12);
            assert!(linalg::norm(&e.jet_g.value) <= 1e-10);
            assert!(linalg::norm(&e.jet_h.value) <= 1e-10);
            assert!(e.conjugation_residual.unwrap() <= 1e-9);
            assert!(e.phi_gap > 0.0 && e.psi_gap > 0.0);
            let g = trace.g_map(i).unwrap();
            for w in sample_siegel_points(2, 10, 3) {
                let out = g.eval(&w).unwrap();
                assert!((out[0] - w[0]).norm() <= 1e-12 && (out[1] - w[1]).norm() <= 1e-12);
                assert!(out[2].norm() <= 1e-12 && out[3].norm() <= 1e-12);
            }
        }
        assert!(verify_scaling_law(&trace).unwrap().max_relative_error <= 1e-12);
    }

    #[test]
    fn non_member_uses_conjugation() {
        let f = ComposedMap::new(catalog("whitney", &[]).unwrap());
        let pairs = cartan_sequence(2, 3, 1, 3).unwrap();
        let trace = build_sequence(&f, &pairs, &BuildOptions::default()).unwrap();
        for e in &trace.entries {
            assert_eq!(e.route, GRoute::Conjugation);
            assert!(e.symmetry_residual > 0.1);
            assert!(e.conjugation_residual.is_none());
            assert!(linalg::norm(&e.jet_g.value) <= 1e-10);
        }
        assert!(verify_scaling_law(&trace).unwrap().max_relative_error <= 1e-8);
    }

    #[test]
    fn improper_direction_is_rejected() {
        let spec = crate::maps::ProperMapSpec::new(
            1,
            1,
            vec![vec![crate::maps::Monomial {
                exponents: vec![1],
                coef: Complex64::new(0.5, 0.0),
            }]],
        )
        .unwrap();
        let f = ComposedMap::new(spec);
        let pairs = cartan_sequence(1, 1, 1, 2).unwrap();
        let opts = BuildOptions::default();
        assert!(matches!(build_sequence(&f, &pairs, &opts), Err(Error::InvalidInput(_))));
    }
}
