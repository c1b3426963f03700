use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::limit::{extract_limit_jet, LimitJet};
use super::normal_form::{
    final_normalization, quadratic_normal_form, verify_boundary_identity, BoundaryResiduals,
    FinalNormalization, QuadraticNormalForm, TOL_PATTERN,
};
use super::scaling::{verify_scaling_law, ScalingReport};
use super::sequence::{
    build_sequence, certify_pairs, escape_check, normalize_map_with, BuildOptions, NormalizedMap,
    RescalingTrace, SequencePair,
};
use crate::error::{Error, Result};
use crate::maps::{lipschitz_boundary_constant, BallMap, ComposedMap, SYMMETRY_TOL};
use crate::metric::{estimate_morse_constant, RadialBoundConstants};

/// Scaling-law error above which the trace is rejected.
const SCALING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Symmetry,
    Normalize,
    Escape,
    Build,
    Compactness,
    ScalingLaw,
    Limit,
    NormalForm,
    BoundaryIdentity,
    FinalNormalization,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Symmetry => "symmetry",
            Stage::Normalize => "normalize",
            Stage::Escape => "escape",
            Stage::Build => "build",
            Stage::Compactness => "compactness",
            Stage::ScalingLaw => "scaling-law",
            Stage::Limit => "limit",
            Stage::NormalForm => "normal-form",
            Stage::BoundaryIdentity => "boundary-identity",
            Stage::FinalNormalization => "final-normalization",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage} stage failed: {error}")]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleOptions {
    pub build: BuildOptions,
    /// Number of trailing differences in the Cauchy report.
    pub tail: usize,
    pub tol_pattern: f64,
    pub boundary_samples: usize,
    pub flatten_samples: usize,
    /// Estimate `C` and `D` and attach the compactness bound to the trace.
    pub compactness: bool,
    pub morse_trials: usize,
    pub seed: u64,
}

impl Default for RescaleOptions {
    fn default() -> Self {
        RescaleOptions {
            build: BuildOptions::default(),
            tail: 3,
            tol_pattern: TOL_PATTERN,
            boundary_samples: 64,
            flatten_samples: 50,
            compactness: true,
            morse_trials: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaleOutcome {
    pub normalized: NormalizedMap,
    pub trace: RescalingTrace,
    pub scaling: ScalingReport,
    pub limit: LimitJet,
    pub normal_form: QuadraticNormalForm,
    pub boundary: BoundaryResiduals,
    pub flattening: FinalNormalization,
}

/// Everything a rescaling run produced, as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub format: String,
    pub version: u32,
    pub map: ComposedMap,
    pub outcome: RescaleOutcome,
}

impl TraceDocument {
    pub const FORMAT: &'static str = "ballmaps-trace";
    pub const VERSION: u32 = 1;

    pub fn new(map: ComposedMap, outcome: RescaleOutcome) -> Self {
        TraceDocument {
            format: Self::FORMAT.to_string(),
            version: Self::VERSION,
            map,
            outcome,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::numeric(format!("trace export: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TraceDocument =
            serde_json::from_str(s).map_err(|e| Error::input(format!("trace document: {e}")))?;
        if doc.format != Self::FORMAT || doc.version != Self::VERSION {
            return Err(Error::input(format!(
                "unsupported trace document {} v{}",
                doc.format, doc.version
            )));
        }
        Ok(doc)
    }
}

/// Runs the whole pipeline: symmetry certification, normalization, escape
/// check, trace construction, scaling law, limit jet, normal form, boundary
/// identity and the final flattening.
pub fn rescale(
    f: &ComposedMap,
    pairs: &[SequencePair],
    opts: &RescaleOptions,
) -> std::result::Result<RescaleOutcome, StageError> {
    let samples = opts.build.symmetry_samples;
    let res = certify_pairs(f, pairs, samples).at(Stage::Symmetry)?;
    if let Some((i, &r)) = res.iter().enumerate().find(|(_, &r)| !(r <= SYMMETRY_TOL)) {
        return Err(StageError {
            stage: Stage::Symmetry,
            error: Error::input(format!(
                "pair n = {} fails ψ∘f = f∘φ with residual {r:.6e}",
                pairs[i].n
            )),
        });
    }
    let normalized = normalize_map_with(f, pairs, samples).at(Stage::Normalize)?;
    if !opts.build.allow_non_escaping {
        escape_check(&normalized.pairs).at(Stage::Escape)?;
    }
    let mut trace = build_sequence(&normalized.map, &normalized.pairs, &opts.build).at(Stage::Build)?;
    if opts.compactness {
        let constants = compactness_constants(&normalized.map, opts).at(Stage::Compactness)?;
        trace = trace.with_compactness(constants);
    }
    let scaling = verify_scaling_law(&trace).at(Stage::ScalingLaw)?;
    if !(scaling.max_relative_error <= SCALING_TOL) {
        return Err(StageError {
            stage: Stage::ScalingLaw,
            error: Error::numeric(format!(
                "scaling law violated: relative error {:.3e}",
                scaling.max_relative_error
            )),
        });
    }
    let tail = opts.tail.min(trace.entries.len().saturating_sub(1)).max(1);
    let limit = extract_limit_jet(&trace, tail).at(Stage::Limit)?;
    let mut normal_form = quadratic_normal_form(&limit.jet, opts.tol_pattern).at(Stage::NormalForm)?;
    let boundary = verify_boundary_identity(&normal_form, opts.boundary_samples, opts.seed);
    let g = trace.g_map(trace.entries.len() - 1).at(Stage::FinalNormalization)?;
    let flattening = final_normalization(&normal_form, &boundary, &g, opts.flatten_samples, opts.seed)
        .map_err(|error| StageError {
            stage: if matches!(error, Error::Numeric(ref s) if s.starts_with("boundary identity")) {
                Stage::BoundaryIdentity
            } else {
                Stage::FinalNormalization
            },
            error,
        })?;
    normal_form.u_prime = Some(flattening.u_prime.clone());
    normal_form.residuals.final_flatten = Some(flattening.flatten_residual);
    Ok(RescaleOutcome {
        normalized,
        trace,
        scaling,
        limit,
        normal_form,
        boundary,
        flattening,
    })
}

/// Grid `C`, `β = ½ log 2C` and an empirical Morse constant for the
/// normalized map (whose base offset is zero).
fn compactness_constants(f: &ComposedMap, opts: &RescaleOptions) -> Result<RadialBoundConstants> {
    let c = lipschitz_boundary_constant(f, 1)?.c;
    let base = RadialBoundConstants {
        c,
        d: 0.0,
        base_offset: 0.0,
    };
    let d = estimate_morse_constant(f.target_dim(), 1.0, base.beta(), 0.0, opts.morse_trials, opts.seed)?.d;
    Ok(RadialBoundConstants { d, ..base })
}
