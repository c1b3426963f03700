//! The rescaling pipeline: normalize a map with a sequence of symmetries,
//! recenter the sequence with Cartan elements, and read off the quadratic
//! limit of the rescaled maps in Siegel coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

mod limit;
mod normal_form;
mod pipeline;
mod scaling;
mod sequence;

pub use limit::{extract_limit_jet, CauchyReport, DecayReport, LimitJet};
pub use normal_form::{
    final_normalization, quadratic_normal_form, verify_boundary_identity, BoundaryResiduals,
    FinalNormalization, NormalFormResiduals, QuadraticNormalForm, TOL_PATTERN,
};
pub use pipeline::{rescale, RescaleOptions, RescaleOutcome, Stage, StageError, TraceDocument};
pub use scaling::{scaling_factors, verify_scaling_law, ScalingProfile, ScalingQuery, ScalingReport};
pub use sequence::{
    build_sequence, cartan_sequence, escape_check, escape_gap, normalize_map, BuildOptions,
    CompactnessCheck, EscapeReport, GMap, GRoute, NormalizedMap, RescalingTrace, SequencePair,
    TraceEntry, T_CAP,
};

/// Groups of jet coefficients at the Siegel origin, named by their indices
/// (1-based, `j` the target component).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientClass {
    /// `g_j(0)` for any `j`.
    Value,
    /// `∂g_1/∂z_1`, which must be real and positive.
    Lambda,
    /// `∂g_j/∂z_1` with `j ≥ 2`.
    FirstNormal,
    /// `∂g_1/∂z_k` with `k ≥ 2`.
    FirstTangential,
    /// `∂²g_1/∂z_k∂z_l` with `k = 1` or `l = 1`.
    SecondMixed,
    /// `∂²g_j/∂z_k∂z_l` with `j ≥ 2`.
    SecondNormal,
}

impl CoefficientClass {
    pub fn label(self) -> &'static str {
        match self {
            CoefficientClass::Value => "(value)",
            CoefficientClass::Lambda => "(j=1, k=1)",
            CoefficientClass::FirstNormal => "(j≥2, k=1)",
            CoefficientClass::FirstTangential => "(j=1, k≥2)",
            CoefficientClass::SecondMixed => "(j=1, k=1 or ℓ=1)",
            CoefficientClass::SecondNormal => "(j≥2, k, ℓ)",
        }
    }
}

impl fmt::Display for CoefficientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
