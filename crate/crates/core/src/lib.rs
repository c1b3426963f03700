//! Numerics for proper holomorphic maps between complex unit balls.
//!
//! The crate is split into four layers:
//!
//! * [`group`]: `PU(m,1)` acting on the ball and on the Siegel domain, and
//!   the Cayley transforms between the two models.
//! * [`metric`]: the Kobayashi distance, sampled curves, quasi-geodesic
//!   certificates, Hausdorff pseudo-distances and Morse-constant estimates.
//! * [`maps`]: polynomial proper maps, boundary constants, symmetry pairs and
//!   exact second-order jets in Siegel coordinates.
//! * [`rescaling`]: the automorphism-rescaling pipeline that extracts and
//!   flattens the quadratic limit of a map with a non-compact symmetry group.
#![warn(missing_debug_implementations)]
#![allow(
    clippy::many_single_char_names,
    clippy::needless_range_loop,
    clippy::neg_cmp_op_on_partial_ord
)]

pub mod dd;
pub mod error;
pub mod group;
pub mod jet;
pub mod linalg;
pub mod maps;
pub mod metric;
pub mod rescaling;

pub use error::{Error, Result};
pub use group::{
    cartan, cartan_siegel, cayley_to_ball, cayley_to_siegel, hermitian_form, rotation_mapping_e1,
    transport_to_origin, Automorphism, BallPoint, SiegelPoint, Tolerances,
};
pub use jet::{Jet2, Scalar};
pub use maps::{BallMap, ComposedMap, JetExpansion, ProperMapSpec, SiegelMap, SymmetryPair};
pub use metric::{dist_ball, QuasiGeodesicCertificate, RadialBoundConstants, SampledCurve};
pub use num_complex::Complex64;
pub use rescaling::{QuadraticNormalForm, RescalingTrace, ScalingProfile};

