//! Piecewise λ-affine contractions of the interval: exact construction,
//! certified periodic orbits, rotation numbers of contracted rotations,
//! singular connections and empirical complexity measures.
//!
//! Every computation is generic over [`Scalar`]. [`Rational`] gives exact
//! results and is required for certification; [`HighFloat`], `f64` and
//! `f32` run the same code with outward-rounded enclosures.

pub mod error;
pub mod interval;
pub mod io;
pub mod map;
pub mod metrics;
pub mod orbit;
pub mod rotation;
pub mod scalar;
pub mod singular;

pub use error::{Error, Result};
pub use interval::Interval;
pub use map::{build_map, is_z_independent, Branch, ExactMap, Itinerary, MapSpec, PwMap, SingularSet};
pub use orbit::{
    bound_report, certify_cycle, classify_map, find_periodic_orbits, iterate_orbit,
    maximal_itinerary_interval, BoundReport, Budget, Certificate, CertifiedCycle, Classification,
    OrbitRecord, Verdict,
};
pub use metrics::{
    box_dimension_estimate, entropy_profile, omega_limit_sample, sweep_lambda, BoxCountProfile,
    EntropyProfile, SweepReport,
};
pub use rotation::{
    contracted_rotation, rotation_number, s_coefficient, tongue_atlas, tongue_interval,
    ContractedRotationSpec, RotationKind, RotationResult, Tongue,
};
pub use scalar::{parse_rational, HighFloat, Mode, Rational, Scalar};
pub use singular::{
    connection_polynomial, detect_connection, isolate_roots, v_set, Connection,
    ConnectionPolynomial, RootBracket,
};

/// Double-double map for long exploratory orbits.
pub type FloatMap = PwMap<HighFloat>;
pub type F64Map = PwMap<f64>;
