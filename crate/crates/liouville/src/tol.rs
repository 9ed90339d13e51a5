//! Default tolerances used across the crate.
//!
//! Every comparison threshold lives here so that the numeric contract is in
//! one place. Operations that the caller may want to tune (symmetry tests,
//! class equality, earthquake checks) take an explicit tolerance argument
//! and merely default to these values.

/// Two boundary points closer than this (in radians of circular distance)
/// are treated as coincident.
pub const TOL_POINT: f64 = 1e-10;

/// Determinants are normalized to +1 within this tolerance after every
/// construction and composition.
pub const TOL_DET: f64 = 1e-12;

/// General-purpose comparison tolerance for derived quantities
/// (crossratios, masses, pointwise map agreement).
pub const TOL_GENERAL: f64 = 1e-9;

/// Default corner jitter (radians) used to restore genericity of a box
/// with respect to an atomic measure.
pub const GENERIC_JITTER: f64 = 1e-6;
