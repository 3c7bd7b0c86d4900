//! Numerical tolerances used across the crate.

/// Validation bound for unitarity, determinants and state norms.
pub const UNITARY: f64 = 1e-10;

/// What library-built matrices are expected to reach.
pub const CONSTRUCTION: f64 = 1e-12;

/// Overlaps below this modulus are treated as zero (orthogonal rays).
pub const ORTHOGONAL: f64 = 1e-12;

/// Legs whose endpoints are closer than this (orthogonal part of the
/// target) are treated as zero-length.
pub const DEGENERATE_LEG: f64 = 1e-12;

/// Maximum pointwise deviation for a path to count as geodesic.
pub const GEODESIC: f64 = 1e-8;

/// Maximum closure defect accepted from a cyclic evolution.
pub const CYCLE_RESIDUAL: f64 = 1e-8;

/// Entries below this modulus are considered already nulled.
pub const NULL_ENTRY: f64 = 1e-14;
