//! Numerical thresholds shared by every module.

/// Normalization tolerance on Σ|amplitude|² and on Schmidt spectra.
pub const TOL_NORM: f64 = 1e-10;

/// Agreement tolerance between two routes to the same entropy.
pub const TOL_EQ: f64 = 1e-9;

/// Entrywise tolerance on Gram matrices and unitarity checks.
pub const TOL_ORTHO: f64 = 1e-10;

/// A gap above this value counts as unambiguously positive.
pub const DELTA_TOL: f64 = 1e-6;
