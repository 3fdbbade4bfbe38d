//! Shared inputs for the criterion benchmarks.

/// Geometries `(r0, r, gamma)` used by the addition-formula benchmarks.
pub const GEOMETRIES: [(f64, f64, f64); 3] = [(0.5, 2.0, 0.0), (1.0, 5.0, 1.0471975511965976), (1.0, 2.0, 3.141592653589793)];
