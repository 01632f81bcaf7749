//! Numerical tolerances used across the crate.
//!
//! Constructor invariants sit at 1e-12 and derived quantities at 1e-10:
//! everything here is double-precision arithmetic on 3x3 problems, so
//! these leave several orders of magnitude of headroom.

/// Unit-norm check for state vectors after construction/normalization.
pub const STATE_NORM: f64 = 1e-12;

/// Entrywise H = H-dagger check for Hermitian operators.
pub const HERMITICITY: f64 = 1e-12;

/// Frobenius-norm defect of U-dagger U - I for unitaries.
pub const UNITARITY: f64 = 1e-10;

/// Density-matrix construction: hermiticity, trace deviation, and the
/// magnitude of allowed negative eigenvalues.
pub const DENSITY: f64 = 1e-10;

/// Looser density-matrix gate applied to integrator output, where RK4
/// truncation error accumulates on top of rounding.
pub const DENSITY_EVOLVED: f64 = 1e-8;

/// Pulse-area calibration round trip: |area(calibrated) - target|.
pub const CALIBRATION: f64 = 1e-10;

/// Norm/trace drift beyond which a run is reported as a numerical
/// invariant violation (CLI exit code 3).
pub const DRIFT_LIMIT: f64 = 1e-8;

/// Off-diagonal mass (relative to the matrix scale) at which the Jacobi
/// eigensolver declares convergence.
pub const JACOBI_OFF: f64 = 1e-15;
