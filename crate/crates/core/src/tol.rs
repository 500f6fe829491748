//! Numerical tolerances, fixed in one place.
//!
//! Validation tolerances (1e-9) are looser than internal equality checks
//! (1e-10) so that states surviving construction still satisfy the identities
//! the test suites assert.

/// Max allowed `|m - m^dagger|` entry for a density matrix.
pub const TOL_HERMITIAN: f64 = 1e-9;

/// Max allowed `|tr(rho) - 1|`.
pub const TOL_TRACE: f64 = 1e-9;

/// Eigenvalues in `[-TOL_PSD, 0)` are clamped to zero; anything lower is rejected.
pub const TOL_PSD: f64 = 1e-9;

/// Internal equality tolerance for identities that hold exactly in arithmetic.
pub const TOL_EQ: f64 = 1e-10;

/// Eigenvalue floor below which `x ln x` is treated as zero.
pub const EIG_FLOOR: f64 = 1e-14;

/// Weight threshold that turns a support mismatch into the +inf sentinel
/// of the relative entropy.
pub const SUPPORT_MASS: f64 = 1e-10;

/// Kraus operators with max entry magnitude below this are pruned.
pub const KRAUS_PRUNE: f64 = 1e-15;

/// Quantifier values in `[-QUANT_CLAMP, 0)` are clamped to zero.
pub const QUANT_CLAMP: f64 = 1e-9;
