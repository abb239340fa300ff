//! Default numerical tolerances. All public operations that use one of these
//! also accept an override.

/// Allowed `|a_ij - conj(a_ji)|` (relative to `max(1, max|a|)`) before symmetrization.
pub const HERMITIAN: f64 = 1e-12;
/// Smallest eigenvalue accepted as "non-negative".
pub const PSD: f64 = 1e-10;
/// Allowed deviation of total trace / POVM sum from one / the identity.
pub const NORMALIZATION: f64 = 1e-9;
/// Eigenvalues closer than this to the top one share its eigenspace.
pub const DEGENERACY: f64 = 1e-8;
/// Idempotency check for eigenprojections.
pub const PROJECTOR: f64 = 1e-9;
/// Default stopping gap of the numeric discrimination solver.
pub const GAP: f64 = 1e-7;
/// Default cap on the number of product outcomes.
pub const MAX_TUPLES: usize = 1_000_000;
/// Environment variable overriding [`MAX_TUPLES`].
pub const MAX_TUPLES_ENV: &str = "PGDISCRIM_MAX_TUPLES";

/// Product-outcome cap, honouring `PGDISCRIM_MAX_TUPLES` when set to a positive integer.
pub fn max_tuples() -> usize {
    std::env::var(MAX_TUPLES_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(MAX_TUPLES)
}
