//! Shared numerical tolerances and search limits.
//!
//! Every comparison tolerance used by the checks and the acceptance suite is
//! pinned here; nothing is tuned per call site.

/// Tolerance for identities expected to hold up to accumulated rounding:
/// witness evaluation, Parseval sums, transform round-trips, oracle agreement.
pub const TOL_EXACT: f64 = 1e-12;

/// Tolerance for extremizer optimality.  Dual weights are products of `powf`
/// results along a root-to-leaf path, so they drift more than plain sums.
pub const TOL_EXTREMIZER: f64 = 1e-9;

/// Relative tolerance for the Luxemburg-norm and exponential-constant
/// bisections.
pub const TOL_BISECTION: f64 = 1e-10;

/// Default depth cap for exhaustive antichain enumeration.  The count grows
/// doubly exponentially (depth 4 already has 458 330 antichains), so callers
/// must opt in explicitly to anything deeper.
pub const DEFAULT_ORACLE_DEPTH: u32 = 4;

/// Default ball-count cap for the exact maximum-weight independent-set search.
pub const DEFAULT_MWIS_LIMIT: usize = 24;

/// Ball-count cap for the exact chromatic-number search.
pub const CHROMATIC_LIMIT: usize = 16;

/// Lattice resolution divisor for net construction and piercing scans: grids
/// use a step of `scale / NET_RESOLUTION_DIVISOR`.
pub const NET_RESOLUTION_DIVISOR: f64 = 20.0;
