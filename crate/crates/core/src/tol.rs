//! Comparison tolerances shared across the crate.

/// Default tolerance for geometric identities: metric preservation,
/// unitarity, nullness, closed-form angle updates. These are short
/// chains of exact arithmetic, so double precision leaves plenty of
/// headroom at 1e-12.
pub const GEOMETRY: f64 = 1e-12;

/// Tolerance for quantities that pass through the numeric stabilizer
/// extraction or long transform compositions (Wigner angles, net Bell
/// phases, measurement probabilities).
pub const PHASE: f64 = 1e-10;

/// Residual below which a stabilizer element is accepted as fixing the
/// standard momentum.
pub const STABILIZER: f64 = 1e-10;

/// Denominator threshold for the closed-form Wigner angle; below this,
/// with a non-vanishing numerator, the expression is singular.
pub const WIGNER_DENOMINATOR: f64 = 1e-14;

/// Polar angle below which a direction is treated as the standard one.
pub const STANDARD_DIRECTION: f64 = 1e-12;

/// Squared norm under which a projected two-mode vector counts as a
/// null measurement outcome.
pub const NULL_OUTCOME: f64 = 1e-14;

/// Rapidity guard; cosh/sinh of anything larger would dominate every
/// other scale in a composition long before f64 overflows.
pub const MAX_RAPIDITY: f64 = 50.0;

/// Default half-width of the polar exclusion band around `theta = pi/2`
/// applied by wave-packet quadratures.
pub const EQUATOR_BAND: f64 = 1e-3;
