//! Tolerances and calibrated constants shared by the CLI and the tests.

/// Slope `c` of the discretization slack `δ(h) = c·h`, `h` the max edge
/// length. Calibrated on the sphere pair over levels 3 to 6 and both
/// profiles: the largest `|Π² − ‖{F,G}‖₁| / h` is about `2.1e-4` (smootherstep,
/// level 3), rounded up to the next power of ten.
pub const SLACK_SLOPE: f64 = 1e-3;

pub fn slack(max_edge: f64) -> f64 {
    SLACK_SLOPE * max_edge
}

/// Relative area slack for the median oracle's "≤ ½" test.
pub const MEDIAN_AREA_TOL: f64 = 0.02;

/// Agreement of the median oracle with the bisection quasi-integral.
pub fn median_oracle_tol(max_edge: f64) -> f64 {
    f64::max(0.02, 2.0 * max_edge)
}

/// `ζ(aF + c) = aζ(F) + c`.
pub const AFFINE_TOL: f64 = 1e-9;

pub const THEOREM1_L1_TOL: f64 = 0.02;
pub const THEOREM1_RATIO_TOL: f64 = 0.03;
pub const COVERING_TOL: f64 = 0.05;
pub const COVERING_SAMPLES: usize = 10_000;
pub const THEOREM2_ZETA_TOL: f64 = 0.01;
pub const THEOREM2_RATIO_TOL: f64 = 0.02;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_TRIALS: usize = 100;

/// `ζ` values the constructions pin exactly, up to summation rounding.
pub const ZETA_EXACT_TOL: f64 = 1e-12;

/// Masses assigned by construction.
pub const MASS_TOL: f64 = 1e-12;

pub const AXIOM_SETS: usize = 200;
pub const SOLID_SETS: usize = 50;
pub const ORACLE_FIELDS: usize = 50;
