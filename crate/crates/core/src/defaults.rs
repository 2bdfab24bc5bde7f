//! Default parameters and tolerances, collected in one place.
//!
//! Every knob the engine exposes has its default here so that library callers,
//! the CLI config loader, and the test suite agree on a single source of truth.
//! Values are `f64`; generic call sites convert through [`crate::Real::of`].

/// Iterations discarded before sampling an orbit. Slowest transients in the
/// periodic regime contract like |multiplier|^n, so 1e3 settles everything that
/// is not within ~1e-3 of a bifurcation.
pub const TRANSIENT_LEN: usize = 1000;

/// Post-transient samples kept per orbit; enough to expose periods up to the
/// detection cap with hundreds of comparisons per candidate period.
pub const SAMPLE_LEN: usize = 1000;

/// Generic aperiodic start state; avoids low-period rational special points.
pub const X0: f64 = 0.371;

/// Absolute tolerance for period detection. Separates period-2^k clusters up
/// to k = 5 over the doubling cascade while absorbing float round-off.
pub const PERIOD_TOLERANCE: f64 = 1e-4;

/// Largest period the detector reports before declaring the samples aperiodic.
pub const MAX_PERIOD: usize = 64;

/// Bisection resolution in lambda for locating period-doubling transitions.
pub const DOUBLING_RESOLUTION: f64 = 1e-4;

/// Doubling transitions a sweep tries to locate for its summary.
pub const MAX_DOUBLINGS: usize = 4;

/// Fallback chaos-onset boundary used to restrict crisis detection when a
/// sweep's own range cannot produce an accumulation estimate.
pub const CHAOS_ONSET_LAMBDA: f64 = 3.5699;

/// Settled-to-baseline attractor-support ratio above which a band merge
/// counts as a crisis.
pub const CRISIS_JUMP_THRESHOLD: f64 = 1.5;

/// Absolute minimum support increase (in state units) for a crisis. Filters
/// microscopic expansions of a still-narrow support.
pub const CRISIS_MIN_WIDTH_JUMP: f64 = 0.05;

/// Bin count of the fixed [0, 1] partition used to measure occupied support.
pub const CRISIS_BINS: usize = 512;

/// Sample gap above which two sorted samples count as separate attractor
/// bands. Chaotic bands on either side of a crisis are separated by gaps an
/// order of magnitude wider, while in-band sample spacing is far finer.
pub const CRISIS_MERGE_GAP: f64 = 0.05;

/// Rows inspected on each side of a candidate crisis when measuring the
/// support jump; a single-row comparison is too noisy near the transition.
pub const CRISIS_WINDOW_ROWS: usize = 5;

/// Consecutive multi-band rows required before a second crisis can be flagged.
pub const CRISIS_REARM_ROWS: usize = 5;

/// Iterations averaged by a Lyapunov estimate.
pub const LYAPUNOV_ITERATIONS: usize = 100_000;

/// Transient discarded before a Lyapunov average starts.
pub const LYAPUNOV_TRANSIENT: usize = 1000;

/// Floor applied to |f'(x)| inside the derivative average so a superstable
/// point cannot produce ln(0); estimates that hit it are flagged saturated.
pub const DERIVATIVE_FLOOR: f64 = 1e-300;

/// Initial offset between fiducial and perturbed trajectories.
pub const SEPARATION_DELTA0: f64 = 1e-8;

/// Steps between renormalizations of the separation estimator.
pub const RENORM_INTERVAL: usize = 1;

/// Half-width of the band around zero inside which an exponent is "marginal".
pub const ZERO_BAND: f64 = 0.01;

/// Stability magnitude reported for saturated (superstable) channels.
pub const SATURATION_CAP: f64 = 30.0;

/// Initial offset between the paired trajectories of a pairwise check.
pub const PAIR_DELTA0: f64 = 1e-6;

/// Separation bound the paired trajectories must keep for the whole horizon.
pub const PAIR_EPSILON: f64 = 1e-3;

/// Steps in the short (1 year) evaluation horizon.
pub const SHORT_HORIZON_STEPS: usize = 10_000;

/// Steps in the long (up to 3 years) evaluation horizon.
pub const LONG_HORIZON_STEPS: usize = 30_000;

/// Midpoint periods (years) of the four canonical business cycles.
pub const KITCHIN_PERIOD_YEARS: f64 = 5.0;
pub const JUGLAR_PERIOD_YEARS: f64 = 9.0;
pub const KUZNETS_PERIOD_YEARS: f64 = 20.0;
pub const KONDRATIEFF_PERIOD_YEARS: f64 = 52.5;

/// Default calibration span: aggregate amplitude range and target lambda range.
pub const CALIBRATION_AMPLITUDE_MIN: f64 = 0.0;
pub const CALIBRATION_AMPLITUDE_MAX: f64 = 1.0;
pub const CALIBRATION_LAMBDA_MIN: f64 = 2.5;
pub const CALIBRATION_LAMBDA_MAX: f64 = 4.0;

/// Interval the rescaled ingest start state is confined to; keeps x0 away from
/// the absorbing endpoints 0 and 1.
pub const INGEST_X0_LOW: f64 = 0.05;
pub const INGEST_X0_HIGH: f64 = 0.95;

/// Significant digits used when serializing reals to CSV and JSON; 17 digits
/// round-trip any f64 exactly.
pub const REAL_SIG_DIGITS: usize = 17;
