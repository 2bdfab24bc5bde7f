//! Largest-Lyapunov-exponent estimation for the quadratic map.
//!
//! Two independent estimators are provided and cross-check each other:
//!
//! * **Derivative average** — the ergodic mean `(1/n) * sum ln|f'(x_i)|` with
//!   `f'(x) = lambda * (1 - 2x)` evaluated along the orbit. `|f'|` is floored
//!   (default 1e-300) so a superstable orbit through the critical point cannot
//!   inject `ln(0)`; estimates that ever hit the floor are flagged
//!   `saturated_low`.
//! * **Trajectory separation** — a fiducial and a perturbed trajectory evolve
//!   together; every `renorm_interval` steps the log of the separation growth
//!   `ln(|sep| / delta0)` is accumulated and the perturbed state is re-anchored
//!   at distance `delta0` on the side it drifted to. This is the classic
//!   renormalized two-trajectory scheme and needs no derivative information.
//!
//! A positive exponent certifies sensitive dependence (chaos), a negative one
//! certifies local contraction onto the attractor, and a band around zero is
//! reported as marginal since finite averages cannot resolve the sign at a
//! bifurcation.

use serde::Serialize;

use crate::defaults;
use crate::dynamics::LogisticMap;
use crate::error::{Error, Result};
use crate::float::Real;

/// Which estimator produced an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DerivativeAverage,
    TrajectorySeparation,
}

impl Method {
    /// Stable label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Method::DerivativeAverage => "derivative_average",
            Method::TrajectorySeparation => "trajectory_separation",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Qualitative verdict derived from an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Marginal,
    Chaotic,
}

impl Stability {
    /// Stable label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Marginal => "marginal",
            Stability::Chaotic => "chaotic",
        }
    }
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// An exponent estimate together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate<F> {
    /// Estimated largest Lyapunov exponent (nats per iteration).
    pub exponent: F,
    /// Estimator that produced the value.
    pub method: Method,
    /// Iterations actually averaged.
    pub iterations: usize,
    /// True when the derivative floor was ever applied; the exponent is then a
    /// bounded stand-in for "as contracting as representable".
    pub saturated_low: bool,
}

/// Ergodic average of `ln|f'|` along the orbit of `x0`.
///
/// Runs `transient` warm-up steps, then averages over the next `n` states
/// (the derivative is evaluated at each state before it is advanced).
pub fn lyapunov_derivative<F: Real>(
    map: &LogisticMap<F>,
    x0: F,
    transient: usize,
    n: usize,
) -> Result<LyapunovEstimate<F>> {
    if n == 0 {
        return Err(Error::TooFewIterations { n, min: 1 });
    }
    crate::dynamics::check_state(x0)?;
    let mut x = x0;
    for _ in 0..transient {
        x = map.step_unchecked(x);
    }

    let floor = F::of(defaults::DERIVATIVE_FLOOR).max(F::min_positive_value());
    let mut sum = F::zero();
    let mut saturated = false;
    for _ in 0..n {
        let slope = map.derivative(x).abs();
        let clamped = if slope < floor {
            saturated = true;
            floor
        } else {
            slope
        };
        sum = sum + clamped.ln();
        x = map.step_unchecked(x);
    }

    Ok(LyapunovEstimate {
        exponent: sum / F::of_usize(n),
        method: Method::DerivativeAverage,
        iterations: n,
        saturated_low: saturated,
    })
}

/// Renormalized two-trajectory estimate.
///
/// After `transient` warm-up steps of the fiducial trajectory, a perturbed
/// copy is started `delta0` away. Both are advanced `renorm_interval` steps at
/// a time; each block contributes `ln(|separation| / delta0)` and re-anchors
/// the perturbed state at distance `delta0` on the side it separated towards.
/// Only whole blocks are executed, so up to `renorm_interval - 1` of the
/// requested `n` steps may be dropped.
///
/// A separation that collapses to exactly zero is re-seeded once; a second
/// collapse reports [`Error::DegenerateSeparation`].
pub fn lyapunov_separation<F: Real>(
    map: &LogisticMap<F>,
    x0: F,
    transient: usize,
    delta0: F,
    renorm_interval: usize,
    n: usize,
) -> Result<LyapunovEstimate<F>> {
    check_delta0(delta0)?;
    if renorm_interval == 0 {
        return Err(Error::ZeroRenormInterval);
    }
    if n < renorm_interval {
        return Err(Error::TooFewIterations {
            n,
            min: renorm_interval,
        });
    }

    crate::dynamics::check_state(x0)?;
    let mut x = x0;
    for _ in 0..transient {
        x = map.step_unchecked(x);
    }

    let mut y = offset_within_unit(x, delta0, true);
    let mut sum = F::zero();
    let mut counted_steps = 0usize;
    let mut reseeded = false;
    let blocks = n / renorm_interval;
    for _ in 0..blocks {
        for _ in 0..renorm_interval {
            x = map.step_unchecked(x);
            y = map.step_unchecked(y);
        }
        let sep = y - x;
        if sep == F::zero() {
            if reseeded {
                return Err(Error::DegenerateSeparation);
            }
            reseeded = true;
            y = offset_within_unit(x, delta0, true);
            continue;
        }
        sum = sum + (sep.abs() / delta0).ln();
        counted_steps += renorm_interval;
        y = offset_within_unit(x, delta0, sep > F::zero());
    }

    if counted_steps == 0 {
        return Err(Error::DegenerateSeparation);
    }
    Ok(LyapunovEstimate {
        exponent: sum / F::of_usize(counted_steps),
        method: Method::TrajectorySeparation,
        iterations: counted_steps,
        saturated_low: false,
    })
}

/// Buckets an estimate by the sign of its exponent with a tolerance band.
pub fn classify<F: Real>(estimate: &LyapunovEstimate<F>, zero_band: F) -> Stability {
    if estimate.exponent > zero_band {
        Stability::Chaotic
    } else if estimate.exponent < -zero_band {
        Stability::Stable
    } else {
        Stability::Marginal
    }
}

fn check_delta0<F: Real>(delta0: F) -> Result<()> {
    if delta0 > F::zero() && delta0 <= F::of(1e-6) {
        Ok(())
    } else {
        Err(Error::InvalidPerturbation {
            delta0: delta0.as_f64(),
        })
    }
}

/// Places a point `delta0` away from `x` on the preferred side, flipping to the
/// other side when the preferred one leaves the unit interval; any
/// `delta0 <= 1` guarantees at least one side fits.
pub(crate) fn offset_within_unit<F: Real>(x: F, delta0: F, positive: bool) -> F {
    let candidate = if positive { x + delta0 } else { x - delta0 };
    if candidate >= F::zero() && candidate <= F::one() {
        candidate
    } else if positive {
        x - delta0
    } else {
        x + delta0
    }
}
