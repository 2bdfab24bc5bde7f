//! The quadratic (logistic) map and orbit generation.
//!
//! The engine models each firm variable as a discrete-time system
//!
//! ```text
//! x[n+1] = lambda * x[n] * (1 - x[n]),     x in [0, 1], lambda in [0, 4]
//! ```
//!
//! whose control parameter `lambda` carries the external forcing level. The
//! parameter range is exactly the one for which the unit interval is invariant:
//! the parabola peaks at `lambda / 4 <= 1`, so orbits can never escape. In IEEE
//! arithmetic this holds bit-for-bit, not just analytically: `x * (1 - x)` is a
//! correctly rounded product of a true value `<= 0.25`, and `0.25` is
//! representable, so the rounded product is `<= 0.25`; the final multiply then
//! rounds a true value `<= lambda / 4 * ... <= 1` to something `<= 1`.
//!
//! Fixed points are `0` (attracting for `lambda <= 1`) and `1 - 1/lambda`
//! (appearing for `lambda > 1`, attracting up to `lambda = 3` where the
//! period-doubling cascade begins).

use crate::error::{Error, Result};
use crate::float::Real;

/// One-parameter quadratic map on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticMap<F> {
    lambda: F,
}

impl<F: Real> LogisticMap<F> {
    /// Creates the map, rejecting control parameters outside `[0, 4]`.
    pub fn new(lambda: F) -> Result<Self> {
        if !(lambda >= F::zero() && lambda <= F::of(4.0)) {
            return Err(Error::LambdaOutOfRange {
                lambda: lambda.as_f64(),
            });
        }
        Ok(Self { lambda })
    }

    /// Control parameter this map was built with.
    pub fn lambda(&self) -> F {
        self.lambda
    }

    /// Applies one iteration to a state inside `[0, 1]`.
    pub fn step(&self, x: F) -> Result<F> {
        check_state(x)?;
        Ok(self.step_unchecked(x))
    }

    /// One iteration without the domain check; the unit interval is invariant,
    /// so hot loops validate the seed once and then call this.
    ///
    /// The product is grouped as `lambda * (x * (1 - x))` on purpose: that is
    /// the grouping the module-level range argument is written for.
    #[inline]
    pub(crate) fn step_unchecked(&self, x: F) -> F {
        self.lambda * (x * (F::one() - x))
    }

    /// Derivative `lambda * (1 - 2x)` of one iteration, used by stability
    /// analysis; no domain restriction beyond the map's own.
    #[inline]
    pub fn derivative(&self, x: F) -> F {
        self.lambda * (F::one() - F::of(2.0) * x)
    }

    /// Runs `transient_len` warm-up steps from `x0`, then records the next
    /// `sample_len` iterates. `samples[0]` is the first post-transient iterate.
    pub fn iterate(&self, x0: F, transient_len: usize, sample_len: usize) -> Result<Orbit<F>> {
        check_state(x0)?;
        let mut x = x0;
        for _ in 0..transient_len {
            x = self.step_unchecked(x);
        }
        let mut samples = Vec::with_capacity(sample_len);
        for _ in 0..sample_len {
            x = self.step_unchecked(x);
            samples.push(x);
        }
        Ok(Orbit {
            map: *self,
            x0,
            transient_len,
            samples,
        })
    }

    /// Fixed points in ascending order: `{0}` for `lambda <= 1`, otherwise
    /// `{0, 1 - 1/lambda}`.
    pub fn fixed_points(&self) -> Vec<F> {
        if self.lambda > F::one() {
            vec![F::zero(), F::one() - self.lambda.recip()]
        } else {
            vec![F::zero()]
        }
    }
}

pub(crate) fn check_state<F: Real>(x: F) -> Result<()> {
    if x >= F::zero() && x <= F::one() {
        Ok(())
    } else {
        Err(Error::StateOutOfRange { x: x.as_f64() })
    }
}

/// A sampled trajectory together with the recipe that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<F> {
    /// Map the orbit was generated by.
    pub map: LogisticMap<F>,
    /// Seed state.
    pub x0: F,
    /// Warm-up steps discarded before sampling.
    pub transient_len: usize,
    /// Post-transient iterates, oldest first.
    pub samples: Vec<F>,
}

impl<F: Real> Orbit<F> {
    /// Post-transient samples.
    pub fn samples(&self) -> &[F] {
        &self.samples
    }
}
