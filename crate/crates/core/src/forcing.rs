//! Cyclic forcing of the control parameter.
//!
//! External conditions enter the model as superposed sinusoids: the four
//! canonical business cycles (Kitchin inventory ~3-7y, Juglar fixed-investment
//! ~7-11y, Kuznets infrastructural ~15-25y, Kondratieff long wave ~45-60y) or
//! the seven risk categories a firm faces. The instantaneous aggregate
//! amplitude is mapped onto the quadratic map's control parameter through a
//! calibration, so quiet periods run the firm in the stable low-lambda regime
//! and strong forcing pushes it through the doubling cascade into chaos.

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::float::Real;

/// One sinusoidal component: `amplitude * sin(2*pi*t/period + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSpec<F> {
    /// Human-readable component name carried into traces and reports.
    pub name: String,
    /// Non-negative peak contribution.
    pub amplitude: F,
    /// Period in years; strictly positive.
    pub period: F,
    /// Phase offset in radians.
    pub phase: F,
}

impl<F: Real> CycleSpec<F> {
    /// Builds a cycle, validating amplitude and period.
    pub fn new(name: impl Into<String>, amplitude: F, period: F, phase: F) -> Result<Self> {
        let name = name.into();
        if !(amplitude >= F::zero() && amplitude.is_finite()) {
            return Err(Error::InvalidCycle {
                name,
                reason: format!("amplitude {} must be finite and >= 0", amplitude.as_f64()),
            });
        }
        if !(period > F::zero() && period.is_finite()) {
            return Err(Error::InvalidCycle {
                name,
                reason: format!("period {} must be finite and > 0", period.as_f64()),
            });
        }
        if !phase.is_finite() {
            return Err(Error::InvalidCycle {
                name,
                reason: "phase must be finite".into(),
            });
        }
        Ok(Self {
            name,
            amplitude,
            period,
            phase,
        })
    }

    /// Kitchin inventory cycle at its midpoint period.
    pub fn kitchin(amplitude: F) -> Result<Self> {
        Self::new("kitchin", amplitude, F::of(defaults::KITCHIN_PERIOD_YEARS), F::zero())
    }

    /// Juglar fixed-investment cycle at its midpoint period.
    pub fn juglar(amplitude: F) -> Result<Self> {
        Self::new("juglar", amplitude, F::of(defaults::JUGLAR_PERIOD_YEARS), F::zero())
    }

    /// Kuznets infrastructural cycle at its midpoint period.
    pub fn kuznets(amplitude: F) -> Result<Self> {
        Self::new("kuznets", amplitude, F::of(defaults::KUZNETS_PERIOD_YEARS), F::zero())
    }

    /// Kondratieff long wave at its midpoint period.
    pub fn kondratieff(amplitude: F) -> Result<Self> {
        Self::new(
            "kondratieff",
            amplitude,
            F::of(defaults::KONDRATIEFF_PERIOD_YEARS),
            F::zero(),
        )
    }

    /// Contribution at time `t` (years). The argument is reduced modulo the
    /// period before the sine, which keeps `value_at(t + period)` equal to
    /// `value_at(t)` to well below 1e-12 even far from the origin.
    pub fn value_at(&self, t: F) -> F {
        let turns = (t / self.period).fract();
        let turns = if turns < F::zero() {
            turns + F::one()
        } else {
            turns
        };
        self.amplitude * (F::TAU() * turns + self.phase).sin()
    }
}

/// The four canonical business cycles with the given amplitudes, in
/// Kitchin/Juglar/Kuznets/Kondratieff order.
pub fn business_cycles<F: Real>(amplitudes: [F; 4]) -> Result<Vec<CycleSpec<F>>> {
    Ok(vec![
        CycleSpec::kitchin(amplitudes[0])?,
        CycleSpec::juglar(amplitudes[1])?,
        CycleSpec::kuznets(amplitudes[2])?,
        CycleSpec::kondratieff(amplitudes[3])?,
    ])
}

/// Sum of all component contributions at time `t`; empty input sums to zero.
pub fn superpose<F: Real>(cycles: &[CycleSpec<F>], t: F) -> F {
    cycles
        .iter()
        .fold(F::zero(), |acc, c| acc + c.value_at(t))
}

/// The seven categories of risk a firm carries.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum RiskCategory {
    Operational,
    ProductMarket,
    Input,
    Tax,
    Regulatory,
    Legal,
    Financial,
}

impl RiskCategory {
    /// All categories in canonical order.
    pub const ALL: [RiskCategory; 7] = [
        RiskCategory::Operational,
        RiskCategory::ProductMarket,
        RiskCategory::Input,
        RiskCategory::Tax,
        RiskCategory::Regulatory,
        RiskCategory::Legal,
        RiskCategory::Financial,
    ];

    /// Stable snake_case label.
    pub fn label(&self) -> &'static str {
        match self {
            RiskCategory::Operational => "operational",
            RiskCategory::ProductMarket => "product_market",
            RiskCategory::Input => "input",
            RiskCategory::Tax => "tax",
            RiskCategory::Regulatory => "regulatory",
            RiskCategory::Legal => "legal",
            RiskCategory::Financial => "financial",
        }
    }

    /// Inverse of [`Self::label`].
    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == label)
    }
}

impl std::fmt::Display for RiskCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One cycle per risk category; the type guarantees all seven are present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskProfile<F> {
    components: [CycleSpec<F>; 7],
}

impl<F: Real> RiskProfile<F> {
    /// Builds a profile by asking `make` for each category in canonical order.
    pub fn from_fn(mut make: impl FnMut(RiskCategory) -> CycleSpec<F>) -> Self {
        Self {
            components: std::array::from_fn(|i| make(RiskCategory::ALL[i])),
        }
    }

    /// All components share the amplitude and period, with zero phase.
    pub fn uniform(amplitude: F, period: F) -> Result<Self> {
        // Validate once; from_fn then clones the validated shape per category.
        let template = CycleSpec::new("uniform", amplitude, period, F::zero())?;
        Ok(Self::from_fn(|category| CycleSpec {
            name: category.label().to_string(),
            ..template.clone()
        }))
    }

    /// Component for one category.
    pub fn component(&self, category: RiskCategory) -> &CycleSpec<F> {
        &self.components[category as usize]
    }

    /// Replaces the component for one category.
    pub fn set(&mut self, category: RiskCategory, cycle: CycleSpec<F>) {
        self.components[category as usize] = cycle;
    }

    /// Components in canonical category order.
    pub fn cycles(&self) -> &[CycleSpec<F>] {
        &self.components
    }

    /// Instantaneous total risk: the sum of all seven contributions at `t`.
    pub fn total_risk(&self, t: F) -> F {
        superpose(&self.components, t)
    }

    /// Peak aggregate: the sum of the seven amplitudes.
    pub fn static_aggregate(&self) -> F {
        self.components
            .iter()
            .fold(F::zero(), |acc, c| acc + c.amplitude)
    }
}

/// Maps an aggregate forcing amplitude onto the control parameter.
pub trait AmplitudeToLambda<F> {
    /// Control parameter for the given amplitude; always inside the valid
    /// lambda range of the implementation.
    fn lambda_for(&self, amplitude: F) -> F;
}

/// Affine amplitude-to-lambda calibration with clamping at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration<F> {
    /// Amplitude mapped to `lambda_min`.
    pub amplitude_min: F,
    /// Amplitude mapped to `lambda_max`.
    pub amplitude_max: F,
    /// Lower end of the produced parameter range.
    pub lambda_min: F,
    /// Upper end of the produced parameter range.
    pub lambda_max: F,
}

impl<F: Real> Calibration<F> {
    /// Builds a calibration, validating both spans.
    pub fn new(amplitude_min: F, amplitude_max: F, lambda_min: F, lambda_max: F) -> Result<Self> {
        if !(amplitude_min.is_finite() && amplitude_max.is_finite() && amplitude_min < amplitude_max)
        {
            return Err(Error::InvalidCalibration {
                reason: format!(
                    "amplitude span [{}, {}] must be finite and increasing",
                    amplitude_min.as_f64(),
                    amplitude_max.as_f64()
                ),
            });
        }
        let lambda_ok = lambda_min >= F::zero()
            && lambda_max <= F::of(4.0)
            && lambda_min < lambda_max;
        if !lambda_ok {
            return Err(Error::InvalidCalibration {
                reason: format!(
                    "lambda span [{}, {}] must satisfy 0 <= min < max <= 4",
                    lambda_min.as_f64(),
                    lambda_max.as_f64()
                ),
            });
        }
        Ok(Self {
            amplitude_min,
            amplitude_max,
            lambda_min,
            lambda_max,
        })
    }

    /// Affine map of `amplitude` onto the lambda span, clamped at both ends.
    pub fn map_to_lambda(&self, amplitude: F) -> F {
        let fraction =
            (amplitude - self.amplitude_min) / (self.amplitude_max - self.amplitude_min);
        let lambda = self.lambda_min + (self.lambda_max - self.lambda_min) * fraction;
        lambda.max(self.lambda_min).min(self.lambda_max)
    }
}

impl<F: Real> Default for Calibration<F> {
    /// Aggregate amplitudes in [0, 1] span lambda in [2.5, 4.0]: from the
    /// fixed-point regime through the full cascade.
    fn default() -> Self {
        Self {
            amplitude_min: F::of(defaults::CALIBRATION_AMPLITUDE_MIN),
            amplitude_max: F::of(defaults::CALIBRATION_AMPLITUDE_MAX),
            lambda_min: F::of(defaults::CALIBRATION_LAMBDA_MIN),
            lambda_max: F::of(defaults::CALIBRATION_LAMBDA_MAX),
        }
    }
}

impl<F: Real> AmplitudeToLambda<F> for Calibration<F> {
    fn lambda_for(&self, amplitude: F) -> F {
        self.map_to_lambda(amplitude)
    }
}

/// One point of a forcing trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrivePoint<F> {
    /// Time in years.
    pub t: F,
    /// Superposed aggregate amplitude at `t`.
    pub amplitude: F,
    /// Calibrated control parameter at `t`.
    pub lambda: F,
}

/// Evaluates the superposition on a time grid and calibrates each amplitude.
pub fn drive<F: Real>(
    cycles: &[CycleSpec<F>],
    calibration: &impl AmplitudeToLambda<F>,
    t_grid: &[F],
) -> Vec<DrivePoint<F>> {
    t_grid
        .iter()
        .map(|&t| {
            let amplitude = superpose(cycles, t);
            DrivePoint {
                t,
                amplitude,
                lambda: calibration.lambda_for(amplitude),
            }
        })
        .collect()
}
