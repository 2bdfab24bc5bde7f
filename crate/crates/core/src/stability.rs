//! Firm stability across the eight theory-of-the-firm channels.
//!
//! Each channel models the firm variable singled out by one theory of the firm
//! as its own quadratic map. A channel's *stability magnitude* is the negated
//! Lyapunov exponent of that map (contraction is stability, so bigger is
//! safer); superstable channels whose derivative average saturated report a
//! configured cap instead of the floored logarithm.
//!
//! The firm-level verdict follows a pairwise closeness criterion: for every
//! pair of channels, two trajectories started a small offset apart must stay
//! within `epsilon` of each other over the whole evaluation horizon, in both
//! channels of the pair. A pair that survives the finite horizon but contains
//! a channel with a clearly positive exponent is demoted to unstable, since
//! the finite run merely failed to witness the divergence. The firm is stable
//! when all 28 pairs hold, and the total stability is the sum of the eight
//! magnitudes in canonical enumeration order (kept bit-exact by fixing the
//! summation order).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::dynamics::LogisticMap;
use crate::error::{Error, Result};
use crate::float::Real;
use crate::lyapunov::{self, LyapunovEstimate};

/// The eight theories of the firm, in canonical enumeration order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    ClassicalOrganization,
    NeoclassicalOrganization,
    TransactionCost,
    Managerial,
    PrincipalAgent,
    Behavioural,
    Evolutionary,
    Environment,
}

impl Theory {
    /// All theories in enumeration order.
    pub const ALL: [Theory; 8] = [
        Theory::ClassicalOrganization,
        Theory::NeoclassicalOrganization,
        Theory::TransactionCost,
        Theory::Managerial,
        Theory::PrincipalAgent,
        Theory::Behavioural,
        Theory::Evolutionary,
        Theory::Environment,
    ];

    /// Stable snake_case label.
    pub fn label(&self) -> &'static str {
        match self {
            Theory::ClassicalOrganization => "classical_organization",
            Theory::NeoclassicalOrganization => "neoclassical_organization",
            Theory::TransactionCost => "transaction_cost",
            Theory::Managerial => "managerial",
            Theory::PrincipalAgent => "principal_agent",
            Theory::Behavioural => "behavioural",
            Theory::Evolutionary => "evolutionary",
            Theory::Environment => "environment",
        }
    }

    /// Inverse of [`Self::label`].
    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.label() == label)
    }

    /// Position in enumeration order.
    pub fn index(&self) -> usize {
        *self as usize
    }
}

impl std::fmt::Display for Theory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One firm variable under one theory's lens.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryChannel<F> {
    /// Theory this channel represents.
    pub theory: Theory,
    /// Dynamics of the channel's firm variable.
    pub map: LogisticMap<F>,
    /// Start state of the channel.
    pub x0: F,
    /// Exponent estimate, filled by the evaluation.
    pub exponent: Option<LyapunovEstimate<F>>,
}

impl<F: Real> TheoryChannel<F> {
    /// Builds a channel; the start state must lie in the unit interval.
    pub fn new(theory: Theory, map: LogisticMap<F>, x0: F) -> Result<Self> {
        crate::dynamics::check_state(x0)?;
        Ok(Self {
            theory,
            map,
            x0,
            exponent: None,
        })
    }

    /// Builds the map from a raw control parameter first.
    pub fn from_lambda(theory: Theory, lambda: F, x0: F) -> Result<Self> {
        Self::new(theory, LogisticMap::new(lambda)?, x0)
    }
}

/// Evaluation horizon of the pairwise criterion.
///
/// Serialized names match [`Horizon::fmt`]; the derive's snake_case rule
/// would drop the underscore before the digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Horizon {
    /// One business year of steps.
    #[serde(rename = "short_1y")]
    Short1y,
    /// Up to three business years of steps.
    #[serde(rename = "long_3y")]
    Long3y,
}

impl std::fmt::Display for Horizon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Horizon::Short1y => "short_1y",
            Horizon::Long3y => "long_3y",
        })
    }
}

/// Knobs of a firm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaluationParams<F> {
    /// Iterations averaged per channel exponent.
    pub exponent_iterations: usize,
    /// Transient discarded before each exponent average.
    pub exponent_transient: usize,
    /// Initial offset between the paired trajectories.
    pub delta0: F,
    /// Separation the paired trajectories must stay below.
    pub epsilon: F,
    /// Horizon the report is evaluated at.
    pub horizon: Horizon,
    /// Steps in the short horizon.
    pub short_steps: usize,
    /// Steps in the long horizon.
    pub long_steps: usize,
    /// Band around zero inside which an exponent does not demote a pair.
    pub zero_band: F,
    /// Magnitude reported for saturated (superstable) channels.
    pub saturation_cap: F,
}

impl<F: Real> Default for EvaluationParams<F> {
    fn default() -> Self {
        Self {
            exponent_iterations: defaults::LYAPUNOV_ITERATIONS,
            exponent_transient: defaults::LYAPUNOV_TRANSIENT,
            delta0: F::of(defaults::PAIR_DELTA0),
            epsilon: F::of(defaults::PAIR_EPSILON),
            horizon: Horizon::Short1y,
            short_steps: defaults::SHORT_HORIZON_STEPS,
            long_steps: defaults::LONG_HORIZON_STEPS,
            zero_band: F::of(defaults::ZERO_BAND),
            saturation_cap: F::of(defaults::SATURATION_CAP),
        }
    }
}

impl<F: Real> EvaluationParams<F> {
    /// Steps of the selected horizon.
    pub fn horizon_steps(&self) -> usize {
        match self.horizon {
            Horizon::Short1y => self.short_steps,
            Horizon::Long3y => self.long_steps,
        }
    }

    /// Validates the cross-field constraints.
    pub fn validate(&self) -> Result<()> {
        if !(self.delta0 > F::zero()) {
            return Err(Error::InvalidPerturbation {
                delta0: self.delta0.as_f64(),
            });
        }
        if !(self.epsilon > self.delta0) {
            return Err(Error::EpsilonNotAboveDelta {
                epsilon: self.epsilon.as_f64(),
                delta0: self.delta0.as_f64(),
            });
        }
        if self.exponent_iterations == 0 {
            return Err(Error::TooFewIterations {
                n: self.exponent_iterations,
                min: 1,
            });
        }
        if self.horizon_steps() == 0 {
            return Err(Error::TooFewIterations { n: 0, min: 1 });
        }
        Ok(())
    }
}

/// Derivative-average exponent of one channel.
pub fn channel_exponent<F: Real>(
    channel: &TheoryChannel<F>,
    params: &EvaluationParams<F>,
) -> Result<LyapunovEstimate<F>> {
    lyapunov::lyapunov_derivative(
        &channel.map,
        channel.x0,
        params.exponent_transient,
        params.exponent_iterations,
    )
}

/// Stability magnitude of an exponent estimate: the negated exponent, or the
/// saturation cap when the estimate bottomed out on the derivative floor.
pub fn magnitude_of<F: Real>(estimate: &LyapunovEstimate<F>, saturation_cap: F) -> F {
    if estimate.saturated_low {
        saturation_cap
    } else {
        -estimate.exponent
    }
}

/// Stability magnitude of one channel.
pub fn channel_magnitude<F: Real>(
    channel: &TheoryChannel<F>,
    params: &EvaluationParams<F>,
) -> Result<F> {
    let estimate = channel_exponent(channel, params)?;
    Ok(magnitude_of(&estimate, params.saturation_cap))
}

/// True when two trajectories of this channel started `delta0` apart stay
/// within `epsilon` of each other for every one of `horizon_steps` steps.
fn keeps_trajectories_close<F: Real>(
    channel: &TheoryChannel<F>,
    delta0: F,
    epsilon: F,
    horizon_steps: usize,
) -> bool {
    let mut x = channel.x0;
    let mut y = lyapunov::offset_within_unit(channel.x0, delta0, true);
    for _ in 0..horizon_steps {
        x = channel.map.step_unchecked(x);
        y = channel.map.step_unchecked(y);
        if (y - x).abs() >= epsilon {
            return false;
        }
    }
    true
}

/// Pairwise closeness criterion: both channels must keep their perturbed
/// trajectories within `epsilon` over the horizon. Symmetric in its arguments
/// by construction, since each channel is tested on its own.
pub fn pairwise_stable<F: Real>(
    a: &TheoryChannel<F>,
    b: &TheoryChannel<F>,
    delta0: F,
    epsilon: F,
    horizon_steps: usize,
) -> Result<bool> {
    if !(delta0 > F::zero()) {
        return Err(Error::InvalidPerturbation {
            delta0: delta0.as_f64(),
        });
    }
    if !(epsilon > delta0) {
        return Err(Error::EpsilonNotAboveDelta {
            epsilon: epsilon.as_f64(),
            delta0: delta0.as_f64(),
        });
    }
    if horizon_steps == 0 {
        return Err(Error::TooFewIterations { n: 0, min: 1 });
    }
    Ok(keeps_trajectories_close(a, delta0, epsilon, horizon_steps)
        && keeps_trajectories_close(b, delta0, epsilon, horizon_steps))
}

/// One channel as reported: dynamics, filled exponent, and magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelReport<F> {
    pub theory: Theory,
    pub lambda: F,
    pub x0: F,
    pub exponent: LyapunovEstimate<F>,
    pub magnitude: F,
}

/// Verdict for one unordered channel pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    /// Lower-indexed theory of the pair.
    pub a: Theory,
    /// Higher-indexed theory of the pair.
    pub b: Theory,
    /// Final verdict, including any demotion.
    pub stable: bool,
    /// True when the pair held over the horizon but a positive channel
    /// exponent overruled it.
    pub demoted_by_exponent: bool,
}

/// Full firm evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirmStabilityReport<F> {
    /// Channels in enumeration order with filled exponents.
    pub channels: Vec<ChannelReport<F>>,
    /// Theory-keyed magnitudes; iteration follows enumeration order.
    pub magnitudes: BTreeMap<Theory, F>,
    /// All 28 unordered pairs, enumeration-ordered with `a < b`.
    pub pairwise: Vec<PairVerdict>,
    /// Conjunction of all pairwise verdicts.
    pub firm_stable: bool,
    /// Sum of the eight magnitudes in enumeration order.
    pub total_stability: F,
    /// Horizon the pairwise criterion ran over.
    pub horizon: Horizon,
}

impl<F: Real> FirmStabilityReport<F> {
    /// Verdict for an unordered pair; order of the arguments does not matter.
    pub fn pair(&self, a: Theory, b: Theory) -> Option<&PairVerdict> {
        let (lo, hi) = if a.index() <= b.index() { (a, b) } else { (b, a) };
        self.pairwise
            .iter()
            .find(|p| p.a == lo && p.b == hi)
    }

    /// Magnitude of one theory's channel.
    pub fn magnitude(&self, theory: Theory) -> Option<F> {
        self.magnitudes.get(&theory).copied()
    }
}

/// Evaluates the firm: exactly one channel per theory, pairwise closeness over
/// the configured horizon, exponent-sign demotion, and the summed total.
pub fn evaluate_firm<F: Real>(
    channels: &[TheoryChannel<F>],
    params: &EvaluationParams<F>,
) -> Result<FirmStabilityReport<F>> {
    params.validate()?;

    let mut by_theory: [Option<&TheoryChannel<F>>; 8] = [None; 8];
    for channel in channels {
        let slot = &mut by_theory[channel.theory.index()];
        if slot.is_some() {
            return Err(Error::DuplicateTheory(channel.theory));
        }
        *slot = Some(channel);
    }
    let mut ordered = Vec::with_capacity(8);
    for theory in Theory::ALL {
        match by_theory[theory.index()] {
            Some(channel) => ordered.push(channel),
            None => return Err(Error::MissingTheory(theory)),
        }
    }

    let horizon_steps = params.horizon_steps();
    let mut reports = Vec::with_capacity(8);
    let mut magnitudes = BTreeMap::new();
    let mut close = [false; 8];
    let mut divergent = [false; 8];
    for (i, channel) in ordered.iter().enumerate() {
        let estimate = channel_exponent(channel, params)?;
        let magnitude = magnitude_of(&estimate, params.saturation_cap);
        close[i] =
            keeps_trajectories_close(channel, params.delta0, params.epsilon, horizon_steps);
        divergent[i] = !estimate.saturated_low && estimate.exponent > params.zero_band;
        reports.push(ChannelReport {
            theory: channel.theory,
            lambda: channel.map.lambda(),
            x0: channel.x0,
            exponent: estimate,
            magnitude,
        });
        magnitudes.insert(channel.theory, magnitude);
    }

    let mut pairwise = Vec::with_capacity(28);
    let mut firm_stable = true;
    for i in 0..8 {
        for j in (i + 1)..8 {
            let held = close[i] && close[j];
            let demoted = held && (divergent[i] || divergent[j]);
            let stable = held && !demoted;
            firm_stable &= stable;
            pairwise.push(PairVerdict {
                a: Theory::ALL[i],
                b: Theory::ALL[j],
                stable,
                demoted_by_exponent: demoted,
            });
        }
    }

    // Enumeration-ordered summation keeps the total bit-for-bit reproducible.
    let total_stability = Theory::ALL
        .iter()
        .fold(F::zero(), |acc, t| acc + magnitudes[t]);

    Ok(FirmStabilityReport {
        channels: reports,
        magnitudes,
        pairwise,
        firm_stable,
        total_stability,
        horizon: params.horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn channel(theory: Theory, lambda: f64) -> TheoryChannel<f64> {
        TheoryChannel::from_lambda(theory, lambda, 0.371).unwrap()
    }

    fn quick_params() -> EvaluationParams<f64> {
        EvaluationParams {
            exponent_iterations: 20_000,
            exponent_transient: 1000,
            short_steps: 5000,
            ..EvaluationParams::default()
        }
    }

    fn uniform_channels(lambda: f64) -> Vec<TheoryChannel<f64>> {
        Theory::ALL.map(|t| channel(t, lambda)).to_vec()
    }

    #[test]
    fn theory_labels_round_trip_in_order() {
        let labels: Vec<&str> = Theory::ALL.iter().map(|t| t.label()).collect();
        assert_eq!(
            labels,
            vec![
                "classical_organization",
                "neoclassical_organization",
                "transaction_cost",
                "managerial",
                "principal_agent",
                "behavioural",
                "evolutionary",
                "environment",
            ]
        );
        for theory in Theory::ALL {
            assert_eq!(Theory::from_label(theory.label()), Some(theory));
        }
        assert_eq!(Theory::from_label("marketing"), None);
    }

    #[test]
    fn contracting_channel_has_positive_magnitude() {
        let params = quick_params();
        let magnitude = channel_magnitude(&channel(Theory::Managerial, 2.5), &params).unwrap();
        assert!(
            (magnitude - std::f64::consts::LN_2).abs() < 1e-3,
            "got {magnitude}"
        );
    }

    #[test]
    fn marginal_channel_has_zero_magnitude() {
        // At lambda = 1 the origin is a fixed point with |f'| = 1, so every
        // log term vanishes and the magnitude is exactly zero.
        let params = quick_params();
        let ch = TheoryChannel::from_lambda(Theory::PrincipalAgent, 1.0, 0.0).unwrap();
        let magnitude = channel_magnitude(&ch, &params).unwrap();
        assert_eq!(magnitude, 0.0);
    }

    #[test]
    fn saturated_channel_reports_the_cap() {
        let params = quick_params();
        let magnitude = channel_magnitude(&channel(Theory::Behavioural, 2.0), &params).unwrap();
        assert_eq!(magnitude, 30.0);
    }

    #[test]
    fn pairwise_holds_for_two_contracting_channels() {
        let a = channel(Theory::ClassicalOrganization, 2.5);
        let b = channel(Theory::Managerial, 2.5);
        assert!(pairwise_stable(&a, &b, 1e-6, 1e-3, 10_000).unwrap());
        // Symmetry.
        assert!(pairwise_stable(&b, &a, 1e-6, 1e-3, 10_000).unwrap());
    }

    #[test]
    fn pairwise_fails_when_one_channel_is_chaotic() {
        let a = channel(Theory::ClassicalOrganization, 2.5);
        let b = channel(Theory::Managerial, 3.9);
        assert!(!pairwise_stable(&a, &b, 1e-6, 1e-3, 10_000).unwrap());
        assert!(!pairwise_stable(&b, &a, 1e-6, 1e-3, 10_000).unwrap());
    }

    #[test]
    fn pairwise_validates_inputs() {
        let a = channel(Theory::ClassicalOrganization, 2.5);
        assert!(matches!(
            pairwise_stable(&a, &a, 0.0, 1e-3, 100),
            Err(Error::InvalidPerturbation { .. })
        ));
        assert!(matches!(
            pairwise_stable(&a, &a, 1e-3, 1e-6, 100),
            Err(Error::EpsilonNotAboveDelta { .. })
        ));
        assert!(matches!(
            pairwise_stable(&a, &a, 1e-6, 1e-3, 0),
            Err(Error::TooFewIterations { .. })
        ));
    }

    #[test]
    fn evaluation_requires_exactly_one_channel_per_theory() {
        let params = quick_params();
        let seven: Vec<_> = uniform_channels(2.5).into_iter().skip(1).collect();
        assert!(matches!(
            evaluate_firm(&seven, &params),
            Err(Error::MissingTheory(Theory::ClassicalOrganization))
        ));

        let mut nine = uniform_channels(2.5);
        nine.push(channel(Theory::Environment, 2.5));
        assert!(matches!(
            evaluate_firm(&nine, &params),
            Err(Error::DuplicateTheory(Theory::Environment))
        ));
    }

    #[test]
    fn uniform_quiet_firm_is_stable() {
        let params = quick_params();
        let report = evaluate_firm(&uniform_channels(2.5), &params).unwrap();
        assert!(report.firm_stable);
        assert_eq!(report.pairwise.len(), 28);
        assert!(report.pairwise.iter().all(|p| p.stable));
        assert!(
            (report.total_stability - 8.0 * std::f64::consts::LN_2).abs() < 0.01,
            "total {}",
            report.total_stability
        );
        // The stored total is exactly the enumeration-ordered fold.
        let refold = Theory::ALL
            .iter()
            .fold(0.0, |acc, t| acc + report.magnitudes[t]);
        assert_eq!(report.total_stability, refold);
    }

    #[test]
    fn one_chaotic_channel_fails_exactly_its_seven_pairs() {
        let params = quick_params();
        let mut channels = uniform_channels(2.5);
        channels[3] = channel(Theory::Managerial, 3.9);
        let report = evaluate_firm(&channels, &params).unwrap();
        assert!(!report.firm_stable);
        let failing: Vec<_> = report.pairwise.iter().filter(|p| !p.stable).collect();
        assert_eq!(failing.len(), 7);
        assert!(failing
            .iter()
            .all(|p| p.a == Theory::Managerial || p.b == Theory::Managerial));
    }

    #[test]
    fn channel_order_does_not_change_the_report() {
        let params = quick_params();
        let forward = evaluate_firm(&uniform_channels(2.5), &params).unwrap();
        let mut reversed = uniform_channels(2.5);
        reversed.reverse();
        let backward = evaluate_firm(&reversed, &params).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn pair_lookup_is_symmetric() {
        let params = quick_params();
        let report = evaluate_firm(&uniform_channels(2.5), &params).unwrap();
        let ab = report
            .pair(Theory::Managerial, Theory::Environment)
            .unwrap();
        let ba = report
            .pair(Theory::Environment, Theory::Managerial)
            .unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.a, Theory::Managerial);
        assert_eq!(ab.b, Theory::Environment);
    }

    #[test]
    fn unstable_at_short_horizon_stays_unstable_at_long() {
        let a = channel(Theory::ClassicalOrganization, 3.9);
        let b = channel(Theory::Managerial, 2.5);
        for steps in [100usize, 1000, 10_000] {
            if !pairwise_stable(&a, &b, 1e-6, 1e-3, steps).unwrap() {
                assert!(!pairwise_stable(&a, &b, 1e-6, 1e-3, steps * 3).unwrap());
            }
        }
    }

    #[test]
    fn params_validation() {
        let params = EvaluationParams::<f64> { delta0: 0.0, ..Default::default() };
        assert!(params.validate().is_err());
        let defaults = EvaluationParams::<f64>::default();
        let params = EvaluationParams { epsilon: defaults.delta0, ..defaults };
        assert!(params.validate().is_err());
        let params = EvaluationParams::<f64> { short_steps: 0, ..Default::default() };
        assert!(params.validate().is_err());
    }
}
