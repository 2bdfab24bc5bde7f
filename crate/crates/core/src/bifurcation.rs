//! Bifurcation diagrams, period detection, the doubling cascade, and crises.
//!
//! A sweep evaluates one orbit per grid value of the control parameter and
//! keeps the post-transient samples as one diagram row. On top of the raw rows
//! the module extracts the structure that matters for stability analysis:
//!
//! * the period of each attractor (smallest shift under which the samples
//!   repeat within tolerance),
//! * the parameter values where the period doubles (1→2 at λ = 3, 2→4 at
//!   λ = 1 + √6 ≈ 3.4495, then 3.5441, 3.5644, ...), located by bisection,
//! * the accumulation point of that cascade via first-order extrapolation with
//!   the interval ratio δ (Feigenbaum's constant, ≈ 4.669, for the true limit),
//! * sudden expansions of the chaotic attractor (crises), found by watching the
//!   measure of the occupied part of the unit interval jump between adjacent
//!   rows.
//!
//! Near a doubling the dynamics suffer critical slowing: at parameter distance
//! ε from the transition the multiplier is 1 - O(ε), so settling takes ~1/ε
//! steps and an under-converged orbit of period p masquerades as period 2p
//! (its deviation from the cycle alternates sign). The locator therefore probes
//! with a transient matched to the bisection resolution and only trusts a
//! verdict that survives a transient doubling unchanged.

use serde::Serialize;

use crate::defaults;
use crate::dynamics::LogisticMap;
use crate::error::{Error, Result};
use crate::float::Real;

/// Coarse scan step used to bracket a doubling transition before bisection.
const SCAN_STEP: f64 = 0.02;

/// Cap on automatic transient doublings while a period verdict is unsettled.
const MAX_TRANSIENT_DOUBLINGS: usize = 6;

/// Per-resolution transient scale for doubling probes: resolving structure at
/// parameter distance ε needs ~10/ε iterations of settling.
const PROBE_TRANSIENT_SCALE: f64 = 10.0;

/// Parameters of one diagram sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig<F> {
    /// Lower end of the control-parameter range (inclusive).
    pub lambda_min: F,
    /// Upper end of the control-parameter range (inclusive).
    pub lambda_max: F,
    /// Number of evenly spaced grid values, endpoints included.
    pub grid_points: usize,
    /// Warm-up steps discarded per row.
    pub transient_len: usize,
    /// Samples kept per row.
    pub sample_len: usize,
    /// Seed state shared by every row.
    pub x0: F,
}

impl<F: Real> SweepConfig<F> {
    /// Sweep over `[lambda_min, lambda_max]` with default orbit parameters.
    pub fn new(lambda_min: F, lambda_max: F, grid_points: usize) -> Result<Self> {
        let config = Self {
            lambda_min,
            lambda_max,
            grid_points,
            transient_len: defaults::TRANSIENT_LEN,
            sample_len: defaults::SAMPLE_LEN,
            x0: F::of(defaults::X0),
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks range, grid, and seed; every public entry point calls this.
    pub fn validate(&self) -> Result<()> {
        let ok_range = self.lambda_min >= F::zero()
            && self.lambda_max <= F::of(4.0)
            && self.lambda_min < self.lambda_max;
        if !ok_range || self.grid_points < 2 {
            return Err(Error::InvalidSweepRange {
                lambda_min: self.lambda_min.as_f64(),
                lambda_max: self.lambda_max.as_f64(),
                grid_points: self.grid_points,
            });
        }
        if self.sample_len == 0 {
            return Err(Error::ZeroSampleLen);
        }
        crate::dynamics::check_state(self.x0)
    }

    /// Grid value `i` of `grid_points`; the last index returns `lambda_max`
    /// exactly so rounding can never push a row outside the valid range.
    fn grid_lambda(&self, i: usize) -> F {
        if i + 1 == self.grid_points {
            return self.lambda_max;
        }
        let span = self.lambda_max - self.lambda_min;
        self.lambda_min + span * F::of_usize(i) / F::of_usize(self.grid_points - 1)
    }
}

/// One diagram row: the sampled attractor at a single parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<F> {
    /// Control parameter of this row.
    pub lambda: F,
    /// Post-transient orbit samples.
    pub samples: Vec<F>,
}

impl<F: Real> SweepRow<F> {
    /// Full span `max - min` of the samples.
    pub fn width(&self) -> F {
        let mut lo = F::infinity();
        let mut hi = F::neg_infinity();
        for &x in &self.samples {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if self.samples.is_empty() {
            F::zero()
        } else {
            hi - lo
        }
    }

    /// Measure of the occupied part of `[0, 1]` at a fixed bin resolution:
    /// the fraction of `bins` equal cells hit by at least one sample. Unlike
    /// [`Self::width`] this is discontinuous at a crisis, where a handful of
    /// narrow bands suddenly fill the interval between them.
    pub fn support_width(&self, bins: usize) -> F {
        assert!(bins > 0, "support measurement needs at least one bin");
        let mut occupied = vec![false; bins];
        let scale = F::of_usize(bins);
        for &x in &self.samples {
            let idx = (x * scale)
                .floor()
                .to_usize()
                .unwrap_or(0)
                .min(bins - 1);
            occupied[idx] = true;
        }
        let count = occupied.iter().filter(|&&b| b).count();
        F::of_usize(count) / scale
    }

    /// Number of attractor bands: clusters of sorted samples separated by
    /// gaps wider than `merge_gap`. Empty rows have zero bands.
    pub fn band_count(&self, merge_gap: F) -> usize {
        if self.samples.is_empty() {
            return 0;
        }
        let mut sorted = self.samples.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("orbit samples are never NaN"));
        1 + sorted.windows(2).filter(|w| w[1] - w[0] > merge_gap).count()
    }

    /// Periodicity verdict for this row's samples.
    pub fn period(&self, tolerance: F, max_period: usize) -> Result<PeriodVerdict<F>> {
        detect_period(&self.samples, tolerance, max_period)
    }
}

/// Result of period detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodVerdict<F> {
    /// Detected periodicity.
    pub kind: PeriodKind,
    /// Absolute tolerance the verdict was taken at.
    pub tolerance: F,
}

/// Periodic with the smallest verified period, or aperiodic up to the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodKind {
    Periodic(usize),
    Aperiodic,
}

impl PeriodKind {
    /// The period when periodic.
    pub fn period(&self) -> Option<usize> {
        match self {
            PeriodKind::Periodic(p) => Some(*p),
            PeriodKind::Aperiodic => None,
        }
    }
}

impl std::fmt::Display for PeriodKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PeriodKind::Periodic(p) => write!(f, "period {p}"),
            PeriodKind::Aperiodic => f.write_str("aperiodic"),
        }
    }
}

/// One sudden attractor expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrisisRecord<F> {
    /// First row at which the bands are observed merged.
    pub lambda: F,
    /// Smallest occupied-support measure over the trailing baseline window.
    pub width_before: F,
    /// Largest occupied-support measure over the forward settling window.
    pub width_after: F,
}

/// A full sweep product: raw rows plus derived structure.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDiagram<F> {
    /// One row per grid value, in ascending parameter order.
    pub rows: Vec<SweepRow<F>>,
    /// Located period-doubling parameters, ascending; empty when the range
    /// brackets none.
    pub doubling_points: Vec<F>,
    /// Cascade accumulation estimate; present when at least three doubling
    /// points were located.
    pub accumulation_estimate: Option<F>,
    /// Detected crises, ascending.
    pub crises: Vec<CrisisRecord<F>>,
}

/// Borrowed summary of the derived structure, shaped for JSON export.
#[derive(Debug, Serialize)]
pub struct DiagramSummary<'a, F> {
    pub doubling_points: &'a [F],
    pub accumulation_estimate: Option<F>,
    pub crises: &'a [CrisisRecord<F>],
}

impl<F: Real> BifurcationDiagram<F> {
    /// Summary view over the derived fields.
    pub fn summary(&self) -> DiagramSummary<'_, F> {
        DiagramSummary {
            doubling_points: &self.doubling_points,
            accumulation_estimate: self.accumulation_estimate,
            crises: &self.crises,
        }
    }
}

/// Smallest period `p <= max_period` under which the samples repeat:
/// `|samples[i] - samples[i + p]| < tolerance` for every valid `i`. A period
/// must be verified by at least one comparison, so a single sample is
/// aperiodic by definition.
pub fn detect_period<F: Real>(
    samples: &[F],
    tolerance: F,
    max_period: usize,
) -> Result<PeriodVerdict<F>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(tolerance > F::zero()) {
        return Err(Error::NonPositiveTolerance {
            tolerance: tolerance.as_f64(),
        });
    }
    let cap = max_period.min(samples.len().saturating_sub(1));
    for p in 1..=cap {
        if (0..samples.len() - p).all(|i| (samples[i] - samples[i + p]).abs() < tolerance) {
            return Ok(PeriodVerdict {
                kind: PeriodKind::Periodic(p),
                tolerance,
            });
        }
    }
    Ok(PeriodVerdict {
        kind: PeriodKind::Aperiodic,
        tolerance,
    })
}

/// Period verdict that survived a transient doubling unchanged. Starts at
/// `base_transient`, doubles (up to a cap) while consecutive verdicts
/// disagree, and returns the first repeated verdict.
fn settled_period<F: Real>(
    map: &LogisticMap<F>,
    x0: F,
    base_transient: usize,
    sample_len: usize,
    tolerance: F,
    max_period: usize,
) -> Result<PeriodKind> {
    let verdict = |transient: usize| -> Result<PeriodKind> {
        let orbit = map.iterate(x0, transient, sample_len)?;
        Ok(detect_period(orbit.samples(), tolerance, max_period)?.kind)
    };
    let mut transient = base_transient.max(1);
    let mut previous = verdict(transient)?;
    for _ in 0..MAX_TRANSIENT_DOUBLINGS {
        transient *= 2;
        let current = verdict(transient)?;
        if current == previous {
            return Ok(current);
        }
        previous = current;
    }
    Ok(previous)
}

/// Locates parameters where the attractor period doubles, by bisection on the
/// settled period, at resolution [`defaults::DOUBLING_RESOLUTION`].
///
/// The hunt starts from the settled period at `lambda_min` (which must be a
/// power of two) and walks the cascade upward. It stops early when the next
/// transition is not bracketed below `lambda_max`; the located points are
/// returned as long as there is at least one, otherwise the unbracketed
/// transition is reported as an error.
pub fn find_doubling_points<F: Real>(
    config: &SweepConfig<F>,
    max_doublings: usize,
) -> Result<Vec<F>> {
    config.validate()?;
    if max_doublings == 0 {
        return Ok(Vec::new());
    }

    let resolution = F::of(defaults::DOUBLING_RESOLUTION);
    let tolerance = F::of(defaults::PERIOD_TOLERANCE);
    let sample_len = config.sample_len.max(defaults::SAMPLE_LEN);
    let base_transient = config
        .transient_len
        .max((PROBE_TRANSIENT_SCALE / defaults::DOUBLING_RESOLUTION) as usize);
    let probe = |lambda: F| -> Result<PeriodKind> {
        let map = LogisticMap::new(lambda)?;
        settled_period(
            &map,
            config.x0,
            base_transient,
            sample_len,
            tolerance,
            defaults::MAX_PERIOD,
        )
    };

    let mut period = match probe(config.lambda_min)? {
        PeriodKind::Periodic(p) if p.is_power_of_two() => p,
        other => {
            return Err(Error::NotPowerOfTwoAtStart {
                lambda: config.lambda_min.as_f64(),
                found: other.to_string(),
            })
        }
    };

    let scan_step = F::of(SCAN_STEP);
    let mut points = Vec::new();
    let mut lo = config.lambda_min;
    for transition in 1..=max_doublings {
        // Bracket: walk upward until the settled period exceeds the current one.
        let mut hi = None;
        let mut next = lo + scan_step;
        loop {
            let lambda = if next > config.lambda_max {
                config.lambda_max
            } else {
                next
            };
            match probe(lambda)? {
                PeriodKind::Periodic(p) if p <= period => lo = lambda,
                _ => {
                    hi = Some(lambda);
                    break;
                }
            }
            if lambda >= config.lambda_max {
                break;
            }
            next = lambda + scan_step;
        }
        let Some(mut hi) = hi else {
            if points.is_empty() {
                return Err(Error::TransitionNotBracketed {
                    transition,
                    lambda_max: config.lambda_max.as_f64(),
                });
            }
            break;
        };

        // Bisect on "settled period still <= current period".
        while hi - lo > resolution {
            let mid = (lo + hi) * F::of(0.5);
            match probe(mid)? {
                PeriodKind::Periodic(p) if p <= period => lo = mid,
                _ => hi = mid,
            }
        }
        points.push((lo + hi) * F::of(0.5));

        // The upper bracket end sits just past the transition and carries the
        // doubled period; it seeds the next hunt.
        lo = hi;
        period *= 2;
    }
    Ok(points)
}

/// Interval-ratio estimate `(p[n-1] - p[n-2]) / (p[n] - p[n-1])` from the last
/// three located doubling points; approaches Feigenbaum's δ ≈ 4.669 as the
/// cascade deepens.
pub fn feigenbaum_ratio<F: Real>(points: &[F]) -> Result<F> {
    if points.len() < 3 {
        return Err(Error::InsufficientDoublings { got: points.len() });
    }
    if !points.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::NonIncreasingDoublings);
    }
    let n = points.len();
    Ok((points[n - 2] - points[n - 3]) / (points[n - 1] - points[n - 2]))
}

/// First-order extrapolation of the cascade accumulation point:
/// `p[n] + (p[n] - p[n-1]) / (δ - 1)` with δ the measured interval ratio.
pub fn estimate_accumulation<F: Real>(points: &[F]) -> Result<F> {
    let ratio = feigenbaum_ratio(points)?;
    if !(ratio > F::one()) {
        return Err(Error::NonContractingCascade {
            ratio: ratio.as_f64(),
        });
    }
    let n = points.len();
    let last = points[n - 1];
    Ok(last + (last - points[n - 2]) / (ratio - F::one()))
}

/// Crisis detection parameters; see [`CrisisDetector::detect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrisisDetector<F> {
    /// Rows at or below this parameter are never flagged; below the cascade
    /// accumulation there is no chaotic attractor to expand.
    pub chaos_onset: F,
    /// Settled-to-baseline support ratio that counts as a jump.
    pub jump_threshold: F,
    /// Absolute support increase required in addition to the ratio; filters
    /// microscopic expansions of a still-narrow support.
    pub min_width_jump: F,
    /// Bin resolution for the occupied-support measure.
    pub bins: usize,
    /// Sample gap above which two samples belong to different bands.
    pub merge_gap: F,
    /// Rows examined on each side of a candidate when comparing the banded
    /// baseline support (minimum before) with the merged support (maximum
    /// after); evens out sampling noise in both regimes.
    pub window_rows: usize,
    /// Consecutive multi-band rows required after a detection before another
    /// crisis may be flagged; brief re-splits just past a crisis are sampling
    /// noise, while a genuine new banded regime persists.
    pub rearm_rows: usize,
}

impl<F: Real> Default for CrisisDetector<F> {
    fn default() -> Self {
        Self {
            chaos_onset: F::of(defaults::CHAOS_ONSET_LAMBDA),
            jump_threshold: F::of(defaults::CRISIS_JUMP_THRESHOLD),
            min_width_jump: F::of(defaults::CRISIS_MIN_WIDTH_JUMP),
            bins: defaults::CRISIS_BINS,
            merge_gap: F::of(defaults::CRISIS_MERGE_GAP),
            window_rows: defaults::CRISIS_WINDOW_ROWS,
            rearm_rows: defaults::CRISIS_REARM_ROWS,
        }
    }
}

impl<F: Real> CrisisDetector<F> {
    /// Flags attractor-merging crises: rows where the band count drops to one
    /// from at least two and the occupied support expands past the thresholds.
    ///
    /// The band-count condition is what separates a crisis from the other
    /// support discontinuities a chaotic region produces. Interior doublings,
    /// chaos onsets inside periodic windows, and partial band merges all leave
    /// two or more bands behind; only the final merge releases the orbit into
    /// one contiguous band. The support jump is measured between the smallest
    /// support in a trailing window (the banded baseline) and the largest in a
    /// forward window (the merged attractor after intermittent filling), since
    /// single-row comparisons are noisy on both sides of the transition.
    pub fn detect(&self, rows: &[SweepRow<F>]) -> Vec<CrisisRecord<F>> {
        if rows.len() < 2 {
            return Vec::new();
        }
        let supports: Vec<F> = rows.iter().map(|r| r.support_width(self.bins)).collect();
        let bands: Vec<usize> = rows.iter().map(|r| r.band_count(self.merge_gap)).collect();

        let window = self.window_rows.max(1);
        let mut crises = Vec::new();
        let mut armed = true;
        let mut multi_band_run = 0usize;
        for i in 1..rows.len() {
            if bands[i] >= 2 {
                multi_band_run += 1;
                if !armed && multi_band_run >= self.rearm_rows {
                    armed = true;
                }
            } else {
                multi_band_run = 0;
            }

            let merged_here = bands[i] == 1 && bands[i - 1] >= 2;
            if !(armed && merged_here && rows[i].lambda > self.chaos_onset) {
                continue;
            }
            let before = supports[i.saturating_sub(window)..i]
                .iter()
                .copied()
                .fold(F::infinity(), F::min);
            let after = supports[i..(i + window).min(rows.len())]
                .iter()
                .copied()
                .fold(F::neg_infinity(), F::max);
            if after > before * self.jump_threshold && after - before > self.min_width_jump {
                crises.push(CrisisRecord {
                    lambda: rows[i].lambda,
                    width_before: before,
                    width_after: after,
                });
                armed = false;
            }
        }
        crises
    }
}

/// [`CrisisDetector::detect`] with default settings and the given support
/// ratio.
pub fn detect_crises<F: Real>(rows: &[SweepRow<F>], jump_threshold: F) -> Vec<CrisisRecord<F>> {
    CrisisDetector {
        jump_threshold,
        ..CrisisDetector::default()
    }
    .detect(rows)
}

/// Runs the full sweep and fills in the derived structure.
///
/// Doubling points and the accumulation estimate are left empty when the range
/// brackets no transition; crisis detection then falls back to the default
/// chaos-onset boundary so that a purely chaotic range is still scanned.
pub fn sweep<F: Real>(config: &SweepConfig<F>) -> Result<BifurcationDiagram<F>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.grid_points);
    for i in 0..config.grid_points {
        let lambda = config.grid_lambda(i);
        let map = LogisticMap::new(lambda)?;
        let orbit = map.iterate(config.x0, config.transient_len, config.sample_len)?;
        rows.push(SweepRow {
            lambda,
            samples: orbit.samples,
        });
    }

    let doubling_points =
        find_doubling_points(config, defaults::MAX_DOUBLINGS).unwrap_or_default();
    let accumulation_estimate = if doubling_points.len() >= 3 {
        Some(estimate_accumulation(&doubling_points)?)
    } else {
        None
    };

    let mut detector = CrisisDetector::default();
    if let Some(accumulation) = accumulation_estimate {
        detector.chaos_onset = accumulation;
    }
    let crises = detector.detect(&rows);

    Ok(BifurcationDiagram {
        rows,
        doubling_points,
        accumulation_estimate,
        crises,
    })
}
