//! Loading observed firm metrics and turning them into theory channels.
//!
//! Input is a plain CSV with the exact header `date,theory,value`: ISO-8601
//! dates, snake_case theory labels, finite decimal values. Rows may interleave
//! theories freely, but within each theory the dates must be strictly
//! increasing.
//!
//! A series becomes a channel in two steps. A least-squares line over
//! days-since-first-observation removes the secular trend, and half the
//! peak-to-peak range of the residuals is the series' oscillation amplitude;
//! the calibration maps that amplitude to a control parameter. The start state
//! comes from where the latest raw value sits inside the observed range,
//! rescaled into the interior band `[0.05, 0.95]` so an extreme observation
//! never pins the channel on an invariant endpoint.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;

use crate::defaults;
use crate::error::{Error, Result};
use crate::export::format_real;
use crate::float::Real;
use crate::forcing::AmplitudeToLambda;
use crate::stability::{Theory, TheoryChannel};

/// Exact header line required on metric CSV files.
pub const METRICS_HEADER: &str = "date,theory,value";

/// Date format used throughout: ISO-8601 calendar dates.
pub const DATE_FORMAT: &str = "%Y-%m-%d";

/// One theory's observed metric history.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries<F> {
    theory: Theory,
    timestamps: Vec<NaiveDate>,
    values: Vec<F>,
}

impl<F: Real> MetricSeries<F> {
    /// Builds a validated series: matching lengths, at least two observations,
    /// strictly increasing dates, finite values. Monotonicity errors report
    /// the 1-based position of the offending observation.
    pub fn new(theory: Theory, timestamps: Vec<NaiveDate>, values: Vec<F>) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch {
                theory,
                dates: timestamps.len(),
                values: values.len(),
            });
        }
        if timestamps.len() < 2 {
            return Err(Error::ShortSeries {
                theory,
                len: timestamps.len(),
            });
        }
        for (i, pair) in timestamps.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonMonotonicDates {
                    theory,
                    line: i + 2,
                });
            }
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("value for theory '{theory}' must be finite, got {v}"),
                });
            }
        }
        Ok(Self {
            theory,
            timestamps,
            values,
        })
    }

    /// Theory this series observes.
    pub fn theory(&self) -> Theory {
        self.theory
    }

    /// Observation dates, strictly increasing.
    pub fn timestamps(&self) -> &[NaiveDate] {
        &self.timestamps
    }

    /// Observed values, parallel to [`Self::timestamps`].
    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction requires at least two observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observation times as fractional days since the first observation.
    fn day_offsets(&self) -> Vec<F> {
        let first = self.timestamps[0];
        self.timestamps
            .iter()
            .map(|d| F::of((*d - first).num_days() as f64))
            .collect()
    }
}

/// Parses a metrics CSV, returning one series per theory present, in
/// enumeration order. Errors carry 1-based line numbers into the input.
pub fn parse_series<F: Real>(text: &str) -> Result<Vec<MetricSeries<F>>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r').trim() == METRICS_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{METRICS_HEADER}', got '{}'", header.trim()),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: format!("empty input; expected header '{METRICS_HEADER}'"),
            })
        }
    }

    let mut grouped: BTreeMap<Theory, (Vec<NaiveDate>, Vec<F>)> = BTreeMap::new();
    let mut rows = 0usize;
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r').trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 comma-separated fields, got {}", fields.len()),
            });
        }
        let date = NaiveDate::parse_from_str(fields[0].trim(), DATE_FORMAT).map_err(|e| {
            Error::Parse {
                line,
                message: format!("bad date '{}': {e}", fields[0].trim()),
            }
        })?;
        let name = fields[1].trim();
        let theory = Theory::from_label(name).ok_or_else(|| Error::UnknownTheory {
            line,
            name: name.to_string(),
        })?;
        let value: f64 = fields[2].trim().parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad value '{}': {e}", fields[2].trim()),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("value must be finite, got {value}"),
            });
        }

        let (dates, values) = grouped.entry(theory).or_default();
        if let Some(last) = dates.last() {
            if date <= *last {
                return Err(Error::NonMonotonicDates { theory, line });
            }
        }
        dates.push(date);
        values.push(F::of(value));
        rows += 1;
    }

    if rows == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "no data rows after header".to_string(),
        });
    }

    // BTreeMap iteration follows Theory's Ord, which is enumeration order.
    grouped
        .into_iter()
        .map(|(theory, (dates, values))| MetricSeries::new(theory, dates, values))
        .collect()
}

/// Reads and parses a metrics CSV file.
pub fn load_series<F: Real>(path: impl AsRef<Path>) -> Result<Vec<MetricSeries<F>>> {
    parse_series(&std::fs::read_to_string(path)?)
}

/// Writes series back out in the same CSV schema. Values are printed with
/// enough digits to reparse bit-for-bit.
pub fn write_series_csv<F: Real, W: Write>(w: &mut W, series: &[MetricSeries<F>]) -> Result<()> {
    writeln!(w, "{METRICS_HEADER}")?;
    for s in series {
        for (date, value) in s.timestamps.iter().zip(&s.values) {
            writeln!(
                w,
                "{},{},{}",
                date.format(DATE_FORMAT),
                s.theory.label(),
                format_real(*value)
            )?;
        }
    }
    Ok(())
}

/// Half the peak-to-peak range of the series after removing its least-squares
/// linear trend over days since the first observation.
pub fn detrended_amplitude<F: Real>(series: &MetricSeries<F>) -> F {
    let t = series.day_offsets();
    let v = &series.values;
    let n = F::of_usize(v.len());

    let sum_t = t.iter().fold(F::zero(), |a, &x| a + x);
    let sum_v = v.iter().fold(F::zero(), |a, &x| a + x);
    let sum_tt = t.iter().fold(F::zero(), |a, &x| a + x * x);
    let sum_tv = t
        .iter()
        .zip(v.iter())
        .fold(F::zero(), |a, (&ti, &vi)| a + ti * vi);

    // Dates are strictly increasing with n >= 2, so the normal-equation
    // denominator n*var(t) is strictly positive.
    let slope = (n * sum_tv - sum_t * sum_v) / (n * sum_tt - sum_t * sum_t);
    let intercept = (sum_v - slope * sum_t) / n;

    let mut lo = F::infinity();
    let mut hi = F::neg_infinity();
    for (&ti, &vi) in t.iter().zip(v.iter()) {
        let residual = vi - (intercept + slope * ti);
        lo = lo.min(residual);
        hi = hi.max(residual);
    }
    (hi - lo) / F::of(2.0)
}

/// Turns a series into a theory channel: detrended amplitude through the
/// calibration for the control parameter, and the latest observation's
/// position inside the observed range, squeezed into `[0.05, 0.95]`, for the
/// start state. Errors on constant series, whose range position is undefined.
pub fn normalize_to_calibration<F: Real>(
    series: &MetricSeries<F>,
    calibration: &impl AmplitudeToLambda<F>,
) -> Result<TheoryChannel<F>> {
    let mut min = F::infinity();
    let mut max = F::neg_infinity();
    for &v in &series.values {
        min = min.min(v);
        max = max.max(v);
    }
    if !(max > min) {
        return Err(Error::DegenerateSeries {
            theory: series.theory,
        });
    }

    let amplitude = detrended_amplitude(series);
    let lambda = calibration.lambda_for(amplitude);

    let last = *series.values.last().expect("series has >= 2 observations");
    let low = F::of(defaults::INGEST_X0_LOW);
    let high = F::of(defaults::INGEST_X0_HIGH);
    let x0 = low + (high - low) * (last - min) / (max - min);

    TheoryChannel::from_lambda(series.theory, lambda, x0)
}
