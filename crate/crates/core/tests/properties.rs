//! Property tests: invariants that must hold over whole parameter ranges, not
//! just at the handful of points the unit tests pin down.

use proptest::prelude::*;

use firmdyn::bifurcation::{sweep, SweepConfig};
use firmdyn::forcing::{drive, superpose, AmplitudeToLambda, Calibration, CycleSpec};
use firmdyn::ingest::{parse_series, write_series_csv, MetricSeries};
use firmdyn::lyapunov::lyapunov_derivative;
use firmdyn::stability::Theory;
use firmdyn::LogisticMap64;

fn cycle(amplitude: f64, period: f64, phase: f64) -> CycleSpec<f64> {
    CycleSpec::new("prop", amplitude, period, phase).unwrap()
}

proptest! {
    /// The unit interval is invariant for every admissible control parameter,
    /// bit-for-bit: `step` revalidates its input on every call, so a single
    /// escape anywhere in the orbit would fail the unwrap.
    #[test]
    fn unit_interval_is_invariant(lambda in 0.0f64..=4.0, x0 in 0.0f64..=1.0) {
        let map = LogisticMap64::new(lambda).unwrap();
        let mut x = x0;
        for step in 0..200 {
            x = map.step(x).unwrap();
            prop_assert!(
                (0.0..=1.0).contains(&x),
                "escaped to {x} at step {step} (lambda {lambda}, x0 {x0})"
            );
        }
    }

    /// Between the transcritical point and the first doubling the attractor is
    /// a stable fixed point, so the exponent must come out negative from any
    /// interior seed.
    #[test]
    fn exponent_is_negative_in_the_fixed_point_band(
        lambda in 1.01f64..=2.99,
        x0 in 0.05f64..=0.95,
    ) {
        let map = LogisticMap64::new(lambda).unwrap();
        let est = lyapunov_derivative(&map, x0, 2000, 5000).unwrap();
        prop_assert!(
            est.exponent < 0.0,
            "lambda {lambda}, x0 {x0}: exponent {}",
            est.exponent
        );
    }

    /// A superposition can never exceed the sum of its component amplitudes.
    #[test]
    fn superposition_is_bounded_by_total_amplitude(
        components in prop::collection::vec(
            (0.0f64..=1.0, 0.5f64..=100.0, 0.0f64..=6.3),
            1..5,
        ),
        t in -1000.0f64..=1000.0,
    ) {
        let cycles: Vec<CycleSpec<f64>> = components
            .iter()
            .map(|&(a, period, phase)| cycle(a, period, phase))
            .collect();
        let bound: f64 = components.iter().map(|c| c.0).sum();
        let value = superpose(&cycles, t);
        prop_assert!(
            value.abs() <= bound + 1e-9,
            "|{value}| exceeds amplitude budget {bound}"
        );
    }

    /// Shifting by whole periods leaves a cycle unchanged to within a few
    /// ulps of argument reduction.
    #[test]
    fn cycles_are_periodic(
        amplitude in 0.0f64..=1.0,
        period in 0.5f64..=100.0,
        phase in 0.0f64..=6.3,
        t in 0.0f64..=1000.0,
        laps in 1u32..10,
    ) {
        let c = cycle(amplitude, period, phase);
        let shifted = t + laps as f64 * period;
        let drift = (c.value_at(shifted) - c.value_at(t)).abs();
        prop_assert!(
            drift < 1e-11,
            "drift {drift:e} over {laps} laps (period {period}, t {t})"
        );
    }

    /// More forcing can never mean a smaller control parameter.
    #[test]
    fn calibration_is_monotone(
        amplitude_max in 0.1f64..=1.0,
        lambda_min in 2.0f64..=3.0,
        width in 0.1f64..=1.0,
        a1 in -0.5f64..=1.5,
        a2 in -0.5f64..=1.5,
    ) {
        let calibration =
            Calibration::new(0.0, amplitude_max, lambda_min, lambda_min + width).unwrap();
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        prop_assert!(
            calibration.map_to_lambda(lo) <= calibration.map_to_lambda(hi),
            "calibration not monotone between {lo} and {hi}"
        );
    }

    /// Driven control parameters always land inside the calibration's range,
    /// however wild the forcing is.
    #[test]
    fn driven_lambda_stays_in_the_calibrated_range(
        components in prop::collection::vec(
            (0.0f64..=3.0, 0.5f64..=100.0, 0.0f64..=6.3),
            1..6,
        ),
        times in prop::collection::vec(-100.0f64..=100.0, 1..20),
    ) {
        let cycles: Vec<CycleSpec<f64>> = components
            .iter()
            .map(|&(a, period, phase)| cycle(a, period, phase))
            .collect();
        let calibration = Calibration::default();
        for point in drive(&cycles, &calibration, &times) {
            prop_assert!(
                (2.5..=4.0).contains(&point.lambda),
                "lambda {} escaped the calibrated range at t {}",
                point.lambda,
                point.t
            );
            prop_assert_eq!(point.lambda, calibration.lambda_for(point.amplitude));
        }
    }

    /// Writing a series and reading it back is lossless, including the exact
    /// bit patterns of the values.
    #[test]
    fn metric_series_round_trip_is_exact(
        theory_index in 0usize..8,
        day_gaps in prop::collection::vec(1u64..30, 1..15),
        seed_values in prop::collection::vec(-1e6f64..=1e6, 2..16),
    ) {
        let n = day_gaps.len().min(seed_values.len() - 1) + 1;
        let start = chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let mut dates = vec![start];
        for gap in day_gaps.iter().take(n - 1) {
            dates.push(*dates.last().unwrap() + chrono::Days::new(*gap));
        }
        let series = MetricSeries::new(
            Theory::ALL[theory_index],
            dates,
            seed_values[..n].to_vec(),
        )
        .unwrap();

        let mut buf = Vec::new();
        write_series_csv(&mut buf, std::slice::from_ref(&series)).unwrap();
        let reparsed: Vec<MetricSeries<f64>> =
            parse_series(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(reparsed, vec![series]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Sweeping the same configuration twice gives byte-identical rows; the
    /// pipeline has no hidden state.
    #[test]
    fn sweeps_are_deterministic(
        lambda_min in 2.5f64..=3.2,
        span in 0.05f64..=0.3,
        grid in 2usize..8,
        sample_len in 10usize..50,
    ) {
        let mut config = SweepConfig::new(lambda_min, lambda_min + span, grid).unwrap();
        config.sample_len = sample_len;
        config.transient_len = 300;
        let first = sweep(&config).unwrap();
        let second = sweep(&config).unwrap();
        prop_assert_eq!(first.rows.len(), second.rows.len());
        for (a, b) in first.rows.iter().zip(&second.rows) {
            prop_assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
            prop_assert_eq!(a.samples.len(), b.samples.len());
            for (xa, xb) in a.samples.iter().zip(&b.samples) {
                prop_assert_eq!(xa.to_bits(), xb.to_bits());
            }
        }
        prop_assert_eq!(&first.doubling_points, &second.doubling_points);
        prop_assert_eq!(first.accumulation_estimate, second.accumulation_estimate);
    }
}

/// Plain file-system round trip through `load_series`.
#[test]
fn series_survive_a_disk_round_trip() {
    let text = "date,theory,value\n\
                2024-01-01,managerial,0.333333333333333315\n\
                2024-02-01,managerial,0.1\n\
                2024-01-15,environment,12.5\n\
                2024-02-15,environment,13.75\n";
    let parsed: Vec<MetricSeries<f64>> = parse_series(text).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metrics.csv");
    let mut buf = Vec::new();
    write_series_csv(&mut buf, &parsed).unwrap();
    std::fs::write(&path, &buf).unwrap();

    let loaded: Vec<MetricSeries<f64>> = firmdyn::ingest::load_series(&path).unwrap();
    assert_eq!(loaded, parsed, "disk round trip must preserve every series");
}
