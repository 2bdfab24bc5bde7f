//! Nonlinear dynamics of the firm, built on the logistic map.
//!
//! The library models a firm variable (orders, output, capital, valuation) as
//! a quadratic recurrence `x_{n+1} = lambda * x_n * (1 - x_n)` whose control
//! parameter `lambda` encodes how hard the environment drives the firm. On
//! top of that single primitive it provides:
//!
//! - [`dynamics`]: the map itself, orbits, and fixed points;
//! - [`bifurcation`]: parameter sweeps, period detection, the
//!   period-doubling cascade, its accumulation point, and crisis detection;
//! - [`lyapunov`]: two independent exponent estimators and a
//!   stable/marginal/chaotic classification;
//! - [`forcing`]: business-cycle and risk-category oscillations mapped onto
//!   the control parameter through an affine calibration;
//! - [`stability`]: the eight theory-of-the-firm channels, the pairwise
//!   trajectory-closeness criterion, and the firm-level stability report;
//! - [`ingest`]: observed metric series (CSV) turned into theory channels;
//! - [`export`]: CSV and full-precision JSON writers whose output reparses
//!   bit-for-bit.
//!
//! All numerics are generic over the scalar type through [`Real`] (both
//! `f32` and `f64` implement it); the `*64` aliases fix the common choice.
//!
//! ```
//! use firmdyn::{LogisticMap64, lyapunov};
//!
//! let map = LogisticMap64::new(4.0).unwrap();
//! let est = lyapunov::lyapunov_derivative(&map, 0.371, 1000, 100_000).unwrap();
//! assert!((est.exponent - std::f64::consts::LN_2).abs() < 1e-2);
//! ```

// Validation guards are deliberately written `!(x > y)` so that NaN fails
// them; the positive comparison would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod defaults;
pub mod dynamics;
pub mod export;
pub mod forcing;
pub mod ingest;
pub mod lyapunov;
pub mod stability;

mod error;
mod float;

pub use error::{Error, Result};
pub use float::Real;

/// Double-precision logistic map.
pub type LogisticMap64 = dynamics::LogisticMap<f64>;
/// Double-precision orbit.
pub type Orbit64 = dynamics::Orbit<f64>;
/// Double-precision sweep configuration.
pub type SweepConfig64 = bifurcation::SweepConfig<f64>;
/// Double-precision bifurcation diagram.
pub type BifurcationDiagram64 = bifurcation::BifurcationDiagram<f64>;
/// Double-precision exponent estimate.
pub type LyapunovEstimate64 = lyapunov::LyapunovEstimate<f64>;
/// Double-precision cycle component.
pub type CycleSpec64 = forcing::CycleSpec<f64>;
/// Double-precision risk profile.
pub type RiskProfile64 = forcing::RiskProfile<f64>;
/// Double-precision amplitude-to-lambda calibration.
pub type Calibration64 = forcing::Calibration<f64>;
/// Double-precision theory channel.
pub type TheoryChannel64 = stability::TheoryChannel<f64>;
/// Double-precision firm stability report.
pub type FirmStabilityReport64 = stability::FirmStabilityReport<f64>;
