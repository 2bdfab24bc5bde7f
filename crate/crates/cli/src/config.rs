//! TOML run configuration.
//!
//! Every knob is optional and falls back to the engine defaults, so an empty
//! file (or no file at all) is a valid configuration. Unknown keys are
//! rejected everywhere: a typo should fail loudly, not silently fall back.

use std::path::Path;

use serde::Deserialize;

use firmdyn::defaults;
use firmdyn::forcing::{business_cycles, CycleSpec, RiskCategory};
use firmdyn::stability::{EvaluationParams, Horizon};
use firmdyn::{Calibration64, SweepConfig64};

use crate::CliError;

/// Default parameter-grid size for bifurcation sweeps.
const GRID_POINTS: usize = 400;
/// Default forcing trace: 60 years covers one Kondratieff wave.
const T_END_YEARS: f64 = 60.0;
const T_STEPS: usize = 600;

fn d_x0() -> f64 {
    defaults::X0
}
fn d_transient() -> usize {
    defaults::TRANSIENT_LEN
}
fn d_sample() -> usize {
    defaults::SAMPLE_LEN
}
fn d_lambda_min() -> f64 {
    defaults::CALIBRATION_LAMBDA_MIN
}
fn d_lambda_max() -> f64 {
    defaults::CALIBRATION_LAMBDA_MAX
}
fn d_grid_points() -> usize {
    GRID_POINTS
}
fn d_iterations() -> usize {
    defaults::LYAPUNOV_ITERATIONS
}
fn d_lyap_transient() -> usize {
    defaults::LYAPUNOV_TRANSIENT
}
fn d_delta0() -> f64 {
    defaults::SEPARATION_DELTA0
}
fn d_renorm() -> usize {
    defaults::RENORM_INTERVAL
}
fn d_zero_band() -> f64 {
    defaults::ZERO_BAND
}
fn d_t_start() -> f64 {
    0.0
}
fn d_t_end() -> f64 {
    T_END_YEARS
}
fn d_t_steps() -> usize {
    T_STEPS
}
fn d_amp_min() -> f64 {
    defaults::CALIBRATION_AMPLITUDE_MIN
}
fn d_amp_max() -> f64 {
    defaults::CALIBRATION_AMPLITUDE_MAX
}
fn d_business_amplitude() -> f64 {
    0.25
}
fn d_risk_amplitude() -> f64 {
    0.1
}
fn d_risk_base_period() -> f64 {
    2.0
}
fn d_risk_period_step() -> f64 {
    1.0
}
fn d_pair_delta0() -> f64 {
    defaults::PAIR_DELTA0
}
fn d_pair_epsilon() -> f64 {
    defaults::PAIR_EPSILON
}
fn d_horizon() -> Horizon {
    Horizon::Short1y
}
fn d_short_steps() -> usize {
    defaults::SHORT_HORIZON_STEPS
}
fn d_long_steps() -> usize {
    defaults::LONG_HORIZON_STEPS
}
fn d_saturation_cap() -> f64 {
    defaults::SATURATION_CAP
}

/// Whole configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub bifurcation: BifurcationConfig,
    #[serde(default)]
    pub lyapunov: LyapunovConfig,
    #[serde(default)]
    pub forcing: ForcingConfig,
    #[serde(default)]
    pub stability: StabilityConfig,
}

/// Orbit generation shared by every command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    #[serde(default = "d_x0")]
    pub x0: f64,
    #[serde(default = "d_transient")]
    pub transient_len: usize,
    #[serde(default = "d_sample")]
    pub sample_len: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            x0: d_x0(),
            transient_len: d_transient(),
            sample_len: d_sample(),
        }
    }
}

/// Parameter sweep shape.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BifurcationConfig {
    #[serde(default = "d_lambda_min")]
    pub lambda_min: f64,
    #[serde(default = "d_lambda_max")]
    pub lambda_max: f64,
    #[serde(default = "d_grid_points")]
    pub grid_points: usize,
}

impl Default for BifurcationConfig {
    fn default() -> Self {
        Self {
            lambda_min: d_lambda_min(),
            lambda_max: d_lambda_max(),
            grid_points: d_grid_points(),
        }
    }
}

/// Exponent estimation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovConfig {
    #[serde(default = "d_iterations")]
    pub iterations: usize,
    #[serde(default = "d_lyap_transient")]
    pub transient: usize,
    #[serde(default = "d_delta0")]
    pub delta0: f64,
    #[serde(default = "d_renorm")]
    pub renorm_interval: usize,
    #[serde(default = "d_zero_band")]
    pub zero_band: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            iterations: d_iterations(),
            transient: d_lyap_transient(),
            delta0: d_delta0(),
            renorm_interval: d_renorm(),
            zero_band: d_zero_band(),
        }
    }
}

/// One configured oscillation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleConfig {
    pub name: String,
    pub amplitude: f64,
    pub period: f64,
    #[serde(default)]
    pub phase: f64,
}

impl CycleConfig {
    fn build(&self) -> Result<CycleSpec<f64>, CliError> {
        CycleSpec::new(&self.name, self.amplitude, self.period, self.phase)
            .map_err(|e| CliError::Usage(format!("cycle '{}': {e}", self.name)))
    }
}

/// Uniform risk-category forcing with staggered periods.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskConfig {
    #[serde(default = "d_risk_amplitude")]
    pub amplitude: f64,
    #[serde(default = "d_risk_base_period")]
    pub base_period_years: f64,
    #[serde(default = "d_risk_period_step")]
    pub period_step_years: f64,
}

impl Default for RiskConfig {
    fn default() -> Self {
        Self {
            amplitude: d_risk_amplitude(),
            base_period_years: d_risk_base_period(),
            period_step_years: d_risk_period_step(),
        }
    }
}

/// Amplitude-to-lambda calibration bounds.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    #[serde(default = "d_amp_min")]
    pub amplitude_min: f64,
    #[serde(default = "d_amp_max")]
    pub amplitude_max: f64,
    #[serde(default = "d_lambda_min")]
    pub lambda_min: f64,
    #[serde(default = "d_lambda_max")]
    pub lambda_max: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            amplitude_min: d_amp_min(),
            amplitude_max: d_amp_max(),
            lambda_min: d_lambda_min(),
            lambda_max: d_lambda_max(),
        }
    }
}

/// Forcing sources and the time grid they are traced over.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    #[serde(default = "d_t_start")]
    pub t_start: f64,
    #[serde(default = "d_t_end")]
    pub t_end: f64,
    #[serde(default = "d_t_steps")]
    pub t_steps: usize,
    #[serde(default)]
    pub calibration: CalibrationConfig,
    /// Business-cycle components; the four canonical cycles when omitted.
    pub cycles: Option<Vec<CycleConfig>>,
    #[serde(default)]
    pub risk: RiskConfig,
    /// Asset-class components; a stock default portfolio when omitted.
    pub assets: Option<Vec<CycleConfig>>,
}

impl Default for ForcingConfig {
    fn default() -> Self {
        Self {
            t_start: d_t_start(),
            t_end: d_t_end(),
            t_steps: d_t_steps(),
            calibration: CalibrationConfig::default(),
            cycles: None,
            risk: RiskConfig::default(),
            assets: None,
        }
    }
}

/// Firm evaluation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    #[serde(default = "d_iterations")]
    pub exponent_iterations: usize,
    #[serde(default = "d_lyap_transient")]
    pub exponent_transient: usize,
    #[serde(default = "d_pair_delta0")]
    pub delta0: f64,
    #[serde(default = "d_pair_epsilon")]
    pub epsilon: f64,
    #[serde(default = "d_horizon")]
    pub horizon: Horizon,
    #[serde(default = "d_short_steps")]
    pub short_steps: usize,
    #[serde(default = "d_long_steps")]
    pub long_steps: usize,
    #[serde(default = "d_zero_band")]
    pub zero_band: f64,
    #[serde(default = "d_saturation_cap")]
    pub saturation_cap: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            exponent_iterations: d_iterations(),
            exponent_transient: d_lyap_transient(),
            delta0: d_pair_delta0(),
            epsilon: d_pair_epsilon(),
            horizon: d_horizon(),
            short_steps: d_short_steps(),
            long_steps: d_long_steps(),
            zero_band: d_zero_band(),
            saturation_cap: d_saturation_cap(),
        }
    }
}

impl RunConfig {
    /// Loads and parses a configuration file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config '{}': {e}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config '{}': {e}", path.display())))
    }

    /// Sweep configuration with optional command-line overrides.
    pub fn sweep(
        &self,
        lambda_min: Option<f64>,
        lambda_max: Option<f64>,
        grid_points: Option<usize>,
    ) -> Result<SweepConfig64, CliError> {
        let mut config = SweepConfig64::new(
            lambda_min.unwrap_or(self.bifurcation.lambda_min),
            lambda_max.unwrap_or(self.bifurcation.lambda_max),
            grid_points.unwrap_or(self.bifurcation.grid_points),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        config.x0 = self.dynamics.x0;
        config.transient_len = self.dynamics.transient_len;
        config.sample_len = self.dynamics.sample_len;
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }

    /// Evenly spaced trace times, with optional command-line overrides.
    pub fn time_grid(
        &self,
        t_start: Option<f64>,
        t_end: Option<f64>,
        t_steps: Option<usize>,
    ) -> Result<Vec<f64>, CliError> {
        let start = t_start.unwrap_or(self.forcing.t_start);
        let end = t_end.unwrap_or(self.forcing.t_end);
        let steps = t_steps.unwrap_or(self.forcing.t_steps);
        if steps == 0 {
            return Err(CliError::Usage("forcing needs at least 1 time step".into()));
        }
        if !(end > start) {
            return Err(CliError::Usage(format!(
                "forcing time range [{start}, {end}] must be increasing"
            )));
        }
        if steps == 1 {
            return Ok(vec![start]);
        }
        let span = end - start;
        let last = (steps - 1) as f64;
        Ok((0..steps).map(|i| start + span * i as f64 / last).collect())
    }

    /// Calibration from the forcing section.
    pub fn calibration(&self) -> Result<Calibration64, CliError> {
        let c = &self.forcing.calibration;
        Calibration64::new(c.amplitude_min, c.amplitude_max, c.lambda_min, c.lambda_max)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Business-cycle components: configured ones, or the four canonical
    /// cycles at a uniform default amplitude.
    pub fn business_cycles(&self) -> Result<Vec<CycleSpec<f64>>, CliError> {
        match &self.forcing.cycles {
            Some(configured) => configured.iter().map(CycleConfig::build).collect(),
            None => business_cycles([d_business_amplitude(); 4])
                .map_err(|e| CliError::Usage(e.to_string())),
        }
    }

    /// Risk-category components with staggered periods.
    pub fn risk_cycles(&self) -> Result<Vec<CycleSpec<f64>>, CliError> {
        let r = &self.forcing.risk;
        RiskCategory::ALL
            .iter()
            .enumerate()
            .map(|(i, category)| {
                let period = r.base_period_years + r.period_step_years * i as f64;
                CycleSpec::new(category.label(), r.amplitude, period, 0.0)
                    .map_err(|e| CliError::Usage(e.to_string()))
            })
            .collect()
    }

    /// Asset-class components: configured ones, or a stock three-asset mix.
    pub fn asset_cycles(&self) -> Result<Vec<CycleSpec<f64>>, CliError> {
        match &self.forcing.assets {
            Some(configured) => configured.iter().map(CycleConfig::build).collect(),
            None => ["equities", "real_estate", "commodities"]
                .iter()
                .zip([(0.35, 7.0), (0.30, 18.0), (0.15, 30.0)])
                .map(|(name, (amplitude, period))| {
                    CycleSpec::new(*name, amplitude, period, 0.0)
                        .map_err(|e| CliError::Usage(e.to_string()))
                })
                .collect(),
        }
    }

    /// Firm-evaluation parameters, with an optional horizon override.
    pub fn evaluation_params(&self, horizon: Option<Horizon>) -> EvaluationParams<f64> {
        let s = &self.stability;
        EvaluationParams {
            exponent_iterations: s.exponent_iterations,
            exponent_transient: s.exponent_transient,
            delta0: s.delta0,
            epsilon: s.epsilon,
            horizon: horizon.unwrap_or(s.horizon),
            short_steps: s.short_steps,
            long_steps: s.long_steps,
            zero_band: s.zero_band,
            saturation_cap: s.saturation_cap,
        }
    }
}

/// Configuration reference appended to `--help`: every key with its built-in
/// default, so the help text is the single place that documents them all.
pub fn reference() -> String {
    format!(
        "Configuration file (TOML; every key optional; unknown keys rejected):\n\
         \x20 [dynamics]             x0 = {x0}, transient_len = {tr}, sample_len = {sa}\n\
         \x20 [bifurcation]          lambda_min = {clmin}, lambda_max = {clmax}, grid_points = {gp}\n\
         \x20 [lyapunov]             iterations = {li}, transient = {lt}, delta0 = {ld:e},\n\
         \x20                        renorm_interval = {ri}, zero_band = {zb}\n\
         \x20 [forcing]              t_start = 0, t_end = {te}, t_steps = {ts}\n\
         \x20 [forcing.calibration]  amplitude_min = {amin}, amplitude_max = {amax}, lambda_min = {clmin}, lambda_max = {clmax}\n\
         \x20 [[forcing.cycles]]     name, amplitude, period, phase — defaults to the four business\n\
         \x20                        cycles at amplitude {ba} with periods {kp}, {jp}, {up}, {op} years\n\
         \x20 [forcing.risk]         amplitude = {ra}, base_period_years = {rb}, period_step_years = {rs}\n\
         \x20 [[forcing.assets]]     name, amplitude, period, phase — defaults to equities 0.35/7y,\n\
         \x20                        real_estate 0.30/18y, commodities 0.15/30y\n\
         \x20 [stability]            exponent_iterations = {li}, exponent_transient = {lt},\n\
         \x20                        delta0 = {pd:e}, epsilon = {pe:e}, horizon = \"short_1y\",\n\
         \x20                        short_steps = {ss}, long_steps = {ls}, zero_band = {zb}, saturation_cap = {sc}\n\
         \n\
         The file is taken from --config, else $FIRMDYN_CONFIG, else the built-in defaults.\n\
         A commented example ships as firmdyn.example.toml.",
        x0 = defaults::X0,
        tr = defaults::TRANSIENT_LEN,
        sa = defaults::SAMPLE_LEN,
        clmin = defaults::CALIBRATION_LAMBDA_MIN,
        clmax = defaults::CALIBRATION_LAMBDA_MAX,
        gp = GRID_POINTS,
        li = defaults::LYAPUNOV_ITERATIONS,
        lt = defaults::LYAPUNOV_TRANSIENT,
        ld = defaults::SEPARATION_DELTA0,
        ri = defaults::RENORM_INTERVAL,
        zb = defaults::ZERO_BAND,
        te = T_END_YEARS,
        ts = T_STEPS,
        amin = defaults::CALIBRATION_AMPLITUDE_MIN,
        amax = defaults::CALIBRATION_AMPLITUDE_MAX,
        ba = d_business_amplitude(),
        kp = defaults::KITCHIN_PERIOD_YEARS,
        jp = defaults::JUGLAR_PERIOD_YEARS,
        up = defaults::KUZNETS_PERIOD_YEARS,
        op = defaults::KONDRATIEFF_PERIOD_YEARS,
        ra = d_risk_amplitude(),
        rb = d_risk_base_period(),
        rs = d_risk_period_step(),
        pd = defaults::PAIR_DELTA0,
        pe = defaults::PAIR_EPSILON,
        ss = defaults::SHORT_HORIZON_STEPS,
        ls = defaults::LONG_HORIZON_STEPS,
        sc = defaults::SATURATION_CAP,
    )
}
