//! Subcommand implementations.
//!
//! Each command resolves its inputs (flags override the configuration file,
//! which overrides engine defaults), runs the engine, and writes results to
//! `--out` or stdout. Input and configuration problems exit with code 2;
//! failures while computing or writing exit with code 1.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use firmdyn::bifurcation;
use firmdyn::export::{write_diagram_csv, write_exponent_csv, write_forcing_csv, write_json, ExponentRow};
use firmdyn::forcing::{drive, CycleSpec};
use firmdyn::ingest::{load_series, normalize_to_calibration};
use firmdyn::lyapunov::{classify, lyapunov_derivative, lyapunov_separation};
use firmdyn::stability::{evaluate_firm, Horizon, Theory, TheoryChannel};
use firmdyn::{Error, LogisticMap64};

use crate::config::RunConfig;
use crate::CliError;

/// Sweep the control parameter and export the attractor diagram.
#[derive(Debug, Args)]
pub struct BifurcateArgs {
    /// Lower end of the control-parameter range.
    #[arg(long = "lmin")]
    pub lambda_min: Option<f64>,
    /// Upper end of the control-parameter range.
    #[arg(long = "lmax")]
    pub lambda_max: Option<f64>,
    /// Number of control-parameter grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Output stem: writes `<stem>.csv` and `<stem>.summary.json` (a
    /// trailing `.csv` on the stem is accepted). Streams CSV to stdout
    /// when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Estimate largest Lyapunov exponents.
#[derive(Debug, Args)]
pub struct LyapunovArgs {
    /// Control-parameter value to evaluate; repeat for several.
    #[arg(long = "lambda", conflicts_with_all = ["lambda_min", "lambda_max", "grid"])]
    pub lambda: Vec<f64>,
    /// Lower end of a control-parameter grid.
    #[arg(long = "lmin", requires = "lambda_max")]
    pub lambda_min: Option<f64>,
    /// Upper end of a control-parameter grid.
    #[arg(long = "lmax", requires = "lambda_min")]
    pub lambda_max: Option<f64>,
    /// Number of grid points across [lmin, lmax].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Estimation method.
    #[arg(long, value_enum, default_value_t = MethodArg::Derivative)]
    pub method: MethodArg,
    /// Exponent CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Trace a forcing source as a control-parameter schedule.
#[derive(Debug, Args)]
pub struct ForcingArgs {
    /// Which oscillation set drives the firm.
    #[arg(long, value_enum, default_value_t = SourceArg::Cycles)]
    pub source: SourceArg,
    /// Trace start time in years.
    #[arg(long = "t-start")]
    pub t_start: Option<f64>,
    /// Trace end time in years.
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Number of trace points.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Trace CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Evaluate the eight-channel firm stability verdict.
#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Metrics CSV (`date,theory,value`) holding one series per theory.
    #[arg(long, conflicts_with = "lambdas")]
    pub metrics: Option<PathBuf>,
    /// Eight comma-separated control-parameter values, one per theory in
    /// canonical order.
    #[arg(long)]
    pub lambdas: Option<String>,
    /// Closeness horizon for the pairwise verdicts.
    #[arg(long, value_enum)]
    pub horizon: Option<HorizonArg>,
    /// Report JSON destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Regenerate the standard figure set from the configured forcing sources.
#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Directory the figure files are written into (created if missing).
    #[arg(long = "out-dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Average of log-derivatives along the orbit.
    Derivative,
    /// Growth rate of a renormalized trajectory pair.
    Separation,
    /// Both estimators, two rows per parameter value.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    /// The four canonical business cycles.
    Cycles,
    /// The seven risk categories.
    Risk,
    /// Asset-class cycles.
    Assets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HorizonArg {
    /// One-year closeness horizon.
    Short,
    /// Three-year closeness horizon.
    Long,
}

impl From<HorizonArg> for Horizon {
    fn from(arg: HorizonArg) -> Self {
        match arg {
            HorizonArg::Short => Horizon::Short1y,
            HorizonArg::Long => Horizon::Long3y,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Runs `write` against `--out` (buffered file) or stdout.
///
/// A closed stdout (e.g. piping into `head`) counts as success, matching the
/// usual Unix convention for streaming producers.
fn emit(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> firmdyn::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => emit_file(path, write),
        None => {
            let mut stdout = io::stdout().lock();
            match write(&mut stdout) {
                Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                Err(Error::Serialize(e))
                    if e.io_error_kind() == Some(io::ErrorKind::BrokenPipe) =>
                {
                    Ok(())
                }
                other => other.map_err(runtime),
            }
        }
    }
}

/// Runs `write` against a freshly created file.
fn emit_file(
    path: &Path,
    write: impl FnOnce(&mut dyn Write) -> firmdyn::Result<()>,
) -> Result<(), CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot create '{}': {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    write(&mut w).map_err(runtime)?;
    w.flush()
        .map_err(|e| CliError::Runtime(format!("cannot write '{}': {e}", path.display())))
}

/// `fig2` (or `fig2.csv`) -> (`fig2.csv`, `fig2.summary.json`).
fn diagram_paths(out: &Path) -> (PathBuf, PathBuf) {
    let stem = match out.extension() {
        Some(ext) if ext == "csv" => out.with_extension(""),
        _ => out.to_path_buf(),
    };
    (stem.with_extension("csv"), stem.with_extension("summary.json"))
}

pub fn bifurcate(config: &RunConfig, args: &BifurcateArgs) -> Result<(), CliError> {
    let sweep_config = config.sweep(args.lambda_min, args.lambda_max, args.grid)?;
    let diagram = bifurcation::sweep(&sweep_config).map_err(runtime)?;
    match &args.out {
        Some(out) => {
            let (csv, summary) = diagram_paths(out);
            emit_file(&csv, |w| write_diagram_csv(w, &diagram))?;
            emit_file(&summary, |w| write_json(w, &diagram.summary()))
        }
        None => emit(None, |w| write_diagram_csv(w, &diagram)),
    }
}

pub fn lyapunov(config: &RunConfig, args: &LyapunovArgs) -> Result<(), CliError> {
    let lambdas = if !args.lambda.is_empty() {
        args.lambda.clone()
    } else if let (Some(min), Some(max)) = (args.lambda_min, args.lambda_max) {
        let points = args.grid.unwrap_or(config.bifurcation.grid_points);
        if points < 2 {
            return Err(CliError::Usage(format!(
                "a parameter grid needs at least 2 points, got {points}"
            )));
        }
        if !(max > min) {
            return Err(CliError::Usage(format!(
                "parameter range [{min}, {max}] must be increasing"
            )));
        }
        let last = (points - 1) as f64;
        (0..points)
            .map(|i| min + (max - min) * i as f64 / last)
            .collect()
    } else {
        return Err(CliError::Usage(
            "pass --lambda (repeatable) or a --lmin/--lmax grid".into(),
        ));
    };

    let ly = &config.lyapunov;
    let x0 = config.dynamics.x0;
    let mut rows = Vec::new();
    for &lambda in &lambdas {
        let map = LogisticMap64::new(lambda).map_err(usage)?;
        let mut push = |estimate| {
            rows.push(ExponentRow {
                lambda,
                estimate,
                classification: classify(&estimate, ly.zero_band),
            });
        };
        match args.method {
            MethodArg::Derivative => {
                push(lyapunov_derivative(&map, x0, ly.transient, ly.iterations).map_err(usage)?)
            }
            MethodArg::Separation => push(estimate_separation(&map, x0, ly)?),
            MethodArg::Both => {
                push(lyapunov_derivative(&map, x0, ly.transient, ly.iterations).map_err(usage)?);
                push(estimate_separation(&map, x0, ly)?);
            }
        }
    }
    emit(args.out.as_deref(), |w| write_exponent_csv(w, &rows))
}

fn estimate_separation(
    map: &LogisticMap64,
    x0: f64,
    ly: &crate::config::LyapunovConfig,
) -> Result<firmdyn::LyapunovEstimate64, CliError> {
    lyapunov_separation(map, x0, ly.transient, ly.delta0, ly.renorm_interval, ly.iterations)
        .map_err(|e| match e {
            // A collapsed pair is a property of the dynamics, not of the input.
            Error::DegenerateSeparation => runtime(e),
            other => usage(other),
        })
}

fn cycles_for(config: &RunConfig, source: SourceArg) -> Result<Vec<CycleSpec<f64>>, CliError> {
    match source {
        SourceArg::Cycles => config.business_cycles(),
        SourceArg::Risk => config.risk_cycles(),
        SourceArg::Assets => config.asset_cycles(),
    }
}

pub fn forcing(config: &RunConfig, args: &ForcingArgs) -> Result<(), CliError> {
    let cycles = cycles_for(config, args.source)?;
    let calibration = config.calibration()?;
    let grid = config.time_grid(args.t_start, args.t_end, args.steps)?;
    let trace = drive(&cycles, &calibration, &grid);
    emit(args.out.as_deref(), |w| write_forcing_csv(w, &trace))
}

pub fn stability(config: &RunConfig, args: &StabilityArgs) -> Result<(), CliError> {
    let channels: Vec<TheoryChannel<f64>> = if let Some(path) = &args.metrics {
        let calibration = config.calibration()?;
        let series = load_series::<f64>(path).map_err(usage)?;
        series
            .iter()
            .map(|s| normalize_to_calibration(s, &calibration).map_err(usage))
            .collect::<Result<_, _>>()?
    } else if let Some(list) = &args.lambdas {
        let values: Vec<f64> = list
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad lambda value '{}'", tok.trim())))
            })
            .collect::<Result<_, _>>()?;
        if values.len() != Theory::ALL.len() {
            return Err(CliError::Usage(format!(
                "--lambdas needs exactly {} comma-separated values (one per theory, in order: {}), got {}",
                Theory::ALL.len(),
                Theory::ALL.map(|t| t.label()).join(", "),
                values.len()
            )));
        }
        Theory::ALL
            .iter()
            .zip(&values)
            .map(|(&theory, &lambda)| {
                TheoryChannel::from_lambda(theory, lambda, config.dynamics.x0).map_err(usage)
            })
            .collect::<Result<_, _>>()?
    } else {
        return Err(CliError::Usage("pass --metrics FILE or --lambdas L1,..,L8".into()));
    };

    let params = config.evaluation_params(args.horizon.map(Horizon::from));
    // Everything evaluate_firm can reject (missing/duplicated theories, bad
    // horizon or perturbation settings) traces back to user input or config.
    let report = evaluate_firm(&channels, &params).map_err(usage)?;
    emit(args.out.as_deref(), |w| write_json(w, &report))
}

pub fn reproduce(config: &RunConfig, args: &ReproduceArgs) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.out_dir).map_err(|e| {
        CliError::Runtime(format!("cannot create '{}': {e}", args.out_dir.display()))
    })?;
    let calibration = config.calibration()?;
    let grid = config.time_grid(None, None, None)?;

    let pipelines: [(&str, Vec<CycleSpec<f64>>); 3] = [
        ("orders", config.business_cycles()?),
        ("capital", config.risk_cycles()?),
        ("investments", config.asset_cycles()?),
    ];

    let mut stdout = io::stdout().lock();
    for (name, cycles) in &pipelines {
        let trace = drive(cycles, &calibration, &grid);
        emit_file(&args.out_dir.join(format!("{name}.forcing.csv")), |w| {
            write_forcing_csv(w, &trace)
        })?;

        let (mut lo, mut hi) = trace.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), p| (lo.min(p.lambda), hi.max(p.lambda)),
        );
        // A flat drive still deserves a diagram: widen to a small bracket.
        if hi - lo < 1e-3 {
            lo = (lo - 0.05).max(0.0);
            hi = (hi + 0.05).min(4.0);
        }
        let sweep_config = config.sweep(Some(lo), Some(hi), None)?;
        let diagram = bifurcation::sweep(&sweep_config).map_err(runtime)?;
        emit_file(&args.out_dir.join(format!("{name}.diagram.csv")), |w| {
            write_diagram_csv(w, &diagram)
        })?;
        emit_file(&args.out_dir.join(format!("{name}.summary.json")), |w| {
            write_json(w, &diagram.summary())
        })?;

        writeln!(
            stdout,
            "{name}: {} trace points, lambda in [{lo:.4}, {hi:.4}], {} doubling points, {} crises",
            trace.len(),
            diagram.doubling_points.len(),
            diagram.crises.len(),
        )
        .map_err(runtime)?;
    }
    Ok(())
}
