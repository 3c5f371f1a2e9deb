use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stretched_string::verify::{self, VerifyOptions};
use stretched_string::{
    integrate, period_bounds, period_ode, period_phi, period_z, relative_error, Amplitude, Error,
    Method, OdeConfig, PeriodResult, QuadConfig, StringParams,
};

mod output;

use output::{PeriodReport, SweepRow, TrajectoryReport};

/// Periods, bounds and trajectories of a mass on a pre-stretched elastic wire.
#[derive(Parser)]
#[command(name = "stretched-string", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Period of one configuration by the selected methods, with bounds
    Period(PeriodArgs),
    /// Period and bounds over a range of amplitudes
    Sweep(SweepArgs),
    /// Run the verification batteries
    Verify(VerifyArgs),
    /// Dump the time series of one oscillation
    Trajectory(TrajectoryArgs),
}

#[derive(Args, Clone, Copy)]
struct SystemArgs {
    /// Spring constant
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Mass of the bead
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Natural half-length
    #[arg(long, default_value_t = 1.0)]
    l0: f64,
    /// Stretched half-length
    #[arg(long, default_value_t = 2.0)]
    l: f64,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Relative tolerance [default: 1e-10 for quadrature, 1e-9 for the ODE]
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance
    #[arg(long, default_value_t = 0.0)]
    abs_tol: f64,
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct PeriodArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Release amplitude
    #[arg(long)]
    y0: f64,
    /// Comma-separated subset of phi, z, ode
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "phi")]
    methods: Vec<Method>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Smallest amplitude
    #[arg(long)]
    y0: f64,
    /// Largest amplitude
    #[arg(long)]
    y0_max: f64,
    /// Number of amplitudes, at least 2
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Space amplitudes logarithmically
    #[arg(long)]
    log: bool,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "phi")]
    methods: Vec<Method>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Random systems in the sandwich battery
    #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
    samples: usize,
    /// Also evaluate the bound and quartic formulas as originally published
    #[arg(long)]
    paper_literal: bool,
    /// System for the published-form scaling check
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 0.5)]
    y0: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    y0: f64,
    /// End time [default: one period]
    #[arg(long)]
    t_end: Option<f64>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Core(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::Core(e) if e.is_numerical() => 3,
            Failure::Core(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Period(a) => cmd_period(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Trajectory(a) => cmd_trajectory(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn build_params(s: &SystemArgs) -> Result<StringParams<f64>, Failure> {
    let params = StringParams::new(s.sigma, s.mass, s.l0, s.l)?;
    if params.l - params.l0 < 1e-12 * params.l0 {
        return Err(Failure::Usage(format!(
            "pre-stretch too small: l - l0 = {} is below 1e-12 l0; the harmonic period diverges",
            params.l - params.l0
        )));
    }
    Ok(params)
}

fn quad_config(tol: &TolArgs) -> Result<QuadConfig<f64>, Failure> {
    let cfg = QuadConfig {
        rel_tol: tol.rel_tol.unwrap_or(1e-10),
        abs_tol: tol.abs_tol,
        ..QuadConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn ode_config(tol: &TolArgs) -> Result<OdeConfig<f64>, Failure> {
    let cfg = OdeConfig {
        rel_tol: tol.rel_tol.unwrap_or(1e-9),
        abs_tol: tol.abs_tol,
        ..OdeConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn dedup(methods: &[Method]) -> Result<Vec<Method>, Failure> {
    let mut out = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("select at least one method".into()));
    }
    Ok(out)
}

fn compute(
    params: &StringParams<f64>,
    y0: Amplitude<f64>,
    method: Method,
    tol: &TolArgs,
) -> Result<PeriodResult<f64>, Failure> {
    Ok(match method {
        Method::PhiQuadrature => period_phi(params, y0, &quad_config(tol)?)?,
        Method::ZQuadrature => period_z(params, y0, &quad_config(tol)?)?,
        Method::OdeSimulation => period_ode(params, y0, &ode_config(tol)?)?,
    })
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    let written = match &out.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn cmd_period(a: PeriodArgs) -> Result<(), Failure> {
    let params = build_params(&a.system)?;
    let y0 = Amplitude::new(a.y0)?;
    let methods = dedup(&a.methods)?;
    let results = methods
        .iter()
        .map(|&m| compute(&params, y0, m, &a.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let report = PeriodReport::new(&params, y0, &results, &period_bounds(&params, y0));
    let text = match a.out.format {
        Format::Csv => report.to_csv(),
        Format::Json => output::to_json(&report),
    };
    emit(&a.out, &text)
}

fn amplitudes(a: &SweepArgs) -> Result<Vec<f64>, Failure> {
    if a.count < 2 {
        return Err(Failure::Usage(format!("sweep needs --count >= 2 (got {})", a.count)));
    }
    Amplitude::new(a.y0)?;
    if !(a.y0_max.is_finite() && a.y0_max > a.y0) {
        return Err(Failure::Usage(format!(
            "sweep needs 0 < y0 < y0-max (got y0 = {}, y0-max = {})",
            a.y0, a.y0_max
        )));
    }
    let mut v = if a.log {
        verify::log_space(a.y0, a.y0_max, a.count)
    } else {
        let step = (a.y0_max - a.y0) / (a.count - 1) as f64;
        (0..a.count).map(|i| a.y0 + step * i as f64).collect()
    };
    v[0] = a.y0;
    v[a.count - 1] = a.y0_max;
    Ok(v)
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let params = build_params(&a.system)?;
    let methods = dedup(&a.methods)?;
    let mut rows = Vec::new();
    for y in amplitudes(&a)? {
        let y0 = Amplitude::new(y)?;
        let mut row = SweepRow::new(&params, y0);
        for &m in &methods {
            row.set(m, compute(&params, y0, m, &a.tol)?.period);
        }
        // relative error against the most accurate period available
        let best = row.period_phi.or(row.period_z).or(row.period_ode);
        row.rel_err = best.map(|p| relative_error(&params, p));
        rows.push(row);
    }
    let text = match a.out.format {
        Format::Csv => output::sweep_csv(&rows),
        Format::Json => output::to_json(&output::SweepReport::new(&params, rows)),
    };
    emit(&a.out, &text)
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let mut report = verify::run(&VerifyOptions {
        seed: a.seed,
        samples: a.samples,
        paper_literal: a.paper_literal,
    });
    if a.paper_literal {
        let params = build_params(&a.system)?;
        let sys = verify::System {
            params,
            y0: Amplitude::new(a.y0)?,
        };
        report.batteries.push(output::printed_system_battery(&sys)?);
    }
    let text = match a.out.format {
        Format::Csv => report.render(),
        Format::Json => output::to_json(&output::VerifyJson::new(&report)),
    };
    emit(&a.out, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_trajectory(a: TrajectoryArgs) -> Result<(), Failure> {
    let params = build_params(&a.system)?;
    let y0 = Amplitude::new(a.y0)?;
    let cfg = ode_config(&a.tol)?;
    let t_end = match a.t_end {
        Some(t) if t.is_finite() && t > 0.0 => t,
        Some(t) => return Err(Failure::Usage(format!("--t-end must be positive (got {t})"))),
        None => period_phi(&params, y0, &quad_config(&a.tol)?)?.period,
    };
    let traj = integrate(&params, y0, t_end, &cfg)?;
    let report = TrajectoryReport::new(&params, y0, t_end, &traj);
    let text = match a.out.format {
        Format::Csv => report.to_csv(),
        Format::Json => output::to_json(&report),
    };
    emit(&a.out, &text)?;
    if a.out.format == Format::Csv {
        eprintln!("max_energy_drift,{}", output::num(report.max_energy_drift));
    }
    Ok(())
}
