use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use eomconv::cli::plot::{line_chart, Scale};
use eomconv::cli::verify::{DEFAULT_ODE_CHECK_TOLERANCE, DEFAULT_SEED};
use eomconv::cli::{figure, parse_real, Dataset, Format, Grid, PropagatorMethod, SweepSpec, VerifyLevel, VerifyOptions};
use eomconv::conversion::Direction;
use eomconv::dynamics::ToleranceSpec;
use eomconv::model::CouplingConfig;
use eomconv::states::EntangledCoherentState;
use eomconv::Error;

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "eomconv", version, about = "Electro-optomechanical converter dynamics and conversion rates")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    format: OutputFormat,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// ODE integration tolerance (propagate), or the pass threshold of the
    /// ODE-vs-closed-form check (verify).
    #[arg(long, global = true, value_parser = real)]
    tol: Option<f64>,
    /// Leave out the timestamp line so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_header_timestamp: bool,
    /// Seed for the randomized samples drawn by `verify`.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Ode,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    /// Optical to microwave.
    Ow,
    /// Microwave to optical.
    Wo,
}

#[derive(Args)]
struct Coupling {
    /// Coupling ratio G_o/G_w in [0, 1).
    #[arg(long, value_parser = real, allow_hyphen_values = true, conflicts_with = "go")]
    k: Option<f64>,
    /// Optical coupling G_o; requires --gw.
    #[arg(long, value_parser = real, allow_hyphen_values = true, requires = "gw")]
    go: Option<f64>,
    /// Microwave coupling G_w (default 1).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    gw: Option<f64>,
}

impl Coupling {
    fn config(&self) -> Result<CouplingConfig, Error> {
        let gw = self.gw.unwrap_or(1.0);
        match (self.k, self.go) {
            (Some(k), _) => CouplingConfig::from_ratio(k, gw),
            (None, Some(go)) => CouplingConfig::new(go, gw),
            (None, None) => Err(Error::InvalidParameter("give --k or --go with --gw".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Propagator coefficients at one instant.
    Propagate {
        #[command(flatten)]
        coupling: Coupling,
        /// Time, in units of 1/G_w; accepts forms like `pi/2`.
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// The first dynamically-dark instants and their coefficients.
    DarkTimes {
        #[command(flatten)]
        coupling: Coupling,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Conditional conversion rate over a k grid.
    Cqc {
        #[arg(long, value_parser = grid)]
        k_grid: Grid,
    },
    /// Entanglement-assisted conversion rate over a phase grid.
    Eaqc {
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        phi_grid: Grid,
        /// Coherent amplitude |alpha| = |beta|.
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = DirectionArg::Ow)]
        direction: DirectionArg,
    },
    /// Entanglement-affecting factor over a k grid.
    Eaf {
        #[arg(long, value_parser = grid)]
        k_grid: Grid,
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Normalization, concurrence and field means of an entangled coherent state.
    Concurrence {
        #[arg(long, value_parser = real, allow_hyphen_values = true)]
        theta: f64,
        /// `re,im`
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        alpha: Complex64,
        /// `re,im`
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        beta: Complex64,
    },
    /// Dataset behind figure 2, 3 or 4, checked before it is written.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=4))]
        number: u8,
        /// Override the default 200-point grid.
        #[arg(long, value_parser = grid)]
        grid: Option<Grid>,
        /// Also render an SVG line chart here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Verify {
        /// Add the truncated-Fock-space cross-checks.
        #[arg(long)]
        full: bool,
    },
}

fn real(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

fn grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    Ok(Complex64::new(real(re)?, real(im)?))
}

enum Failure {
    Library(Error),
    Io(io::Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Library(Error::ResourceLimit { .. } | Error::Truncation { .. } | Error::IntegrationFailure { .. }) => {
                EXIT_RESOURCE
            }
            Failure::Library(_) | Failure::Io(_) => EXIT_INVALID,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Library(e) => e.to_string(),
            Failure::Io(e) => format!("i/o error: {e}"),
            Failure::Verification(m) => m.clone(),
        }
    }
}

fn emit(global: &Global, data: &Dataset) -> Result<(), Failure> {
    let stamp = (!global.no_header_timestamp)
        .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let format = match global.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    match &global.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            data.write(format, &mut w, stamp.as_deref())?;
            w.flush()?;
        }
        None => data.write(format, io::stdout().lock(), stamp.as_deref())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let global = &cli.global;
    let spec = match cli.command {
        Command::Propagate { coupling, t, method } => SweepSpec::Propagator {
            config: coupling.config()?,
            time: t,
            method: match method {
                MethodArg::Closed => PropagatorMethod::Closed,
                MethodArg::Ode => PropagatorMethod::Ode,
            },
            tolerance: match global.tol {
                Some(t) => ToleranceSpec::new(t)?,
                None => ToleranceSpec::default(),
            },
        },
        Command::DarkTimes { coupling, count } => SweepSpec::DarkTimes { config: coupling.config()?, count },
        Command::Cqc { k_grid } => SweepSpec::CqcRate { ratio: k_grid },
        Command::Eaqc { k, theta, phi_grid, alpha, direction } => SweepSpec::EaqcRate {
            ratio: k,
            theta,
            phase: phi_grid,
            amplitude: alpha,
            direction: match direction {
                DirectionArg::Ow => Direction::OpticalToMicrowave,
                DirectionArg::Wo => Direction::MicrowaveToOptical,
            },
        },
        Command::Eaf { k_grid, phi } => SweepSpec::Eaf { ratio: k_grid, phase: phi },
        Command::Concurrence { theta, alpha, beta } => {
            SweepSpec::Concurrence { state: EntangledCoherentState::new(theta, alpha, beta) }
        }
        Command::Figure { number, grid, svg } => return run_figure(global, number, grid, svg),
        Command::Verify { full } => return run_verify(global, full),
    };
    emit(global, &spec.run()?)
}

fn run_figure(global: &Global, number: u8, grid: Option<Grid>, svg: Option<PathBuf>) -> Result<(), Failure> {
    let fig = figure(number, grid)?;
    emit(global, &fig.dataset)?;
    if let Some(path) = svg {
        let chart = match number {
            2 => line_chart(&fig.dataset, "k", &["eta"], Scale::Linear)?,
            3 => {
                let cols: Vec<&str> = fig.dataset.columns[1..].iter().map(String::as_str).collect();
                line_chart(&fig.dataset, "phi", &cols, Scale::Log)?
            }
            _ => line_chart(&fig.dataset, "k", &["R_phi0", "R_phiHalfPi", "unity_reference"], Scale::Log)?,
        };
        std::fs::write(path, chart)?;
    }
    let failed: Vec<String> =
        fig.checks.iter().filter(|c| !c.passed).map(|c| format!("{} ({})", c.name, c.detail)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("figure {number} checks failed: {}", failed.join("; "))))
    }
}

fn run_verify(global: &Global, full: bool) -> Result<(), Failure> {
    let level = if full { VerifyLevel::Full } else { VerifyLevel::Quick };
    let options = VerifyOptions {
        level,
        ode_check_tolerance: global.tol.unwrap_or(DEFAULT_ODE_CHECK_TOLERANCE),
        seed: global.seed,
        ..VerifyOptions::default()
    };
    if options.ode_check_tolerance.is_nan() || options.ode_check_tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!("--tol must be > 0, got {}", options.ode_check_tolerance)).into());
    }
    let report = eomconv::cli::run_verify(&options);
    emit(global, &report.to_dataset(level, global.seed))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!("verification failed: {}", report.failed().join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed downstream pipe (`| head`) is not an error of ours.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("eomconv: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
