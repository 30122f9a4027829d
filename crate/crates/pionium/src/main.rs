use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use pionium::cli::{self, GridSpec, OutputFormat, SweepSpec};
use pionium::moments::F0Mode;
use pionium::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Bound-state spectra and continuous-variable separability diagnostics for
/// a relativistic two-meson Coulomb system.
#[derive(Debug, Parser)]
#[command(name = "pionium", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct StateArgs {
    /// Radial quantum number
    #[arg(long)]
    n: u32,
    /// Orbital quantum number
    #[arg(long)]
    l: u32,
    /// Dimensionless coupling constant (must stay below 2l+1)
    #[arg(long)]
    alpha: f64,
    /// Constituent mass
    #[arg(long, default_value_t = 1.0)]
    m: f64,
}

#[derive(Debug, Clone, Args)]
struct AGridArgs {
    /// Smallest EPR parameter a in the scan grid
    #[arg(long = "a-min", default_value_t = 1e-3)]
    a_min: f64,
    /// Largest EPR parameter a in the scan grid
    #[arg(long = "a-max", default_value_t = 1e3)]
    a_max: f64,
    /// Number of log-spaced points in the a grid
    #[arg(long = "a-steps", default_value_t = 2001)]
    a_steps: usize,
}

impl AGridArgs {
    fn grid(&self) -> GridSpec {
        GridSpec::logarithmic(self.a_min, self.a_max, self.a_steps)
    }
}

fn parse_mode(s: &str) -> Result<F0Mode, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<String, String> {
    match s {
        "csv" | "json" => Ok(s.to_string()),
        other => Err(format!("unknown format '{other}', expected 'csv' or 'json'")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral parameters xi, N, M, k, lambda, N1 and the binding energy
    Spectrum {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form moment integrals, criterion coefficients, oracle moments
    Moments {
        #[command(flatten)]
        state: StateArgs,
        /// F0 evaluation mode
        #[arg(long, default_value = "paper", value_parser = parse_mode)]
        mode: F0Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form-vs-oracle verification report (exit 3 on unexpected failure)
    Verify {
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: u32,
        #[arg(long = "l-max", default_value_t = 2)]
        l_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separability verdict with the (P, Q) witness and a both-mode JSON record
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "paper", value_parser = parse_mode)]
        mode: F0Mode,
        #[command(flatten)]
        a_grid: AGridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV data behind the criterion figures (1: l=1 n=3; 2: l=0 n=2)
    Figure {
        /// Figure id
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
        #[arg(long, default_value = "paper", value_parser = parse_mode)]
        mode: F0Mode,
        #[command(flatten)]
        a_grid: AGridArgs,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verdicts and moments over an (n, l, alpha) grid
    Sweep {
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: u32,
        #[arg(long = "l-max", default_value_t = 3)]
        l_max: u32,
        #[arg(long = "alpha-min", default_value_t = 0.05)]
        alpha_min: f64,
        #[arg(long = "alpha-max", default_value_t = 3.0)]
        alpha_max: f64,
        #[arg(long = "alpha-steps", default_value_t = 60)]
        alpha_steps: usize,
        /// Spacing of the alpha grid
        #[arg(long = "alpha-scale", default_value = "linear", value_parser = ["linear", "log"])]
        alpha_scale: String,
        #[arg(long, default_value = "paper", value_parser = parse_mode)]
        mode: F0Mode,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// Output format
        #[arg(long, default_value = "csv", value_parser = parse_format)]
        format: String,
        #[command(flatten)]
        a_grid: AGridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    let result = match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    // a closed pipe on the read end is not an error for a CLI
    match result {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Spectrum { state, out } => {
            let text = cli::run_spectrum(state.n, state.l, state.alpha, state.m)?;
            emit(&out, &text).map_err(|e| Error::Domain(e.to_string()))?;
            Ok(0)
        }
        Command::Moments { state, mode, out } => {
            let text = cli::run_moments(state.n, state.l, state.alpha, state.m, mode)?;
            emit(&out, &text).map_err(|e| Error::Domain(e.to_string()))?;
            Ok(0)
        }
        Command::Verify { n_max, l_max, out } => {
            let (text, ok) = cli::run_verify(n_max, l_max);
            emit(&out, &text).map_err(|e| Error::Domain(e.to_string()))?;
            Ok(if ok { 0 } else { 3 })
        }
        Command::Classify { state, mode, a_grid, out } => {
            let text =
                cli::run_classify(state.n, state.l, state.alpha, state.m, mode, &a_grid.grid())?;
            emit(&out, &text).map_err(|e| Error::Domain(e.to_string()))?;
            Ok(0)
        }
        Command::Figure { id, mode, a_grid, m, out } => {
            let text = cli::run_figure(id, mode, &a_grid.grid(), m)?;
            emit(&out, &text).map_err(|e| Error::Domain(e.to_string()))?;
            Ok(0)
        }
        Command::Sweep {
            n_max,
            l_max,
            alpha_min,
            alpha_max,
            alpha_steps,
            alpha_scale,
            mode,
            m,
            format,
            a_grid,
            out,
        } => {
            let spec = SweepSpec {
                n_max,
                l_max,
                alpha_grid: GridSpec {
                    min: alpha_min,
                    max: alpha_max,
                    steps: alpha_steps,
                    log: alpha_scale == "log",
                },
                a_grid: a_grid.grid(),
                mode,
                m,
                format: if format == "json" { OutputFormat::Json } else { OutputFormat::Csv },
            };
            let text = cli::run_sweep(&spec)?;
            emit(&out, &text).map_err(|e| Error::Domain(e.to_string()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not usage errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e @ Error::CriticalCoupling { .. }) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e @ Error::Domain(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
