mod commands;
mod config;
mod error;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use besselidx::kernel::Route;
use besselidx::verification::{DEFAULT_SAMPLES, DEFAULT_SEED};
use commands::{InvertMode, RouteChoice, TransformKind};
use config::{Format, Overrides, RunConfig};
use error::CliError;

/// Index transforms with products of Bessel functions of imaginary order.
///
/// Exit codes: 0 ok, 2 domain error, 3 tolerance failure, 4 i/o error.
#[derive(Debug, Parser)]
#[command(name = "besselidx", version, allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// INI-style file with rel_tol, abs_tol, gamma, height, nodes_per_unit,
    /// format, out, golden and jobs; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Relative tolerance for route agreement.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Abscissa of the Mellin-Barnes contour.
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Fixed contour height (automatic when absent).
    #[arg(long, global = true)]
    height: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write the table or report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Golden reference file (the bundled one when absent).
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
    /// Worker threads for grid evaluations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RouteArg {
    Direct,
    Fourier,
    #[value(alias = "mb")]
    MellinBarnes,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Forward,
    Adjoint,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "roundtrip-f", alias = "roundtrip-F")]
    RoundtripF,
    #[value(name = "roundtrip-g", alias = "roundtrip-G")]
    RoundtripG,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Psi_tau(x) on a grid by one or all routes.
    Kernel {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        tau: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        x: Vec<f64>,
        #[arg(long, value_enum, default_value = "direct")]
        route: RouteArg,
    },
    /// Forward transform of (1 - x) e^{-x} or adjoint transform of tau^2 e^{-tau^2}.
    Transform {
        #[arg(long, value_enum, default_value = "forward")]
        kind: KindArg,
        /// Indices for the forward transform.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tau: Vec<f64>,
        /// Points for the adjoint transform.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        /// direct, mellin-barnes or composition (forward); direct or fourier
        /// (adjoint); or all.
        #[arg(long, default_value = "all")]
        route: String,
    },
    /// Transform a built-in function and recover it with an inversion formula.
    Invert {
        #[arg(long, value_enum, default_value = "roundtrip-f")]
        mode: ModeArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.5, 1.0, 2.0])]
        x: Vec<f64>,
    },
    /// Solution of the wedge problem and its PDE residual.
    Pde {
        /// Wedge opening.
        #[arg(long, default_value_t = 1.4)]
        beta: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.5, 1.0, 2.0])]
        r: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![0.1, 0.3, 0.6])]
        theta: Vec<f64>,
    },
    /// Full invariant suite plus the golden comparison.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Reproduce every entry of the golden file.
    GoldenCheck,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let flags = Overrides {
        rel_tol: g.tol,
        gamma: g.gamma,
        height: g.height,
        format: g.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        out: g.out,
        golden: g.golden,
        jobs: g.jobs,
    };
    let cfg = RunConfig::load(g.config.as_deref(), &flags)?;
    match cli.command {
        Command::Kernel { tau, x, route } => {
            let route = match route {
                RouteArg::Direct => RouteChoice::One(Route::Direct),
                RouteArg::Fourier => RouteChoice::One(Route::Fourier),
                RouteArg::MellinBarnes => RouteChoice::One(Route::MellinBarnes),
                RouteArg::All => RouteChoice::All,
            };
            commands::cmd_kernel(&cfg, &tau, &x, route)
        }
        Command::Transform {
            kind,
            tau,
            x,
            route,
        } => {
            let (kind, points) = match kind {
                KindArg::Forward => (TransformKind::Forward, tau),
                KindArg::Adjoint => (TransformKind::Adjoint, x),
            };
            if points.is_empty() {
                return Err(CliError::Domain(
                    "give --tau for the forward transform or --x for the adjoint".into(),
                ));
            }
            commands::cmd_transform(&cfg, kind, &points, Some(route.as_str()))
        }
        Command::Invert { mode, x } => {
            let mode = match mode {
                ModeArg::RoundtripF => InvertMode::RoundTripF,
                ModeArg::RoundtripG => InvertMode::RoundTripG,
            };
            commands::cmd_invert(&cfg, mode, &x)
        }
        Command::Pde { beta, r, theta } => commands::cmd_pde(&cfg, beta, &r, &theta),
        Command::Verify { seed, samples } => commands::cmd_verify(&cfg, seed, samples),
        Command::GoldenCheck => commands::cmd_golden_check(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("besselidx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
