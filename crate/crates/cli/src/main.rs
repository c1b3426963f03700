//! `ballmaps`: batch front end for the ballmaps-core library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod output;

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ballmaps", version, about = "Proper holomorphic maps between complex balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where the map comes from: a catalog entry or a spec file.
#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// Catalog map: `linear:m,M`, `whitney`, `whitney:m`, `power:m,d`, or a
    /// bare `linear`/`whitney` completed by --m/--M.
    #[arg(long)]
    pub map: Option<String>,
    /// JSON map spec with domain_dim, target_dim and components.
    #[arg(long, conflicts_with = "map")]
    pub spec_file: Option<PathBuf>,
    /// Domain dimension.
    #[arg(long)]
    pub m: Option<usize>,
    /// Target dimension.
    #[arg(long = "M")]
    pub big_m: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kobayashi distance between two points of the ball.
    Dist {
        /// Comma-separated complex coordinates, e.g. `0.5,0.1+0.2i`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Expected dimension.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Deviation of f(t v) from the radial geodesic towards f(v).
    RadialSweep {
        #[command(flatten)]
        map: MapArgs,
        /// Number of deterministic directions.
        #[arg(long, default_value_t = 16)]
        directions: usize,
        /// Comma-separated times in [0, 1); default 1 - 10^-k, k = 1..6.
        #[arg(long)]
        t_grid: Option<String>,
        /// Boundary grid density for the Lipschitz constant.
        #[arg(long, default_value_t = 1)]
        density: usize,
        /// Monte Carlo trials for the Morse constant.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rescaling pipeline for a map and a sequence of symmetry pairs.
    Rescale {
        #[command(flatten)]
        map: MapArgs,
        /// `cartan` or the path of a JSON array of {n, phi, psi}.
        #[arg(long, default_value = "cartan")]
        seq: String,
        #[arg(long, default_value_t = 1)]
        n_start: u32,
        #[arg(long, default_value_t = 12)]
        n_end: u32,
        /// Trailing differences in the Cauchy report.
        #[arg(long, default_value_t = 3)]
        tail: usize,
        /// Vanishing-pattern tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the escape check (limit claims are then unsupported).
        #[arg(long)]
        allow_non_escaping: bool,
        /// Write the trace document here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// `json` prints the trace document instead of the summary.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Hausdorff pseudo-distance between two sampled curves.
    Hausdorff {
        #[arg(long)]
        curve_a: PathBuf,
        #[arg(long)]
        curve_b: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Empirical Morse constant of the ball.
    Morse {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Endpoint offset R.
        #[arg(long, default_value_t = 0.0)]
        radius: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Membership residual of a matrix in PU(m,1).
    VerifyGroup {
        /// JSON file {"rows": [[[re, im], ...], ...]}.
        #[arg(long)]
        matrix_file: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// List catalog maps, or print one as a spec file.
    Catalog {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Summarize a trace document written by `rescale --out`.
    Report {
        #[arg(long)]
        trace: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dist { z, w, m } => commands::dist(&z, &w, m),
        Command::RadialSweep {
            map,
            directions,
            t_grid,
            density,
            trials,
            seed,
            format,
            out,
        } => commands::radial_sweep(&commands::SweepConfig {
            map,
            directions,
            t_grid,
            density,
            trials,
            seed,
            format,
            out,
        }),
        Command::Rescale {
            map,
            seq,
            n_start,
            n_end,
            tail,
            tol,
            seed,
            allow_non_escaping,
            out,
            format,
        } => commands::rescale(&commands::RescaleConfig {
            map,
            seq,
            n_start,
            n_end,
            tail,
            tol,
            seed,
            allow_non_escaping,
            out,
            format,
        }),
        Command::Hausdorff { curve_a, curve_b, format } => commands::hausdorff(&curve_a, &curve_b, format),
        Command::Morse {
            m,
            alpha,
            beta,
            radius,
            trials,
            seed,
            format,
        } => commands::morse(m, alpha, beta, radius, trials, seed, format),
        Command::VerifyGroup { matrix_file, tol } => commands::verify_group(&matrix_file, tol),
        Command::Catalog { map } => commands::catalog(&map),
        Command::Report { trace } => commands::report(&trace),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
