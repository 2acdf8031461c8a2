//! Command-line front end for `critbind-core`.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{FileConfig, Format, Overrides, RunConfig, Spacing};
use output::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Solver(critbind_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<critbind_core::Error> for CliError {
    fn from(e: critbind_core::Error) -> Self {
        use critbind_core::Error as E;
        match e {
            E::UnknownKind(_) | E::InvalidPotential(_) | E::Grid(_) | E::InvalidInput(_) => CliError::Config(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Solver(_) => "solver",
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once([',', ':']).ok_or_else(|| format!("expected LO,HI, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(lo)?, num(hi)?))
}

/// Critical couplings, near-threshold binding energies and their
/// two-dimensional limit for attractive short-range potentials in 2 + eps
/// dimensions (hbar = 2m = 1).
#[derive(Debug, Parser)]
#[command(name = "critbind", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Catalog kind (exponential, square_well, yukawa_like, gaussian) or a
    /// two-column `r v` table file.
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Range a of the potential; every length is reported in units of a.
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Dimension offset, d = 2 + eps.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Single coupling, in units of 1/a^2.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Coupling range LO,HI in units of 1/a^2.
    #[arg(long, global = true, value_parser = parse_pair)]
    pub lambda_range: Option<(f64, f64)>,
    /// Number of couplings in the range.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub spacing: Option<Spacing>,
    #[arg(long, global = true)]
    pub grid_nodes: Option<usize>,
    /// Outer grid radius in units of the range scale.
    #[arg(long, global = true)]
    pub rmax: Option<f64>,
    /// Largest kappa * a_bar at which the exponential two-dimensional law is used.
    #[arg(long, global = true)]
    pub guard: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the machine-readable table here (csv unless --format json).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with [potential], [solver], [sweep], [two_center], [output].
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical coupling by shooting and by the Green's-function integral.
    Critical,
    /// Binding energies over a range of couplings.
    Sweep,
    /// Fit the exponent of E ~ (lambda - lambda_c)^beta.
    FitExponent {
        /// Window LO,HI in (lambda - lambda_c)/lambda.
        #[arg(long, value_parser = parse_pair)]
        window: Option<(f64, f64)>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Small-eps coefficients, mean range and prefactor C of the catalog.
    Table1,
    /// Shared level of two distant centers in two dimensions.
    TwoCenter {
        /// Single-center kappa in units of 1/a.
        #[arg(long)]
        kappa0: Option<f64>,
        /// Separations in units of a, comma separated.
        #[arg(long, value_delimiter = ',')]
        separations: Option<Vec<f64>>,
        /// Also evaluate the prefactor of the summed two-center potential.
        #[arg(long)]
        composed: bool,
    },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        let g = &self.global;
        let mut o = Overrides {
            potential: g.potential.clone(),
            a: g.a,
            eps: g.eps,
            lambda: g.lambda,
            lambda_range: g.lambda_range,
            count: g.count,
            spacing: g.spacing,
            grid_nodes: g.grid_nodes,
            rmax: g.rmax,
            guard: g.guard,
            format: g.format,
            out: g.out.clone(),
            ..Overrides::default()
        };
        match &self.command {
            Command::FitExponent { window, points } => {
                o.window = *window;
                o.points = *points;
            }
            Command::TwoCenter {
                kappa0,
                separations,
                composed,
            } => {
                o.kappa0 = *kappa0;
                o.separations = separations.clone();
                o.composed = *composed;
            }
            _ => {}
        }
        o
    }
}

fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut warn = |m: String| eprintln!("warning: {m}");
    match cli.command {
        Command::Critical => commands::critical(cfg),
        Command::Sweep => commands::sweep(cfg),
        Command::FitExponent { .. } => commands::fit(cfg),
        Command::Table1 => commands::table(cfg),
        Command::TwoCenter { .. } => commands::two_center(cfg, &mut warn),
    }
}

fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Csv => report.to_csv(),
        Format::Json => Ok(report.to_json()),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let json_mode = cli.global.format == Some(Format::Json);
    match try_run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            if json_mode {
                let obj = json!({ "error": { "kind": e.kind(), "code": e.exit_code(), "message": e.to_string() } });
                println!("{obj}");
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn try_run(cli: &Cli) -> Result<(), CliError> {
    let file = cli.global.config.as_deref().map(FileConfig::load).transpose()?;
    let cfg = RunConfig::resolve(cli.overrides(), file)?;
    let report = execute(cli, &cfg)?;
    let mut stdout = std::io::stdout().lock();
    match &cfg.out {
        Some(path) => {
            let format = match cfg.format {
                None | Some(Format::Text) => Format::Csv,
                Some(f) => f,
            };
            std::fs::write(path, render(&report, format)?)?;
            if matches!(cli.command, Command::Table1) {
                stdout.write_all(report.to_text().as_bytes())?;
            }
            eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
        }
        None => {
            let default = if matches!(cli.command, Command::Sweep) { Format::Csv } else { Format::Text };
            stdout.write_all(render(&report, cfg.format.unwrap_or(default))?.as_bytes())?;
        }
    }
    Ok(())
}
