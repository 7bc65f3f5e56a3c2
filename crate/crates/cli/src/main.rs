//! `phaseprint`: classify, index, connect, synthesize and render planar
//! polynomial vector fields modelling fingerprint ridge flow.

mod commands;
mod error;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phaseprint::Parallelism;

use crate::error::CliError;
use crate::settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "phaseprint", version, about = "Phase-portrait models of fingerprint patterns")]
struct Cli {
    /// TOML file overriding the default numerical settings.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Print the effective settings as TOML and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    /// Override one setting, e.g. `--tol integration.rtol=1e-10`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Run every data-parallel loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

/// Where the field comes from: exactly one of the two.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct FieldSource {
    /// Built-in template: plain-arch, tented-arch, oblique-stria, whorl,
    /// spiral, degenerate-spiral or twist.
    #[arg(long)]
    pub template: Option<String>,
    /// Field text `P ; Q` for `x' = P, y' = Q`.
    #[arg(long, allow_hyphen_values = true)]
    pub field: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the `--out` extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Pgm,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find and classify every singular point in the domain.
    Classify {
        #[command(flatten)]
        source: FieldSource,
        /// `xmin,xmax,ymin,ymax`; the template domain or [-2,2]^2 by default.
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Winding numbers: of one contour, or of the domain boundary compared
    /// with the sum over the enclosed singular points.
    Index {
        #[command(flatten)]
        source: FieldSource,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// `circle:x,y,r` or `rect:xmin,xmax,ymin,ymax`.
        #[arg(long, allow_hyphen_values = true)]
        contour: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check whether local portraits can be connected on a closed surface.
    Connexion {
        /// Comma-separated entries: labels, integer indices or `sectors:E:H`.
        #[arg(long, value_delimiter = ',', required_unless_present = "points_file")]
        points: Vec<String>,
        /// File with one entry per line; `#` starts a comment.
        #[arg(long, value_name = "FILE", conflicts_with = "points")]
        points_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve a Hermite constraint file and print the assembled field.
    Synth {
        /// TOML constraint file.
        #[arg(long, value_name = "FILE", required_unless_present = "builtin")]
        constraints: Option<PathBuf>,
        /// Built-in constraint set: whorl or pendulum.
        #[arg(long, conflicts_with = "constraints")]
        builtin: Option<String>,
        /// Print the constraint file instead of solving it.
        #[arg(long)]
        dump_constraints: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate the seeds of a phase portrait.
    Portrait {
        #[command(flatten)]
        source: FieldSource,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// TOML file with `[[seeds]]` entries; the template seeds by default.
        #[arg(long, value_name = "FILE")]
        seeds: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample the flow orientation modulo pi on a grid.
    Orient {
        #[command(flatten)]
        source: FieldSource,
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
        /// `NXxNY`, e.g. `128x96`.
        #[arg(long)]
        grid: Option<String>,
        /// Also emit the doubled-angle vectors.
        #[arg(long)]
        doubled: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mut settings = Settings::load(cli.config.as_deref())?;
    settings.apply_overrides(&cli.overrides)?;
    if cli.sequential {
        settings.set_parallelism(Parallelism::Sequential);
    }
    if cli.dump_config {
        print!("{}", settings.to_toml());
        return Ok(ExitCode::SUCCESS);
    }
    let Some(command) = cli.command else {
        return Err(CliError::input("no subcommand given; see --help"));
    };
    match command {
        Command::Classify { source, domain, output } => commands::classify(&settings, &source, domain, &output),
        Command::Index {
            source,
            domain,
            contour,
            output,
        } => commands::index(&settings, &source, domain, contour, &output),
        Command::Connexion {
            points,
            points_file,
            genus,
            output,
        } => commands::connexion(points, points_file, genus, &output),
        Command::Synth {
            constraints,
            builtin,
            dump_constraints,
            output,
        } => commands::synth(&settings, constraints, builtin, dump_constraints, &output),
        Command::Portrait {
            source,
            domain,
            seeds,
            output,
        } => commands::portrait(&settings, &source, domain, seeds, &output),
        Command::Orient {
            source,
            domain,
            grid,
            doubled,
            output,
        } => commands::orient(&settings, &source, domain, grid, doubled, &output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(error::Status::Input as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("phaseprint: {e}");
            e.status.into()
        }
    }
}
