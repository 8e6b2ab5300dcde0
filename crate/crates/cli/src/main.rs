use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ellsurf::scenario::{bundled, ArrangementType};
use ellsurf::{ConfigDocument, Result};

mod commands;
mod demo;
mod report;

use commands::{ArrangementInput, Source};
use report::{exit_code, Report};

/// Mordell–Weil images of divisors on elliptic surfaces, from intersection data.
#[derive(Parser)]
#[command(name = "ellsurf", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ConfigSource {
    /// Surface and divisor description (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Use a bundled surface: I or II.
    #[arg(long, value_parser = parse_type)]
    bundled: Option<ArrangementType>,
}

impl ConfigSource {
    fn source(&self) -> Source<'_> {
        match (&self.config, self.bundled) {
            (Some(p), _) => Source::Path(p),
            (None, Some(ty)) => Source::Bundled(ty),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Intersection matrix, inverse and component group of a fiber type.
    Fiber { kind: String },
    /// Image P_D = n·P_o + torsion of a divisor.
    Image {
        #[command(flatten)]
        source: ConfigSource,
        #[arg(long, default_value = "E+")]
        divisor: String,
        #[arg(long, default_value = "s_o")]
        generator: String,
    },
    /// Existence of D_2n covers branched along an arrangement of the given type.
    Cover {
        #[arg(long = "type", value_parser = parse_type)]
        ty: ArrangementType,
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        n: Option<i64>,
        /// Range a..b, inclusive.
        #[arg(long)]
        sweep: Option<String>,
        /// Surface carrying E+, E- and s_o (default: the bundled one).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Build a nodal cubic plus four lines and run it through the pipeline.
    Arrangement {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
        s1: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
        s2: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "+")]
        sign: String,
        /// Random parameters from this seed.
        #[arg(long, conflicts_with_all = ["s1", "s2"])]
        random: Option<u64>,
    },
    /// Recompute every golden value for the bundled surface.
    Demo {
        #[arg(long)]
        type1: Option<PathBuf>,
        #[arg(long)]
        type2: Option<PathBuf>,
    },
}

fn parse_type(s: &str) -> std::result::Result<ArrangementType, String> {
    s.parse().map_err(|e: ellsurf::Error| e.to_string())
}

fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Fiber { kind } => commands::fiber(kind),
        Command::Image {
            source,
            divisor,
            generator,
        } => commands::image(source.source(), divisor, generator),
        Command::Cover {
            ty,
            n,
            sweep,
            config,
        } => {
            let (lo, hi) = match (n, sweep) {
                (Some(n), _) => (*n, *n),
                (None, Some(s)) => commands::parse_sweep(s)?,
                (None, None) => unreachable!("clap requires --n or --sweep"),
            };
            commands::cover(config.as_deref().map(Source::Path), *ty, lo, hi)
        }
        Command::Arrangement {
            s1,
            s2,
            sign,
            random,
        } => {
            let sign = commands::parse_sign(sign)?;
            let input = match (random, s1, s2) {
                (Some(seed), _, _) => ArrangementInput::Random(*seed),
                (None, Some(s1), Some(s2)) => ArrangementInput::Params { s1, s2 },
                _ => unreachable!("clap requires --s1 and --s2"),
            };
            commands::arrangement(input, sign)
        }
        Command::Demo { type1, type2 } => {
            let load = |p: &Option<PathBuf>, ty| match p {
                Some(p) => ConfigDocument::load(p),
                None => Ok(bundled(ty)),
            };
            let t1 = load(type1, ArrangementType::TypeI)?;
            let t2 = load(type2, ArrangementType::TypeII)?;
            Ok(demo::demo(&t1, &t2))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.render(cli.json));
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
