//! `fracfujita`: runs one experiment from a TOML file and writes CSV tables
//! plus a `manifest.json` into the output directory.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, ParseError};
use output::Output;

#[derive(Parser)]
#[command(name = "fracfujita", version, about = "Experiments for the time-fractional Fujita problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory; overrides `output_dir` of the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Multiplies every tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment and write its tables.
    Run { config: PathBuf },
    /// Check the config and print it fully resolved, without computing.
    Validate { config: PathBuf },
}

/// Error classes; each exits with its own code.
#[derive(Clone, Copy, Debug)]
enum Kind {
    Parse,
    Invalid,
    Module,
    Io,
    Run,
    Check,
}

impl Kind {
    fn tag(self) -> &'static str {
        match self {
            Kind::Parse => "E_PARSE",
            Kind::Invalid => "E_INVALID",
            Kind::Module => "E_MODULE",
            Kind::Io => "E_IO",
            Kind::Run => "E_RUN",
            Kind::Check => "E_CHECK",
        }
    }

    fn code(self) -> u8 {
        match self {
            Kind::Parse => 2,
            Kind::Invalid => 3,
            Kind::Module => 4,
            Kind::Io => 5,
            Kind::Run => 6,
            Kind::Check => 7,
        }
    }
}

struct Failure {
    kind: Kind,
    message: String,
}

impl Failure {
    fn new(kind: Kind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }
}

const EXPERIMENTS: [&str; 7] = ["moments", "lemmas", "norms", "semigroup", "solve", "lifespan", "sweep"];

fn parse_failure(path: &std::path::Path, e: ParseError) -> Failure {
    match &e.context {
        Some(c) => Failure::new(Kind::Parse, format!("{}: {e} (near `{}`)", path.display(), c.trim())),
        None => Failure::new(Kind::Parse, format!("{}: {e}", path.display())),
    }
}

fn load(cli: &Cli, path: &std::path::Path) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(Kind::Io, format!("cannot read {}: {e}", path.display())))?;
    // Name the experiment first so that a typo there is not reported as generic syntax.
    if let Ok(table) = text.parse::<toml::Table>() {
        match table.get("experiment") {
            Some(toml::Value::String(name)) if !EXPERIMENTS.contains(&name.as_str()) => {
                return Err(Failure::new(
                    Kind::Module,
                    format!("{}: unknown experiment \"{name}\"; expected one of {}", path.display(), EXPERIMENTS.join(", ")),
                ));
            }
            None => {
                return Err(Failure::new(Kind::Parse, format!("{}: missing key experiment", path.display())));
            }
            _ => {}
        }
    }
    let parsed = config::parse(&text).map_err(|e| parse_failure(path, e))?;
    let (mut config, dropped) = parsed.resolve();
    for d in dropped {
        eprintln!("warning: ignoring [{d}] block, experiment is {}", config.experiment.name());
    }
    if !(cli.tol_scale > 0.0 && cli.tol_scale.is_finite()) {
        return Err(Failure::new(Kind::Invalid, format!("--tol-scale must be positive, got {}", cli.tol_scale)));
    }
    config.tolerances = config.tolerances.scaled(cli.tol_scale);
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    let violations = config.violations();
    if !violations.is_empty() {
        let n = violations.len();
        let plural = if n == 1 { "" } else { "s" };
        return Err(Failure::new(Kind::Invalid, format!("{}: {n} violation{plural}: {}", path.display(), violations.join("; "))));
    }
    Ok(config)
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::new(Kind::Invalid, "--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(Kind::Run, format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Validate { config } => {
            let c = load(cli, config)?;
            let text = toml::to_string(&c).map_err(|e| Failure::new(Kind::Run, format!("cannot print config: {e}")))?;
            println!("ok");
            print!("{text}");
            Ok(())
        }
        Command::Run { config } => {
            let c = load(cli, config)?;
            let mut out = Output::create(&c.output_dir, &c).map_err(|e| Failure::new(Kind::Io, format!("{e:#}")))?;
            experiments::run(&c, &mut out).map_err(|e| {
                let kind = if e.downcast_ref::<std::io::Error>().is_some() { Kind::Io } else { Kind::Run };
                Failure::new(kind, format!("{}: {e:#}", c.experiment.name()))
            })?;
            let manifest = out.finish().map_err(|e| Failure::new(Kind::Io, format!("{e:#}")))?;
            for f in out.file_names() {
                println!("{}", c.output_dir.join(f).display());
            }
            println!("{}", manifest.display());
            let failed = out.failed();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::new(Kind::Check, format!("{} check(s) failed: {}", failed.len(), failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}] {}", f.kind.tag(), f.message);
            ExitCode::from(f.kind.code())
        }
    }
}
