use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use herglotz::harness::{run, ExperimentConfig, ExperimentKind};
use herglotz::Error;

#[derive(Parser)]
#[command(version, about = "Superresolution experiments for Herglotz-Nevanlinna functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Phase grid size as a power of two.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=24))]
    grid_log2: Option<u32>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Schur algorithm and the one-variable superresolution certificate.
    Schur,
    /// Phase function of a Cayley inner function and its Fourier table.
    Phase,
    /// Polydisk superresolution sweep over a mixture family.
    Superres,
    /// Sublevel volume profile of a real polynomial.
    Lambda,
    /// Ball superresolution inequality over a random corpus.
    Ball,
    /// Nonuniqueness of self-maps with a fixed affine section.
    Demo,
    /// Check a config without running it.
    Validate,
}

impl Command {
    fn kind(self) -> Option<ExperimentKind> {
        Some(match self {
            Command::Schur => ExperimentKind::Schur,
            Command::Phase => ExperimentKind::Phase,
            Command::Superres => ExperimentKind::Superres,
            Command::Lambda => ExperimentKind::Lambda,
            Command::Ball => ExperimentKind::Ball,
            Command::Demo => ExperimentKind::Demo,
            Command::Validate => return None,
        })
    }
}

fn load(cli: &Cli) -> herglotz::Result<ExperimentConfig> {
    let kind = cli.command.kind();
    let mut cfg = match &cli.global.config {
        Some(path) => ExperimentConfig::from_file(path, kind)?,
        None => ExperimentConfig::for_kind(kind.unwrap_or(ExperimentKind::Demo)),
    };
    let g = &cli.global;
    if let Some(out) = &g.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(k) = g.grid_log2 {
        cfg.grid = 1 << k;
    }
    Ok(cfg)
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_math_domain() { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if cli.command.kind().is_none() {
        let problems = cfg.validate();
        for v in &problems {
            println!("{v}");
        }
        if problems.is_empty() {
            println!("ok: {} config is valid", cfg.kind.name());
            return ExitCode::SUCCESS;
        }
        return ExitCode::from(1);
    }
    match run(&cfg) {
        Ok(m) => {
            for a in &m.artifacts {
                println!("{}", cfg.out.join(a).display());
            }
            if m.violations > 0 {
                eprintln!("{} row(s) violate the checked property", m.violations);
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&e),
    }
}
