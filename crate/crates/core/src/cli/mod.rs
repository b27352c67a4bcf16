//! Configuration, suite orchestration and report emission.
//!
//! Exit codes: 0 when every check passes, 1 on a violated check, 2 on a
//! configuration error and 3 when a computation fails.

pub mod config;
pub mod suite;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{load_config, RunConfig, EXPERIMENTS};
pub use suite::{run_suite, write_bundle, SuiteOutcome, SuiteReport};

use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "ravg", version, about = "Momentum-average regularity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiments listed in a config file.
    Run {
        #[arg(value_name = "CONFIG")]
        file: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Slab-measure sweep.
    Lemma3(Overrides),
    /// Weighted slab-integral sweep.
    Lemma4(Overrides),
    /// H^{1/2} bound of the average.
    Lemma2(Overrides),
    /// Fractional-seminorm bound.
    Theorem1(Overrides),
    /// Dilation exponents.
    Scaling(Overrides),
    /// L^q bounds of the damped average.
    LqBounds(Overrides),
    /// Fourier split diagnostic.
    Split(Overrides),
    /// Every experiment.
    All(Overrides),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Config file for the single-experiment commands.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed of the Sobol streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seed of the field family.
    #[arg(long)]
    pub family_seed: Option<u64>,
    /// Number of family sources.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub directions: Option<usize>,
    /// Points per direction and epsilon.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub phase_points: Option<usize>,
    #[arg(long)]
    pub pair_points: Option<usize>,
    /// Nodes on the time axis.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Nodes per spatial axis.
    #[arg(long)]
    pub nx: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = &self.out {
            cfg.output = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.family_seed {
            cfg.family.seed = v;
        }
        if let Some(v) = self.count {
            cfg.family.count = v;
        }
        if let Some(v) = self.directions {
            cfg.slices.directions = v;
        }
        if let Some(v) = self.points {
            cfg.slices.points = v;
        }
        if let Some(v) = self.phase_points {
            cfg.budget.phase_points = v;
        }
        if let Some(v) = self.pair_points {
            cfg.budget.pair_points = v;
        }
        if let Some(v) = self.nt {
            cfg.grid.nt = v;
        }
        if let Some(v) = self.nx {
            cfg.grid.nx = [v; 3];
        }
    }
}

fn resolve(cmd: &Command) -> Result<RunConfig, Error> {
    let (path, overrides, only): (Option<&PathBuf>, &Overrides, Option<&str>) = match cmd {
        Command::Run { file, overrides } => (Some(file), overrides, None),
        Command::Lemma3(o) => (o.config.as_ref(), o, Some("lemma3")),
        Command::Lemma4(o) => (o.config.as_ref(), o, Some("lemma4")),
        Command::Lemma2(o) => (o.config.as_ref(), o, Some("lemma2")),
        Command::Theorem1(o) => (o.config.as_ref(), o, Some("theorem1")),
        Command::Scaling(o) => (o.config.as_ref(), o, Some("scaling")),
        Command::LqBounds(o) => (o.config.as_ref(), o, Some("lq-bounds")),
        Command::Split(o) => (o.config.as_ref(), o, Some("fourier-split")),
        Command::All(o) => (o.config.as_ref(), o, None),
    };
    let mut cfg = match path {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(e) = only {
        cfg.experiments = vec![e.to_string()];
    } else if matches!(cmd, Command::All(_)) {
        cfg.experiments = EXPERIMENTS.iter().map(|s| s.to_string()).collect();
    }
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the command line `args` and returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match resolve(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };
    let outcome = match run_suite(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    match write_bundle(&outcome, &cfg.output) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    }
    let failures = outcome.report.failures();
    let total = outcome.report.reports.len();
    if failures.is_empty() {
        println!("all {total} checks passed");
        0
    } else {
        for r in &failures {
            eprintln!("VIOLATED {}: lhs {:e} > rhs {:e} (+3 x {:e})", r.name, r.lhs, r.rhs, r.mc_error);
        }
        eprintln!("{} of {total} checks violated", failures.len());
        1
    }
}
