use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, Grid, Settings};

#[derive(Debug, Parser)]
#[command(
    name = "jumpga",
    version,
    about = "(mu+1) GA on Jump_k: diversity and runtime experiments",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Args)]
pub struct Base {
    /// TOML file with a [common] section and one section per subcommand.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Problem {
    /// Bit-string length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Gap size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Mutation strength; the per-bit rate is chi/n.
    #[arg(long)]
    pub chi: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Independent runs from uniform random populations until the optimum.
    Run(RunArgs),
    /// Time from a monomorphic plateau population until no species exceeds mu/2.
    Takeover(RunArgs),
    /// Whether a species regrows to lambda*mu after takeover.
    Survival(SurvivalArgs),
    /// Pairwise Hamming-distance frequencies over a plateau run.
    Figure1(Figure1Args),
    /// The configured GA against the same GA without crossover.
    Compare(RunArgs),
    /// Table of analytic transition bounds and constants.
    Bounds(BoundsArgs),
    /// Monte Carlo transition estimates checked against the analytic bounds.
    Sweep(SweepArgs),
    /// Exact probability of creating the optimum from two plateau parents.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub base: Base,
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub mu: Option<usize>,
    /// Crossover probability.
    #[arg(long)]
    pub pc: Option<f64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SurvivalArgs {
    #[command(flatten)]
    pub base: Base,
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub pc: Option<f64>,
    /// Population sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub mus: Option<Vec<usize>>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Monitoring horizon after takeover.
    #[arg(long)]
    pub t_max: Option<u64>,
    /// Iteration cap for reaching takeover.
    #[arg(long)]
    pub takeover_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[command(flatten)]
    pub base: Base,
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub mu: Option<usize>,
    #[arg(long)]
    pub pc: Option<f64>,
    /// Iterations between snapshots.
    #[arg(long)]
    pub stride: Option<u64>,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    /// Number of runs under the seed.
    #[arg(long)]
    pub runs: Option<u64>,
    /// Also write an SVG plot per run.
    #[arg(long)]
    pub svg: Option<bool>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub base: Base,
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub pc: Option<f64>,
    /// `default` or comma-separated population sizes.
    #[arg(long)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub base: Base,
    #[command(flatten)]
    pub problem: Problem,
    #[arg(long)]
    pub pc: Option<f64>,
    /// `default` or comma-separated population sizes.
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Simulated steps per cell before conditioning.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Constant of the band allowed around the mutation-only growth term.
    #[arg(long)]
    pub o_constant: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub base: Base,
    #[command(flatten)]
    pub problem: Problem,
    /// Half distances d of the parent pairs (distance 2d), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub distances: Option<Vec<usize>>,
    /// Monte Carlo trials per pair; 0 skips the simulation.
    #[arg(long)]
    pub trials: Option<u64>,
}

fn common(base: &Base, problem: &Problem) -> Settings {
    Settings {
        output_dir: base.output_dir.clone(),
        seed: base.seed,
        n: problem.n,
        k: problem.k,
        chi: problem.chi,
        ..Settings::default()
    }
}

impl CommandArgs {
    pub fn command(&self) -> Command {
        match self {
            CommandArgs::Run(_) => Command::Run,
            CommandArgs::Takeover(_) => Command::Takeover,
            CommandArgs::Survival(_) => Command::Survival,
            CommandArgs::Figure1(_) => Command::Figure1,
            CommandArgs::Compare(_) => Command::Compare,
            CommandArgs::Bounds(_) => Command::Bounds,
            CommandArgs::Sweep(_) => Command::Sweep,
            CommandArgs::Oracle(_) => Command::Oracle,
        }
    }

    pub fn config_path(&self) -> Option<&PathBuf> {
        match self {
            CommandArgs::Run(a) | CommandArgs::Takeover(a) | CommandArgs::Compare(a) => {
                a.base.config.as_ref()
            }
            CommandArgs::Survival(a) => a.base.config.as_ref(),
            CommandArgs::Figure1(a) => a.base.config.as_ref(),
            CommandArgs::Bounds(a) => a.base.config.as_ref(),
            CommandArgs::Sweep(a) => a.base.config.as_ref(),
            CommandArgs::Oracle(a) => a.base.config.as_ref(),
        }
    }

    /// The flag layer of the settings.
    pub fn flags(&self) -> Settings {
        match self {
            CommandArgs::Run(a) | CommandArgs::Takeover(a) | CommandArgs::Compare(a) => Settings {
                mu: a.mu,
                pc: a.pc,
                replicates: a.replicates,
                max_iterations: a.max_iterations,
                ..common(&a.base, &a.problem)
            },
            CommandArgs::Survival(a) => Settings {
                pc: a.pc,
                mus: a.mus.clone(),
                replicates: a.replicates,
                lambda: a.lambda,
                t_max: a.t_max,
                takeover_cap: a.takeover_cap,
                ..common(&a.base, &a.problem)
            },
            CommandArgs::Figure1(a) => Settings {
                mu: a.mu,
                pc: a.pc,
                stride: a.stride,
                max_iterations: a.max_iterations,
                runs: a.runs,
                svg: a.svg,
                ..common(&a.base, &a.problem)
            },
            CommandArgs::Bounds(a) => Settings {
                pc: a.pc,
                grid: a.grid.clone(),
                lambda: a.lambda,
                ..common(&a.base, &a.problem)
            },
            CommandArgs::Sweep(a) => Settings {
                pc: a.pc,
                grid: a.grid.clone(),
                trials: a.trials,
                o_constant: a.o_constant,
                ..common(&a.base, &a.problem)
            },
            CommandArgs::Oracle(a) => Settings {
                distances: a.distances.clone(),
                trials: a.trials,
                ..common(&a.base, &a.problem)
            },
        }
    }
}
