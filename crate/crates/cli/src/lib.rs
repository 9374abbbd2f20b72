//! Command-line experiment runner for piecewise flat Ricci flow.
//!
//! `run` performs one flow and writes its artifacts, `verify` runs the
//! invariant suite on flat lattices, `table` reruns every preset behind one
//! results table and `presets` lists the named configurations.

pub mod config;
pub mod experiment;
pub mod table;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ricci_mesh::BlockKind;

pub use config::{preset, presets, ExperimentConfig, Grid, Manifold};
pub use experiment::{Analysis, Experiment};
pub use verify::{verify, VerifyConfig, VerifyReport};

/// Exit status for malformed or unsupported configurations.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for runs that fail or break an invariant.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "ricci-mesh", version, about = "Piecewise flat Ricci flow experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a manifold, run the flow and write its artifacts.
    Run(RunArgs),
    /// Check the flat fixed point, the curvature identities and the reference solvers.
    Verify(VerifyArgs),
    /// Rerun every preset of one results table and write it as CSV.
    Table(TableArgs),
    /// List the named presets.
    Presets,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = Manifold::Flat)]
    pub manifold: Manifold,
    #[arg(long = "type", default_value = "cubic")]
    pub block: BlockKind,
    /// Block counts, `N` or `AxB` for torus4.
    #[arg(long, conflicts_with = "blocks")]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long)]
    pub normalized: bool,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Output directory; defaults to `out/<label>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use a named preset, or the preset matching the other flags when no name is given.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub paper_preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl RunArgs {
    pub fn to_config(&self) -> anyhow::Result<ExperimentConfig> {
        if let Some(name) = self.paper_preset.as_deref().filter(|n| !n.is_empty()) {
            let mut c = preset(name)?;
            c.seed = self.seed;
            return Ok(c);
        }
        let grid = match (&self.grid, self.blocks) {
            (Some(g), _) => g.clone(),
            (None, Some(n)) => Grid(vec![n]),
            (None, None) => anyhow::bail!("give --grid or --blocks"),
        };
        let mut c = ExperimentConfig::new(self.manifold, self.block, grid);
        c.lambda = self.lambda;
        c.normalized = self.normalized;
        c.stride = self.stride;
        c.seed = self.seed;
        if self.paper_preset.is_some() {
            return c.into_paper_preset();
        }
        if let Some(dt) = self.dt {
            c.dt = dt;
        }
        if let Some(steps) = self.steps {
            c.steps = steps;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "type", default_value = "cubic")]
    pub block: BlockKind,
    /// Blocks per side of the flat unit torus.
    #[arg(long, default_value_t = 3)]
    pub grid: usize,
    /// Relative amplitude of random length noise applied before checking.
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Skip the PDE self-convergence check.
    #[arg(long)]
    pub no_pde: bool,
    /// Also write the report as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Table number, 1 to 5.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    pub number: u8,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Runs the parsed command, returning the process exit status.
pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Run(args) => run_command(&args),
        Command::Verify(args) => verify_command(&args),
        Command::Table(args) => match table::write_table(args.number, &args.out) {
            Ok(path) => {
                println!("wrote {}", path.display());
                0
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_FAILURE
            }
        },
        Command::Presets => {
            for p in presets() {
                println!("{:<28} {} {} {} dt={} steps={}", p.label(), p.manifold, p.block, p.grid, p.dt, p.steps);
            }
            0
        }
    }
}

fn run_command(args: &RunArgs) -> i32 {
    let config = match args.to_config().and_then(|c| c.build().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out").join(config.label()));
    let result = Experiment::run(&config).and_then(|exp| exp.write(&out).map(|_| exp));
    match result {
        Ok(exp) => {
            let (cols, vals) = exp.table_row();
            println!("{}: {} records written to {}", config.label(), exp.trace.records.len(), out.display());
            for (c, v) in cols.iter().zip(vals) {
                println!("  {c:<16} {v:.6}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}

fn verify_command(args: &VerifyArgs) -> i32 {
    let config = VerifyConfig {
        block: args.block,
        n: args.grid,
        perturb: args.perturb,
        seed: args.seed,
        samples: args.samples,
        steps: args.steps,
        pde_points: if args.no_pde { 0 } else { VerifyConfig::default().pde_points },
        ..VerifyConfig::default()
    };
    let report = match verify(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    for c in &report.checks {
        println!("{c}");
    }
    println!("monte-carlo edge volume {:.17e}", report.monte_carlo_volume);
    if let Some(path) = &args.out {
        let written = serde_json::to_string_pretty(&report)
            .map_err(anyhow::Error::from)
            .and_then(|s| std::fs::write(path, s + "\n").map_err(Into::into));
        if let Err(e) = written {
            eprintln!("error: writing {}: {e:#}", path.display());
            return EXIT_FAILURE;
        }
    }
    if report.passed() {
        0
    } else {
        EXIT_FAILURE
    }
}
