//! Command-line front end for `mhd-forms`: identity suites, mild-solution
//! runs, decay diagnostics and the scaling check, each writing versioned CSV
//! files and a `manifest.json` into the output directory.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{Fault, Finished};
use crate::config::{Overrides, RunConfig};
use crate::error::{exit, CliError};
use crate::output::OutputDir;

#[derive(Debug, Parser)]
#[command(name = "mhd-forms", version, about = "Exterior-calculus MHD: identity checks, mild solutions and diagnostics")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Space dimension.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Grid points per axis (power of two).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Torus period L.
    #[arg(long, global = true)]
    pub period: Option<f64>,
    /// Time horizon T.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Number of time mesh intervals.
    #[arg(long, global = true)]
    pub mesh_nodes: Option<usize>,
    /// Grading exponent of the time mesh.
    #[arg(long, global = true)]
    pub grading: Option<f64>,
    /// Picard stopping tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Initial data: zero, small-taylor-green, huge-taylor-green, random.
    #[arg(long, global = true)]
    pub preset: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    FlipContractSign,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the exact symbolic suites and the spectral projection suites.
    VerifyIdentities {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Horizon search followed by the Picard iteration.
    Simulate {
        /// Keep the configured horizon.
        #[arg(long)]
        no_search: bool,
        #[arg(long)]
        search_eps: Option<f64>,
        /// Initial velocity 1-form (binary field file).
        #[arg(long, value_name = "PATH")]
        u0: Option<PathBuf>,
        /// Initial magnetic 2-form (binary field file).
        #[arg(long, value_name = "PATH")]
        b0: Option<PathBuf>,
    },
    /// Smoothing ratio curves of the heat, Stokes and Maxwell semigroups.
    Decay {
        /// `p,alpha,q` triples separated by `;` (empty for none).
        #[arg(long, value_name = "LIST")]
        triples: Option<String>,
    },
    /// Compare a run with its rescaled counterpart.
    ScalingCheck {
        #[arg(long)]
        lambda: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyIdentities { .. } => "verify-identities",
            Command::Simulate { .. } => "simulate",
            Command::Decay { .. } => "decay",
            Command::ScalingCheck { .. } => "scaling-check",
        }
    }
}

fn parse_triples(list: &str) -> Result<Vec<[f64; 3]>, CliError> {
    list.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let v: Vec<f64> = item
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Config(format!("bad triple '{item}': {e}")))?;
            match v[..] {
                [p, alpha, q] => Ok([p, alpha, q]),
                _ => Err(CliError::Config(format!("triple '{item}' needs three values p,alpha,q"))),
            }
        })
        .collect()
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let c = &cli.common;
    let overrides = Overrides {
        seed: c.seed,
        preset: c.preset.clone(),
        n: c.n,
        grid: c.grid,
        period: c.period,
        horizon: c.horizon,
        mesh_nodes: c.mesh_nodes,
        grading: c.grading,
        tol: c.tol,
        max_iter: c.max_iter,
    };
    let mut cfg = RunConfig::load(c.config.as_deref(), &overrides)?;
    match &cli.command {
        Command::VerifyIdentities { trials, degree, .. } => {
            if let Some(t) = trials {
                cfg.identities.trials = *t;
            }
            if let Some(d) = degree {
                cfg.identities.degree = *d;
            }
        }
        Command::Simulate { no_search, search_eps, u0, b0 } => {
            if *no_search {
                cfg.solver.horizon_search = false;
            }
            if let Some(e) = search_eps {
                cfg.solver.search_eps = *e;
            }
            if u0.is_some() {
                cfg.solver.u0_file = u0.clone();
            }
            if b0.is_some() {
                cfg.solver.b0_file = b0.clone();
            }
        }
        Command::Decay { triples } => {
            if let Some(list) = triples {
                cfg.decay.triples = parse_triples(list)?;
            }
        }
        Command::ScalingCheck { lambda } => {
            if let Some(l) = lambda {
                cfg.scaling.lambda = *l;
            }
        }
    }
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: &RunConfig, out: &mut OutputDir) -> Result<Finished, CliError> {
    match &cli.command {
        Command::VerifyIdentities { inject_fault, .. } => {
            let fault = inject_fault.map(|FaultArg::FlipContractSign| Fault::FlipContractSign);
            commands::verify_identities(cfg, out, fault)
        }
        Command::Simulate { .. } => commands::simulate(cfg, out),
        Command::Decay { .. } => commands::decay(cfg, out),
        Command::ScalingCheck { .. } => commands::scaling(cfg, out),
    }
}

/// Parses `args` and runs the selected command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(exit::USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit();
        }
    };
    let mut out = match OutputDir::create(&cli.common.out) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit();
        }
    };
    let (code, status) = match execute(&cli, &cfg, &mut out) {
        Ok(f) => (f.code, f.status),
        Err(e) => {
            eprintln!("error: {e}");
            let _ = out.text("diagnostic.txt", &format!("{e}\n"));
            (e.exit_code(), e.to_string())
        }
    };
    if let Err(e) = out.manifest(cli.command.name(), &cfg, code, &status) {
        eprintln!("error: {e}");
        return e.exit();
    }
    ExitCode::from(code)
}
