//! Command-line surface.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use quartic_pam::KineticVariant;

use crate::commands;
use crate::experiment::{parse_alpha_list, ExperimentSpec, InitKind, Method, Preset, RunSettings};

#[derive(Debug, Parser)]
#[command(
    name = "qpam",
    version,
    about = "Quartic minimization on the sphere: PAM and ADMM on condensate instances"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance for every requested seed and print result rows.
    Solve(SolveArgs),
    /// Run a grid of instances and emit raw and aggregated results.
    Bench(BenchArgs),
    /// Per-iteration objective values for one instance.
    Trace(CommonArgs),
    /// Mean and spread of the objective across several shifts.
    SweepAlpha(CommonArgs),
    /// Ground-state profile of the best run on one instance.
    Profile(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Spatial dimension of the condensate (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Interaction strengths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Grid points per axis, comma-separated.
    #[arg(long = "N", value_delimiter = ',')]
    pub points: Vec<usize>,
    /// Shift values, comma-separated, or `auto` for the tensor Frobenius norm.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub alpha: String,
    /// Proximal weight shared by the four blocks.
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// ADMM penalty parameter.
    #[arg(long)]
    pub rho: Option<f64>,
    /// pam | pam+bim | admm | both
    #[arg(long, default_value = "pam")]
    pub method: Method,
    /// Number of seeded runs per instance.
    #[arg(long, default_value_t = 5)]
    pub seeds: usize,
    /// First seed; runs use seed, seed+1, ...
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stopping tolerance (PAM relative change, ADMM Riemannian gradient).
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Iteration cap (PAM iterations, ADMM outer iterations).
    #[arg(long = "max-iter", default_value_t = 2000)]
    pub max_iter: usize,
    /// Scaling of the 2D kinetic matrix: verbatim | half
    #[arg(long = "kinetic-variant", default_value = "half")]
    pub kinetic_variant: KineticVariant,
    /// Starting vectors: folded (|Gaussian|) | gaussian
    #[arg(long, default_value = "folded")]
    pub init: InitKind,
    /// ADMM only: project onto the nonnegative part of the sphere.
    #[arg(long = "nonneg-projection")]
    pub nonneg_projection: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also write the profile of the best run to this TSV file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Reference grid with its per-beta shift and penalty: grid1d | grid2d
    #[arg(long)]
    pub preset: Option<Preset>,
    /// Aggregate CSV path; defaults to `<out>.summary.csv` next to --out.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

impl CommonArgs {
    pub fn settings(&self) -> RunSettings {
        RunSettings {
            method: self.method,
            seeds: self.seeds,
            seed: self.seed,
            gamma: self.gamma,
            tol: self.tol,
            max_iter: self.max_iter,
            kinetic: self.kinetic_variant,
            init: self.init,
            nonneg_projection: self.nonneg_projection,
        }
    }

    pub fn spec(&self) -> Result<ExperimentSpec> {
        Ok(ExperimentSpec {
            dim: self.dim,
            betas: self.beta.clone(),
            points: self.points.clone(),
            alphas: parse_alpha_list(&self.alpha)?,
            rho: self.rho,
            settings: self.settings(),
        })
    }
}

/// Runs the parsed command. `Ok(false)` means some run ended in a failure
/// status (diverged or stalled).
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(a) => commands::cmd_solve(
            &a.common.spec()?,
            a.common.out.as_deref(),
            a.profile.as_deref(),
        ),
        Command::Bench(a) => {
            let c = &a.common;
            let settings = c.settings();
            let cells = match a.preset {
                Some(preset) => {
                    if c.alpha != "auto" || c.rho.is_some() {
                        bail!("--preset fixes alpha and rho; drop --alpha/--rho");
                    }
                    if c.dim != 1 && c.dim != preset.dim() {
                        bail!("--dim {} conflicts with the preset", c.dim);
                    }
                    preset.cells(&c.beta, &c.points)?
                }
                None => {
                    let spec = c.spec()?;
                    spec.validate()?;
                    spec.cells()
                }
            };
            commands::cmd_bench(&cells, &settings, c.out.as_deref(), a.summary.as_deref())
        }
        Command::Trace(c) => commands::cmd_trace(&c.spec()?, c.out.as_deref()),
        Command::SweepAlpha(c) => commands::cmd_sweep_alpha(&c.spec()?, c.out.as_deref()),
        Command::Profile(c) => commands::cmd_profile(&c.spec()?, c.out.as_deref()),
    }
}
