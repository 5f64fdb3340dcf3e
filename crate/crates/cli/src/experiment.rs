//! Experiment descriptions: which instances to build and how to solve them.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, ensure, Result};
use quartic_pam::KineticVariant;

/// Method selection as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pam,
    PamBim,
    Admm,
    Both,
}

impl Method {
    pub fn solvers(self) -> Vec<Solver> {
        match self {
            Method::Pam => vec![Solver::Pam],
            Method::PamBim => vec![Solver::PamBim],
            Method::Admm => vec![Solver::Admm],
            Method::Both => vec![Solver::Pam, Solver::Admm],
        }
    }

    pub fn needs_rho(self) -> bool {
        self.solvers().contains(&Solver::Admm)
    }
}

impl FromStr for Method {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pam" => Method::Pam,
            "pam+bim" => Method::PamBim,
            "admm" => Method::Admm,
            "both" => Method::Both,
            other => bail!("unknown method {other:?} (expected pam|pam+bim|admm|both)"),
        })
    }
}

/// A single solver run kind; the `method` column of a result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Solver {
    Pam,
    PamBim,
    Admm,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Pam => "pam",
            Solver::PamBim => "pam+bim",
            Solver::Admm => "admm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSetting {
    Value(f64),
    /// Frobenius norm of the homogenized tensor of the instance.
    Auto,
}

impl fmt::Display for AlphaSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSetting::Value(v) => write!(f, "{v}"),
            AlphaSetting::Auto => f.write_str("auto"),
        }
    }
}

/// Parses `auto` or a comma-separated list of nonnegative reals.
pub fn parse_alpha_list(s: &str) -> Result<Vec<AlphaSetting>> {
    if s.trim() == "auto" {
        return Ok(vec![AlphaSetting::Auto]);
    }
    s.split(',')
        .map(|part| {
            let v: f64 = part
                .trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("invalid alpha value {part:?}"))?;
            ensure!(v.is_finite() && v >= 0.0, "alpha must be >= 0, got {v}");
            Ok(AlphaSetting::Value(v))
        })
        .collect()
}

/// Distribution of the seeded starting vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitKind {
    /// Entrywise absolute value of a normalized Gaussian draw.
    #[default]
    Folded,
    /// Normalized Gaussian draw.
    Gaussian,
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitKind::Folded => "folded",
            InitKind::Gaussian => "gaussian",
        })
    }
}

impl FromStr for InitKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "folded" => InitKind::Folded,
            "gaussian" => InitKind::Gaussian,
            other => bail!("unknown init {other:?} (expected folded|gaussian)"),
        })
    }
}

/// One benchmark instance with its shift and ADMM penalty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub dim: usize,
    pub beta: f64,
    pub points: usize,
    pub alpha: AlphaSetting,
    pub rho: Option<f64>,
}

/// Settings shared by every run of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub method: Method,
    pub seeds: usize,
    pub seed: u64,
    pub gamma: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub kinetic: KineticVariant,
    pub init: InitKind,
    /// ADMM: clamp negative entries before normalizing in the x-step.
    pub nonneg_projection: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            method: Method::Pam,
            seeds: 5,
            seed: 0,
            gamma: 0.5,
            tol: 1e-6,
            max_iter: 2000,
            kinetic: KineticVariant::Half,
            init: InitKind::Folded,
            nonneg_projection: false,
        }
    }
}

impl RunSettings {
    /// Seeds used for the runs of every cell (`seed, seed+1, …`).
    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|k| self.seed + k).collect()
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.seeds >= 1, "--seeds must be >= 1");
        ensure!(
            self.gamma.is_finite() && self.gamma >= 0.0,
            "--gamma must be >= 0"
        );
        ensure!(self.tol.is_finite() && self.tol > 0.0, "--tol must be > 0");
        ensure!(self.max_iter >= 1, "--max-iter must be >= 1");
        Ok(())
    }
}

/// A Cartesian experiment grid over β, N and α.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub dim: usize,
    pub betas: Vec<f64>,
    pub points: Vec<usize>,
    pub alphas: Vec<AlphaSetting>,
    pub rho: Option<f64>,
    pub settings: RunSettings,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.dim == 1 || self.dim == 2, "--dim must be 1 or 2");
        ensure!(!self.betas.is_empty(), "--beta list is empty");
        ensure!(!self.points.is_empty(), "--N list is empty");
        ensure!(!self.alphas.is_empty(), "--alpha list is empty");
        for &b in &self.betas {
            ensure!(b.is_finite() && b > 0.0, "beta must be > 0, got {b}");
        }
        for &n in &self.points {
            ensure!(n >= 4, "N must be >= 4, got {n}");
        }
        if self.settings.method.needs_rho() {
            match self.rho {
                Some(r) => ensure!(r.is_finite() && r > 0.0, "--rho must be > 0"),
                None => bail!("--rho is required for method admm/both"),
            }
        }
        self.settings.validate()
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &beta in &self.betas {
            for &points in &self.points {
                for &alpha in &self.alphas {
                    out.push(Cell {
                        dim: self.dim,
                        beta,
                        points,
                        alpha,
                        rho: self.rho,
                    });
                }
            }
        }
        out
    }

    /// The only cell of a single-instance spec.
    pub fn single_cell(&self) -> Result<Cell> {
        ensure!(
            self.betas.len() == 1 && self.points.len() == 1 && self.alphas.len() == 1,
            "this command takes exactly one --beta, one --N and one --alpha"
        );
        Ok(self.cells()[0])
    }
}

/// Reference benchmark grids with their per-β shift and penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 1D, β ∈ {250, 500, 1000}, N ∈ {10, 20, …, 70}.
    Grid1d,
    /// 2D, β ∈ {250, 500, 1000}, N ∈ {7, …, 11}.
    Grid2d,
}

impl FromStr for Preset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "grid1d" => Preset::Grid1d,
            "grid2d" => Preset::Grid2d,
            other => bail!("unknown preset {other:?} (expected grid1d|grid2d)"),
        })
    }
}

impl Preset {
    pub fn dim(self) -> usize {
        match self {
            Preset::Grid1d => 1,
            Preset::Grid2d => 2,
        }
    }

    /// `(β, α, ρ)` rows.
    pub fn parameters(self) -> &'static [(f64, f64, f64)] {
        match self {
            Preset::Grid1d => &[
                (250.0, 15.0, 80.0),
                (500.0, 27.0, 115.0),
                (1000.0, 50.0, 210.0),
            ],
            Preset::Grid2d => &[(250.0, 6.0, 40.0), (500.0, 7.0, 50.0), (1000.0, 9.0, 65.0)],
        }
    }

    pub fn grid_points(self) -> Vec<usize> {
        match self {
            Preset::Grid1d => (1..=7).map(|k| 10 * k).collect(),
            Preset::Grid2d => (7..=11).collect(),
        }
    }

    /// Cells of the preset, optionally restricted to the given β and N values.
    pub fn cells(self, betas: &[f64], points: &[usize]) -> Result<Vec<Cell>> {
        for b in betas {
            ensure!(
                self.parameters().iter().any(|p| p.0 == *b),
                "beta {b} is not part of the preset"
            );
        }
        let points = if points.is_empty() {
            self.grid_points()
        } else {
            points.to_vec()
        };
        let mut out = Vec::new();
        for &(beta, alpha, rho) in self.parameters() {
            if !betas.is_empty() && !betas.contains(&beta) {
                continue;
            }
            for &n in &points {
                ensure!(n >= 4, "N must be >= 4, got {n}");
                out.push(Cell {
                    dim: self.dim(),
                    beta,
                    points: n,
                    alpha: AlphaSetting::Value(alpha),
                    rho: Some(rho),
                });
            }
        }
        Ok(out)
    }
}
