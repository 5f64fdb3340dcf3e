//! Executes solver runs on condensate instances and collects result rows.

use anyhow::{Context, Result};
use quartic_pam::{
    admm_solve, bim_refine, pam_solve, random_folded_unit_init, random_unit_init, AdmmConfig,
    BecGrid, KineticVariant, PamConfig, QuarticProblem, SolveReport, Termination,
};
use rayon::prelude::*;

use crate::experiment::{AlphaSetting, Cell, InitKind, RunSettings, Solver};

/// One row of the raw results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: Solver,
    pub dim: usize,
    pub beta: f64,
    pub points: usize,
    pub alpha: f64,
    pub rho: Option<f64>,
    pub gamma: f64,
    pub kinetic: KineticVariant,
    pub init: InitKind,
    pub seed: u64,
    pub iters: usize,
    pub outer_iters: Option<usize>,
    pub wall_time_s: f64,
    pub obj_val: f64,
    pub termination: Termination,
    pub concavity_certified: bool,
}

impl ResultRow {
    /// Deterministic output order: method, β, N, α, seed.
    pub fn sort_key_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.method
            .cmp(&other.method)
            .then(self.beta.total_cmp(&other.beta))
            .then(self.points.cmp(&other.points))
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.seed.cmp(&other.seed))
    }
}

/// A finished run: the CSV row plus the full solver report.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub row: ResultRow,
    pub report: SolveReport<f64>,
}

/// A built instance together with the grid it came from.
#[derive(Debug, Clone)]
pub struct Instance {
    pub grid: BecGrid<f64>,
    pub problem: QuarticProblem<f64>,
}

pub fn build_instance(cell: &Cell, kinetic: KineticVariant) -> Result<Instance> {
    let grid = BecGrid::new(cell.dim, cell.points, cell.beta)
        .with_context(|| format!("grid dim={} N={} beta={}", cell.dim, cell.points, cell.beta))?
        .kinetic(kinetic);
    let unshifted = grid.build(0.0)?;
    let alpha = match cell.alpha {
        AlphaSetting::Value(a) => a,
        AlphaSetting::Auto => unshifted.tensor_norm(),
    };
    let problem = unshifted.with_alpha(alpha)?;
    Ok(Instance { grid, problem })
}

pub fn initial_point(kind: InitKind, n: usize, seed: u64) -> Result<Vec<f64>> {
    Ok(match kind {
        InitKind::Folded => random_folded_unit_init(n, seed)?,
        InitKind::Gaussian => random_unit_init(n, seed)?,
    })
}

fn pam_config(settings: &RunSettings, seed: u64) -> PamConfig<f64> {
    PamConfig {
        tol: settings.tol,
        max_iter: settings.max_iter,
        seed,
        ..PamConfig::default()
    }
    .with_gamma(settings.gamma)
}

/// Runs one solver from one seed on a prebuilt instance.
pub fn run_on_instance(
    inst: &Instance,
    cell: &Cell,
    solver: Solver,
    settings: &RunSettings,
    seed: u64,
) -> Result<RunOutcome> {
    let p = &inst.problem;
    let init = initial_point(settings.init, p.n(), seed)?;
    let report = match solver {
        Solver::Pam => pam_solve(p, &pam_config(settings, seed), &init)?,
        Solver::PamBim => {
            let cfg = pam_config(settings, seed);
            let first = pam_solve(p, &cfg, &init)?;
            let mut refined = bim_refine(p, &cfg, &first.best_point)?;
            refined.iters += first.iters;
            refined.f_alpha_trace.splice(0..0, first.f_alpha_trace);
            refined.state_gap_trace.splice(0..0, first.state_gap_trace);
            refined.multilinear_trace = first.multilinear_trace;
            refined.wall_time += first.wall_time;
            refined.stalls += first.stalls;
            refined
        }
        Solver::Admm => {
            let rho = cell.rho.context("ADMM needs a penalty parameter (--rho)")?;
            let cfg = AdmmConfig {
                outer_tol: settings.tol,
                max_outer: settings.max_iter,
                seed,
                nonneg_projection: settings.nonneg_projection,
                ..AdmmConfig::new(rho)
            };
            admm_solve(p, &cfg, &init)?
        }
    };
    let obj_val = p.f_value(&report.best_point)?;
    let row = ResultRow {
        method: solver,
        dim: cell.dim,
        beta: cell.beta,
        points: cell.points,
        alpha: p.alpha(),
        rho: if solver == Solver::Admm {
            cell.rho
        } else {
            None
        },
        gamma: settings.gamma,
        kinetic: settings.kinetic,
        init: settings.init,
        seed,
        iters: report.iters,
        outer_iters: report.outer_iters,
        wall_time_s: report.wall_time,
        obj_val,
        termination: report.termination,
        concavity_certified: p.concavity_certified(),
    };
    Ok(RunOutcome { row, report })
}

/// Every (cell, solver, seed) run of an experiment, in parallel, returned in
/// the deterministic row order.
pub fn run_cells(cells: &[Cell], settings: &RunSettings) -> Result<Vec<RunOutcome>> {
    let instances: Vec<Instance> = cells
        .par_iter()
        .map(|c| build_instance(c, settings.kinetic))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (k, cell) in cells.iter().enumerate() {
        for solver in settings.method.solvers() {
            for seed in settings.seed_list() {
                jobs.push((k, *cell, solver, seed));
            }
        }
    }
    let mut out: Vec<RunOutcome> = jobs
        .par_iter()
        .map(|&(k, cell, solver, seed)| {
            run_on_instance(&instances[k], &cell, solver, settings, seed)
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.row.sort_key_cmp(&b.row));
    Ok(out)
}
