//! Subcommand implementations. Each returns whether every run finished with
//! an acceptable termination status.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use log::info;
use quartic_pam::write_profile_tsv;

use crate::experiment::{Cell, ExperimentSpec, RunSettings};
use crate::output::{
    summarize, write_results, write_summary, write_sweep, write_table, write_trace,
};
use crate::runner::{build_instance, run_cells, RunOutcome};

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn all_ok(runs: &[RunOutcome]) -> bool {
    runs.iter().all(|r| r.row.termination.is_ok())
}

/// Single instance, every requested method and seed; rows to `out`, and the
/// lowest-objective point as a profile to `profile` if given.
pub fn cmd_solve(
    spec: &ExperimentSpec,
    out: Option<&Path>,
    profile: Option<&Path>,
) -> Result<bool> {
    spec.validate()?;
    let cell = spec.single_cell()?;
    let runs = run_cells(&[cell], &spec.settings)?;
    let rows: Vec<_> = runs.iter().map(|r| r.row.clone()).collect();
    write_results(&rows, open_out(out)?)?;
    if let Some(path) = profile {
        write_best_profile(&cell, &spec.settings, &runs, Some(path))?;
    }
    Ok(all_ok(&runs))
}

/// Full sweep: raw rows to `out`, per-cell aggregate to `summary`, and a
/// readable table on stderr.
pub fn cmd_bench(
    cells: &[Cell],
    settings: &RunSettings,
    out: Option<&Path>,
    summary: Option<&Path>,
) -> Result<bool> {
    settings.validate()?;
    ensure!(!cells.is_empty(), "no benchmark cells");
    if settings.method.needs_rho() {
        ensure!(
            cells.iter().all(|c| c.rho.is_some_and(|r| r > 0.0)),
            "--rho is required for method admm/both"
        );
    }
    info!("running {} cells x {} seeds", cells.len(), settings.seeds);
    let runs = run_cells(cells, settings)?;
    let rows: Vec<_> = runs.iter().map(|r| r.row.clone()).collect();
    write_results(&rows, open_out(out)?)?;
    let cells_summary = summarize(&rows);
    let summary_path = summary
        .map(Path::to_path_buf)
        .or_else(|| out.map(summary_path_for));
    if let Some(p) = summary_path {
        write_summary(&cells_summary, open_out(Some(&p))?)?;
    }
    write_table(&cells_summary, io::stderr().lock())?;
    Ok(all_ok(&runs))
}

/// `results.csv` → `results.summary.csv`.
pub fn summary_path_for(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map_or_else(|| "results".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.summary.csv"))
}

pub fn cmd_trace(spec: &ExperimentSpec, out: Option<&Path>) -> Result<bool> {
    spec.validate()?;
    let cell = spec.single_cell()?;
    let runs = run_cells(&[cell], &spec.settings)?;
    write_trace(&runs, open_out(out)?)?;
    Ok(all_ok(&runs))
}

pub fn cmd_sweep_alpha(spec: &ExperimentSpec, out: Option<&Path>) -> Result<bool> {
    spec.validate()?;
    ensure!(
        spec.alphas.len() >= 2,
        "sweep-alpha needs at least two --alpha values"
    );
    let runs = run_cells(&spec.cells(), &spec.settings)?;
    let rows: Vec<_> = runs.iter().map(|r| r.row.clone()).collect();
    let mut cells = summarize(&rows);
    cells.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.points.cmp(&b.points))
            .then(a.beta.total_cmp(&b.beta))
    });
    write_sweep(&cells, open_out(out)?)?;
    Ok(all_ok(&runs))
}

pub fn cmd_profile(spec: &ExperimentSpec, out: Option<&Path>) -> Result<bool> {
    spec.validate()?;
    let cell = spec.single_cell()?;
    let runs = run_cells(&[cell], &spec.settings)?;
    write_best_profile(&cell, &spec.settings, &runs, out)?;
    Ok(all_ok(&runs))
}

fn write_best_profile(
    cell: &Cell,
    settings: &RunSettings,
    runs: &[RunOutcome],
    out: Option<&Path>,
) -> Result<()> {
    let best = runs
        .iter()
        .min_by(|a, b| a.row.obj_val.total_cmp(&b.row.obj_val))
        .context("no runs to export")?;
    let inst = build_instance(cell, settings.kinetic)?;
    let rows = inst.grid.profile(&best.report.best_point)?;
    write_profile_tsv(&rows, open_out(out)?)?;
    Ok(())
}
