//! CSV and TSV emission plus per-cell aggregation.

use std::io::Write;

use anyhow::Result;

use crate::experiment::Solver;
use crate::runner::{ResultRow, RunOutcome};

pub const RESULT_HEADER: [&str; 16] = [
    "method",
    "dim",
    "beta",
    "N",
    "alpha",
    "rho",
    "gamma",
    "kinetic_variant",
    "init",
    "seed",
    "iters",
    "outer_iters",
    "wall_time_s",
    "obj_val",
    "termination",
    "concavity_certified",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_results<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.dim.to_string(),
            r.beta.to_string(),
            r.points.to_string(),
            r.alpha.to_string(),
            opt(r.rho),
            r.gamma.to_string(),
            r.kinetic.to_string(),
            r.init.to_string(),
            r.seed.to_string(),
            r.iters.to_string(),
            opt(r.outer_iters),
            format!("{:.4}", r.wall_time_s),
            r.obj_val.to_string(),
            r.termination.to_string(),
            r.concavity_certified.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per (method, β, N, α) summary over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub method: Solver,
    pub dim: usize,
    pub beta: f64,
    pub points: usize,
    pub alpha: f64,
    pub rho: Option<f64>,
    pub runs: usize,
    pub mean_iters: f64,
    pub mean_outer_iters: Option<f64>,
    pub mean_wall_time_s: f64,
    pub std_wall_time_s: f64,
    pub best_obj: f64,
    pub mean_obj: f64,
    pub std_obj: f64,
    pub ok_runs: usize,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for a single value.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Groups consecutive rows with equal (method, β, N, α). Rows must already be
/// in the deterministic sort order.
pub fn summarize(rows: &[ResultRow]) -> Vec<CellSummary> {
    let same = |a: &ResultRow, b: &ResultRow| {
        a.method == b.method && a.beta == b.beta && a.points == b.points && a.alpha == b.alpha
    };
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let mut end = start + 1;
        while end < rows.len() && same(&rows[start], &rows[end]) {
            end += 1;
        }
        let group = &rows[start..end];
        let first = &group[0];
        let objs: Vec<f64> = group.iter().map(|r| r.obj_val).collect();
        let times: Vec<f64> = group.iter().map(|r| r.wall_time_s).collect();
        let iters: Vec<f64> = group.iter().map(|r| r.iters as f64).collect();
        let outer: Vec<f64> = group
            .iter()
            .filter_map(|r| r.outer_iters.map(|o| o as f64))
            .collect();
        out.push(CellSummary {
            method: first.method,
            dim: first.dim,
            beta: first.beta,
            points: first.points,
            alpha: first.alpha,
            rho: first.rho,
            runs: group.len(),
            mean_iters: mean(&iters),
            mean_outer_iters: (!outer.is_empty()).then(|| mean(&outer)),
            mean_wall_time_s: mean(&times),
            std_wall_time_s: std_dev(&times),
            best_obj: objs.iter().copied().fold(f64::INFINITY, f64::min),
            mean_obj: mean(&objs),
            std_obj: std_dev(&objs),
            ok_runs: group.iter().filter(|r| r.termination.is_ok()).count(),
        });
        start = end;
    }
    out
}

pub fn write_summary<W: Write>(cells: &[CellSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method",
        "dim",
        "beta",
        "N",
        "alpha",
        "rho",
        "runs",
        "mean_iters",
        "mean_outer_iters",
        "mean_wall_time_s",
        "best_obj",
        "mean_obj",
        "std_obj",
        "ok_runs",
    ])?;
    for c in cells {
        w.write_record([
            c.method.to_string(),
            c.dim.to_string(),
            c.beta.to_string(),
            c.points.to_string(),
            c.alpha.to_string(),
            opt(c.rho),
            c.runs.to_string(),
            c.mean_iters.to_string(),
            opt(c.mean_outer_iters),
            format!("{:.4}", c.mean_wall_time_s),
            c.best_obj.to_string(),
            c.mean_obj.to_string(),
            c.std_obj.to_string(),
            c.ok_runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Objective spread above which an α-sweep cell is flagged.
pub const SWEEP_STD_FLAG: f64 = 1e-2;

pub fn write_sweep<W: Write>(cells: &[CellSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method",
        "dim",
        "beta",
        "N",
        "alpha",
        "runs",
        "mean_obj",
        "std_obj",
        "mean_time_s",
        "std_time_s",
        "unstable",
    ])?;
    for c in cells {
        w.write_record([
            c.method.to_string(),
            c.dim.to_string(),
            c.beta.to_string(),
            c.points.to_string(),
            c.alpha.to_string(),
            c.runs.to_string(),
            c.mean_obj.to_string(),
            c.std_obj.to_string(),
            format!("{:.4}", c.mean_wall_time_s),
            format!("{:.4}", c.std_wall_time_s),
            (c.std_obj > SWEEP_STD_FLAG).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-iteration trace: one line per iteration of every run. `f_value` is
/// the shifted objective of the reported point; `multilinear` is the lifted
/// four-block value after the iteration (PAM only), the quantity PAM
/// decreases monotonically.
pub fn write_trace<W: Write>(runs: &[RunOutcome], mut out: W) -> Result<()> {
    writeln!(
        out,
        "method\tseed\titer\tf_value\tstate_gap\touter_end\tmultilinear"
    )?;
    for run in runs {
        let rep = &run.report;
        for (k, (f, gap)) in rep
            .f_alpha_trace
            .iter()
            .zip(&rep.state_gap_trace)
            .enumerate()
        {
            let iter = k + 1;
            let outer_end = if rep.outer_iters.is_some() {
                u8::from(rep.outer_marks.binary_search(&iter).is_ok()).to_string()
            } else {
                String::new()
            };
            let multilinear = rep
                .multilinear_trace
                .get(iter)
                .map(f64::to_string)
                .unwrap_or_default();
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                run.row.method, run.row.seed, iter, f, gap, outer_end, multilinear
            )?;
        }
    }
    Ok(())
}

/// Human-readable per-cell table.
pub fn write_table<W: Write>(cells: &[CellSummary], mut out: W) -> Result<()> {
    writeln!(
        out,
        "{:<8} {:>7} {:>4} {:>9} {:>10} {:>9} {:>12} {:>5}",
        "method", "beta", "N", "alpha", "mean_iter", "cpu(s)", "best_obj", "ok"
    )?;
    for c in cells {
        let iters = match c.mean_outer_iters {
            Some(o) => format!("{:.1}({:.1})", c.mean_iters, o),
            None => format!("{:.1}", c.mean_iters),
        };
        writeln!(
            out,
            "{:<8} {:>7} {:>4} {:>9.4} {:>10} {:>9.4} {:>12.4} {:>2}/{}",
            c.method.to_string(),
            c.beta,
            c.points,
            c.alpha,
            iters,
            c.mean_wall_time_s,
            c.best_obj,
            c.ok_runs,
            c.runs
        )?;
    }
    Ok(())
}
