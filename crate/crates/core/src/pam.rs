//! Proximal alternating minimization over the four-block multilinear form,
//! plus the normalized-gradient refinement that drives a PAM output to a
//! KKT point of the single-vector problem.

use std::time::Instant;

use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};
use crate::problem::{Block, BlockState, QuarticProblem};
use crate::report::{SolveReport, Termination};
use crate::scalar::Real;
use crate::vecops::{dist, norm};

/// Denominators at or below this are treated as zero.
const STALL_EPS: f64 = 1e-14;
/// Off-sphere initial points within this distance are renormalized.
const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PamConfig<T> {
    /// Proximal weights for the x, y, z, w updates.
    pub gamma: [T; 4],
    pub tol: T,
    pub max_iter: usize,
    pub seed: u64,
}

impl<T: Real> Default for PamConfig<T> {
    fn default() -> Self {
        Self {
            gamma: [T::lit(0.5); 4],
            tol: T::lit(1e-6),
            max_iter: 2000,
            seed: 0,
        }
    }
}

impl<T: Real> PamConfig<T> {
    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = [gamma; 4];
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma.iter().any(|&g| !(g >= T::zero())) {
            return Err(Error::InvalidInput("proximal weights must be >= 0".into()));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be >= 1".into()));
        }
        Ok(())
    }

    pub fn gamma_min(&self) -> T {
        self.gamma.iter().copied().fold(T::infinity(), T::min)
    }
}

/// Result of one closed-form block update.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockUpdate<T> {
    pub point: Vec<T>,
    pub stalled: bool,
}

/// Minimizes `F_α` plus `(γ/2)‖b - prev‖²` over the unit sphere in one block
/// with the other three fixed. The objective is linear in the block, so the
/// minimizer is `-v/‖v‖` with `v = ∇_b F_α - γ·prev`. A vanishing `v` keeps
/// `prev` and reports a stall.
pub fn block_update<T: Real>(
    p: &QuarticProblem<T>,
    s: &BlockState<T>,
    which: Block,
    gamma: T,
    prev_block: &[T],
) -> Result<BlockUpdate<T>> {
    check_dim(p.n(), prev_block.len())?;
    let mut v = p.block_gradient(s, which)?;
    for (vi, &pi) in v.iter_mut().zip(prev_block) {
        *vi -= gamma * pi;
    }
    let nrm = norm(&v);
    if !(nrm > T::lit(STALL_EPS)) {
        return Ok(BlockUpdate {
            point: prev_block.to_vec(),
            stalled: true,
        });
    }
    Ok(BlockUpdate {
        point: v.iter().map(|&vi| -vi / nrm).collect(),
        stalled: false,
    })
}

/// Relative change used for stopping: `|a - b| / max(|a|, |b|, 1)`.
pub fn relative_change<T: Real>(new: T, old: T) -> T {
    (new - old).abs() / new.abs().max(old.abs()).max(T::one())
}

pub(crate) fn prepare_init<T: Real>(n: usize, init: &[T]) -> Result<Vec<T>> {
    check_dim(n, init.len())?;
    let nrm = norm(init);
    let defect = (nrm - T::one()).abs();
    if defect <= T::unit_tol() {
        return Ok(init.to_vec());
    }
    if defect <= T::lit(RENORMALIZE_TOL) {
        warn!("initial point has norm {nrm}; renormalizing");
        return Ok(init.iter().map(|&v| v / nrm).collect());
    }
    Err(Error::NotUnit(nrm.to_f64().unwrap_or(f64::NAN)))
}

/// Runs PAM from `init` (all four blocks start there).
///
/// Each iteration updates x, y, z, w in turn, each seeing the newest values
/// of the others, then keeps the block with the smallest `f_α` (first in
/// x, y, z, w order on ties). Stops when the relative change of that value
/// drops to `cfg.tol`.
pub fn pam_solve<T: Real>(
    p: &QuarticProblem<T>,
    cfg: &PamConfig<T>,
    init: &[T],
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let start = Instant::now();
    let u0 = prepare_init(p.n(), init)?;
    let mut state = BlockState::uniform(&u0);
    let mut u = u0;
    let mut fu = p.f_alpha_value(&u)?;

    let mut report = SolveReport::empty(Vec::new(), T::zero());
    report.multilinear_trace.push(p.multilinear_value(&state)?);
    report.termination = Termination::MaxIter;

    for k in 0..cfg.max_iter {
        let prev = state.clone();
        let mut stalled_blocks = 0;
        for (b, &gamma) in Block::ALL.iter().zip(&cfg.gamma) {
            let upd = block_update(p, &state, *b, gamma, prev.block(*b))?;
            if upd.stalled {
                stalled_blocks += 1;
            }
            *state.block_mut(*b) = upd.point;
        }
        report.stalls += stalled_blocks;

        let mut best = (Block::X, p.f_alpha_value(&state.x)?);
        for b in [Block::Y, Block::Z, Block::W] {
            let val = p.f_alpha_value(state.block(b))?;
            if val < best.1 {
                best = (b, val);
            }
        }
        let (sel, f_new) = best;

        report.f_alpha_trace.push(f_new);
        report.state_gap_trace.push(state.distance(&prev));
        report.multilinear_trace.push(p.multilinear_value(&state)?);
        report.iters = k + 1;

        let err = relative_change(f_new, fu);
        u = state.block(sel).to_vec();
        fu = f_new;
        if stalled_blocks == Block::ALL.len() {
            report.termination = Termination::Stalled;
            break;
        }
        if err <= cfg.tol {
            report.termination = Termination::Tolerance;
            break;
        }
    }

    report.best_value = p.f_value(&u)?;
    report.best_point = u;
    report.final_state = Some(state);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Normalized negative-gradient iteration `x ← -∇f_α(x)/‖∇f_α(x)‖` on the
/// sphere. Stops when `|f_α(x^{k+1}) - f_α(x^k)| ≤ cfg.tol`.
pub fn bim_refine<T: Real>(
    p: &QuarticProblem<T>,
    cfg: &PamConfig<T>,
    start: &[T],
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let clock = Instant::now();
    let mut x = prepare_init(p.n(), start)?;
    let mut fx = p.f_alpha_value(&x)?;
    let mut report = SolveReport::empty(Vec::new(), T::zero());
    report.termination = Termination::MaxIter;

    for k in 0..cfg.max_iter {
        let g = p.grad_f_alpha(&x)?;
        let gn = norm(&g);
        let next = if gn > T::lit(STALL_EPS) {
            g.iter().map(|&gi| -gi / gn).collect()
        } else {
            report.stalls += 1;
            x.clone()
        };
        let f_next = p.f_alpha_value(&next)?;
        report.f_alpha_trace.push(f_next);
        report.state_gap_trace.push(dist(&next, &x));
        report.iters = k + 1;
        let delta = (f_next - fx).abs();
        x = next;
        fx = f_next;
        if delta <= cfg.tol {
            report.termination = Termination::Tolerance;
            break;
        }
    }

    report.best_value = p.f_value(&x)?;
    report.best_point = x;
    report.wall_time = clock.elapsed().as_secs_f64();
    Ok(report)
}

/// `‖∇f_α(x) + ‖∇f_α(x)‖ x‖`, zero at the fixed points of [`bim_refine`].
pub fn kkt_residual<T: Real>(p: &QuarticProblem<T>, x: &[T]) -> Result<T> {
    let g = p.grad_f_alpha(x)?;
    let gn = norm(&g);
    let r: Vec<T> = g.iter().zip(x).map(|(&gi, &xi)| gi + gn * xi).collect();
    Ok(norm(&r))
}

/// Seeded standard-normal vector scaled to unit length. The same seed gives
/// bit-identical output.
pub fn random_unit_init<T: Real>(n: usize, seed: u64) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let draw: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let nrm = draw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nrm > 0.0 {
            return Ok(draw.iter().map(|&v| T::lit(v / nrm)).collect());
        }
    }
}

/// As [`random_unit_init`] with every entry replaced by its absolute value,
/// giving a start in the nonnegative orthant.
pub fn random_folded_unit_init<T: Real>(n: usize, seed: u64) -> Result<Vec<T>> {
    Ok(random_unit_init::<T>(n, seed)?
        .into_iter()
        .map(|v| v.abs())
        .collect())
}
