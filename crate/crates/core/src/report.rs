use std::fmt;

use crate::problem::BlockState;

/// Why a solver run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Termination {
    Tolerance,
    MaxIter,
    /// Every block update hit a vanishing denominator; the iterate is frozen.
    Stalled,
    Diverged,
}

impl Termination {
    /// Converged or ran out of iterations, as opposed to a failure.
    pub fn is_ok(self) -> bool {
        matches!(self, Termination::Tolerance | Termination::MaxIter)
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Tolerance => "tolerance",
            Termination::MaxIter => "max-iter",
            Termination::Stalled => "stalled",
            Termination::Diverged => "diverged",
        })
    }
}

/// Outcome of a solver run with its per-iteration traces.
#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    /// Returned unit vector.
    pub best_point: Vec<T>,
    /// Un-shifted objective `f(best_point)`, recomputed at exit.
    pub best_value: T,
    /// PAM: `f_α` of the selected block; BIM: `f_α(x^k)`; ADMM: `f` at the
    /// normalized inner iterate. One entry per iteration.
    pub f_alpha_trace: Vec<T>,
    /// PAM: `‖t^{k+1} - t^k‖`; BIM: `‖x^{k+1} - x^k‖`; ADMM: `‖x - y‖`.
    pub state_gap_trace: Vec<T>,
    /// PAM only: `F_α(t^k)` for `k = 0..=iters`.
    pub multilinear_trace: Vec<T>,
    /// Iteration count (ADMM: total inner Newton iterations).
    pub iters: usize,
    /// ADMM outer iterations.
    pub outer_iters: Option<usize>,
    /// ADMM: trace indices at which an outer iteration completed.
    pub outer_marks: Vec<usize>,
    pub wall_time: f64,
    pub termination: Termination,
    /// Block updates (PAM) or gradient steps (BIM) with a vanishing denominator.
    pub stalls: usize,
    /// ADMM: Newton steps that needed step halving.
    pub damped_steps: usize,
    pub final_state: Option<BlockState<T>>,
}

impl<T> SolveReport<T> {
    pub(crate) fn empty(best_point: Vec<T>, best_value: T) -> Self {
        Self {
            best_point,
            best_value,
            f_alpha_trace: Vec::new(),
            state_gap_trace: Vec::new(),
            multilinear_trace: Vec::new(),
            iters: 0,
            outer_iters: None,
            outer_marks: Vec::new(),
            wall_time: 0.0,
            termination: Termination::MaxIter,
            stalls: 0,
            damped_steps: 0,
            final_state: None,
        }
    }
}
