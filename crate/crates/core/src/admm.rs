//! ADMM baseline on the original objective with a sphere/free-variable
//! splitting `min f(y) s.t. x = y, ‖x‖ = 1`.

use std::time::Instant;

use crate::error::{check_dim, Error, Result};
use crate::pam::prepare_init;
use crate::problem::{QuarticProblem, SymSparse};
use crate::report::{SolveReport, Termination};
use crate::scalar::Real;
use crate::vecops::{dist, dot, norm};

const DIVERGENCE_NORM: f64 = 1e6;
const MAX_HALVINGS: usize = 50;
const MAX_NEWTON: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmConfig<T> {
    pub rho: T,
    pub outer_tol: T,
    pub max_outer: usize,
    pub newton_eps0: T,
    pub newton_decay: T,
    pub gs_sweeps: usize,
    pub seed: u64,
    /// Clamp negative entries to zero before normalizing in the x-step.
    pub nonneg_projection: bool,
}

impl<T: Real> AdmmConfig<T> {
    pub fn new(rho: T) -> Self {
        Self {
            rho,
            outer_tol: T::lit(1e-6),
            max_outer: 2000,
            newton_eps0: T::lit(1e-2),
            newton_decay: T::lit(0.5),
            gs_sweeps: 3,
            seed: 0,
            nonneg_projection: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !positive(self.rho) {
            return Err(Error::InvalidInput(format!(
                "rho must be > 0, got {}",
                self.rho
            )));
        }
        if !positive(self.outer_tol) || !positive(self.newton_eps0) || !positive(self.newton_decay)
        {
            return Err(Error::InvalidInput("tolerances must be > 0".into()));
        }
        if self.max_outer == 0 || self.gs_sweeps == 0 {
            return Err(Error::InvalidInput(
                "max_outer and gs_sweeps must be >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Inner Newton tolerance at outer iteration `k`.
    pub fn newton_eps(&self, k: usize) -> T {
        let k = i32::try_from(k).unwrap_or(i32::MAX);
        self.newton_eps0 * self.newton_decay.powi(k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub mu: Vec<T>,
}

impl<T: Real> AdmmState<T> {
    pub fn new(init: &[T]) -> Self {
        Self {
            x: init.to_vec(),
            y: init.to_vec(),
            mu: vec![T::zero(); init.len()],
        }
    }
}

/// Hessian of the y-subproblem, `diag(6θ y∘y) + 2B + ρI`, as an operator.
#[derive(Debug, Clone)]
pub struct YHessian<'a, T> {
    b: &'a SymSparse<T>,
    /// `6θ y_i² + ρ`
    shift: Vec<T>,
}

impl<'a, T: Real> YHessian<'a, T> {
    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let two = T::lit(2.0);
        self.b
            .matvec(v)
            .iter()
            .zip(&self.shift)
            .zip(v)
            .map(|((&bv, &s), &vi)| two * bv + s * vi)
            .collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        let two = T::lit(2.0);
        (0..self.dim())
            .map(|i| two * self.b.get(i, i) + self.shift[i])
            .collect()
    }

    /// `sweeps` forward Gauss–Seidel sweeps on `H d = rhs` starting at `d = 0`.
    pub fn gauss_seidel(&self, rhs: &[T], sweeps: usize) -> Vec<T> {
        let two = T::lit(2.0);
        let diag = self.diagonal();
        let mut d = vec![T::zero(); self.dim()];
        for _ in 0..sweeps {
            for i in 0..self.dim() {
                let off = self
                    .b
                    .row(i)
                    .iter()
                    .filter(|&&(j, _)| j != i)
                    .fold(T::zero(), |acc, &(j, v)| acc + two * v * d[j]);
                d[i] = (rhs[i] - off) / diag[i];
            }
        }
        d
    }
}

/// `f(y) + μᵀ(x - y) + (ρ/2)‖x - y‖²`.
pub fn y_subproblem_value<T: Real>(
    p: &QuarticProblem<T>,
    y: &[T],
    x: &[T],
    mu: &[T],
    rho: T,
) -> Result<T> {
    check_dim(p.n(), x.len())?;
    check_dim(p.n(), mu.len())?;
    let diff: Vec<T> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
    Ok(p.f_value(y)? + dot(mu, &diff) + T::lit(0.5) * rho * dot(&diff, &diff))
}

/// Gradient `2θ y∘y∘y + 2By - μ - ρ(x - y)` and the Hessian operator.
pub fn y_subproblem_gradient_hessian<'a, T: Real>(
    p: &'a QuarticProblem<T>,
    y: &[T],
    x: &[T],
    mu: &[T],
    rho: T,
) -> Result<(Vec<T>, YHessian<'a, T>)> {
    check_dim(p.n(), x.len())?;
    check_dim(p.n(), mu.len())?;
    let mut g = p.grad_f(y)?;
    for i in 0..g.len() {
        g[i] -= mu[i] + rho * (x[i] - y[i]);
    }
    let six_theta = T::lit(6.0) * p.theta();
    let shift = y.iter().map(|&v| six_theta * v * v + rho).collect();
    Ok((
        g,
        YHessian {
            b: p.matrix(),
            shift,
        },
    ))
}

/// Norm of the tangential part of `∇f(x)` at a unit `x`.
pub fn riemannian_grad_norm<T: Real>(p: &QuarticProblem<T>, x: &[T]) -> Result<T> {
    let g = p.grad_f(x)?;
    let radial = dot(x, &g);
    let t: Vec<T> = g.iter().zip(x).map(|(&gi, &xi)| gi - radial * xi).collect();
    Ok(norm(&t))
}

fn project<T: Real>(v: &[T], nonneg: bool, fallback: &[T]) -> Vec<T> {
    let clamped: Vec<T> = if nonneg {
        v.iter().map(|&a| a.max(T::zero())).collect()
    } else {
        v.to_vec()
    };
    let n = norm(&clamped);
    if n > T::zero() && n.is_finite() {
        clamped.iter().map(|&a| a / n).collect()
    } else {
        fallback.to_vec()
    }
}

/// Runs ADMM from `init`. The problem's shift `α` plays no role.
///
/// `iters` counts inner Newton iterations across all outer steps; each one
/// appends `f(y/‖y‖)` and `‖x - y‖` to the traces.
pub fn admm_solve<T: Real>(
    p: &QuarticProblem<T>,
    cfg: &AdmmConfig<T>,
    init: &[T],
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let clock = Instant::now();
    let u0 = prepare_init(p.n(), init)?;
    let mut st = AdmmState::new(&u0);
    let rho = cfg.rho;
    let mut report = SolveReport::empty(Vec::new(), T::zero());
    report.termination = Termination::MaxIter;
    let mut outer = 0;

    'outer: for k in 0..cfg.max_outer {
        let shifted: Vec<T> =
            st.y.iter()
                .zip(&st.mu)
                .map(|(&y, &m)| y - m / rho)
                .collect();
        st.x = project(&shifted, cfg.nonneg_projection, &st.x);

        let eps = cfg.newton_eps(k);
        for _ in 0..MAX_NEWTON {
            let (g, h) = y_subproblem_gradient_hessian(p, &st.y, &st.x, &st.mu, rho)?;
            let neg_g: Vec<T> = g.iter().map(|&v| -v).collect();
            let d = h.gauss_seidel(&neg_g, cfg.gs_sweeps);
            let dec_sq = -dot(&g, &d);
            if !(dec_sq / T::lit(2.0) > eps) {
                break;
            }
            let phi0 = y_subproblem_value(p, &st.y, &st.x, &st.mu, rho)?;
            let mut t = T::one();
            let mut accepted = None;
            for halving in 0..=MAX_HALVINGS {
                let trial: Vec<T> = st.y.iter().zip(&d).map(|(&y, &di)| y + t * di).collect();
                let phi = y_subproblem_value(p, &trial, &st.x, &st.mu, rho)?;
                if phi <= phi0 {
                    accepted = Some((trial, halving));
                    break;
                }
                t = t * T::lit(0.5);
            }
            let Some((trial, halvings)) = accepted else {
                break;
            };
            if halvings > 0 {
                report.damped_steps += 1;
            }
            st.y = trial;
            report.iters += 1;
            let ny = norm(&st.y);
            if !(ny <= T::lit(DIVERGENCE_NORM)) {
                report.termination = Termination::Diverged;
                outer = k + 1;
                break 'outer;
            }
            let yn: Vec<T> = st.y.iter().map(|&v| v / ny).collect();
            report.f_alpha_trace.push(p.f_value(&yn)?);
            report.state_gap_trace.push(dist(&st.x, &st.y));
        }

        for i in 0..st.mu.len() {
            st.mu[i] += rho * (st.x[i] - st.y[i]);
        }
        outer = k + 1;
        report.outer_marks.push(report.iters);

        if riemannian_grad_norm(p, &st.x)? <= cfg.outer_tol {
            report.termination = Termination::Tolerance;
            break;
        }
    }

    report.outer_iters = Some(outer);
    report.best_value = p.f_value(&st.x)?;
    report.best_point = st.x;
    report.wall_time = clock.elapsed().as_secs_f64();
    Ok(report)
}
