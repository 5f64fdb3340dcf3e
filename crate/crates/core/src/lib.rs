//! Spherically constrained quartic minimization.
//!
//! The objective `f(x) = (θ/2) Σ x_i^4 + xᵀBx` on the unit sphere is lifted to
//! a fourth-order symmetric tensor in one extra variable, shifted by
//! `α(1 + ‖x‖²)²`, and relaxed to a four-block multilinear form that is
//! minimized by proximal alternating minimization ([`pam_solve`]). An ADMM
//! baseline ([`admm_solve`]) and finite-difference Bose–Einstein condensate
//! instances ([`BecGrid`]) are included for comparison.
//!
//! Everything is generic over the scalar; `f64` aliases are provided below.
// `!(a > b)` is used deliberately so NaN inputs take the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admm;
pub mod bec;
pub mod error;
pub mod pam;
pub mod problem;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod vecops;

pub use admm::{
    admm_solve, riemannian_grad_norm, y_subproblem_gradient_hessian, y_subproblem_value,
    AdmmConfig, AdmmState, YHessian,
};
pub use bec::{
    build_1d, build_2d, profile_export, write_profile_tsv, BecGrid, KineticVariant, ProfileRow,
};
pub use error::{Error, Result};
pub use pam::{
    bim_refine, block_update, kkt_residual, pam_solve, random_folded_unit_init, random_unit_init,
    relative_change, BlockUpdate, PamConfig,
};
pub use problem::{Block, BlockState, QuarticProblem, SymSparse};
pub use report::{SolveReport, Termination};
pub use scalar::{Real, Scalar};
pub use tensor::{homogenize, AugVector, MonomialPoly, SymTensor};

pub type SymTensor64 = SymTensor<f64>;
pub type MonomialPoly64 = MonomialPoly<f64>;
pub type SymSparse64 = SymSparse<f64>;
pub type QuarticProblem64 = QuarticProblem<f64>;
pub type BecGrid64 = BecGrid<f64>;
pub type PamConfig64 = PamConfig<f64>;
pub type AdmmConfig64 = AdmmConfig<f64>;
pub type SolveReport64 = SolveReport<f64>;

pub type QuarticProblem32 = QuarticProblem<f32>;
pub type BecGrid32 = BecGrid<f32>;
