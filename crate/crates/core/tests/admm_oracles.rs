mod common;

use common::{fd_gradient, random_problem, random_unit, random_vec, rel_err, rng};
use quartic_pam::{
    admm_solve, riemannian_grad_norm, y_subproblem_gradient_hessian, y_subproblem_value,
    AdmmConfig, BecGrid, KineticVariant, QuarticProblem, SymSparse, Termination,
};

#[test]
fn subproblem_gradient_matches_finite_differences() {
    let mut r = rng(31);
    for k in 0..50 {
        let n = 1 + k % 6;
        let p = random_problem(&mut r, n, 0.0);
        let (x, y, mu) = (
            random_unit(&mut r, n),
            random_vec(&mut r, n, 1.2),
            random_vec(&mut r, n, 2.0),
        );
        let rho = 3.5;
        let fd = fd_gradient(
            |v| y_subproblem_value(&p, v, &x, &mu, rho).unwrap(),
            &y,
            1e-6,
        );
        let (g, _) = y_subproblem_gradient_hessian(&p, &y, &x, &mu, rho).unwrap();
        let err = rel_err(&g, &fd);
        assert!(err <= 1e-5, "point {k}: {err}");
    }
}

#[test]
fn hessian_action_matches_gradient_differences() {
    let mut r = rng(32);
    for k in 0..50 {
        let n = 1 + k % 6;
        let p = random_problem(&mut r, n, 0.0);
        let (x, y, mu, v) = (
            random_unit(&mut r, n),
            random_vec(&mut r, n, 1.2),
            random_vec(&mut r, n, 2.0),
            random_vec(&mut r, n, 1.0),
        );
        let rho = 7.0;
        let h = 1e-6;
        let grad_at = |s: f64| {
            let probe: Vec<f64> = y.iter().zip(&v).map(|(a, b)| a + s * b).collect();
            y_subproblem_gradient_hessian(&p, &probe, &x, &mu, rho)
                .unwrap()
                .0
        };
        let (up, down) = (grad_at(h), grad_at(-h));
        let fd: Vec<f64> = up
            .iter()
            .zip(&down)
            .map(|(a, b)| (a - b) / (2.0 * h))
            .collect();
        let (_, hess) = y_subproblem_gradient_hessian(&p, &y, &x, &mu, rho).unwrap();
        let err = rel_err(&hess.apply(&v), &fd);
        assert!(err <= 1e-4, "point {k}: {err}");
    }
}

#[test]
fn hessian_diagonal_matches_unit_actions() {
    let mut r = rng(33);
    let p = random_problem(&mut r, 5, 0.0);
    let y = random_vec(&mut r, 5, 1.0);
    let (_, hess) = y_subproblem_gradient_hessian(&p, &y, &y, &[0.0; 5], 2.0).unwrap();
    let diag = hess.diagonal();
    for i in 0..5 {
        let mut e = vec![0.0; 5];
        e[i] = 1.0;
        assert!((hess.apply(&e)[i] - diag[i]).abs() < 1e-14);
    }
}

#[test]
fn gauss_seidel_converges_to_the_newton_direction() {
    let grid = BecGrid::new(1, 20, 250.0).unwrap();
    let p = grid.build(0.0).unwrap();
    let y = quartic_pam::random_folded_unit_init::<f64>(p.n(), 1).unwrap();
    let mu = vec![0.1; p.n()];
    let (g, hess) = y_subproblem_gradient_hessian(&p, &y, &y, &mu, 80.0).unwrap();
    let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
    let d = hess.gauss_seidel(&rhs, 400);
    assert!(rel_err(&hess.apply(&d), &rhs) < 1e-10);
    // Three sweeps already give a descent direction.
    let d3 = hess.gauss_seidel(&rhs, 3);
    assert!(g.iter().zip(&d3).map(|(a, b)| a * b).sum::<f64>() < 0.0);
}

#[test]
fn riemannian_gradient_is_zero_at_eigenvectors() {
    let p = QuarticProblem::new(0.0, SymSparse::diagonal(&[1.0, 4.0, 9.0]), 0.0).unwrap();
    for i in 0..3 {
        let mut e = vec![0.0; 3];
        e[i] = 1.0;
        assert!(riemannian_grad_norm(&p, &e).unwrap() <= 1e-12);
    }
}

#[test]
fn dual_update_identity_on_converged_run() {
    let grid = BecGrid::new(1, 30, 250.0).unwrap();
    let p = grid.build(15.0).unwrap();
    let init = quartic_pam::random_folded_unit_init::<f64>(p.n(), 2).unwrap();
    let r = admm_solve(&p, &AdmmConfig::new(80.0), &init).unwrap();
    assert_eq!(r.termination, Termination::Tolerance);
    assert!(riemannian_grad_norm(&p, &r.best_point).unwrap() <= 1e-6);
    assert!(*r.state_gap_trace.last().unwrap() <= 1e-4);
    let nrm: f64 = r.best_point.iter().map(|a| a * a).sum::<f64>().sqrt();
    assert!((nrm - 1.0).abs() <= 1e-12);
    assert!(r.outer_marks.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn small_penalty_is_reported_not_hidden() {
    let grid = BecGrid::new(2, 6, 1000.0)
        .unwrap()
        .kinetic(KineticVariant::Half);
    let p = grid.build(0.0).unwrap();
    let init = quartic_pam::random_unit_init::<f64>(p.n(), 3).unwrap();
    let cfg = AdmmConfig {
        max_outer: 300,
        ..AdmmConfig::new(1e-3)
    };
    let r = admm_solve(&p, &cfg, &init).unwrap();
    assert_ne!(r.termination, Termination::Tolerance);
}
