mod common;

use common::{fd_gradient, random_problem, random_unit, random_vec, rel_err, rng};
use proptest::prelude::*;
use quartic_pam::{AugVector, BecGrid, Block, BlockState, QuarticProblem, SymSparse};
use rand::Rng;

const POINTS: usize = 50;

/// `(θ/2) Σ x_i^4 + t² xᵀBx - α (t² + ‖x‖²)²` written out directly.
fn homogeneous_shifted(p: &QuarticProblem<f64>, v: &[f64]) -> f64 {
    let t = v[0];
    let x = &v[1..];
    let n = x.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += x[i] * p.matrix().get(i, j) * x[j];
        }
    }
    let quartic: f64 = x.iter().map(|a| a.powi(4)).sum();
    let sq = t * t + x.iter().map(|a| a * a).sum::<f64>();
    p.theta() / 2.0 * quartic + t * t * quad - p.alpha() * sq * sq
}

#[test]
fn value_paths_agree() {
    let mut r = rng(1);
    for n in 1..=5 {
        let p = random_problem(&mut r, n, 0.7);
        let t = p.tensor();
        let poly = p.to_poly();
        for _ in 0..10 {
            let x = random_vec(&mut r, n, 1.5);
            let direct = p.f_value(&x).unwrap();
            let via_tensor = t.eval_via_tensor(&AugVector::new(x.clone())).unwrap();
            assert!((poly.eval(&x).unwrap() - direct).abs() < 1e-12 * (1.0 + direct.abs()));
            assert!((via_tensor - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        }
    }
}

#[test]
fn structured_multilinear_matches_tensor_contraction() {
    let mut r = rng(2);
    for n in 1..=5 {
        let p = random_problem(&mut r, n, 1.3);
        let t = p.tensor();
        for _ in 0..10 {
            let s = BlockState {
                x: random_vec(&mut r, n, 1.0),
                y: random_vec(&mut r, n, 1.0),
                z: random_vec(&mut r, n, 1.0),
                w: random_vec(&mut r, n, 1.0),
            };
            let lift =
                |v: &[f64]| -> Vec<f64> { std::iter::once(1.0).chain(v.iter().copied()).collect() };
            let (xl, yl, zl, wl) = (lift(&s.x), lift(&s.y), lift(&s.z), lift(&s.w));
            let dotl = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
            let want = t.multilinear_eval(&[&xl, &yl, &zl, &wl]).unwrap()
                - p.alpha() * dotl(&xl, &yl) * dotl(&zl, &wl);
            let got = p.multilinear_value(&s).unwrap();
            assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn multilinear_on_diagonal_is_shifted_objective() {
    let mut r = rng(3);
    let p = random_problem(&mut r, 4, 2.0);
    for _ in 0..10 {
        let u = random_unit(&mut r, 4);
        let got = p.multilinear_value(&BlockState::uniform(&u)).unwrap();
        let want = p.f_alpha_value(&u).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert!((want - (p.f_value(&u).unwrap() - 4.0 * p.alpha())).abs() < 1e-12);
    }
}

#[test]
fn objective_gradient_matches_finite_differences() {
    let mut r = rng(4);
    for k in 0..POINTS {
        let n = 1 + k % 6;
        let p = random_problem(&mut r, n, 0.0);
        let x = random_vec(&mut r, n, 1.0);
        let fd = fd_gradient(|v| p.f_value(v).unwrap(), &x, 1e-5);
        let err = rel_err(&p.grad_f(&x).unwrap(), &fd);
        assert!(err <= 1e-4, "point {k}: {err}");
    }
}

#[test]
fn shifted_gradient_matches_finite_differences_on_sphere() {
    let mut r = rng(5);
    for k in 0..POINTS {
        let n = 1 + k % 6;
        let p = random_problem(&mut r, n, 1.5);
        let x = random_unit(&mut r, n);
        let fd = fd_gradient(|v| p.f_alpha_value(v).unwrap(), &x, 1e-5);
        let err = rel_err(&p.grad_f_alpha(&x).unwrap(), &fd);
        assert!(err <= 1e-4, "point {k}: {err}");
    }
}

#[test]
fn block_gradients_match_finite_differences() {
    let mut r = rng(6);
    for k in 0..POINTS {
        let n = 1 + k % 6;
        let p = random_problem(&mut r, n, 0.9);
        let s = BlockState {
            x: random_vec(&mut r, n, 1.0),
            y: random_vec(&mut r, n, 1.0),
            z: random_vec(&mut r, n, 1.0),
            w: random_vec(&mut r, n, 1.0),
        };
        for b in Block::ALL {
            let fd = fd_gradient(
                |v| {
                    let mut probe = s.clone();
                    *probe.block_mut(b) = v.to_vec();
                    p.multilinear_value(&probe).unwrap()
                },
                s.block(b),
                1e-5,
            );
            let err = rel_err(&p.block_gradient(&s, b).unwrap(), &fd);
            assert!(err <= 1e-4, "point {k} block {b:?}: {err}");
        }
    }
}

#[test]
fn hessian_quadform_matches_second_differences() {
    let mut r = rng(7);
    for k in 0..POINTS {
        let n = 1 + k % 6;
        let p = random_problem(&mut r, n, 1.1);
        let t = p.tensor();
        let u = random_vec(&mut r, n + 1, 1.0);
        let v = random_vec(&mut r, n + 1, 1.0);
        let h = 1e-4;
        let shifted = |s: f64| -> Vec<f64> { u.iter().zip(&v).map(|(a, b)| a + s * b).collect() };
        let fd = (homogeneous_shifted(&p, &shifted(h)) - 2.0 * homogeneous_shifted(&p, &u)
            + homogeneous_shifted(&p, &shifted(-h)))
            / (h * h);
        let got = p.hessian_quadform_with(&t, &u, &v).unwrap();
        let err = (got - fd).abs() / fd.abs().max(1e-12);
        assert!(err <= 1e-4, "point {k}: got {got}, fd {fd}");
    }
}

fn max_normalized_quadform(
    p: &QuarticProblem<f64>,
    r: &mut rand_chacha::ChaCha8Rng,
    pairs: usize,
) -> f64 {
    let n = p.n();
    let t = p.tensor();
    (0..pairs)
        .map(|_| {
            let u = random_vec(r, n + 1, 1.0);
            let v = random_vec(r, n + 1, 1.0);
            let scale = u.iter().map(|a| a * a).sum::<f64>() * v.iter().map(|a| a * a).sum::<f64>();
            p.hessian_quadform_with(&t, &u, &v).unwrap() / scale
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn triple_norm_shift_is_concave() {
    // |T u²v²| ≤ ‖T‖_F ‖u‖²‖v‖², so 12‖T‖_F - 4α ≤ 0 is enough
    let mut r = rng(8);
    for _ in 0..20 {
        let n = r.gen_range(1..=6);
        let (theta, b) = common::random_instance(&mut r, n);
        let base = QuarticProblem::with_default_alpha(theta, b).unwrap();
        let p = base.with_alpha(3.0 * base.alpha()).unwrap();
        assert!(max_normalized_quadform(&p, &mut r, 200) <= 1e-8);
    }
}

#[test]
fn frobenius_shift_alone_can_leave_convex_directions() {
    let p = QuarticProblem::with_default_alpha(0.1, SymSparse::diagonal(&[1.0])).unwrap();
    assert!(p.concavity_certified());
    // e0 ⟂ e1: 12 · b/6 - 4‖T‖_F = 2 - 4·0.4113 > 0
    let q = p.hessian_quadform(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
    assert!((p.alpha() - (0.0025f64 + 1.0 / 6.0).sqrt()).abs() < 1e-15);
    assert!(q > 0.3, "{q}");
}

#[test]
fn frobenius_shift_is_concave_on_condensate_instances() {
    let mut r = rng(9);
    for (dim, points, beta) in [(1, 6, 250.0), (1, 8, 1000.0), (2, 4, 500.0)] {
        let grid = BecGrid::new(dim, points, beta).unwrap();
        let base = grid.build(0.0).unwrap();
        let p = base.with_alpha(base.tensor_norm()).unwrap();
        assert!(max_normalized_quadform(&p, &mut r, 200) <= 1e-8);
    }
}

proptest! {
    #[test]
    fn projection_of_gradient_is_shorter(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let p = random_problem(&mut r, n, 0.0);
        let x = random_unit(&mut r, n);
        let g = p.grad_f(&x).unwrap();
        let gn = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        let rg = quartic_pam::riemannian_grad_norm(&p, &x).unwrap();
        prop_assert!(rg <= gn + 1e-12);
    }

    #[test]
    fn shift_lowers_the_objective_by_four_alpha(seed in any::<u64>(), alpha in 0.0f64..50.0) {
        let mut r = rng(seed);
        let p = random_problem(&mut r, 3, alpha);
        let x = random_unit(&mut r, 3);
        let gap = p.f_value(&x).unwrap() - p.f_alpha_value(&x).unwrap();
        prop_assert!((gap - 4.0 * alpha).abs() <= 1e-10 * (1.0 + alpha));
    }
}
