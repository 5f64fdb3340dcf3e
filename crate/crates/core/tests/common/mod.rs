#![allow(dead_code)]

use quartic_pam::{QuarticProblem, SymSparse};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v = random_vec(rng, n, 1.0);
        let nrm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            return v.iter().map(|a| a / nrm).collect();
        }
    }
}

/// Random `θ ∈ [0.1, 3]` and dense symmetric `B` with entries in `[-1, 1]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (f64, SymSparse<f64>) {
    let theta = rng.gen_range(0.1..3.0);
    let mut trip = Vec::new();
    for i in 0..n {
        for j in 0..=i {
            trip.push((i, j, rng.gen_range(-1.0..1.0)));
        }
    }
    (theta, SymSparse::from_triplets(n, &trip).unwrap())
}

pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, alpha: f64) -> QuarticProblem<f64> {
    let (theta, b) = random_instance(rng, n);
    QuarticProblem::new(theta, b, alpha).unwrap()
}

pub fn rel_err(got: &[f64], want: &[f64]) -> f64 {
    let diff = got
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale = want.iter().map(|b| b * b).sum::<f64>().sqrt();
    diff / scale.max(1e-12)
}

/// Central-difference gradient of `f` at `x`.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}
