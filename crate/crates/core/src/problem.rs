//! The structured quartic instance `f(x) = (θ/2) Σ x_i^4 + xᵀBx`, its
//! shifted single-vector form `f_α` and its four-block multilinear form `F_α`.
//!
//! The closed-form evaluators here are the fast paths used by the solvers;
//! each one agrees with the generic contraction of the homogenized tensor.

use std::collections::BTreeMap;

use crate::error::{check_dim, Error, Result};
use crate::scalar::{Real, Scalar};
use crate::tensor::{homogenize, MonomialPoly, SymTensor};
use crate::vecops::{dist, dot, norm};

/// Symmetric sparse matrix. Each off-diagonal pair is stored once, under its
/// lower-triangle key `(i, j)` with `i > j`; a row adjacency list is kept for
/// products.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSparse<T> {
    n: usize,
    lower: BTreeMap<(usize, usize), T>,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SymSparse<T> {
    pub fn from_lower(n: usize, lower: BTreeMap<(usize, usize), T>) -> Result<Self> {
        let mut rows = vec![Vec::new(); n];
        let mut clean = BTreeMap::new();
        for (&(i, j), &v) in &lower {
            if i >= n || j > i {
                return Err(Error::InvalidInput(format!(
                    "entry ({i}, {j}) is not in the lower triangle of a {n}x{n} matrix"
                )));
            }
            if v.is_zero() {
                continue;
            }
            clean.insert((i, j), v);
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        for r in &mut rows {
            r.sort_by_key(|&(j, _)| j);
        }
        Ok(Self {
            n,
            lower: clean,
            rows,
        })
    }

    /// Builds from `(i, j, v)` triplets in either triangle. Mirrored entries
    /// must agree.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut lower: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "entry ({i}, {j}) out of range for {n}x{n}"
                )));
            }
            let key = if i >= j { (i, j) } else { (j, i) };
            if let Some(&prev) = lower.get(&key) {
                if prev != v {
                    return Err(Error::InvalidInput(format!(
                        "asymmetric entries at ({i}, {j})"
                    )));
                }
            }
            lower.insert(key, v);
        }
        Self::from_lower(n, lower)
    }

    pub fn diagonal(values: &[T]) -> Self {
        let lower = values
            .iter()
            .enumerate()
            .map(|(i, &v)| ((i, i), v))
            .collect();
        Self::from_lower(values.len(), lower).expect("diagonal entries are in range")
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_lower(n, BTreeMap::new()).expect("empty matrix")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let key = if i >= j { (i, j) } else { (j, i) };
        self.lower.get(&key).copied().unwrap_or_else(T::zero)
    }

    /// Stored lower-triangle entries `(i, j, v)` with `i >= j`.
    pub fn lower_entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.lower.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.rows[i]
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(T::zero(), |acc, &(j, v)| acc + v * x[j]))
            .collect()
    }

    pub fn quad_form(&self, x: &[T], y: &[T]) -> T {
        dot(x, &self.matvec(y))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.n]; self.n];
        for (&(i, j), &v) in &self.lower {
            d[i][j] = v;
            d[j][i] = v;
        }
        d
    }

    /// Positive diagonal and nonpositive off-diagonal entries.
    pub fn has_bec_sign_pattern(&self) -> bool
    where
        T: PartialOrd,
    {
        (0..self.n).all(|i| self.get(i, i) > T::zero())
            && self
                .lower
                .iter()
                .all(|(&(i, j), &v)| i == j || v <= T::zero())
    }
}

/// The four blocks of the multilinear problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    X,
    Y,
    Z,
    W,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::X, Block::Y, Block::Z, Block::W];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Quadruple of unit vectors `(x, y, z, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub z: Vec<T>,
    pub w: Vec<T>,
}

impl<T: Real> BlockState<T> {
    /// All four blocks equal to `u`.
    pub fn uniform(u: &[T]) -> Self {
        Self {
            x: u.to_vec(),
            y: u.to_vec(),
            z: u.to_vec(),
            w: u.to_vec(),
        }
    }

    pub fn block(&self, b: Block) -> &[T] {
        match b {
            Block::X => &self.x,
            Block::Y => &self.y,
            Block::Z => &self.z,
            Block::W => &self.w,
        }
    }

    pub fn block_mut(&mut self, b: Block) -> &mut Vec<T> {
        match b {
            Block::X => &mut self.x,
            Block::Y => &mut self.y,
            Block::Z => &mut self.z,
            Block::W => &mut self.w,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `‖t - other‖` over the concatenated blocks. Equal to the distance of
    /// the lifts since the leading components cancel.
    pub fn distance(&self, other: &Self) -> T {
        Block::ALL
            .iter()
            .map(|&b| {
                let d = dist(self.block(b), other.block(b));
                d * d
            })
            .sum::<T>()
            .sqrt()
    }

    pub fn max_norm_defect(&self) -> T {
        Block::ALL
            .iter()
            .map(|&b| (norm(self.block(b)) - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Structured instance `f(x) = (θ/2) Σ x_i^4 + xᵀBx` with shift `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticProblem<T> {
    theta: T,
    b: SymSparse<T>,
    alpha: T,
}

impl<T: Real> QuarticProblem<T> {
    /// `θ` and `α` must be finite and nonnegative. Zero `θ` is allowed for
    /// degenerate quadratic test instances.
    pub fn new(theta: T, b: SymSparse<T>, alpha: T) -> Result<Self> {
        if !theta.is_finite() || theta < T::zero() {
            return Err(Error::InvalidInput(format!(
                "theta must be >= 0, got {theta}"
            )));
        }
        if !alpha.is_finite() || alpha < T::zero() {
            return Err(Error::InvalidInput(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        Ok(Self { theta, b, alpha })
    }

    /// Same instance with `α = ‖T_f‖_F`.
    pub fn with_default_alpha(theta: T, b: SymSparse<T>) -> Result<Self> {
        let mut p = Self::new(theta, b, T::zero())?;
        p.alpha = p.tensor_norm();
        Ok(p)
    }

    pub fn with_alpha(&self, alpha: T) -> Result<Self> {
        Self::new(self.theta, self.b.clone(), alpha)
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn matrix(&self) -> &SymSparse<T> {
        &self.b
    }

    /// The polynomial `f` in monomial form (degree bound 4).
    pub fn to_poly(&self) -> MonomialPoly<T> {
        let n = self.n();
        let mut p = MonomialPoly::new(n, 4);
        let half_theta = self.theta / T::lit(2.0);
        let mut exps = vec![0u32; n];
        for i in 0..n {
            exps[i] = 4;
            p.add_term(&exps, half_theta).expect("degree 4 term");
            exps[i] = 0;
        }
        for (i, j, v) in self.b.lower_entries() {
            exps[i] += 1;
            exps[j] += 1;
            let c = if i == j { v } else { v + v };
            p.add_term(&exps, c).expect("degree 2 term");
            exps[i] = 0;
            exps[j] = 0;
        }
        p
    }

    /// `T_f`, the order-4 tensor over dimension `n + 1`.
    pub fn tensor(&self) -> SymTensor<T> {
        homogenize(&self.to_poly()).expect("well-formed quartic")
    }

    pub fn tensor_norm(&self) -> T {
        self.tensor().frobenius_norm()
    }

    /// Whether `α ≥ ‖T_f‖_F`. This is the threshold the concavity flag is
    /// reported against; it does not bound every direction on its own, and
    /// `α ≥ 3‖T_f‖_F` is the shift that provably makes the lifted quartic
    /// concave.
    pub fn concavity_certified(&self) -> bool {
        self.alpha >= self.tensor_norm()
    }

    pub fn f_value(&self, x: &[T]) -> Result<T> {
        check_dim(self.n(), x.len())?;
        let quartic: T = x.iter().map(|&v| v * v * v * v).sum();
        Ok(self.theta / T::lit(2.0) * quartic + self.b.quad_form(x, x))
    }

    /// `f(x) - α (1 + ‖x‖²)²`; on the sphere this is `f(x) - 4α`.
    pub fn f_alpha_value(&self, x: &[T]) -> Result<T> {
        let f = self.f_value(x)?;
        let lifted_sq = T::one() + dot(x, x);
        Ok(f - self.alpha * lifted_sq * lifted_sq)
    }

    /// `F_α(x,y,z,w) = T_f x̃ỹz̃w̃ - α <x̃,ỹ><z̃,w̃>`.
    pub fn multilinear_value(&self, s: &BlockState<T>) -> Result<T> {
        let n = self.n();
        for b in Block::ALL {
            check_dim(n, s.block(b).len())?;
        }
        let (x, y, z, w) = (&s.x, &s.y, &s.z, &s.w);
        let mut quartic = T::zero();
        for i in 0..n {
            quartic += x[i] * y[i] * z[i] * w[i];
        }
        let bx = self.b.matvec(x);
        let by = self.b.matvec(y);
        let bz = self.b.matvec(z);
        let pairs =
            dot(&bx, y) + dot(&bx, z) + dot(&bx, w) + dot(&by, z) + dot(&by, w) + dot(&bz, w);
        let shift = (T::one() + dot(x, y)) * (T::one() + dot(z, w));
        Ok(self.theta / T::lit(2.0) * quartic + pairs / T::lit(6.0) - self.alpha * shift)
    }

    /// Gradient of `F_α` with respect to one block. The shift term pairs
    /// `(x, y)` against `(z, w)`.
    pub fn block_gradient(&self, s: &BlockState<T>, which: Block) -> Result<Vec<T>> {
        let n = self.n();
        for b in Block::ALL {
            check_dim(n, s.block(b).len())?;
        }
        let (others, partner, opposite): ([&[T]; 3], &[T], (&[T], &[T])) = match which {
            Block::X => ([&s.y, &s.z, &s.w], &s.y, (&s.z, &s.w)),
            Block::Y => ([&s.x, &s.z, &s.w], &s.x, (&s.z, &s.w)),
            Block::Z => ([&s.x, &s.y, &s.w], &s.w, (&s.x, &s.y)),
            Block::W => ([&s.x, &s.y, &s.z], &s.z, (&s.x, &s.y)),
        };
        let half_theta = self.theta / T::lit(2.0);
        let sixth = T::one() / T::lit(6.0);
        let sum: Vec<T> = (0..n)
            .map(|i| others[0][i] + others[1][i] + others[2][i])
            .collect();
        let bsum = self.b.matvec(&sum);
        let pair = self.alpha * (T::one() + dot(opposite.0, opposite.1));
        Ok((0..n)
            .map(|i| {
                half_theta * others[0][i] * others[1][i] * others[2][i] + sixth * bsum[i]
                    - pair * partner[i]
            })
            .collect())
    }

    /// `∇f(x) = 2θ x∘x∘x + 2Bx`.
    pub fn grad_f(&self, x: &[T]) -> Result<Vec<T>> {
        check_dim(self.n(), x.len())?;
        let two = T::lit(2.0);
        let bx = self.b.matvec(x);
        Ok(x.iter()
            .zip(&bx)
            .map(|(&v, &b)| two * self.theta * v * v * v + two * b)
            .collect())
    }

    /// On-sphere gradient of `f_α`: `2θ x∘x∘x + 2Bx - 8αx`.
    pub fn grad_f_alpha(&self, x: &[T]) -> Result<Vec<T>> {
        let g = self.grad_f(x)?;
        let eight_alpha = T::lit(8.0) * self.alpha;
        Ok(g.iter()
            .zip(x)
            .map(|(&gi, &xi)| gi - eight_alpha * xi)
            .collect())
    }

    /// `vᵀ ∇²f_α(u) v = 12 T_f u²v² - 8α<u,v>² - 4α‖u‖²‖v‖²` for arbitrary
    /// `u, v ∈ R^{n+1}`, evaluated through the homogenized tensor.
    pub fn hessian_quadform(&self, u: &[T], v: &[T]) -> Result<T> {
        let t = self.tensor();
        self.hessian_quadform_with(&t, u, v)
    }

    /// As [`Self::hessian_quadform`] with a precomputed `T_f`.
    pub fn hessian_quadform_with(&self, t: &SymTensor<T>, u: &[T], v: &[T]) -> Result<T> {
        check_dim(self.n() + 1, u.len())?;
        check_dim(self.n() + 1, v.len())?;
        let contraction = t.multilinear_eval(&[u, u, v, v])?;
        let uv = dot(u, v);
        Ok(T::lit(12.0) * contraction
            - T::lit(8.0) * self.alpha * uv * uv
            - T::lit(4.0) * self.alpha * dot(u, u) * dot(v, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> QuarticProblem<f64> {
        let b = SymSparse::from_triplets(
            3,
            &[
                (0, 0, 2.0),
                (1, 1, 1.5),
                (2, 2, 3.0),
                (1, 0, -0.5),
                (2, 1, -0.25),
            ],
        )
        .unwrap();
        QuarticProblem::<f64>::new(4.0, b, 1.25).unwrap()
    }

    #[test]
    fn f_at_basis_vector() {
        let p = small();
        assert_eq!(p.f_value(&[1.0, 0.0, 0.0]).unwrap(), 2.0 + 2.0);
        assert_eq!(p.f_value(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn f_alpha_on_sphere_shifts_by_four_alpha() {
        let p = small();
        let x = [0.6, 0.0, 0.8];
        let f = p.f_value(&x).unwrap();
        assert!((p.f_alpha_value(&x).unwrap() - (f - 5.0)).abs() < 1e-14);
        let p0 = p.with_alpha(0.0).unwrap();
        assert_eq!(p0.f_alpha_value(&x).unwrap(), f);
    }

    #[test]
    fn shift_only_multilinear_value() {
        let p = QuarticProblem::<f64>::new(0.0, SymSparse::zeros(2), 1.0).unwrap();
        let s = BlockState::uniform(&[0.6, 0.8]);
        assert!((p.multilinear_value(&s).unwrap() + 4.0).abs() < 1e-15);
        let s = BlockState {
            x: vec![1.0, 0.0],
            y: vec![0.0, 1.0],
            z: vec![0.6, 0.8],
            w: vec![0.8, 0.6],
        };
        let g = p.block_gradient(&s, Block::X).unwrap();
        let zw = 0.48 + 0.48;
        assert!((g[0] - 0.0).abs() < 1e-15);
        assert!((g[1] + (1.0 + zw)).abs() < 1e-15);
    }

    #[test]
    fn grad_f_alpha_special_cases() {
        // B = 4αI, θ = 0: the gradient cancels exactly.
        let alpha = 0.75;
        let p = QuarticProblem::<f64>::new(0.0, SymSparse::diagonal(&[3.0, 3.0]), alpha).unwrap();
        let g = p.grad_f_alpha(&[0.6, 0.8]).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-15));
        let p = QuarticProblem::<f64>::new(0.0, SymSparse::diagonal(&[1.0, 2.0]), 0.0).unwrap();
        assert_eq!(p.grad_f_alpha(&[0.6, 0.8]).unwrap(), vec![1.2, 3.2]);
    }

    #[test]
    fn hessian_quadform_of_pure_quartic() {
        let p = QuarticProblem::<f64>::new(2.0, SymSparse::zeros(3), 0.0).unwrap();
        let e1 = [0.0, 1.0, 0.0, 0.0];
        assert!((p.hessian_quadform(&e1, &e1).unwrap() - 12.0).abs() < 1e-13);
        let zero = [0.0; 4];
        assert_eq!(p.hessian_quadform(&e1, &zero).unwrap(), 0.0);
    }

    #[test]
    fn dimension_errors() {
        let p = small();
        assert!(p.f_value(&[1.0, 0.0]).is_err());
        assert!(p.grad_f_alpha(&[1.0]).is_err());
        let bad = BlockState::uniform(&[1.0, 0.0]);
        assert!(p.multilinear_value(&bad).is_err());
        assert!(p.block_gradient(&bad, Block::Z).is_err());
        assert!(p.hessian_quadform(&[1.0; 3], &[1.0; 4]).is_err());
    }

    #[test]
    fn rejects_negative_parameters() {
        assert!(QuarticProblem::<f64>::new(-1.0, SymSparse::zeros(2), 0.0).is_err());
        assert!(QuarticProblem::<f64>::new(1.0, SymSparse::zeros(2), -0.1).is_err());
        assert!(SymSparse::from_triplets(2, &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(SymSparse::from_triplets(2, &[(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn sparse_matrix_access_is_symmetric() {
        let p = small();
        let b = p.matrix();
        assert_eq!(b.get(0, 1), b.get(1, 0));
        assert_eq!(b.get(0, 2), 0.0);
        assert!(b.has_bec_sign_pattern());
        assert_eq!(b.matvec(&[1.0, 0.0, 0.0]), vec![2.0, -0.5, 0.0]);
    }

    #[test]
    fn default_alpha_certifies_concavity() {
        let p = small();
        assert!(!p.concavity_certified());
        let q = QuarticProblem::with_default_alpha(p.theta(), p.matrix().clone()).unwrap();
        assert!(q.concavity_certified());
        assert!((q.alpha() - q.tensor_norm()).abs() < 1e-15);
    }
}
