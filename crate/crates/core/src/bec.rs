//! Finite-difference ground-state instances for a non-rotating condensate in
//! a harmonic trap `V(x) = |x|²/2` with homogeneous Dirichlet boundaries.
//!
//! The grid has `N` points per axis on `[a, b]`, mesh `h = (b-a)/(N-1)`, and
//! unknowns at the interior points only. With the rescaling `u = √h Φ` (1D)
//! or `u = h Φ` (2D) the discrete mass constraint becomes `‖u‖ = 1` and the
//! discrete energy becomes `(θ/2) Σ u_i^4 + uᵀBu` with `θ = β/h^dim`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::problem::{QuarticProblem, SymSparse};
use crate::scalar::Real;

/// Scaling of the 2D second-difference matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum KineticVariant {
    /// `D₂ = tridiag(-1, 2, -1)/h²`.
    #[default]
    Verbatim,
    /// `D₂ = tridiag(-1, 2, -1)/(2h²)`, the same ½ factor as the 1D matrix.
    Half,
}

impl fmt::Display for KineticVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KineticVariant::Verbatim => "verbatim",
            KineticVariant::Half => "half",
        })
    }
}

impl FromStr for KineticVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim" => Ok(KineticVariant::Verbatim),
            "half" => Ok(KineticVariant::Half),
            other => Err(Error::InvalidInput(format!(
                "unknown kinetic variant {other:?} (expected verbatim|half)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BecGrid<T> {
    dim: usize,
    a: T,
    b: T,
    points: usize,
    beta: T,
    kinetic: KineticVariant,
}

impl<T: Real> BecGrid<T> {
    pub fn new(dim: usize, points: usize, beta: T) -> Result<Self> {
        Self::with_domain(dim, points, beta, T::lit(-8.0), T::lit(8.0))
    }

    pub fn with_domain(dim: usize, points: usize, beta: T, a: T, b: T) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!(
                "dimension must be 1 or 2, got {dim}"
            )));
        }
        if points < 4 {
            return Err(Error::InvalidInput(format!(
                "need at least 4 grid points, got {points}"
            )));
        }
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "beta must be positive, got {beta}"
            )));
        }
        if !(b > a) {
            return Err(Error::InvalidInput(format!("empty domain [{a}, {b}]")));
        }
        Ok(Self {
            dim,
            a,
            b,
            points,
            beta,
            kinetic: KineticVariant::default(),
        })
    }

    pub fn kinetic(mut self, variant: KineticVariant) -> Self {
        self.kinetic = variant;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn kinetic_variant(&self) -> KineticVariant {
        self.kinetic
    }

    pub fn mesh(&self) -> T {
        (self.b - self.a) / T::from_usize(self.points - 1).unwrap()
    }

    /// Number of interior points per axis.
    pub fn interior_per_axis(&self) -> usize {
        self.points - 2
    }

    /// Dimension of the unknown vector: `N-2` or `(N-2)²`.
    pub fn interior_dim(&self) -> usize {
        self.interior_per_axis().pow(self.dim as u32)
    }

    /// Coordinate of grid point `j` (1-based, `j = 1..=N`).
    pub fn coord(&self, j: usize) -> T {
        self.a + T::from_usize(j - 1).unwrap() * self.mesh()
    }

    /// `θ = β / h^dim`.
    pub fn theta(&self) -> T {
        let h = self.mesh();
        match self.dim {
            1 => self.beta / h,
            _ => self.beta / (h * h),
        }
    }

    /// Factor `s` in `u = s Φ` (`√h` in 1D, `h` in 2D).
    pub fn amplitude_scale(&self) -> T {
        let h = self.mesh();
        match self.dim {
            1 => h.sqrt(),
            _ => h,
        }
    }

    /// Grid values `Φ` of the interior unknowns from a solver vector `u`.
    pub fn to_wavefunction(&self, u: &[T]) -> Result<Vec<T>> {
        check_dim(self.interior_dim(), u.len())?;
        let s = self.amplitude_scale();
        Ok(u.iter().map(|&v| v / s).collect())
    }

    /// Trapezoid-rule mass `h^dim Σ Φ²` (boundary values vanish).
    pub fn discrete_mass(&self, phi: &[T]) -> T {
        let h = self.mesh();
        let cell = if self.dim == 1 { h } else { h * h };
        cell * phi.iter().map(|&v| v * v).sum::<T>()
    }

    /// Builds the instance for this grid with shift `alpha`.
    pub fn build(&self, alpha: T) -> Result<QuarticProblem<T>> {
        match self.dim {
            1 => build_1d(self, alpha),
            _ => build_2d(self, alpha),
        }
    }

    /// Grid profile of a solver vector including the zero boundary rows.
    pub fn profile(&self, u: &[T]) -> Result<Vec<ProfileRow<T>>> {
        profile_export(u, self)
    }
}

/// One-dimensional instance: `B = D + V` with `D = tridiag(-1/2, 1, -1/2)/h²`
/// and `V = diag(x_j²/2)` over the interior points.
pub fn build_1d<T: Real>(g: &BecGrid<T>, alpha: T) -> Result<QuarticProblem<T>> {
    if g.dim != 1 {
        return Err(Error::InvalidInput("build_1d needs a 1D grid".into()));
    }
    let n = g.interior_per_axis();
    let h = g.mesh();
    let inv_h2 = T::one() / (h * h);
    let half = T::lit(0.5);
    let mut lower = BTreeMap::new();
    for k in 0..n {
        let x = g.coord(k + 2);
        lower.insert((k, k), inv_h2 + half * x * x);
        if k > 0 {
            lower.insert((k, k - 1), -half * inv_h2);
        }
    }
    QuarticProblem::new(g.theta(), SymSparse::from_lower(n, lower)?, alpha)
}

/// Second-difference matrix `D₂` for one axis, as (diagonal, off-diagonal).
fn axis_stencil<T: Real>(g: &BecGrid<T>) -> (T, T) {
    let h = g.mesh();
    let scale = match g.kinetic {
        KineticVariant::Verbatim => T::one(),
        KineticVariant::Half => T::lit(0.5),
    } / (h * h);
    (T::lit(2.0) * scale, -scale)
}

/// Two-dimensional instance: `D = I ⊗ D₂ + D₂ ⊗ I`, `V = diag((x_i² + y_j²)/2)`.
/// Interior unknowns are ordered row-major over `(i, j)` with `j` fastest:
/// flat index `(i-2)(N-2) + (j-2)` (0-based) for grid point `(x_i, y_j)`.
pub fn build_2d<T: Real>(g: &BecGrid<T>, alpha: T) -> Result<QuarticProblem<T>> {
    if g.dim != 2 {
        return Err(Error::InvalidInput("build_2d needs a 2D grid".into()));
    }
    let m = g.interior_per_axis();
    let (diag, off) = axis_stencil(g);
    let half = T::lit(0.5);
    let mut lower = BTreeMap::new();
    for i in 0..m {
        let x = g.coord(i + 2);
        for j in 0..m {
            let y = g.coord(j + 2);
            let k = i * m + j;
            lower.insert((k, k), diag + diag + half * (x * x + y * y));
            if j > 0 {
                lower.insert((k, k - 1), off);
            }
            if i > 0 {
                lower.insert((k, k - m), off);
            }
        }
    }
    QuarticProblem::new(g.theta(), SymSparse::from_lower(m * m, lower)?, alpha)
}

/// Grid point with amplitude: `coords` has one entry per spatial axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow<T> {
    pub coords: Vec<T>,
    pub amplitude: T,
}

/// Profile of `u` over the full grid, boundary rows included with amplitude 0.
pub fn profile_export<T: Real>(u: &[T], g: &BecGrid<T>) -> Result<Vec<ProfileRow<T>>> {
    check_dim(g.interior_dim(), u.len())?;
    let n_pts = g.points;
    let m = g.interior_per_axis();
    let interior = |j: usize| (2..n_pts).contains(&j);
    let mut rows = Vec::with_capacity(n_pts.pow(g.dim as u32));
    match g.dim {
        1 => {
            for j in 1..=n_pts {
                let amplitude = if interior(j) { u[j - 2] } else { T::zero() };
                rows.push(ProfileRow {
                    coords: vec![g.coord(j)],
                    amplitude,
                });
            }
        }
        _ => {
            for i in 1..=n_pts {
                for j in 1..=n_pts {
                    let amplitude = if interior(i) && interior(j) {
                        u[(i - 2) * m + (j - 2)]
                    } else {
                        T::zero()
                    };
                    rows.push(ProfileRow {
                        coords: vec![g.coord(i), g.coord(j)],
                        amplitude,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Writes a profile as TSV with a `# x u` or `# x y u` header.
pub fn write_profile_tsv<T: Real, W: Write>(rows: &[ProfileRow<T>], mut out: W) -> io::Result<()> {
    let dim = rows.first().map_or(1, |r| r.coords.len());
    let header = if dim == 1 { "# x\tu" } else { "# x\ty\tu" };
    writeln!(out, "{header}")?;
    for r in rows {
        for c in &r.coords {
            write!(out, "{c}\t")?;
        }
        writeln!(out, "{}", r.amplitude)?;
    }
    Ok(())
}
