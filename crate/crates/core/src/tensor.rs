//! Sparse symmetric tensors and the polynomial homogenization map.
//!
//! A degree-`d` polynomial in `n` variables is embedded as an order-`d`
//! symmetric tensor over dimension `n + 1`. Index `0` is the homogenizing
//! slot, matched by the leading `1` of a lifted vector `(1, x)`, so that
//! `p(x) = <T_p, (1,x)∘…∘(1,x)>`.
//!
//! Storage keeps one entry per canonical (sorted) index tuple. Stored values
//! are per-position values: the contribution of an entry to any full
//! contraction is its value times the number of distinct permutations of its
//! key.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{check_dim, Error, Result};
use crate::scalar::{factorial, Real, Scalar};
use crate::vecops::{lift, norm};

/// Polynomial `Σ f_α x^α` with `|α| ≤ degree`, stored sparsely by exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly<S> {
    n: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> MonomialPoly<S> {
    pub fn new(n: usize, degree: usize) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], S)> + '_ {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · x^exponents`, merging with an existing term. Terms that
    /// cancel to zero are removed.
    pub fn add_term(&mut self, exponents: &[u32], coeff: S) -> Result<()> {
        check_dim(self.n, exponents.len())?;
        let total: usize = exponents.iter().map(|&e| e as usize).sum();
        if total > self.degree {
            return Err(Error::InvalidInput(format!(
                "monomial degree {total} exceeds degree bound {}",
                self.degree
            )));
        }
        let entry = self.terms.entry(exponents.to_vec()).or_insert_with(S::zero);
        *entry = *entry + coeff;
        if entry.is_zero() {
            self.terms.remove(exponents);
        }
        Ok(())
    }

    /// Direct evaluation by monomial expansion.
    pub fn eval(&self, x: &[S]) -> Result<S> {
        check_dim(self.n, x.len())?;
        let mut acc = S::zero();
        for (alpha, &c) in &self.terms {
            let mut mono = c;
            for (&xi, &e) in x.iter().zip(alpha) {
                for _ in 0..e {
                    mono = mono * xi;
                }
            }
            acc = acc + mono;
        }
        Ok(acc)
    }
}

/// Symmetric order-`order` tensor over dimension `dim`, canonical sparse storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor<S> {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> SymTensor<S> {
    pub fn new(order: usize, dim: usize) -> Self {
        Self {
            order,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored canonical entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical entries in lexicographic key order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], S)> + '_ {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    fn canonical(&self, index: &[usize]) -> Result<Vec<usize>> {
        if index.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                got: index.len(),
            });
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= self.dim) {
            return Err(Error::InvalidInput(format!(
                "index {bad} out of range for dimension {}",
                self.dim
            )));
        }
        let mut key = index.to_vec();
        key.sort_unstable();
        Ok(key)
    }

    /// Entry at any (possibly unsorted) index tuple.
    pub fn get(&self, index: &[usize]) -> Result<S> {
        let key = self.canonical(index)?;
        Ok(self.entries.get(&key).copied().unwrap_or_else(S::zero))
    }

    /// Sets the entry for the whole permutation class of `index`.
    pub fn set(&mut self, index: &[usize], value: S) -> Result<()> {
        let key = self.canonical(index)?;
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// Number of distinct tuples in the permutation class of a canonical key.
    pub fn multiplicity(key: &[usize]) -> u64 {
        let mut denom: u64 = 1;
        let mut run = 1u64;
        for w in key.windows(2) {
            if w[0] == w[1] {
                run += 1;
                denom *= run;
            } else {
                run = 1;
            }
        }
        (1..=key.len() as u64).product::<u64>() / denom
    }

    fn check_vectors(&self, vs: &[&[S]], arity: usize) -> Result<()> {
        if vs.len() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: vs.len(),
            });
        }
        for v in vs {
            check_dim(self.dim, v.len())?;
        }
        Ok(())
    }

    /// Full contraction `Σ T[i1..id] v1[i1] … vd[id]` against lifted vectors
    /// of length `dim`. The leading components are used as given.
    pub fn multilinear_eval(&self, vs: &[&[S]]) -> Result<S> {
        self.check_vectors(vs, self.order)?;
        let mut acc = S::zero();
        let mut perm = Vec::with_capacity(self.order);
        for (key, &val) in &self.entries {
            perm.clear();
            perm.extend_from_slice(key);
            let mut sum = S::zero();
            loop {
                let mut prod = S::one();
                for (slot, &i) in perm.iter().enumerate() {
                    prod = prod * vs[slot][i];
                }
                sum = sum + prod;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            acc = acc + val * sum;
        }
        Ok(acc)
    }

    /// Contracts every slot except the first against `vs` (length `order-1`)
    /// and returns the full length-`dim` result.
    pub fn contract_first_free(&self, vs: &[&[S]]) -> Result<Vec<S>> {
        self.check_vectors(vs, self.order - 1)?;
        let mut out = vec![S::zero(); self.dim];
        let mut perm = Vec::with_capacity(self.order);
        for (key, &val) in &self.entries {
            perm.clear();
            perm.extend_from_slice(key);
            loop {
                let mut prod = val;
                for (slot, &i) in perm[1..].iter().enumerate() {
                    prod = prod * vs[slot][i];
                }
                out[perm[0]] = out[perm[0]] + prod;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// `(0, I_n) · T v1 … v_{d-1}`: the free-slot contraction with the
    /// homogenizing component dropped.
    pub fn partial_gradient(&self, vs: &[&[S]]) -> Result<Vec<S>> {
        let mut full = self.contract_first_free(vs)?;
        full.remove(0);
        Ok(full)
    }

    /// `Σ_i p(i)` style evaluation `<T, M_d((1,x))>` at a body vector.
    pub fn eval_via_tensor(&self, x: &AugVector<S>) -> Result<S> {
        check_dim(self.dim, x.lifted_len())?;
        let lifted = x.lifted();
        let vs: Vec<&[S]> = (0..self.order).map(|_| lifted.as_slice()).collect();
        self.multilinear_eval(&vs)
    }

    /// Squared Frobenius norm over all `dim^order` positions.
    pub fn frobenius_norm_sq(&self) -> S {
        self.entries.iter().fold(S::zero(), |acc, (k, &v)| {
            acc + S::from_count(Self::multiplicity(k)) * v * v
        })
    }
}

impl<T: Real> SymTensor<T> {
    pub fn frobenius_norm(&self) -> T {
        self.frobenius_norm_sq().sqrt()
    }

    /// Text form: one canonical entry per line, `i1 i2 … id value`, values in
    /// scientific notation with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, v) in &self.entries {
            for i in key {
                let _ = write!(out, "{i} ");
            }
            let _ = writeln!(out, "{v:.16e}");
        }
        out
    }

    /// Parses the text form. Lines starting with `#` and blank lines are skipped.
    pub fn from_text(order: usize, dim: usize, text: &str) -> Result<Self> {
        let mut t = Self::new(order, dim);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != order + 1 {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected {} fields, got {}",
                    lineno + 1,
                    order + 1,
                    fields.len()
                )));
            }
            let bad = |what: &str| Error::InvalidInput(format!("line {}: bad {what}", lineno + 1));
            let index = fields[..order]
                .iter()
                .map(|f| f.parse::<usize>().map_err(|_| bad("index")))
                .collect::<Result<Vec<_>>>()?;
            let value: f64 = fields[order].parse().map_err(|_| bad("value"))?;
            t.set(&index, T::lit(value))?;
        }
        Ok(t)
    }
}

/// Builds the symmetric tensor of a polynomial: each term `f_α x^α` lands on
/// the class of tuples holding `d-|α|` zeros and `α_i` copies of `i`, with
/// per-position value `(d-|α|)! α_1! … α_n! / d! · f_α`.
pub fn homogenize<S: Scalar>(p: &MonomialPoly<S>) -> Result<SymTensor<S>> {
    let d = p.degree;
    let mut t = SymTensor::new(d, p.n + 1);
    let d_fact: S = factorial(d);
    for (alpha, &coeff) in &p.terms {
        let total: usize = alpha.iter().map(|&e| e as usize).sum();
        if total > d {
            return Err(Error::InvalidInput(format!(
                "monomial degree {total} exceeds degree bound {d}"
            )));
        }
        let mut key = vec![0usize; d - total];
        let mut weight: S = factorial(d - total);
        for (i, &e) in alpha.iter().enumerate() {
            key.extend(std::iter::repeat_n(i + 1, e as usize));
            weight = weight * factorial(e as usize);
        }
        let value = weight * coeff / d_fact;
        let prev = t.get(&key)?;
        t.set(&key, prev + value)?;
    }
    Ok(t)
}

/// Vector `x ∈ R^n` standing for its lift `(1, x) ∈ R^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugVector<S> {
    body: Vec<S>,
    unit: bool,
}

impl<S: Scalar> AugVector<S> {
    pub fn new(body: Vec<S>) -> Self {
        Self { body, unit: false }
    }

    pub fn body(&self) -> &[S] {
        &self.body
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn lifted_len(&self) -> usize {
        self.body.len() + 1
    }

    pub fn lifted(&self) -> Vec<S> {
        lift(&self.body)
    }
}

impl<T: Real> AugVector<T> {
    /// Builds a vector flagged as lying on the unit sphere.
    pub fn unit(body: Vec<T>) -> Result<Self> {
        let nrm = norm(&body);
        if (nrm - T::one()).abs() > T::unit_tol() {
            return Err(Error::NotUnit(nrm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { body, unit: true })
    }
}

/// Advances to the next lexicographic permutation; returns false after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> MonomialPoly<f64> {
        // x1^3 + x2^3 + x3^3 + x1 x3 + x2 x3 + x1 + x2 - 2
        let mut g = MonomialPoly::new(3, 3);
        for (e, c) in [
            ([3, 0, 0], 1.0),
            ([0, 3, 0], 1.0),
            ([0, 0, 3], 1.0),
            ([1, 0, 1], 1.0),
            ([0, 1, 1], 1.0),
            ([1, 0, 0], 1.0),
            ([0, 1, 0], 1.0),
            ([0, 0, 0], -2.0),
        ] {
            g.add_term(&e, c).unwrap();
        }
        g
    }

    #[test]
    fn multiplicity_counts_distinct_permutations() {
        assert_eq!(SymTensor::<f64>::multiplicity(&[1, 1, 1, 1]), 1);
        assert_eq!(SymTensor::<f64>::multiplicity(&[0, 0, 1, 1]), 6);
        assert_eq!(SymTensor::<f64>::multiplicity(&[0, 0, 1, 2]), 12);
        assert_eq!(SymTensor::<f64>::multiplicity(&[0, 1, 2, 3]), 24);
        assert_eq!(SymTensor::<f64>::multiplicity(&[0, 1, 3]), 6);
    }

    #[test]
    fn next_permutation_enumerates_multiset() {
        let mut v = vec![0, 0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 12);
    }

    #[test]
    fn lookup_is_symmetric() {
        let mut t = SymTensor::<f64>::new(3, 4);
        t.set(&[3, 0, 1], 0.25).unwrap();
        for idx in [
            [0, 1, 3],
            [0, 3, 1],
            [1, 0, 3],
            [1, 3, 0],
            [3, 0, 1],
            [3, 1, 0],
        ] {
            assert_eq!(t.get(&idx).unwrap(), 0.25);
        }
        assert_eq!(t.nnz(), 1);
        t.set(&[1, 3, 0], 0.0).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn example_one_point_values() {
        let t = homogenize(&example_one()).unwrap();
        let at = |x: Vec<f64>| t.eval_via_tensor(&AugVector::new(x)).unwrap();
        assert_eq!(at(vec![0.0, 0.0, 0.0]), -2.0);
        assert!((at(vec![1.0, 0.0, 0.0]) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn zero_polynomial_gives_empty_tensor() {
        let p = MonomialPoly::<f64>::new(3, 4);
        let t = homogenize(&p).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.frobenius_norm(), 0.0);
        let v = vec![1.0, 0.5, -0.5, 2.0];
        assert_eq!(t.partial_gradient(&[&v, &v, &v]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn degree_overflow_is_rejected() {
        let mut p = MonomialPoly::<f64>::new(2, 2);
        assert!(p.add_term(&[2, 1], 1.0).is_err());
        assert!(p.add_term(&[1], 1.0).is_err());
    }

    #[test]
    fn single_diagonal_entry_contracts_to_product() {
        let mut t = SymTensor::<f64>::new(4, 3);
        t.set(&[1, 1, 1, 1], 2.5).unwrap();
        let x = [1.0, 0.3, -0.2];
        let y = [1.0, -0.7, 0.1];
        let z = [1.0, 0.5, 0.9];
        let w = [1.0, 1.1, 0.4];
        let got = t.multilinear_eval(&[&x, &y, &z, &w]).unwrap();
        assert!((got - 2.5 * 0.3 * -0.7 * 0.5 * 1.1).abs() < 1e-15);
        assert_eq!(t.frobenius_norm(), 2.5);
    }

    #[test]
    fn arity_and_dimension_errors() {
        let t = homogenize(&example_one()).unwrap();
        let v = [1.0, 0.0, 0.0, 0.0];
        assert!(matches!(
            t.multilinear_eval(&[&v, &v]),
            Err(Error::ArityMismatch { .. })
        ));
        let short = [1.0, 0.0];
        assert!(matches!(
            t.multilinear_eval(&[&v, &v, &short]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(t.eval_via_tensor(&AugVector::new(vec![0.0; 2])).is_err());
        assert!(t.partial_gradient(&[&v, &v, &v]).is_err());
    }

    #[test]
    fn text_form_round_trips() {
        let t = homogenize(&example_one()).unwrap();
        let text = t.to_text();
        assert!(text
            .lines()
            .any(|l| l.starts_with("0 0 0 -2.0000000000000000e0")));
        let back = SymTensor::<f64>::from_text(3, 4, &text).unwrap();
        assert_eq!(back, t);
        assert!(SymTensor::<f64>::from_text(3, 4, "0 1 x\n").is_err());
    }

    #[test]
    fn unit_flag_checks_norm() {
        assert!(AugVector::unit(vec![0.6, 0.8]).unwrap().is_unit());
        assert!(AugVector::unit(vec![0.6, 0.9]).is_err());
        assert!(!AugVector::new(vec![0.6, 0.8]).is_unit());
    }
}
