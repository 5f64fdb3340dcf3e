//! Dense vector helpers on slices.

use crate::scalar::{Real, Scalar};

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

/// Returns `a / ‖a‖`, or `None` when the norm is not positive.
pub fn normalized<T: Real>(a: &[T]) -> Option<Vec<T>> {
    let nrm = norm(a);
    if !(nrm > T::zero()) || !nrm.is_finite() {
        return None;
    }
    Some(a.iter().map(|&v| v / nrm).collect())
}

/// `y += a * x`
pub fn axpy<T: Real>(a: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Prepends the homogenizing unit component.
pub fn lift<S: Scalar>(body: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(body.len() + 1);
    out.push(S::one());
    out.extend_from_slice(body);
    out
}
