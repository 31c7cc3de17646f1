//! Contractions of dense row-major order-m tensors with equal side lengths.
//!
//! The entry `(i_0, …, i_{m-1})` lives at offset `Σ_k i_k n^{m-1-k}`.

use std::ops::{Add, Mul};

use num_complex::Complex64;

pub(crate) trait Scalar: Copy + Add<Output = Self> + Mul<Output = Self> + Send + Sync {
    const ZERO: Self;
}

impl Scalar for f64 {
    const ZERO: f64 = 0.0;
}

impl Scalar for Complex64 {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
}

/// Contracts the trailing axis of `data` (viewed as `[len/n, n]`) with `x`.
fn contract_last<T: Scalar>(data: &[T], x: &[T]) -> Vec<T> {
    let n = x.len();
    data.chunks_exact(n)
        .map(|row| row.iter().zip(x).fold(T::ZERO, |acc, (&a, &b)| acc + a * b))
        .collect()
}

/// Contracts the leading axis of `data` (viewed as `[n, len/n]`) with `x`.
fn contract_first<T: Scalar>(data: &[T], x: &[T]) -> Vec<T> {
    let n = x.len();
    let stride = data.len() / n;
    let mut out = vec![T::ZERO; stride];
    for (a, &xa) in x.iter().enumerate() {
        let block = &data[a * stride..(a + 1) * stride];
        for (o, &d) in out.iter_mut().zip(block) {
            *o = *o + xa * d;
        }
    }
    out
}

/// Full contraction `Σ a_{i_0…i_{m-1}} x^{(0)}_{i_0} ⋯ x^{(m-1)}_{i_{m-1}}`.
pub(crate) fn contract_all<T: Scalar>(data: &[T], inputs: &[&[T]]) -> T {
    let mut current = data.to_vec();
    for x in inputs.iter().rev() {
        current = contract_last(&current, x);
    }
    debug_assert_eq!(current.len(), 1);
    current[0]
}

/// Contracts every slot except `keep`, leaving a vector of length n.
pub(crate) fn contract_except<T: Scalar>(data: &[T], inputs: &[&[T]], keep: usize) -> Vec<T> {
    let m = inputs.len();
    let mut current: Vec<T> = data.to_vec();
    for slot in (keep + 1..m).rev() {
        current = contract_last(&current, inputs[slot]);
    }
    for slot in 0..keep {
        current = contract_first(&current, inputs[slot]);
    }
    current
}

/// Multiplies mode `mode` of a tensor with shape `dims` by `matrix`
/// (`rows × dims[mode]`, row-major); the mode's length becomes `rows`.
pub(crate) fn mode_product(
    data: &[f64],
    dims: &[usize],
    mode: usize,
    matrix: &[f64],
    rows: usize,
) -> (Vec<f64>, Vec<usize>) {
    let len_mode = dims[mode];
    let outer: usize = dims[..mode].iter().product();
    let inner: usize = dims[mode + 1..].iter().product();
    let mut out = vec![0.0; outer * rows * inner];
    for o in 0..outer {
        let src = &data[o * len_mode * inner..(o + 1) * len_mode * inner];
        let dst = &mut out[o * rows * inner..(o + 1) * rows * inner];
        for r in 0..rows {
            let row = &matrix[r * len_mode..(r + 1) * len_mode];
            let target = &mut dst[r * inner..(r + 1) * inner];
            for (j, &w) in row.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let block = &src[j * inner..(j + 1) * inner];
                for (t, &b) in target.iter_mut().zip(block) {
                    *t += w * b;
                }
            }
        }
    }
    let mut new_dims = dims.to_vec();
    new_dims[mode] = rows;
    (out, new_dims)
}

/// Decodes a flat row-major offset into a multi-index.
pub(crate) fn unravel(mut offset: usize, n: usize, m: usize, out: &mut [usize]) {
    for k in (0..m).rev() {
        out[k] = offset % n;
        offset /= n;
    }
}
