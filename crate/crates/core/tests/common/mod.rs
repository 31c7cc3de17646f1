//! Independent reference computations used by the integration tests. None of
//! them calls into the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues of a symmetric `n × n` row-major matrix by cyclic Jacobi
/// rotations.
pub fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut a = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Largest singular value of a row-major `rows × cols` matrix, as the square
/// root of the top eigenvalue of `MᵀM`.
pub fn jacobi_spectral_norm(m: &[f64], rows: usize, cols: usize) -> f64 {
    let mut g = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            g[i * cols + j] = (0..rows).map(|r| m[r * cols + i] * m[r * cols + j]).sum();
        }
    }
    jacobi_eigenvalues(&g, cols)
        .into_iter()
        .fold(0.0, f64::max)
        .max(0.0)
        .sqrt()
}

/// All `±1` vectors of length `n`.
pub fn sign_vectors(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|j| if (mask >> j) & 1 == 1 { -1.0 } else { 1.0 })
                .collect()
        })
        .collect()
}

/// All `±e_j` of length `n`.
pub fn signed_basis(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .flat_map(|j| {
            [1.0, -1.0].map(|s| {
                let mut v = vec![0.0; n];
                v[j] = s;
                v
            })
        })
        .collect()
}

/// Extreme points of the unit ball of `ℓ_1` (`one = true`) or `ℓ_∞`.
pub fn extreme_points(n: usize, one: bool) -> Vec<Vec<f64>> {
    if one {
        signed_basis(n)
    } else {
        sign_vectors(n)
    }
}

/// `max |xᵀ A y|` over extreme points of both balls: the norm of a bilinear
/// form on `ℓ_1` or `ℓ_∞` domains, since `|xᵀ A y|` is convex in each slot.
pub fn bilinear_extreme_norm(a: &[f64], n: usize, x_one: bool, y_one: bool) -> f64 {
    let xs = extreme_points(n, x_one);
    let ys = extreme_points(n, y_one);
    let mut best = 0.0_f64;
    for x in &xs {
        let ax: Vec<f64> = (0..n).map(|j| (0..n).map(|i| x[i] * a[i * n + j]).sum()).collect();
        for y in &ys {
            best = best.max(ax.iter().zip(y).map(|(u, v)| u * v).sum::<f64>().abs());
        }
    }
    best
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<f64> {
    (0..rows * cols)
        .map(|_| rng.random::<f64>() * 2.0 - 1.0)
        .collect()
}

/// `count` orthonormal vectors in `R^dim` by modified Gram–Schmidt on random
/// vectors.
pub fn orthonormal_family(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    assert!(count <= dim);
    let mut out: Vec<Vec<f64>> = Vec::new();
    while out.len() < count {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
        for u in &out {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

/// Least-squares slope of `(ln x, ln y)`, written out directly.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(x, y)| {
        let (lx, ly) = (x.ln(), y.ln());
        (acc.0 + lx, acc.1 + ly, acc.2 + lx * lx, acc.3 + lx * ly)
    });
    (k * sxy - sx * sy) / (k * sxx - sx * sx)
}
