//! Rademacher averages entering the cotype inequality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::VectorFamily;
use crate::exponent::lp_norm;
use crate::parallel::{self, Execution};
use crate::{Error, Exponent, Result};

/// Largest family for exact enumeration over all `2^n` sign patterns.
pub const MAX_EXACT_COUNT: usize = 20;

const CHUNK: usize = 1 << 10;

fn numerator(family: &VectorFamily, q: Exponent) -> f64 {
    let ambient = family.ambient_exponent();
    let norms = family.vectors().iter().map(|v| ambient.norm(v));
    lp_norm(norms, q.value())
}

/// `(Σ ‖x_k‖^q)^{1/q}` divided by `(E_ε ‖Σ ε_k x_k‖²)^{1/2}`, the expectation
/// taken exactly over all sign patterns, norms in the ambient `ℓ_e`.
///
/// `ε` and `−ε` give the same norm, so only patterns with `ε_1 = +1` are
/// visited, in Gray-code order within each chunk.
pub fn rademacher_cotype_quotient(family: &VectorFamily, q: Exponent) -> Result<f64> {
    rademacher_cotype_quotient_with(family, q, Execution::default())
}

pub fn rademacher_cotype_quotient_with(
    family: &VectorFamily,
    q: Exponent,
    execution: Execution,
) -> Result<f64> {
    let n = family.count();
    if n > MAX_EXACT_COUNT {
        return Err(Error::Size {
            what: "exact Rademacher average".into(),
            requested: 1u128 << n,
            budget: 1u128 << MAX_EXACT_COUNT,
        });
    }
    let d = family.ambient_dim();
    let ambient = family.ambient_exponent();
    let patterns = 1usize << (n - 1);
    let chunks = patterns.div_ceil(CHUNK);
    let partial = parallel::map_range(execution, chunks, |c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(patterns);
        let gray = |i: usize| i ^ (i >> 1);
        // Bit b of the Gray code flips the sign of vector b + 1.
        let mut code = gray(start);
        let mut sum: Vec<f64> = (0..d)
            .map(|j| {
                family
                    .vectors()
                    .iter()
                    .enumerate()
                    .map(|(k, v)| if k > 0 && (code >> (k - 1)) & 1 == 1 { -v[j] } else { v[j] })
                    .sum()
            })
            .collect();
        let mut acc = ambient.norm(&sum).powi(2);
        for i in start + 1..end {
            let next = gray(i);
            let bit = (code ^ next).trailing_zeros() as usize;
            let k = bit + 1;
            let sign = if (next >> bit) & 1 == 1 { -2.0 } else { 2.0 };
            for (s, x) in sum.iter_mut().zip(family.vector(k)) {
                *s += sign * x;
            }
            code = next;
            acc += ambient.norm(&sum).powi(2);
        }
        acc
    });
    let mean_square = partial.iter().sum::<f64>() / patterns as f64;
    if mean_square == 0.0 {
        return Err(Error::Degenerate("all vectors are zero".into()));
    }
    Ok(numerator(family, q) / mean_square.sqrt())
}

/// Monte-Carlo version of [`rademacher_cotype_quotient`] with `samples`
/// independent sign patterns from a generator seeded by `seed`.
pub fn rademacher_cotype_quotient_mc(
    family: &VectorFamily,
    q: Exponent,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Parameter("at least one sample is required".into()));
    }
    let d = family.ambient_dim();
    let ambient = family.ambient_exponent();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![0.0; d];
    let mut acc = 0.0;
    for _ in 0..samples {
        sum.iter_mut().for_each(|s| *s = 0.0);
        for v in family.vectors() {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            for (s, x) in sum.iter_mut().zip(v) {
                *s += sign * x;
            }
        }
        acc += ambient.norm(&sum).powi(2);
    }
    let mean_square = acc / samples as f64;
    if mean_square == 0.0 {
        return Err(Error::Degenerate("all vectors are zero".into()));
    }
    Ok(numerator(family, q) / mean_square.sqrt())
}
