use serde::{Deserialize, Serialize};

use super::norm::{dual_norming, random_unit_vector, restart_rng, spectral_norm, AscentOptions};
use super::norm::{NormEstimate, NormKind};
use crate::parallel;
use crate::{Error, Exponent, Result};

/// `n` vectors in `ℓ_e^d`, where `e` is the ambient exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFamily {
    vectors: Vec<Vec<f64>>,
    ambient: Exponent,
}

impl VectorFamily {
    pub fn new(vectors: Vec<Vec<f64>>, ambient: Exponent) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if vectors.is_empty() || d == 0 {
            return Err(Error::Dimension("a family needs at least one nonempty vector".into()));
        }
        if vectors.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension("family vectors have different lengths".into()));
        }
        Ok(VectorFamily { vectors, ambient })
    }

    /// `e_1, …, e_n` in `ℓ_e^n`.
    pub fn unit_basis(n: usize, ambient: Exponent) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|k| (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
                .collect(),
            ambient,
        )
    }

    /// Builds a family from a row-major `count × dim` matrix.
    pub fn from_rows(data: &[f64], count: usize, dim: usize, ambient: Exponent) -> Result<Self> {
        if data.len() != count * dim {
            return Err(Error::Dimension(format!(
                "{} entries for a {count} x {dim} family",
                data.len()
            )));
        }
        Self::new(data.chunks(dim.max(1)).map(<[f64]>::to_vec).collect(), ambient)
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn ambient_exponent(&self) -> Exponent {
        self.ambient
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    pub fn scaled(&self, c: f64) -> Self {
        VectorFamily {
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|x| x * c).collect())
                .collect(),
            ambient: self.ambient,
        }
    }

    /// Row-major `count × dim` matrix whose rows are the vectors.
    pub fn matrix(&self) -> Vec<f64> {
        self.vectors.iter().flatten().copied().collect()
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.vectors.iter().map(|v| v[j]).collect()
    }
}

/// Brute force over sign vectors is used for `ℓ_∞` dual balls up to this
/// ambient dimension.
const SIGN_ENUMERATION_MAX_DIM: usize = 16;

/// The weak `ℓ_q` norm `sup_{φ ∈ B_{E*}} (Σ_k |φ(x_k)|^q)^{1/q}` for a family
/// in `E = ℓ_e^d`.
///
/// The dual ball is the unit ball of `ℓ_{e*}^d`, so the value is the norm of
/// the matrix `X` (rows = vectors) from `ℓ_{e*}^d` to `ℓ_q^n`; for
/// `e = q*` that is `ℓ_q → ℓ_q`. Exact when `e* = 1` (largest column
/// `ℓ_q` norm), when `e* = q = 2` (largest singular value) and when `e* = ∞`
/// in small dimension (sign enumeration); otherwise a nonlinear power
/// ascent with restarts gives a lower estimate.
pub fn weak_q_norm(family: &VectorFamily, q: f64) -> Result<NormEstimate> {
    weak_q_norm_with(family, q, &AscentOptions::default())
}

pub fn weak_q_norm_with(
    family: &VectorFamily,
    q: f64,
    options: &AscentOptions,
) -> Result<NormEstimate> {
    if !(q >= 1.0) || q.is_infinite() {
        return Err(Error::Parameter(format!("weak exponent q = {q} not in [1, inf)")));
    }
    let q_exp = Exponent::new(q)?;
    let dual = family.ambient.conjugate();
    let d = family.ambient_dim();
    let n = family.count();
    let exact = |value: f64| NormEstimate {
        value,
        kind: NormKind::ExactAnalytic,
        restarts_used: 0,
        converged: true,
        resolution: None,
    };
    if dual.value() == 1.0 {
        let best = (0..d)
            .map(|j| q_exp.norm(&family.column(j)))
            .fold(0.0, f64::max);
        return Ok(exact(best));
    }
    if dual == Exponent::TWO && q == 2.0 {
        return Ok(exact(spectral_norm(&family.matrix(), n, d)));
    }
    if dual.is_infinite() && d <= SIGN_ENUMERATION_MAX_DIM {
        let best = parallel::map_range(options.execution, 1usize << (d - 1), |mask| {
            let image: Vec<f64> = family
                .vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .map(|(j, x)| if j > 0 && (mask >> (j - 1)) & 1 == 1 { -x } else { *x })
                        .sum()
                })
                .collect();
            q_exp.norm(&image)
        })
        .into_iter()
        .fold(0.0, f64::max);
        return Ok(exact(best));
    }
    Ok(power_ascent(family, q_exp, dual, options))
}

/// Power ascent for `‖X‖_{dual → q}`: `x ← argmax ⟨Xᵀ z, ·⟩` with `z` norming
/// `X x` in `ℓ_{q*}`. The objective `‖X x‖_q` never decreases.
fn power_ascent(
    family: &VectorFamily,
    q: Exponent,
    dual: Exponent,
    options: &AscentOptions,
) -> NormEstimate {
    let d = family.ambient_dim();
    let apply = |x: &[f64]| -> Vec<f64> {
        family
            .vectors
            .iter()
            .map(|v| v.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let apply_t = |z: &[f64]| -> Vec<f64> {
        (0..d)
            .map(|j| family.vectors.iter().zip(z).map(|(v, zk)| v[j] * zk).sum())
            .collect()
    };
    let runs = parallel::map_range(options.execution, options.restarts.max(1), |k| {
        let mut rng = restart_rng(options.seed, k);
        let mut x = random_unit_vector(&mut rng, d, dual);
        let mut value = q.norm(&apply(&x));
        let mut converged = false;
        for _ in 0..options.max_iters {
            let y = apply(&x);
            let Some((_, z)) = dual_norming(&y, q.conjugate()) else {
                converged = true;
                break;
            };
            let c = apply_t(&z);
            let Some((_, next)) = dual_norming(&c, dual) else {
                converged = true;
                break;
            };
            let next_value = q.norm(&apply(&next));
            let gain = next_value - value;
            if next_value >= value {
                x = next;
                value = next_value;
            }
            if gain <= options.tol * value {
                converged = true;
                break;
            }
        }
        (value, converged)
    });
    let (value, converged) = runs
        .into_iter()
        .fold((0.0, false), |best, run| if run.0 > best.0 { run } else { best });
    NormEstimate {
        value,
        kind: NormKind::AscentLowerEstimate,
        restarts_used: options.restarts.max(1),
        converged,
        resolution: None,
    }
}
