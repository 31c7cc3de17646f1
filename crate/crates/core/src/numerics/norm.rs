//! Operator norms of scalar multilinear forms on products of `ℓ_p` balls.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::form::{Coefficients, Codomain, MultilinearForm};
use crate::parallel::{self, Execution};
use crate::{Error, Exponent, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    ExactAnalytic,
    /// Value attained at a feasible point, hence a lower estimate.
    AscentLowerEstimate,
    Bruteforce,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: NormKind,
    pub restarts_used: usize,
    pub converged: bool,
    /// Angular grid resolution for inexact brute force; `None` when the
    /// search was exhaustive.
    pub resolution: Option<usize>,
}

impl NormEstimate {
    pub fn analytic(value: f64) -> Self {
        NormEstimate {
            value,
            kind: NormKind::ExactAnalytic,
            restarts_used: 0,
            converged: true,
            resolution: None,
        }
    }

    /// Whether the value is the true norm rather than a lower estimate.
    pub fn is_exact(&self) -> bool {
        match self.kind {
            NormKind::ExactAnalytic => true,
            NormKind::Bruteforce => self.resolution.is_none(),
            NormKind::AscentLowerEstimate => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            restarts: 16,
            tol: 1e-10,
            max_iters: 1000,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

/// Maximizes `⟨c, x⟩` over the unit ball of `ℓ_p`: returns `‖c‖_{p*}` and a
/// maximizer, or `None` when `c = 0`.
///
/// For `p = 1` the maximizer is a signed basis vector at the first
/// coordinate of largest magnitude; for `p = ∞` it is the sign vector.
pub fn dual_norming(c: &[f64], p: Exponent) -> Option<(f64, Vec<f64>)> {
    let sign = |v: f64| if v < 0.0 { -1.0 } else { 1.0 };
    if p.value() == 1.0 {
        let (j, &cj) = c
            .iter()
            .enumerate()
            .fold(None::<(usize, &f64)>, |best, (j, v)| match best {
                Some((_, b)) if b.abs() >= v.abs() => best,
                _ => Some((j, v)),
            })?;
        if cj == 0.0 {
            return None;
        }
        let mut x = vec![0.0; c.len()];
        x[j] = sign(cj);
        return Some((cj.abs(), x));
    }
    if p.is_infinite() {
        let value: f64 = c.iter().map(|v| v.abs()).sum();
        if value == 0.0 {
            return None;
        }
        return Some((value, c.iter().map(|&v| sign(v)).collect()));
    }
    let dual = p.conjugate();
    let norm = dual.norm(c);
    if norm == 0.0 {
        return None;
    }
    let power = dual.value() - 1.0;
    let x = c
        .iter()
        .map(|&v| sign(v) * (v.abs() / norm).powf(power))
        .collect();
    Some((norm, x))
}

/// A random point on the unit sphere of `ℓ_p^n`.
pub(crate) fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize, p: Exponent) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let norm = p.norm(&v);
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Generator for restart `index` of a run seeded by `seed`, independent of
/// which thread executes the restart.
pub(crate) fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// One block-coordinate ascent run.
#[derive(Debug, Clone)]
pub struct AscentRun {
    pub value: f64,
    pub converged: bool,
    pub sweeps: usize,
    /// Objective after every single-slot update.
    pub history: Vec<f64>,
    pub point: Vec<Vec<f64>>,
}

fn check_ascent_form(form: &MultilinearForm) -> Result<()> {
    if form.codomain() != Codomain::Scalar {
        return Err(Error::Inapplicable {
            formula: "operator_norm_ascent",
            reason: "the coordinate operator is c0-valued; its norm is 1".into(),
        });
    }
    if matches!(form.coefficients(), Coefficients::Complex(_)) {
        return Err(Error::Inapplicable {
            formula: "operator_norm_ascent",
            reason: "complex coefficients".into(),
        });
    }
    Ok(())
}

/// Ascent from a given starting point.
pub fn ascent_from(
    form: &MultilinearForm,
    start: Vec<Vec<f64>>,
    tol: f64,
    max_iters: usize,
) -> Result<AscentRun> {
    check_ascent_form(form)?;
    let m = form.order();
    if start.len() != m {
        return Err(Error::Dimension(format!("{} start vectors for order {m}", start.len())));
    }
    let mut point = start;
    let mut value = {
        let refs: Vec<&[f64]> = point.iter().map(Vec::as_slice).collect();
        form.evaluate(&refs)?.abs()
    };
    let mut history = vec![value];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_iters {
        sweeps += 1;
        let before = value;
        for slot in 0..m {
            let c = {
                let refs: Vec<&[f64]> = point.iter().map(Vec::as_slice).collect();
                form.partial_contraction(&refs, slot)?
            };
            match dual_norming(&c, form.exponents()[slot]) {
                Some((v, x)) => {
                    assert!(
                        v >= value - 1e-9 * value.max(1.0),
                        "ascent objective decreased from {value} to {v}"
                    );
                    value = v;
                    point[slot] = x;
                }
                None => value = 0.0,
            }
            history.push(value);
        }
        if value == 0.0 || (value - before) <= tol * before {
            converged = true;
            break;
        }
    }
    Ok(AscentRun {
        value,
        converged,
        sweeps,
        history,
        point,
    })
}

/// Block-coordinate ascent with random restarts.
///
/// Every slot but one is fixed; the remaining linear functional is maximized
/// exactly by [`dual_norming`]. The objective never decreases, and the best
/// value over all restarts is a lower estimate of `‖A‖`.
pub fn operator_norm_ascent(
    form: &MultilinearForm,
    options: &AscentOptions,
) -> Result<NormEstimate> {
    check_ascent_form(form)?;
    if options.restarts == 0 {
        return Err(Error::Parameter("at least one restart is required".into()));
    }
    let n = form.dim();
    let runs = parallel::map_range(options.execution, options.restarts, |k| {
        let mut rng = restart_rng(options.seed, k);
        let start: Vec<Vec<f64>> = form
            .exponents()
            .iter()
            .map(|&p| random_unit_vector(&mut rng, n, p))
            .collect();
        ascent_from(form, start, options.tol, options.max_iters)
    });
    let mut best: Option<AscentRun> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts > 0");
    Ok(NormEstimate {
        value: best.value,
        kind: NormKind::AscentLowerEstimate,
        restarts_used: options.restarts,
        converged: best.converged,
        resolution: None,
    })
}

/// Largest singular value of a row-major `rows × cols` matrix.
pub fn spectral_norm(data: &[f64], rows: usize, cols: usize) -> f64 {
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    DMatrix::from_row_slice(rows, cols, data)
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Default limit on the number of enumerated points in brute force.
pub const BRUTEFORCE_BUDGET: u128 = 1 << 22;

/// Candidate points of one slot's unit ball for enumeration.
fn slot_candidates(n: usize, p: Exponent, resolution: usize) -> (Vec<Vec<f64>>, bool) {
    if p.value() == 1.0 {
        // ±e_j; the sign is absorbed by |A(x)|.
        let points = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        return (points, true);
    }
    if p.is_infinite() {
        // Sign vectors with a fixed first sign.
        let points = (0..1usize << (n - 1))
            .map(|mask| {
                (0..n)
                    .map(|i| if i > 0 && (mask >> (i - 1)) & 1 == 1 { -1.0 } else { 1.0 })
                    .collect()
            })
            .collect();
        return (points, true);
    }
    (sphere_grid(n, p, resolution), false)
}

fn slot_candidate_count(n: usize, p: Exponent, resolution: usize) -> u128 {
    if p.value() == 1.0 {
        n as u128
    } else if p.is_infinite() {
        1u128 << (n - 1)
    } else if n == 1 {
        1
    } else {
        2 * resolution as u128 * (resolution as u128 + 1).pow(n.saturating_sub(2) as u32)
    }
}

/// Hyperspherical angle grid on the Euclidean sphere, pushed to the `ℓ_p`
/// sphere by normalization.
fn sphere_grid(n: usize, p: Exponent, resolution: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![1.0]];
    }
    let polar: Vec<f64> = (0..=resolution)
        .map(|i| std::f64::consts::PI * i as f64 / resolution as f64)
        .collect();
    let azimuth: Vec<f64> = (0..2 * resolution)
        .map(|i| std::f64::consts::PI * i as f64 / resolution as f64)
        .collect();
    let mut points = Vec::new();
    let mut angles = vec![0usize; n - 1];
    loop {
        let mut x = vec![0.0; n];
        let mut sin_prod = 1.0;
        for k in 0..n - 1 {
            let theta = if k == n - 2 {
                azimuth[angles[k]]
            } else {
                polar[angles[k]]
            };
            x[k] = sin_prod * theta.cos();
            sin_prod *= theta.sin();
        }
        x[n - 1] = sin_prod;
        let norm = p.norm(&x);
        if norm > 1e-300 {
            points.push(x.into_iter().map(|v| v / norm).collect());
        }
        // Odometer over the angle indices.
        let mut k = 0;
        loop {
            if k == n - 1 {
                return points;
            }
            let limit = if k == n - 2 { azimuth.len() } else { polar.len() };
            angles[k] += 1;
            if angles[k] < limit {
                break;
            }
            angles[k] = 0;
            k += 1;
        }
    }
}

/// Small-instance oracle for `‖A‖`.
///
/// * order 2 with both exponents 2: largest singular value (exact);
/// * otherwise the first `m − 1` slots are enumerated and the last slot is
///   solved in closed form by its dual norm. Enumeration is exhaustive
///   over extreme points for `ℓ_1` and `ℓ_∞` slots (exact) and an angular
///   grid of the given resolution for other exponents (a lower estimate).
pub fn operator_norm_bruteforce(
    form: &MultilinearForm,
    resolution: usize,
) -> Result<NormEstimate> {
    operator_norm_bruteforce_with(form, resolution, BRUTEFORCE_BUDGET, Execution::default())
}

pub fn operator_norm_bruteforce_with(
    form: &MultilinearForm,
    resolution: usize,
    budget: u128,
    execution: Execution,
) -> Result<NormEstimate> {
    check_ascent_form(form)?;
    let m = form.order();
    let n = form.dim();
    let exps = form.exponents();
    if m == 2 && exps[0] == Exponent::TWO && exps[1] == Exponent::TWO {
        let data = form.dense_real_coefficients()?;
        return Ok(NormEstimate {
            value: spectral_norm(&data, n, n),
            kind: NormKind::Bruteforce,
            restarts_used: 0,
            converged: true,
            resolution: None,
        });
    }
    let enumerated = &exps[..m - 1];
    if resolution < 2 && enumerated.iter().any(|p| p.value() != 1.0 && !p.is_infinite()) {
        return Err(Error::Parameter("grid resolution must be at least 2".into()));
    }
    let total = enumerated
        .iter()
        .map(|&p| slot_candidate_count(n, p, resolution))
        .try_fold(1u128, |acc, c| acc.checked_mul(c))
        .unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::Size {
            what: "brute-force enumeration".into(),
            requested: total,
            budget,
        });
    }
    let mut exhaustive = true;
    let candidates: Vec<Vec<Vec<f64>>> = enumerated
        .iter()
        .map(|&p| {
            let (pts, exact) = slot_candidates(n, p, resolution);
            exhaustive &= exact;
            pts
        })
        .collect();
    let last = exps[m - 1];
    let counts: Vec<usize> = candidates.iter().map(Vec::len).collect();
    let total = counts.iter().product::<usize>();
    let zero = vec![0.0; n];
    let per_point = |flat: usize| -> Result<f64> {
        let mut rest = flat;
        let mut inputs: Vec<&[f64]> = Vec::with_capacity(m);
        for pts in candidates.iter().rev() {
            inputs.push(&pts[rest % pts.len()]);
            rest /= pts.len();
        }
        inputs.reverse();
        inputs.push(&zero);
        let c = form.partial_contraction(&inputs, m - 1)?;
        Ok(last.conjugate().norm(&c))
    };
    let values = parallel::map_range(execution, total, per_point);
    let mut value = 0.0_f64;
    for v in values {
        value = value.max(v?);
    }
    Ok(NormEstimate {
        value,
        kind: NormKind::Bruteforce,
        restarts_used: 0,
        converged: true,
        resolution: (!exhaustive).then_some(resolution),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::form::{build_diagonal_form, build_ksz_form};

    #[test]
    fn dual_norming_cases() {
        let c = [3.0, -4.0];
        let (v, x) = dual_norming(&c, Exponent::TWO).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
        assert!((x[0] - 0.6).abs() < 1e-15 && (x[1] + 0.8).abs() < 1e-15);
        let (v, x) = dual_norming(&c, Exponent::ONE).unwrap();
        assert_eq!((v, x), (4.0, vec![0.0, -1.0]));
        let (v, x) = dual_norming(&c, Exponent::INFINITY).unwrap();
        assert_eq!((v, x), (7.0, vec![1.0, -1.0]));
        // Ties pick the lowest index.
        let (_, x) = dual_norming(&[2.0, -2.0], Exponent::ONE).unwrap();
        assert_eq!(x, vec![1.0, 0.0]);
        assert!(dual_norming(&[0.0, 0.0], Exponent::TWO).is_none());
        // 1 < p < inf: <c, x> = ||c||_{p*} and ||x||_p = 1.
        let p = Exponent::new(3.0).unwrap();
        let c = [1.0, -2.0, 0.5];
        let (v, x) = dual_norming(&c, p).unwrap();
        let dot: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((dot - v).abs() < 1e-12);
        assert!((p.norm(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_bilinear() {
        let a = [1.0, 2.0, -1.0];
        let b = [0.5, 0.0, 3.0];
        let coeffs: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        let form = MultilinearForm::dense(2, 3, coeffs).unwrap();
        let est = operator_norm_ascent(&form, &AscentOptions::default()).unwrap();
        let expected = Exponent::TWO.norm(&a) * Exponent::TWO.norm(&b);
        assert!((est.value - expected).abs() < 1e-9);
        assert_eq!(est.kind, NormKind::AscentLowerEstimate);
        assert!(est.converged);
    }

    #[test]
    fn identity_bilinear() {
        let s = build_diagonal_form(2, 2).unwrap();
        let est = operator_norm_ascent(&s, &AscentOptions::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        let l1 = s.clone().with_exponent(Exponent::ONE);
        let est = operator_norm_ascent(&l1, &AscentOptions::default()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        let brute = operator_norm_bruteforce(&l1, 0).unwrap();
        assert_eq!(brute.value, 1.0);
        assert!(brute.is_exact());
        let id3 = build_diagonal_form(2, 3).unwrap();
        assert!((operator_norm_bruteforce(&id3, 0).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ksz_sign_enumeration() {
        let a = build_ksz_form(2, 2, 3).unwrap().with_exponent(Exponent::INFINITY);
        let coeffs = a.dense_real_coefficients().unwrap();
        // All 16 sign pairs.
        let signs = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]];
        let mut best = 0.0_f64;
        for x in &signs {
            for y in &signs {
                let v: f64 = (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| coeffs[2 * i + j] * x[i] * y[j])
                    .sum();
                best = best.max(v.abs());
            }
        }
        assert_eq!(operator_norm_bruteforce(&a, 0).unwrap().value, best);
    }

    #[test]
    fn ascent_history_is_monotone() {
        let a = build_ksz_form(3, 4, 11).unwrap().with_exponent(Exponent::new(3.0).unwrap());
        let mut rng = restart_rng(5, 0);
        let start: Vec<Vec<f64>> = (0..3)
            .map(|_| random_unit_vector(&mut rng, 4, Exponent::new(3.0).unwrap()))
            .collect();
        let run = ascent_from(&a, start, 1e-12, 500).unwrap();
        for w in run.history.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn grid_bruteforce_is_a_lower_estimate() {
        let a = build_ksz_form(2, 2, 4).unwrap().with_exponent(Exponent::new(3.0).unwrap());
        let grid = operator_norm_bruteforce(&a, 64).unwrap();
        assert_eq!(grid.resolution, Some(64));
        let ascent = operator_norm_ascent(&a, &AscentOptions::default()).unwrap();
        assert!(grid.value <= ascent.value + 1e-9);
        assert!(grid.value >= ascent.value * 0.999);
    }

    #[test]
    fn budget_and_codomain_errors() {
        let big = build_ksz_form(3, 14, 0).unwrap().with_exponent(Exponent::INFINITY);
        assert!(matches!(operator_norm_bruteforce(&big, 0), Err(Error::Size { .. })));
        let t = crate::numerics::form::build_coordinate_operator(2, 3).unwrap();
        assert!(matches!(
            operator_norm_ascent(&t, &AscentOptions::default()),
            Err(Error::Inapplicable { .. })
        ));
    }

    #[test]
    fn zero_form() {
        let z = MultilinearForm::dense(2, 3, vec![0.0; 9]).unwrap();
        let est = operator_norm_ascent(&z, &AscentOptions::default()).unwrap();
        assert_eq!(est.value, 0.0);
        assert!(est.converged);
    }
}
