use serde::{Deserialize, Serialize};

use super::{Construction, ExperimentConfig, NormMethod};
use crate::numerics::{
    build_coordinate_operator_with_budget, build_diagonal_form_with_budget,
    build_ksz_form_with_budget, diagonal_form_norm, mixed_power_sum, operator_norm_ascent,
    operator_norm_bruteforce_with, weak_q_norm, BRUTEFORCE_BUDGET, AscentOptions, Codomain, MemoryBudget,
    MultilinearForm, NormEstimate, NormKind, VectorFamily,
};
use crate::parallel;
use crate::{Error, Exponent, Result};

/// Bases are exact in floating point, so their weak norms must be 1 to
/// rounding; anything else is an indexing bug.
const BASIS_WEAK_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub n: usize,
    pub mixed_sum: f64,
    pub norm_estimate: f64,
    pub norm_kind: NormKind,
    pub norm_converged: bool,
    pub weak_norm_product: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSeries {
    pub scenario: String,
    /// Seed of the random construction; `None` for deterministic ones.
    pub seed: Option<u64>,
    pub points: Vec<RatioPoint>,
}

/// Runs the sweep: one series per seed (a single unseeded series for
/// deterministic constructions), points in grid order.
pub fn run_ratio_experiment(config: &ExperimentConfig) -> Result<Vec<RatioSeries>> {
    run_ratio_experiment_with_budget(config, MemoryBudget::from_env())
}

pub fn run_ratio_experiment_with_budget(
    config: &ExperimentConfig,
    budget: MemoryBudget,
) -> Result<Vec<RatioSeries>> {
    config.validate()?;
    let construction = config.construction()?;
    let domain = config.domain_exponent()?;
    let seeds: Vec<Option<u64>> = if construction == Construction::Ksz {
        config.seeds.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    // Fail on the largest size before doing any work.
    let largest = *config.n_grid.last().expect("validated grid");
    budget.check(config.m, largest)?;

    let items: Vec<(Option<u64>, usize)> = seeds
        .iter()
        .flat_map(|&s| config.n_grid.iter().map(move |&n| (s, n)))
        .collect();
    let points = parallel::map(config.execution, items.clone(), |(seed, n)| {
        ratio_point(config, construction, domain, seed, n, budget)
    });

    let mut out: Vec<RatioSeries> = seeds
        .iter()
        .map(|&seed| RatioSeries {
            scenario: config.name.clone(),
            seed,
            points: Vec::with_capacity(config.n_grid.len()),
        })
        .collect();
    for ((seed, _), point) in items.into_iter().zip(points) {
        let k = seeds.iter().position(|&s| s == seed).expect("seed from the list");
        out[k].points.push(point?);
    }
    Ok(out)
}

fn point_ascent_options(config: &ExperimentConfig, seed: Option<u64>, n: usize) -> AscentOptions {
    let mut opts = config.ascent;
    opts.seed = opts
        .seed
        .wrapping_add(seed.unwrap_or(0).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(n as u64);
    opts.execution = config.execution;
    opts
}

fn ratio_point(
    config: &ExperimentConfig,
    construction: Construction,
    domain: Exponent,
    seed: Option<u64>,
    n: usize,
    budget: MemoryBudget,
) -> Result<RatioPoint> {
    let m = config.m;
    let form = match construction {
        Construction::Ksz => build_ksz_form_with_budget(m, n, seed.unwrap_or(0), budget)?,
        Construction::Diagonal => build_diagonal_form_with_budget(m, n, budget)?,
        Construction::Coordinate => build_coordinate_operator_with_budget(m, n, budget)?,
    }
    .with_exponent(domain);

    let basis = VectorFamily::unit_basis(n, domain)?;
    let weak = weak_q_norm(&basis, config.q)?.value;
    if config.is_extremal() && (weak - 1.0).abs() > BASIS_WEAK_NORM_TOL {
        return Err(Error::Data(format!(
            "weak l_{} norm of the unit basis of l_{domain} at n = {n} is {weak}, not 1",
            config.q
        )));
    }
    let families = vec![basis; m];
    let weak_norm_product = weak.powi(m as i32);
    let mixed_sum = mixed_power_sum(&form, &families, config.p)?;
    let norm = scenario_norm(config, construction, &form, point_ascent_options(config, seed, n))?;
    let ratio = mixed_sum / (norm.value * weak_norm_product);
    Ok(RatioPoint {
        n,
        mixed_sum,
        norm_estimate: norm.value,
        norm_kind: norm.kind,
        norm_converged: norm.converged,
        weak_norm_product,
        ratio,
    })
}

/// The norm of one scalar coordinate functional `x ↦ x^{(1)}_1 ⋯ x^{(m)}_1`
/// of the coordinate operator; every coordinate functional is a permutation
/// of this one, so its norm is the norm of the operator.
fn coordinate_functional(form: &MultilinearForm) -> Result<MultilinearForm> {
    let (m, n) = (form.order(), form.dim());
    let mut coefficients = vec![0.0; n.pow(m as u32)];
    coefficients[0] = 1.0;
    MultilinearForm::dense(m, n, coefficients)?.with_exponents(form.exponents().to_vec())
}

fn scenario_norm(
    config: &ExperimentConfig,
    construction: Construction,
    form: &MultilinearForm,
    opts: AscentOptions,
) -> Result<NormEstimate> {
    let scalar;
    let target = if form.codomain() == Codomain::C0Coordinates {
        if config.norm_method == NormMethod::Analytic {
            return Ok(NormEstimate::analytic(1.0));
        }
        scalar = coordinate_functional(form)?;
        &scalar
    } else {
        form
    };
    match config.norm_method {
        NormMethod::Analytic => match construction {
            Construction::Diagonal => Ok(NormEstimate::analytic(diagonal_form_norm(
                form.order(),
                form.dim(),
                form.exponents()[0],
            ))),
            _ => Err(Error::Config(
                "no analytic norm for random forms; use ascent or bruteforce".into(),
            )),
        },
        NormMethod::Ascent => operator_norm_ascent(target, &opts),
        NormMethod::Bruteforce => operator_norm_bruteforce_with(
            target,
            config.bruteforce_resolution,
            BRUTEFORCE_BUDGET,
            config.execution,
        ),
    }
}

/// `(Σ over basis tuples of |A(e_{k_1}, …, e_{k_m})|^p)^{1/p} / ‖A‖`, the
/// quotient every lower-bound argument starts from.
pub fn unit_vector_probe(form: &MultilinearForm, p: f64, norm: f64) -> Result<f64> {
    if form.codomain() != Codomain::Scalar {
        return Err(Error::Inapplicable {
            formula: "unit_vector_probe",
            reason: "needs a scalar-valued form".into(),
        });
    }
    if !(norm > 0.0) {
        return Err(Error::Degenerate(format!("norm estimate {norm} is not positive")));
    }
    let families: Vec<VectorFamily> = form
        .exponents()
        .iter()
        .map(|&e| VectorFamily::unit_basis(form.dim(), e))
        .collect::<Result<_>>()?;
    Ok(mixed_power_sum(form, &families, p)? / norm)
}
