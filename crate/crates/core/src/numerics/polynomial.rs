use serde::{Deserialize, Serialize};

use super::family::{weak_q_norm_with, VectorFamily};
use super::form::{build_diagonal_form, diagonal_form_norm, MultilinearForm};
use super::norm::{dual_norming, random_unit_vector, restart_rng, AscentOptions, NormEstimate};
use super::norm::NormKind;
use crate::exponent::lp_norm;
use crate::parallel;
use crate::{Error, Exponent, Result};

/// A scalar m-homogeneous polynomial on `ℓ_e^n`.
pub trait HomogeneousPolynomial: Sync {
    fn degree(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    /// `sup_{‖x‖_e ≤ 1} |P(x)|`, exact or estimated from below.
    fn norm_estimate(&self, ambient: Exponent, options: &AscentOptions) -> Result<NormEstimate>;
}

/// `P(x) = Σ_{i ≤ n} x_i^m`, the restriction of the diagonal form to the
/// diagonal: `P(x) = S(x, …, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalPolynomial {
    degree: usize,
    dim: usize,
}

pub fn diagonal_polynomial(m: usize, n: usize) -> Result<DiagonalPolynomial> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter("degree and dimension must be positive".into()));
    }
    Ok(DiagonalPolynomial { degree: m, dim: n })
}

impl DiagonalPolynomial {
    /// The diagonal form `S` with `P(x) = S(x, …, x)`.
    pub fn associated_form(&self) -> Result<MultilinearForm> {
        build_diagonal_form(self.degree, self.dim)
    }
}

impl HomogeneousPolynomial for DiagonalPolynomial {
    fn degree(&self) -> usize {
        self.degree
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v.powi(self.degree as i32)).sum()
    }

    fn norm_estimate(&self, ambient: Exponent, _: &AscentOptions) -> Result<NormEstimate> {
        // |Σ x_i^m| ≤ ‖x‖_m^m, attained at e_1 (m ≥ e) or the flat vector.
        Ok(NormEstimate::analytic(diagonal_form_norm(self.degree, self.dim, ambient)))
    }
}

/// `P(x) = A(x, …, x)` for a real scalar form `A`.
#[derive(Debug, Clone)]
pub struct FormPolynomial {
    form: MultilinearForm,
}

impl FormPolynomial {
    pub fn new(form: MultilinearForm) -> Result<Self> {
        form.partial_contraction(&vec![&vec![0.0; form.dim()][..]; form.order()], 0)?;
        Ok(FormPolynomial { form })
    }

    /// `∇P(x) = Σ_i A(x, …, x, ·_i, x, …, x)`.
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let inputs = vec![x; self.form.order()];
        let mut grad = vec![0.0; self.form.dim()];
        for slot in 0..self.form.order() {
            let c = self.form.partial_contraction(&inputs, slot)?;
            grad.iter_mut().zip(c).for_each(|(g, v)| *g += v);
        }
        Ok(grad)
    }
}

impl HomogeneousPolynomial for FormPolynomial {
    fn degree(&self) -> usize {
        self.form.order()
    }

    fn dim(&self) -> usize {
        self.form.dim()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.form
            .evaluate(&vec![x; self.form.order()])
            .expect("dimension checked by caller")
    }

    /// Fixed-point iteration `x ← argmax_{‖y‖ ≤ 1} ⟨±∇P(x), y⟩` with restarts,
    /// keeping only improving steps. The value is `|P|` at a unit vector, so it
    /// is a lower estimate of `‖P‖`.
    fn norm_estimate(&self, ambient: Exponent, options: &AscentOptions) -> Result<NormEstimate> {
        let n = self.dim();
        let runs = parallel::map_range(options.execution, options.restarts.max(1), |k| {
            let mut rng = restart_rng(options.seed, k);
            let mut x = random_unit_vector(&mut rng, n, ambient);
            let mut value = self.eval(&x).abs();
            let mut converged = false;
            for _ in 0..options.max_iters {
                let sign = if self.eval(&x) < 0.0 { -1.0 } else { 1.0 };
                let grad: Vec<f64> = self.gradient(&x)?.into_iter().map(|g| sign * g).collect();
                let Some((_, next)) = dual_norming(&grad, ambient) else {
                    converged = true;
                    break;
                };
                let next_value = self.eval(&next).abs();
                if next_value <= value * (1.0 + options.tol) {
                    converged = true;
                    break;
                }
                x = next;
                value = next_value;
            }
            Ok::<_, Error>((value, converged))
        });
        let mut best = (0.0, false);
        for run in runs {
            let run: (f64, bool) = run?;
            if run.0 > best.0 {
                best = run;
            }
        }
        Ok(NormEstimate {
            value: best.0,
            kind: NormKind::AscentLowerEstimate,
            restarts_used: options.restarts.max(1),
            converged: best.1,
            resolution: None,
        })
    }
}

/// Parts of the polynomial summing quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolQuotient {
    /// `(Σ_k |P(x_k)|^p)^{1/p}`.
    pub numerator: f64,
    pub weak_norm: NormEstimate,
    pub polynomial_norm: NormEstimate,
    /// `numerator / (weak_norm^m · ‖P‖)`.
    pub value: f64,
}

/// `(Σ |P(x_k)|^p)^{1/p} / (‖(x_k)‖_{w,q}^m ‖P‖)`, with the polynomial norm
/// taken on the family's ambient space.
pub fn pol_quotient(
    poly: &dyn HomogeneousPolynomial,
    family: &VectorFamily,
    p: f64,
    q: f64,
    m: usize,
    options: &AscentOptions,
) -> Result<PolQuotient> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    if m != poly.degree() {
        return Err(Error::Dimension(format!(
            "degree {m} requested for a polynomial of degree {}",
            poly.degree()
        )));
    }
    if family.ambient_dim() != poly.dim() {
        return Err(Error::Dimension(format!(
            "family of dimension {} for a polynomial on dimension {}",
            family.ambient_dim(),
            poly.dim()
        )));
    }
    let weak_norm = weak_q_norm_with(family, q, options)?;
    if weak_norm.value == 0.0 {
        return Err(Error::Degenerate("the family has zero weak norm".into()));
    }
    let polynomial_norm = poly.norm_estimate(family.ambient_exponent(), options)?;
    if polynomial_norm.value == 0.0 {
        return Err(Error::Degenerate("the polynomial vanishes".into()));
    }
    let numerator = lp_norm(family.vectors().iter().map(|x| poly.eval(x).abs()), p);
    let value = numerator / (weak_norm.value.powi(m as i32) * polynomial_norm.value);
    Ok(PolQuotient {
        numerator,
        weak_norm,
        polynomial_norm,
        value,
    })
}
