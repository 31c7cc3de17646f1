//! Extremal constructions and the norms entering the summability quotient.

pub mod codec;
pub mod cotype;
pub mod family;
pub mod form;
pub mod mixed;
pub mod norm;
pub mod polynomial;
mod tensor;

pub use codec::{decode_form, encode_form, read_form, write_form, FormHeader};
pub use cotype::{rademacher_cotype_quotient, rademacher_cotype_quotient_mc};
pub use family::{weak_q_norm, weak_q_norm_with, VectorFamily};
pub use form::{
    build_coordinate_operator, build_coordinate_operator_with_budget, build_diagonal_form,
    build_diagonal_form_with_budget, build_ksz_form, build_ksz_form_with_budget,
    diagonal_form_norm, Codomain, Coefficients, MemoryBudget, MultilinearForm,
};
pub use mixed::{coordinate_operator_outputs, mixed_power_sum, tuple_output_norms};
pub use norm::{
    dual_norming, operator_norm_ascent, operator_norm_bruteforce, operator_norm_bruteforce_with,
    spectral_norm, AscentOptions, NormEstimate, NormKind, BRUTEFORCE_BUDGET,
};
pub use polynomial::{
    diagonal_polynomial, pol_quotient, DiagonalPolynomial, FormPolynomial, HomogeneousPolynomial,
    PolQuotient,
};

use crate::exponent::Exponent;
use crate::Result;

/// `α(p) = 1/2 − 1/p` for `p ≥ 2`, else 0; the exponent excess in the
/// random-sign norm estimate `n^{1/2 + m α(p)}`.
pub fn ksz_alpha(p: f64) -> Result<f64> {
    let p = Exponent::new(p)?;
    Ok(if p.value() >= 2.0 {
        0.5 - p.reciprocal()
    } else {
        0.0
    })
}
