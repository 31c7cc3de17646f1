use super::family::VectorFamily;
use super::form::{Coefficients, MultilinearForm};
use super::tensor::{mode_product, unravel};
use crate::exponent::lp_norm;
use crate::{Error, Result};

fn check_families(form: &MultilinearForm, families: &[VectorFamily]) -> Result<usize> {
    if families.len() != form.order() {
        return Err(Error::Dimension(format!(
            "{} families for an operator of order {}",
            families.len(),
            form.order()
        )));
    }
    let count = families[0].count();
    if families.iter().any(|f| f.count() != count) {
        return Err(Error::Dimension("families have different counts".into()));
    }
    Ok(count)
}

/// Output norms of the coordinate operator on every index tuple `(k_1, …, k_m)`
/// of the families, row-major.
///
/// The output `(x^{(1)}_{k_1,j_1} ⋯ x^{(m)}_{k_m,j_m})_{j ≤ n}` has sup norm
/// `∏_i max_{j ≤ n} |x^{(i)}_{k_i,j}|`.
pub fn coordinate_operator_outputs(
    m: usize,
    n: usize,
    families: &[VectorFamily],
) -> Result<Vec<f64>> {
    if families.len() != m {
        return Err(Error::Dimension(format!("{} families for order {m}", families.len())));
    }
    if let Some(f) = families.iter().find(|f| f.ambient_dim() < n) {
        return Err(Error::Dimension(format!(
            "family of dimension {} for a coordinate operator of dimension {n}",
            f.ambient_dim()
        )));
    }
    let count = families[0].count();
    if families.iter().any(|f| f.count() != count) {
        return Err(Error::Dimension("families have different counts".into()));
    }
    let sup: Vec<Vec<f64>> = families
        .iter()
        .map(|f| {
            f.vectors()
                .iter()
                .map(|v| v[..n].iter().fold(0.0_f64, |a, x| a.max(x.abs())))
                .collect()
        })
        .collect();
    let total = count.pow(m as u32);
    let mut idx = vec![0; m];
    Ok((0..total)
        .map(|flat| {
            unravel(flat, count, m, &mut idx);
            idx.iter().enumerate().map(|(i, &k)| sup[i][k]).product()
        })
        .collect())
}

/// `‖A(x^{(1)}_{k_1}, …, x^{(m)}_{k_m})‖` for every index tuple, row-major.
pub fn tuple_output_norms(form: &MultilinearForm, families: &[VectorFamily]) -> Result<Vec<f64>> {
    let count = check_families(form, families)?;
    if let Some(f) = families.iter().find(|f| f.ambient_dim() != form.dim()) {
        return Err(Error::Dimension(format!(
            "family of dimension {} for a form of dimension {}",
            f.ambient_dim(),
            form.dim()
        )));
    }
    let m = form.order();
    let n = form.dim();
    match form.coefficients() {
        Coefficients::Coordinate => coordinate_operator_outputs(m, n, families),
        Coefficients::Real(data) => {
            // A ×_1 X_1 ⋯ ×_m X_m holds every value at once.
            let mut current = data.clone();
            let mut dims = vec![n; m];
            for (mode, fam) in families.iter().enumerate() {
                let (next, next_dims) = mode_product(&current, &dims, mode, &fam.matrix(), count);
                current = next;
                dims = next_dims;
            }
            Ok(current.into_iter().map(f64::abs).collect())
        }
        Coefficients::Diagonal => {
            let total = count.pow(m as u32);
            let mut idx = vec![0; m];
            Ok((0..total)
                .map(|flat| {
                    unravel(flat, count, m, &mut idx);
                    (0..n)
                        .map(|j| {
                            idx.iter()
                                .enumerate()
                                .map(|(i, &k)| families[i].vector(k)[j])
                                .product::<f64>()
                        })
                        .sum::<f64>()
                        .abs()
                })
                .collect())
        }
        Coefficients::Complex(_) => Err(Error::Inapplicable {
            formula: "mixed_power_sum",
            reason: "complex coefficients".into(),
        }),
    }
}

/// `(Σ_{k_1,…,k_m} ‖A(x^{(1)}_{k_1}, …, x^{(m)}_{k_m})‖^p)^{1/p}` for `p > 0`.
pub fn mixed_power_sum(form: &MultilinearForm, families: &[VectorFamily], p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    Ok(lp_norm(tuple_output_norms(form, families)?.into_iter(), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::form::{build_coordinate_operator, build_diagonal_form, build_ksz_form};
    use crate::Exponent;

    fn bases(m: usize, n: usize) -> Vec<VectorFamily> {
        vec![VectorFamily::unit_basis(n, Exponent::TWO).unwrap(); m]
    }

    #[test]
    fn coordinate_on_unit_bases() {
        let t = build_coordinate_operator(2, 9).unwrap();
        let outputs = coordinate_operator_outputs(2, 9, &bases(2, 9)).unwrap();
        assert!(outputs.iter().all(|&v| v == 1.0));
        assert!((mixed_power_sum(&t, &bases(2, 9), 2.0).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn coordinate_homogeneity_and_zero() {
        let mut fams = bases(2, 3);
        let base = coordinate_operator_outputs(2, 3, &fams).unwrap();
        fams[1] = fams[1].scaled(-3.0);
        let scaled = coordinate_operator_outputs(2, 3, &fams).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert!((b - 3.0 * a).abs() < 1e-15);
        }
        fams[0] = VectorFamily::new(vec![vec![0.0; 3]; 3], Exponent::TWO).unwrap();
        assert!(coordinate_operator_outputs(2, 3, &fams).unwrap().iter().all(|&v| v == 0.0));
        assert!(coordinate_operator_outputs(2, 4, &fams).is_err());
    }

    #[test]
    fn diagonal_unit_bases_p1() {
        let s = build_diagonal_form(2, 7).unwrap();
        assert!((mixed_power_sum(&s, &bases(2, 7), 1.0).unwrap() - 7.0).abs() < 1e-12);
        let s3 = build_diagonal_form(3, 4).unwrap();
        assert!((mixed_power_sum(&s3, &bases(3, 4), 1.0).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dense_matches_direct_evaluation() {
        let a = build_ksz_form(2, 3, 8).unwrap();
        let fams = vec![
            VectorFamily::from_rows(&[1.0, 0.5, -1.0, 0.0, 2.0, 1.0], 2, 3, Exponent::TWO).unwrap(),
            VectorFamily::from_rows(&[0.3, 0.3, 0.3, -1.0, 0.0, 1.0], 2, 3, Exponent::TWO).unwrap(),
        ];
        let norms = tuple_output_norms(&a, &fams).unwrap();
        for k1 in 0..2 {
            for k2 in 0..2 {
                let direct = a.evaluate(&[fams[0].vector(k1), fams[1].vector(k2)]).unwrap();
                assert!((norms[2 * k1 + k2] - direct.abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_families() {
        let a = build_ksz_form(2, 3, 1).unwrap();
        let zero = vec![VectorFamily::new(vec![vec![0.0; 3]; 3], Exponent::TWO).unwrap(); 2];
        assert_eq!(mixed_power_sum(&a, &zero, 2.0).unwrap(), 0.0);
        assert_eq!(mixed_power_sum(&a, &zero, 0.5).unwrap(), 0.0);
    }
}
