use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tensor::{contract_all, contract_except, Scalar};
use crate::{Error, Exponent, Result};

/// Environment variable overriding [`MemoryBudget::default`].
pub const BUDGET_ENV: &str = "SUMMABILITY_MAX_COEFFICIENTS";

/// Upper limit on the number `n^m` of coefficients (or index tuples) a form
/// may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget {
    pub max_coefficients: u128,
}

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget {
            max_coefficients: 1 << 24,
        }
    }
}

impl MemoryBudget {
    /// The default budget, or the value of [`BUDGET_ENV`] when it parses.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
            .map(|max_coefficients| MemoryBudget { max_coefficients })
            .unwrap_or_default()
    }

    pub fn check(&self, order: usize, dim: usize) -> Result<usize> {
        let requested = (dim as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
        if requested > self.max_coefficients {
            return Err(Error::Size {
                what: format!("a form of order {order} and dimension {dim}"),
                requested,
                budget: self.max_coefficients,
            });
        }
        Ok(requested as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Codomain {
    Scalar,
    /// `c_0`-valued, one output coordinate per index tuple `(j_1, …, j_m)`.
    C0Coordinates,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
    /// `Σ_i x_i^{(1)} ⋯ x_i^{(m)}`, never materialized.
    Diagonal,
    /// `(x^{(1)}_{j_1} ⋯ x^{(m)}_{j_m})_{j_1,…,j_m}`, never materialized.
    Coordinate,
}

impl Coefficients {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Coefficients::Real(_) => "real",
            Coefficients::Complex(_) => "complex",
            Coefficients::Diagonal => "diagonal",
            Coefficients::Coordinate => "coordinate",
        }
    }
}

/// An m-linear operator on `ℓ_{p_1}^n × ⋯ × ℓ_{p_m}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearForm {
    order: usize,
    dim: usize,
    exponents: Vec<Exponent>,
    codomain: Codomain,
    coefficients: Coefficients,
    seed: Option<u64>,
}

impl MultilinearForm {
    /// A scalar form with dense real coefficients, every slot on `ℓ_2^n`.
    pub fn dense(order: usize, dim: usize, coefficients: Vec<f64>) -> Result<Self> {
        Self::check_shape(order, dim, coefficients.len())?;
        Ok(MultilinearForm {
            order,
            dim,
            exponents: vec![Exponent::TWO; order],
            codomain: Codomain::Scalar,
            coefficients: Coefficients::Real(coefficients),
            seed: None,
        })
    }

    pub fn dense_complex(order: usize, dim: usize, coefficients: Vec<Complex64>) -> Result<Self> {
        Self::check_shape(order, dim, coefficients.len())?;
        Ok(MultilinearForm {
            order,
            dim,
            exponents: vec![Exponent::TWO; order],
            codomain: Codomain::Scalar,
            coefficients: Coefficients::Complex(coefficients),
            seed: None,
        })
    }

    fn check_shape(order: usize, dim: usize, len: usize) -> Result<()> {
        if order == 0 || dim == 0 {
            return Err(Error::Parameter("order and dimension must be positive".into()));
        }
        let expected = (dim as u128).checked_pow(order as u32);
        if expected != Some(len as u128) {
            return Err(Error::Dimension(format!(
                "{len} coefficients for order {order}, dimension {dim}"
            )));
        }
        Ok(())
    }

    pub(crate) fn from_parts(
        order: usize,
        dim: usize,
        exponents: Vec<Exponent>,
        codomain: Codomain,
        coefficients: Coefficients,
        seed: Option<u64>,
    ) -> Result<Self> {
        match &coefficients {
            Coefficients::Real(c) => Self::check_shape(order, dim, c.len())?,
            Coefficients::Complex(c) => Self::check_shape(order, dim, c.len())?,
            _ => {
                if order == 0 || dim == 0 {
                    return Err(Error::Parameter("order and dimension must be positive".into()));
                }
            }
        }
        if exponents.len() != order {
            return Err(Error::Dimension(format!(
                "{} exponents for order {order}",
                exponents.len()
            )));
        }
        let coordinate = matches!(coefficients, Coefficients::Coordinate);
        if coordinate != (codomain == Codomain::C0Coordinates) {
            return Err(Error::Data(
                "the c0 codomain is used by the coordinate operator only".into(),
            ));
        }
        Ok(MultilinearForm {
            order,
            dim,
            exponents,
            codomain,
            coefficients,
            seed,
        })
    }

    /// Sets the same domain exponent on every slot.
    pub fn with_exponent(mut self, exponent: Exponent) -> Self {
        self.exponents = vec![exponent; self.order];
        self
    }

    pub fn with_exponents(mut self, exponents: Vec<Exponent>) -> Result<Self> {
        if exponents.len() != self.order {
            return Err(Error::Dimension(format!(
                "{} exponents for order {}",
                exponents.len(),
                self.order
            )));
        }
        self.exponents = exponents;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Number of index tuples, `n^m`.
    pub fn tuple_count(&self) -> usize {
        self.dim.pow(self.order as u32)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let coefficients = match &self.coefficients {
            Coefficients::Real(v) => Coefficients::Real(v.iter().map(|a| a * c).collect()),
            Coefficients::Complex(v) => Coefficients::Complex(v.iter().map(|a| a * c).collect()),
            _ => {
                return Err(Error::Inapplicable {
                    formula: "scaled",
                    reason: "implicit forms have fixed coefficients".into(),
                })
            }
        };
        Ok(MultilinearForm {
            coefficients,
            ..self.clone()
        })
    }

    /// The coefficient at a multi-index, real forms only.
    pub fn coefficient(&self, index: &[usize]) -> Result<f64> {
        self.check_index(index)?;
        Ok(match &self.coefficients {
            Coefficients::Real(v) => v[self.offset(index)],
            Coefficients::Diagonal => {
                if index.iter().all(|&i| i == index[0]) {
                    1.0
                } else {
                    0.0
                }
            }
            Coefficients::Complex(_) => {
                return Err(Error::Inapplicable {
                    formula: "coefficient",
                    reason: "complex coefficients".into(),
                })
            }
            Coefficients::Coordinate => {
                return Err(Error::Inapplicable {
                    formula: "coefficient",
                    reason: "vector-valued operator".into(),
                })
            }
        })
    }

    fn offset(&self, index: &[usize]) -> usize {
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn check_index(&self, index: &[usize]) -> Result<()> {
        if index.len() != self.order || index.iter().any(|&i| i >= self.dim) {
            return Err(Error::Dimension(format!(
                "index {index:?} for order {}, dimension {}",
                self.order, self.dim
            )));
        }
        Ok(())
    }

    fn check_inputs<T>(&self, inputs: &[&[T]]) -> Result<()> {
        if inputs.len() != self.order {
            return Err(Error::Dimension(format!(
                "{} inputs for a form of order {}",
                inputs.len(),
                self.order
            )));
        }
        if let Some(bad) = inputs.iter().find(|x| x.len() != self.dim) {
            return Err(Error::Dimension(format!(
                "input of length {} for dimension {}",
                bad.len(),
                self.dim
            )));
        }
        Ok(())
    }

    fn require_scalar(&self, what: &'static str) -> Result<()> {
        if self.codomain != Codomain::Scalar {
            return Err(Error::Inapplicable {
                formula: what,
                reason: "the operator is c0-valued".into(),
            });
        }
        Ok(())
    }

    /// `A(x^{(1)}, …, x^{(m)})` for a real scalar form.
    pub fn evaluate(&self, inputs: &[&[f64]]) -> Result<f64> {
        self.require_scalar("evaluate")?;
        self.check_inputs(inputs)?;
        match &self.coefficients {
            Coefficients::Real(c) => Ok(contract_all(c, inputs)),
            Coefficients::Diagonal => Ok(diagonal_contract(inputs)),
            Coefficients::Complex(_) => Err(Error::Inapplicable {
                formula: "evaluate",
                reason: "complex coefficients need evaluate_complex".into(),
            }),
            Coefficients::Coordinate => unreachable!("coordinate operator is c0-valued"),
        }
    }

    /// Evaluation over the complex field; real coefficients are promoted.
    pub fn evaluate_complex(&self, inputs: &[&[Complex64]]) -> Result<Complex64> {
        self.require_scalar("evaluate_complex")?;
        self.check_inputs(inputs)?;
        Ok(match &self.coefficients {
            Coefficients::Complex(c) => contract_all(c, inputs),
            Coefficients::Real(c) => {
                let promoted: Vec<Complex64> = c.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                contract_all(&promoted, inputs)
            }
            Coefficients::Diagonal => diagonal_contract(inputs),
            Coefficients::Coordinate => unreachable!("coordinate operator is c0-valued"),
        })
    }

    /// The full `c_0` output of the coordinate operator, length `n^m`.
    pub fn evaluate_coordinates(&self, inputs: &[&[f64]]) -> Result<Vec<f64>> {
        if self.codomain != Codomain::C0Coordinates {
            return Err(Error::Inapplicable {
                formula: "evaluate_coordinates",
                reason: "the operator is scalar-valued".into(),
            });
        }
        self.check_inputs(inputs)?;
        let mut out = vec![1.0];
        for x in inputs {
            out = out
                .iter()
                .flat_map(|&acc| x.iter().map(move |&xj| acc * xj))
                .collect();
        }
        Ok(out)
    }

    /// Norm of the output: `|A(x)|` for scalar forms, the sup norm for the
    /// coordinate operator.
    pub fn output_norm(&self, inputs: &[&[f64]]) -> Result<f64> {
        match self.codomain {
            Codomain::Scalar => self.evaluate(inputs).map(f64::abs),
            Codomain::C0Coordinates => {
                self.check_inputs(inputs)?;
                Ok(inputs
                    .iter()
                    .map(|x| x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
                    .product())
            }
        }
    }

    /// The linear functional obtained by fixing every slot but `keep`.
    pub fn partial_contraction(&self, inputs: &[&[f64]], keep: usize) -> Result<Vec<f64>> {
        self.require_scalar("partial_contraction")?;
        if keep >= self.order {
            return Err(Error::Dimension(format!("slot {keep} of {}", self.order)));
        }
        // The kept slot's input is ignored; only its length is checked.
        self.check_inputs(inputs)?;
        match &self.coefficients {
            Coefficients::Real(c) => Ok(contract_except(c, inputs, keep)),
            Coefficients::Diagonal => Ok((0..self.dim)
                .map(|j| {
                    inputs
                        .iter()
                        .enumerate()
                        .filter(|&(slot, _)| slot != keep)
                        .map(|(_, x)| x[j])
                        .product()
                })
                .collect()),
            Coefficients::Complex(_) => Err(Error::Inapplicable {
                formula: "partial_contraction",
                reason: "complex coefficients".into(),
            }),
            Coefficients::Coordinate => unreachable!("coordinate operator is c0-valued"),
        }
    }

    /// Coefficients as a dense real vector (materializes the diagonal form).
    pub fn dense_real_coefficients(&self) -> Result<Vec<f64>> {
        match &self.coefficients {
            Coefficients::Real(c) => Ok(c.clone()),
            Coefficients::Diagonal => {
                let mut out = vec![0.0; self.tuple_count()];
                let step: usize = (0..self.order).map(|k| self.dim.pow(k as u32)).sum();
                for i in 0..self.dim {
                    out[i * step] = 1.0;
                }
                Ok(out)
            }
            _ => Err(Error::Inapplicable {
                formula: "dense_real_coefficients",
                reason: format!("{} coefficients", self.coefficients.kind_name()),
            }),
        }
    }
}

fn diagonal_contract<T: Scalar>(inputs: &[&[T]]) -> T {
    let n = inputs[0].len();
    (0..n).fold(T::ZERO, |acc, j| {
        let term = inputs[1..].iter().fold(inputs[0][j], |t, x| t * x[j]);
        acc + term
    })
}

/// The random-sign form `Σ ±z_{i_1}^{(1)} ⋯ z_{i_m}^{(m)}` with independent
/// uniform signs drawn from a generator seeded by `seed`.
pub fn build_ksz_form(m: usize, n: usize, seed: u64) -> Result<MultilinearForm> {
    build_ksz_form_with_budget(m, n, seed, MemoryBudget::from_env())
}

pub fn build_ksz_form_with_budget(
    m: usize,
    n: usize,
    seed: u64,
    budget: MemoryBudget,
) -> Result<MultilinearForm> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter("order and dimension must be positive".into()));
    }
    let len = budget.check(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = (0..len)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let mut form = MultilinearForm::dense(m, n, coefficients)?;
    form.seed = Some(seed);
    Ok(form)
}

/// `S(x^{(1)}, …, x^{(m)}) = Σ_i x_i^{(1)} ⋯ x_i^{(m)}`.
pub fn build_diagonal_form(m: usize, n: usize) -> Result<MultilinearForm> {
    build_diagonal_form_with_budget(m, n, MemoryBudget::from_env())
}

pub fn build_diagonal_form_with_budget(
    m: usize,
    n: usize,
    budget: MemoryBudget,
) -> Result<MultilinearForm> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter("order and dimension must be positive".into()));
    }
    budget.check(m, n)?;
    MultilinearForm::from_parts(
        m,
        n,
        vec![Exponent::TWO; m],
        Codomain::Scalar,
        Coefficients::Diagonal,
        None,
    )
}

/// The `c_0`-valued operator `T(x^{(1)}, …, x^{(m)}) = (x^{(1)}_{j_1} ⋯ x^{(m)}_{j_m})`.
pub fn build_coordinate_operator(m: usize, n: usize) -> Result<MultilinearForm> {
    build_coordinate_operator_with_budget(m, n, MemoryBudget::from_env())
}

pub fn build_coordinate_operator_with_budget(
    m: usize,
    n: usize,
    budget: MemoryBudget,
) -> Result<MultilinearForm> {
    if m == 0 || n == 0 {
        return Err(Error::Parameter("order and dimension must be positive".into()));
    }
    budget.check(m, n)?;
    MultilinearForm::from_parts(
        m,
        n,
        vec![Exponent::TWO; m],
        Codomain::C0Coordinates,
        Coefficients::Coordinate,
        None,
    )
}

/// Norm of the diagonal form on `(ℓ_e^n)^m`: `n^{max(0, 1 − m/e)}`.
///
/// For `e ≥ m` this is the familiar `n^{1 − m/e}`; for `e < m` the value at
/// `(e_1, …, e_1)` already equals 1, so the norm is 1.
pub fn diagonal_form_norm(m: usize, n: usize, exponent: Exponent) -> f64 {
    let power = (1.0 - m as f64 * exponent.reciprocal()).max(0.0);
    (n as f64).powf(power)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ksz_support() {
        let f = build_ksz_form(1, 3, 0).unwrap();
        match f.coefficients() {
            Coefficients::Real(c) => {
                assert_eq!(c.len(), 3);
                assert!(c.iter().all(|&a| a == 1.0 || a == -1.0));
            }
            _ => panic!("dense expected"),
        }
        for seed in 0..10 {
            let f = build_ksz_form(2, 2, seed).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(f.coefficient(&[i, j]).unwrap().abs(), 1.0);
                }
            }
        }
    }

    #[test]
    fn ksz_is_deterministic() {
        assert_eq!(build_ksz_form(3, 5, 42).unwrap(), build_ksz_form(3, 5, 42).unwrap());
        assert_ne!(build_ksz_form(3, 5, 42).unwrap(), build_ksz_form(3, 5, 43).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let small = MemoryBudget {
            max_coefficients: 100,
        };
        let err = build_ksz_form_with_budget(2, 11, 0, small).unwrap_err();
        assert!(matches!(err, Error::Size { requested: 121, budget: 100, .. }));
        assert!(build_diagonal_form_with_budget(3, 5, small).is_err());
        assert!(build_coordinate_operator_with_budget(2, 10, small).is_ok());
    }

    #[test]
    fn diagonal_is_identity_matrix() {
        let s = build_diagonal_form(2, 2).unwrap();
        assert_eq!(s.dense_real_coefficients().unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
        let s3 = build_diagonal_form(3, 2).unwrap();
        let dense = s3.dense_real_coefficients().unwrap();
        assert_eq!(dense[0], 1.0);
        assert_eq!(dense[7], 1.0);
        assert_eq!(dense.iter().sum::<f64>(), 2.0);
    }

    #[test]
    fn diagonal_evaluation() {
        let s = build_diagonal_form(2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let x = [h, h];
        assert!((s.evaluate(&[&x, &x]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(s.evaluate(&[&x, &[0.0, 0.0]]).unwrap(), 0.0);
    }

    #[test]
    fn basis_inputs_extract_coefficients() {
        let f = build_ksz_form(3, 3, 9).unwrap();
        let basis: Vec<Vec<f64>> = (0..3)
            .map(|k| (0..3).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let v = f.evaluate(&[&basis[i], &basis[j], &basis[k]]).unwrap();
                    assert_eq!(v, f.coefficient(&[i, j, k]).unwrap());
                }
            }
        }
    }

    #[test]
    fn complex_evaluation_promotes_real() {
        let f = build_ksz_form(2, 2, 1).unwrap();
        let x = [Complex64::new(1.0, 1.0), Complex64::new(0.0, -1.0)];
        let y = [Complex64::new(0.5, 0.0), Complex64::new(2.0, 1.0)];
        let z = f.evaluate_complex(&[&x, &y]).unwrap();
        let mut expected = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                expected += f.coefficient(&[i, j]).unwrap() * x[i] * y[j];
            }
        }
        assert!((z - expected).norm() < 1e-15);
        assert!(f.evaluate(&[&[1.0, 0.0], &[0.0]]).is_err());
    }

    #[test]
    fn coordinate_operator_outputs() {
        let t = build_coordinate_operator(2, 2).unwrap();
        let out = t.evaluate_coordinates(&[&[1.0, 2.0], &[3.0, -1.0]]).unwrap();
        assert_eq!(out, vec![3.0, -1.0, 6.0, -2.0]);
        assert_eq!(t.output_norm(&[&[1.0, 2.0], &[3.0, -1.0]]).unwrap(), 6.0);
        assert!(t.evaluate(&[&[1.0, 2.0], &[3.0, -1.0]]).is_err());
    }

    #[test]
    fn diagonal_norm_formula() {
        assert_eq!(diagonal_form_norm(2, 64, Exponent::TWO), 1.0);
        let e = Exponent::new(4.0).unwrap();
        assert!((diagonal_form_norm(2, 16, e) - 4.0).abs() < 1e-12);
        // exponent below m: norm is 1, not n^{1-m/e} < 1.
        assert_eq!(diagonal_form_norm(3, 10, Exponent::TWO), 1.0);
    }
}
