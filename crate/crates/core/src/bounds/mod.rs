//! Closed-form bounds on the multilinear and polynomial index of summability.
//!
//! Every formula is a pure function that first checks its hypotheses and
//! returns [`Error::Region`](crate::Error::Region) naming the failed condition.
//! [`aggregate_bounds`] runs everything that applies to an [`IndexQuery`] and
//! keeps the best lower, best upper and exact values.

mod aggregate;
mod coincidence;
mod exact;
mod lower;

use serde::{Deserialize, Serialize};

use crate::{Error, Exponent, Result};

pub use aggregate::{aggregate_bounds, AggregateBounds};
pub use coincidence::{
    cornbd_upper, cotype_coincidence_t, mult_upper_from_coincidence, pol_upper_from_coincidence,
    scalar_coincidence_s,
};
pub use exact::{exact_index_c0, exact_index_scalar, pol_exact_q1, PolExactTarget};
pub use lower::{cotipon_lower, even_real_lower, mps_lower};

/// Slack used when testing region inequalities, so that parameters sitting on
/// a boundary computed in floating point are admitted by closed conditions and
/// rejected by open ones.
pub(crate) const REGION_EPS: f64 = 1e-12;

pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b + REGION_EPS * b.abs().max(1.0)
}

pub(crate) fn lt(a: f64, b: f64) -> bool {
    a < b - REGION_EPS * b.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Multilinear,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    #[default]
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "exponent")]
pub enum SpaceKind {
    /// `ℓ_s` for finite `s`, or `c_0` when `s = ∞`.
    SequenceSpace(Exponent),
    ScalarField,
    C0,
    /// An infinite-dimensional space known only through its cotype.
    Abstract,
}

/// A Banach space as seen by the calculator: its kind and its cotype.
///
/// The cotype is always supplied by the caller (see
/// [`CotypeTable`](crate::io::CotypeTable)); it is never inferred here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub kind: SpaceKind,
    pub cotype: Exponent,
}

impl SpaceDescriptor {
    pub fn new(kind: SpaceKind, cotype: Exponent) -> Result<Self> {
        if cotype.value() < 2.0 {
            return Err(Error::Parameter(format!("cotype {cotype} is below 2")));
        }
        let forced = match kind {
            SpaceKind::C0 => Some(Exponent::INFINITY),
            SpaceKind::SequenceSpace(s) if s.is_infinite() => Some(Exponent::INFINITY),
            SpaceKind::ScalarField => Some(Exponent::TWO),
            _ => None,
        };
        if let Some(expected) = forced {
            if cotype != expected {
                return Err(Error::Parameter(format!(
                    "{kind:?} has cotype {expected}, got {cotype}"
                )));
            }
        }
        Ok(SpaceDescriptor { kind, cotype })
    }

    pub fn scalar() -> Self {
        SpaceDescriptor {
            kind: SpaceKind::ScalarField,
            cotype: Exponent::TWO,
        }
    }

    pub fn c0() -> Self {
        SpaceDescriptor {
            kind: SpaceKind::C0,
            cotype: Exponent::INFINITY,
        }
    }

    pub fn is_infinite_dimensional(&self) -> bool {
        !matches!(self.kind, SpaceKind::ScalarField)
    }

    pub fn is_c0(&self) -> bool {
        match self.kind {
            SpaceKind::C0 => true,
            SpaceKind::SequenceSpace(s) => s.is_infinite(),
            _ => false,
        }
    }

    /// Finite cotype, if any.
    pub fn finite_cotype(&self) -> Option<f64> {
        (!self.cotype.is_infinite()).then_some(self.cotype.value())
    }

    /// True when the space is `ℓ_e` with `e` equal to `exponent` up to
    /// rounding.
    pub fn is_sequence_space(&self, exponent: Exponent) -> bool {
        match self.kind {
            SpaceKind::SequenceSpace(s) if s.is_infinite() || exponent.is_infinite() => {
                s.is_infinite() && exponent.is_infinite()
            }
            SpaceKind::SequenceSpace(s) => (s.value() - exponent.value()).abs() <= 1e-12,
            SpaceKind::C0 => exponent.is_infinite(),
            _ => false,
        }
    }
}

/// The question "what is the index for these parameters and spaces".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexQuery {
    pub m: u32,
    pub p: f64,
    pub q: f64,
    pub variant: Variant,
    pub field: Field,
    /// One descriptor per slot; a single descriptor for polynomials.
    pub domain: Vec<SpaceDescriptor>,
    pub codomain: SpaceDescriptor,
}

impl IndexQuery {
    /// Multilinear query with the same domain in every slot.
    pub fn multilinear(
        m: u32,
        p: f64,
        q: f64,
        domain: SpaceDescriptor,
        codomain: SpaceDescriptor,
    ) -> Result<Self> {
        let query = IndexQuery {
            m,
            p,
            q,
            variant: Variant::Multilinear,
            field: Field::Real,
            domain: vec![domain; m.max(1) as usize],
            codomain,
        };
        query.validate()?;
        Ok(query)
    }

    pub fn polynomial(
        m: u32,
        p: f64,
        q: f64,
        domain: SpaceDescriptor,
        codomain: SpaceDescriptor,
    ) -> Result<Self> {
        let query = IndexQuery {
            m,
            p,
            q,
            variant: Variant::Polynomial,
            field: Field::Real,
            domain: vec![domain],
            codomain,
        };
        query.validate()?;
        Ok(query)
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::Parameter("degree m must be at least 1".into()));
        }
        check_positive("p", self.p)?;
        if !(self.q >= 1.0) {
            return Err(Error::Parameter(format!("q = {} must be at least 1", self.q)));
        }
        if self.q.is_infinite() {
            return Err(Error::Parameter("q = inf is not supported".into()));
        }
        let expected = match self.variant {
            Variant::Multilinear => self.m as usize,
            Variant::Polynomial => 1,
        };
        if self.domain.len() != expected {
            return Err(Error::Parameter(format!(
                "{:?} query needs {expected} domain descriptor(s), got {}",
                self.variant,
                self.domain.len()
            )));
        }
        Ok(())
    }

    /// `q*`, the exponent of the domain in the extremal results.
    pub fn q_star(&self) -> Exponent {
        Exponent::new(self.q)
            .map(Exponent::conjugate)
            .unwrap_or(Exponent::INFINITY)
    }
}

/// A pair `(t, s)` for which every operator is multiple `(t, s)`-summing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoincidencePair {
    pub t: f64,
    pub s: f64,
}

impl CoincidencePair {
    pub fn new(t: f64, s: f64) -> Result<Self> {
        check_positive("t", t)?;
        if !(s >= 1.0) || s.is_infinite() {
            return Err(Error::Parameter(format!("s = {s} must be finite and at least 1")));
        }
        Ok(CoincidencePair { t, s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub direction: Direction,
    /// The hypothesis branch that applied, e.g. `"(a) p <= t, s <= q"`.
    pub region: String,
    /// The formula that produced the value.
    pub citation: String,
}

impl BoundResult {
    pub(crate) fn new(
        value: f64,
        direction: Direction,
        region: impl Into<String>,
        citation: &str,
    ) -> Self {
        BoundResult {
            value,
            direction,
            region: region.into(),
            citation: citation.to_string(),
        }
    }
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {x} must be positive and finite")))
    }
}

pub(crate) fn check_degree(m: u32) -> Result<f64> {
    if m == 0 {
        Err(Error::Parameter("degree m must be at least 1".into()))
    } else {
        Ok(m as f64)
    }
}

pub(crate) fn check_cotype(r: f64) -> Result<()> {
    if r.is_nan() || r < 2.0 {
        return Err(Error::Parameter(format!("cotype r = {r} must be at least 2")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_invariants() {
        assert!(SpaceDescriptor::new(SpaceKind::C0, Exponent::TWO).is_err());
        assert!(SpaceDescriptor::new(SpaceKind::ScalarField, Exponent::INFINITY).is_err());
        assert!(SpaceDescriptor::new(SpaceKind::Abstract, Exponent::ONE).is_err());
        let l3 = SpaceDescriptor::new(
            SpaceKind::SequenceSpace(Exponent::new(3.0).unwrap()),
            Exponent::new(3.0).unwrap(),
        )
        .unwrap();
        assert!(l3.is_sequence_space(Exponent::new(3.0).unwrap()));
        assert!(!l3.is_sequence_space(Exponent::TWO));
        assert!(SpaceDescriptor::c0().is_sequence_space(Exponent::INFINITY));
    }

    #[test]
    fn query_invariants() {
        let l2 = SpaceDescriptor::new(SpaceKind::SequenceSpace(Exponent::TWO), Exponent::TWO)
            .unwrap();
        let s = SpaceDescriptor::scalar();
        assert!(IndexQuery::multilinear(0, 1.0, 1.0, l2, s).is_err());
        assert!(IndexQuery::multilinear(2, 0.0, 1.0, l2, s).is_err());
        assert!(IndexQuery::multilinear(2, 1.0, 0.5, l2, s).is_err());
        assert!(IndexQuery::multilinear(2, 1.0, f64::INFINITY, l2, s).is_err());
        let mut q = IndexQuery::polynomial(2, 1.0, 1.0, l2, s).unwrap();
        q.domain.push(l2);
        assert!(q.validate().is_err());
    }
}
