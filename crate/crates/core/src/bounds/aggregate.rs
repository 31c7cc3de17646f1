use serde::{Deserialize, Serialize};

use super::{
    cornbd_upper, cotipon_lower, even_real_lower, exact_index_c0, exact_index_scalar, mps_lower,
    mult_upper_from_coincidence, pol_exact_q1, pol_upper_from_coincidence, scalar_coincidence_s,
    BoundResult, CoincidencePair, Direction, Field, IndexQuery, PolExactTarget, SpaceKind,
    Variant, REGION_EPS,
};
use crate::{Error, Result};

/// Best known values for one query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct AggregateBounds {
    pub lower: Option<BoundResult>,
    pub upper: Option<BoundResult>,
    pub exact: Option<BoundResult>,
    /// Every formula that applied, in evaluation order.
    pub applied: Vec<BoundResult>,
}

impl AggregateBounds {
    pub fn is_empty(&self) -> bool {
        self.lower.is_none() && self.upper.is_none() && self.exact.is_none()
    }
}

/// Runs every formula whose hypotheses hold for `query`.
///
/// Region failures are expected and silently skipped; anything else
/// propagates. An exact value is also a lower and an upper bound, so when
/// one exists `lower` and `upper` both collapse onto it unless a formula
/// contradicts it, which is reported as [`Error::Inconsistent`].
pub fn aggregate_bounds(query: &IndexQuery) -> Result<AggregateBounds> {
    query.validate()?;
    let results = match query.variant {
        Variant::Multilinear => multilinear_candidates(query)?,
        Variant::Polynomial => polynomial_candidates(query)?,
    };
    combine(results)
}

fn keep(out: &mut Vec<BoundResult>, result: Result<BoundResult>) -> Result<()> {
    match result {
        Ok(b) => {
            // The strip below the MPS regions is answered by cotipon_lower,
            // which would otherwise be listed twice.
            if !out.contains(&b) {
                out.push(b);
            }
            Ok(())
        }
        Err(e) if e.is_hypothesis_failure() => Ok(()),
        Err(e) => Err(e),
    }
}

fn multilinear_candidates(query: &IndexQuery) -> Result<Vec<BoundResult>> {
    let IndexQuery { m, p, q, .. } = *query;
    let mut out = Vec::new();
    let q_star = query.q_star();
    let domains_are_lq_star = query.domain.iter().all(|d| d.is_sequence_space(q_star));
    let domains_infinite = query.domain.iter().all(|d| d.is_infinite_dimensional());

    if matches!(query.codomain.kind, SpaceKind::ScalarField) {
        let mf = m as f64;
        let lowest = 2.0 * mf / (mf + 1.0);
        let mut ts = vec![lowest, 2.0];
        if p >= lowest {
            ts.push(p);
        }
        for t in ts {
            let s = scalar_coincidence_s(m, t)?;
            keep(&mut out, mult_upper_from_coincidence(m, p, q, CoincidencePair::new(t, s)?))?;
        }
        if domains_are_lq_star {
            keep(&mut out, exact_index_scalar(m, p, q))?;
        }
    } else {
        if let (Some(r), true) = (query.codomain.finite_cotype(), domains_infinite) {
            keep(&mut out, cornbd_upper(m, r, p, q, None))?;
        }
        if query.codomain.is_c0() && domains_are_lq_star {
            keep(&mut out, exact_index_c0(m, p, q))?;
        }
    }
    Ok(out)
}

fn polynomial_candidates(query: &IndexQuery) -> Result<Vec<BoundResult>> {
    let IndexQuery { m, p, q, .. } = *query;
    let mut out = Vec::new();
    let codomain = query.codomain;
    let domain_infinite = query.domain[0].is_infinite_dimensional();
    let scalar = matches!(codomain.kind, SpaceKind::ScalarField);

    // Every m-homogeneous polynomial into F of cotype r is (r,1)-summing.
    if let Some(r) = codomain.finite_cotype() {
        keep(&mut out, pol_upper_from_coincidence(m, p, q, CoincidencePair::new(r, 1.0)?))?;
    }
    if scalar {
        // Scalar-valued polynomials are (1,1)-summing.
        keep(&mut out, pol_upper_from_coincidence(m, p, q, CoincidencePair::new(1.0, 1.0)?))?;
    }

    if domain_infinite {
        if scalar {
            if query.field == Field::Real {
                keep(&mut out, even_real_lower(m, p, q, query.field))?;
                if (q - 1.0).abs() <= REGION_EPS {
                    keep(&mut out, pol_exact_q1(m, p, PolExactTarget::RealScalarEven))?;
                }
            }
        } else if let Some(r) = codomain.finite_cotype() {
            keep(&mut out, mps_lower(m, p, q, r))?;
            keep(&mut out, cotipon_lower(m, p, q, r))?;
            if (q - 1.0).abs() <= REGION_EPS {
                keep(&mut out, pol_exact_q1(m, p, PolExactTarget::Cotype(r)))?;
            }
        }
    }
    Ok(out)
}

fn combine(applied: Vec<BoundResult>) -> Result<AggregateBounds> {
    let tol = 1e-12;
    let exact = applied
        .iter()
        .find(|b| b.direction == Direction::Exact)
        .cloned();
    for (i, a) in applied.iter().enumerate() {
        for b in &applied[i + 1..] {
            if a.direction == Direction::Exact
                && b.direction == Direction::Exact
                && (a.value - b.value).abs() > tol * a.value.abs().max(1.0)
            {
                return Err(Error::Inconsistent(format!(
                    "exact values disagree: {} ({}) vs {} ({})",
                    a.value, a.citation, b.value, b.citation
                )));
            }
        }
    }

    let lower = applied
        .iter()
        .filter(|b| matches!(b.direction, Direction::Lower | Direction::Exact))
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .cloned();
    let upper = applied
        .iter()
        .filter(|b| matches!(b.direction, Direction::Upper | Direction::Exact))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .cloned();

    if let (Some(lo), Some(up)) = (&lower, &upper) {
        if lo.value > up.value + tol * up.value.abs().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "lower bound {} ({} {}) exceeds upper bound {} ({} {})",
                lo.value, lo.citation, lo.region, up.value, up.citation, up.region
            )));
        }
    }
    // With a consistent exact value, report it in all three slots.
    let (lower, upper) = match &exact {
        Some(e) => (
            lower.map(|l| if l.value <= e.value + tol { e.clone() } else { l }),
            upper.map(|u| if u.value + tol >= e.value { e.clone() } else { u }),
        ),
        None => (lower, upper),
    };
    Ok(AggregateBounds {
        lower,
        upper,
        exact,
        applied,
    })
}
