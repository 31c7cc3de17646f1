use serde::{Deserialize, Serialize};

use super::ExponentFit;
use crate::bounds::{aggregate_bounds, AggregateBounds, IndexQuery};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    LowerViolated,
    UpperViolated,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::LowerViolated => "lower_violated",
            Verdict::UpperViolated => "upper_violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub fitted: ExponentFit,
    pub theoretical: AggregateBounds,
    pub verdict: Verdict,
    pub tolerance: f64,
    /// Whether the witness was required to reach the exact value.
    pub extremal: bool,
}

/// Compares a witness slope with the closed-form bounds for `query`.
///
/// A witness slope can never exceed the upper bound. When `extremal` is set
/// it must also reach the exact value. Queries with no applicable bound give
/// [`Verdict::Inconclusive`].
pub fn verify_against_bounds(
    fit: &ExponentFit,
    query: &IndexQuery,
    tolerance: f64,
    extremal: bool,
) -> Result<VerificationReport> {
    let theoretical = aggregate_bounds(query)?;
    let verdict = verify_slope(fit.slope, &theoretical, tolerance, extremal);
    Ok(VerificationReport {
        fitted: *fit,
        theoretical,
        verdict,
        tolerance,
        extremal,
    })
}

pub fn verify_slope(
    slope: f64,
    bounds: &AggregateBounds,
    tolerance: f64,
    extremal: bool,
) -> Verdict {
    let mut checked = false;
    if let Some(upper) = &bounds.upper {
        checked = true;
        if slope > upper.value + tolerance {
            return Verdict::UpperViolated;
        }
    }
    if extremal {
        if let Some(exact) = &bounds.exact {
            checked = true;
            if slope < exact.value - tolerance {
                return Verdict::LowerViolated;
            }
        }
    }
    if checked {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    }
}
