//! Parameter regions where the index is known exactly.

use super::{check_cotype, check_degree, check_positive, le, lt, BoundResult, Direction};
use crate::{Error, Result};

/// Exact multilinear index of `(ℓ_{q*} × ⋯ × ℓ_{q*}, K)`.
///
/// Region (a): `2m/(m+1) ≤ p ≤ 2` and `2mp/(mp+2m−p) ≤ q ≤ 2`, value
/// `m/p + m/2 − 1/2 − m/q`.
/// Region (b): `2 < p < ∞` and `q ≥ mp/(mp+1−p)`, value `m − 1 + 1/p − m/q`.
pub fn exact_index_scalar(m: u32, p: f64, q: f64) -> Result<BoundResult> {
    const NAME: &str = "exact_index_scalar";
    let mf = check_degree(m)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    let p_low = 2.0 * mf / (mf + 1.0);
    if le(p_low, p) && le(p, 2.0) {
        let q_low = 2.0 * mf * p / (mf * p + 2.0 * mf - p);
        if le(q_low, q) && le(q, 2.0) {
            return Ok(BoundResult::new(
                mf / p + mf / 2.0 - 0.5 - mf / q,
                Direction::Exact,
                "(a) 2m/(m+1) <= p <= 2, 2mp/(mp+2m-p) <= q <= 2",
                NAME,
            ));
        }
    }
    if lt(2.0, p) {
        let q_low = mf * p / (mf * p + 1.0 - p);
        if le(q_low, q) {
            return Ok(BoundResult::new(
                mf - 1.0 + 1.0 / p - mf / q,
                Direction::Exact,
                "(b) 2 < p, q >= mp/(mp+1-p)",
                NAME,
            ));
        }
    }
    Err(Error::NoExactResult { formula: NAME })
}

/// Exact multilinear index of `(ℓ_{q*} × ⋯ × ℓ_{q*}, c_0)`: `m/p` for
/// `1 ≤ q ≤ 2`.
pub fn exact_index_c0(m: u32, p: f64, q: f64) -> Result<BoundResult> {
    const NAME: &str = "exact_index_c0";
    let mf = check_degree(m)?;
    check_positive("p", p)?;
    if !(le(1.0, q) && le(q, 2.0)) {
        return Err(Error::region(NAME, format!("q not in [1,2] (q = {q})")));
    }
    Ok(BoundResult::new(mf / p, Direction::Exact, "1 <= q <= 2", NAME))
}

/// Codomain information for [`pol_exact_q1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolExactTarget {
    /// An infinite-dimensional `F` with finite cotype `r`.
    Cotype(f64),
    /// `F = R` with `m` even.
    RealScalarEven,
}

/// Exact polynomial index at `q = 1`.
///
/// For `F` of cotype `r` and `2r/(mr+2) < p < r` the value is `1/p − 1/r`;
/// for real scalar `F`, even `m` and `2/(m+2) < p < 1` it is `1/p − 1`.
pub fn pol_exact_q1(m: u32, p: f64, target: PolExactTarget) -> Result<BoundResult> {
    const NAME: &str = "pol_exact_q1";
    let mf = check_degree(m)?;
    check_positive("p", p)?;
    match target {
        PolExactTarget::Cotype(r) => {
            check_cotype(r)?;
            if r.is_infinite() {
                return Err(Error::NoExactResult { formula: NAME });
            }
            let low = 2.0 * r / (mf * r + 2.0);
            if lt(low, p) && lt(p, r) {
                Ok(BoundResult::new(
                    1.0 / p - 1.0 / r,
                    Direction::Exact,
                    "q = 1, 2r/(mr+2) < p < r",
                    NAME,
                ))
            } else {
                Err(Error::NoExactResult { formula: NAME })
            }
        }
        PolExactTarget::RealScalarEven => {
            if m % 2 != 0 {
                return Err(Error::NoExactResult { formula: NAME });
            }
            let low = 2.0 / (mf + 2.0);
            if lt(low, p) && lt(p, 1.0) {
                Ok(BoundResult::new(
                    1.0 / p - 1.0,
                    Direction::Exact,
                    "q = 1, real scalars, m even, 2/(m+2) < p < 1",
                    NAME,
                ))
            } else {
                Err(Error::NoExactResult { formula: NAME })
            }
        }
    }
}
