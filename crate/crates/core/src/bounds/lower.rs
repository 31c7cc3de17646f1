//! Lower bounds on the polynomial index.

use super::{check_cotype, check_degree, check_positive, le, lt, BoundResult, Direction, Field};
use crate::{Error, Result};

/// Lower bound on the polynomial index for infinite-dimensional `E`, `F` with
/// `r = cot(F)`, over the four regions
///
/// * (a) `1 ≤ q ≤ 2`, `0 < p ≤ rq/(mr+q)`: `m/2`
/// * (b) `1 ≤ q ≤ 2`, `rq/(mr+q) ≤ p ≤ 2r/(mr+2)`: `(mp+2)/(2p) − (mr+q)/(rq)`
/// * (c) `2 ≤ q`, `0 < p ≤ 2r/(mr+2)`: `m/2`
/// * (d) `2 ≤ q`, `2r/(mr+2) < p < r`: `(r−p)/(pr)`
///
/// The strip `1 ≤ q ≤ 2`, `2r/(mr+2) < p < r` is answered by [`cotipon_lower`].
pub fn mps_lower(m: u32, p: f64, q: f64, r: f64) -> Result<BoundResult> {
    const NAME: &str = "mps_lower";
    let mf = check_degree(m)?;
    check_positive("p", p)?;
    check_cotype(r)?;
    if !(q >= 1.0) || q.is_infinite() {
        return Err(Error::Parameter(format!("q = {q} must be finite and at least 1")));
    }
    if r.is_infinite() {
        return Err(Error::NoKnownLower {
            formula: NAME,
            reason: "codomain has no finite cotype".into(),
        });
    }
    let k = 2.0 * r / (mf * r + 2.0);
    let mut found: Vec<BoundResult> = Vec::new();
    if le(q, 2.0) {
        let a_top = r * q / (mf * r + q);
        if le(p, a_top) {
            found.push(BoundResult::new(
                mf / 2.0,
                Direction::Lower,
                "(a) 1 <= q <= 2, p <= rq/(mr+q)",
                NAME,
            ));
        }
        if le(a_top, p) && le(p, k) {
            found.push(BoundResult::new(
                (mf * p + 2.0) / (2.0 * p) - (mf * r + q) / (r * q),
                Direction::Lower,
                "(b) 1 <= q <= 2, rq/(mr+q) <= p <= 2r/(mr+2)",
                NAME,
            ));
        }
    }
    if le(2.0, q) {
        if le(p, k) {
            found.push(BoundResult::new(
                mf / 2.0,
                Direction::Lower,
                "(c) q >= 2, p <= 2r/(mr+2)",
                NAME,
            ));
        }
        if lt(k, p) && lt(p, r) {
            found.push(BoundResult::new(
                (r - p) / (p * r),
                Direction::Lower,
                "(d) q >= 2, 2r/(mr+2) < p < r",
                NAME,
            ));
        }
    }
    // Ties at region boundaries go to the earliest region.
    if let Some(best) = found
        .into_iter()
        .reduce(|best, b| if b.value > best.value { b } else { best })
    {
        return Ok(best);
    }
    if lt(k, p) && lt(p, r) {
        // 1 <= q < 2 and 2r/(mr+2) < p < r.
        return cotipon_lower(m, p, q, r);
    }
    Err(Error::NoKnownLower {
        formula: NAME,
        reason: format!("p = {p} >= r = {r}"),
    })
}

/// Lower bound `(r−p)/(pr)` on the polynomial index for `1 ≤ q < ∞` and
/// `2r/(mr+2) < p < r`, `r = cot(F)`.
pub fn cotipon_lower(m: u32, p: f64, q: f64, r: f64) -> Result<BoundResult> {
    const NAME: &str = "cotipon_lower";
    let mf = check_degree(m)?;
    check_positive("p", p)?;
    check_cotype(r)?;
    if r.is_infinite() {
        return Err(Error::region(NAME, "codomain has no finite cotype"));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::region(NAME, format!("q not in [1,inf) (q = {q})")));
    }
    let low = 2.0 * r / (mf * r + 2.0);
    if !(lt(low, p) && lt(p, r)) {
        return Err(Error::region(
            NAME,
            format!("p not in (2r/(mr+2), r) = ({low}, {r}) (p = {p})"),
        ));
    }
    Ok(BoundResult::new(
        (r - p) / (p * r),
        Direction::Lower,
        "1 <= q < inf, 2r/(mr+2) < p < r",
        NAME,
    ))
}

/// Lower bound `(1−p)/p` on the polynomial index of `(E, R)` for even `m`,
/// `1 ≤ q < ∞` and `2/(m+2) < p < 1`.
pub fn even_real_lower(m: u32, p: f64, q: f64, field: Field) -> Result<BoundResult> {
    const NAME: &str = "even_real_lower";
    let mf = check_degree(m)?;
    check_positive("p", p)?;
    if m % 2 != 0 {
        return Err(Error::Inapplicable {
            formula: NAME,
            reason: format!("m = {m} is odd"),
        });
    }
    if field != Field::Real {
        return Err(Error::Inapplicable {
            formula: NAME,
            reason: "scalar field is complex".into(),
        });
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::region(NAME, format!("q not in [1,inf) (q = {q})")));
    }
    let low = 2.0 / (mf + 2.0);
    if !(lt(low, p) && lt(p, 1.0)) {
        return Err(Error::region(
            NAME,
            format!("p not in (2/(m+2), 1) = ({low}, 1) (p = {p})"),
        ));
    }
    Ok(BoundResult::new(
        (1.0 - p) / p,
        Direction::Lower,
        "m even, real scalars, 1 <= q < inf, 2/(m+2) < p < 1",
        NAME,
    ))
}
