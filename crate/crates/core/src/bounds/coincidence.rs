//! Upper bounds derived from coincidence situations `L = Π_{t,s}`.

use super::{
    check_cotype, check_degree, check_positive, le, lt, BoundResult, CoincidencePair, Direction,
};
use crate::{Error, Result};

struct Branch {
    label: &'static str,
    applies: bool,
    value: f64,
}

/// Picks the applicable branch with the smallest value. At shared boundaries
/// the branch formulas coincide, so the choice never changes the number.
fn smallest_branch(branches: [Branch; 4], citation: &str) -> BoundResult {
    let best = branches
        .into_iter()
        .filter(|b| b.applies)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("the four branches cover every (p, q)");
    BoundResult::new(best.value, Direction::Upper, best.label, citation)
}

/// Upper bound on the multilinear index from `L(E_1,…,E_m;F) = Π^mult_{t,s}`.
pub fn mult_upper_from_coincidence(
    m: u32,
    p: f64,
    q: f64,
    pair: CoincidencePair,
) -> Result<BoundResult> {
    let m = check_degree(m)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    let CoincidencePair { t, s } = CoincidencePair::new(pair.t, pair.s)?;
    let p_side = m / p - m / t;
    let q_side = m / s - m / q;
    Ok(smallest_branch(
        [
            Branch {
                label: "(a) p <= t, s <= q",
                applies: le(p, t) && le(s, q),
                value: p_side + q_side,
            },
            Branch {
                label: "(b) p <= t, q <= s",
                applies: le(p, t) && le(q, s),
                value: p_side,
            },
            Branch {
                label: "(c) t <= p, s <= q",
                applies: le(t, p) && le(s, q),
                value: q_side,
            },
            Branch {
                label: "(d) t <= p, q <= s",
                applies: le(t, p) && le(q, s),
                value: 0.0,
            },
        ],
        "mult_upper_from_coincidence",
    ))
}

/// Upper bound on the polynomial index from `P(^mE;F) = P_{t,s}`.
pub fn pol_upper_from_coincidence(
    m: u32,
    p: f64,
    q: f64,
    pair: CoincidencePair,
) -> Result<BoundResult> {
    let m = check_degree(m)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    let CoincidencePair { t, s } = CoincidencePair::new(pair.t, pair.s)?;
    let p_side = 1.0 / p - 1.0 / t;
    let q_side = m / s - m / q;
    Ok(smallest_branch(
        [
            Branch {
                label: "(a) p <= t, s <= q",
                applies: le(p, t) && le(s, q),
                value: p_side + q_side,
            },
            Branch {
                label: "(b) p <= t, q <= s",
                applies: le(p, t) && le(q, s),
                value: p_side,
            },
            Branch {
                label: "(c) t <= p, s <= q",
                applies: le(t, p) && le(s, q),
                value: q_side,
            },
            Branch {
                label: "(d) t <= p, q <= s",
                applies: le(t, p) && le(q, s),
                value: 0.0,
            },
        ],
        "pol_upper_from_coincidence",
    ))
}

/// The optimal `t` with `L(E_1,…,E_m;F) = Π^mult_{t,s}` when `F` has finite
/// cotype `r`: `t = sr / (s − msr + mr)`.
pub fn cotype_coincidence_t(m: u32, r: f64, s: f64) -> Result<f64> {
    const NAME: &str = "cotype_coincidence_t";
    let mf = check_degree(m)?;
    check_cotype(r)?;
    if r.is_infinite() {
        return Err(Error::region(NAME, "codomain has no finite cotype"));
    }
    if !(s >= 1.0 && s < 2.0) {
        return Err(Error::region(NAME, format!("s not in [1,2) (s = {s})")));
    }
    // s = 1 makes the bound s/(r(s-1)) infinite.
    if s > 1.0 {
        let limit = s / (r * (s - 1.0));
        if !lt(mf, limit) {
            return Err(Error::region(
                NAME,
                format!("m >= s/(r(s-1)) (m = {m}, s/(r(s-1)) = {limit})"),
            ));
        }
    }
    let denominator = s - mf * s * r + mf * r;
    debug_assert!(denominator > 0.0);
    Ok(s * r / denominator)
}

/// The largest `s` with `L(E_1,…,E_m;K) = Π^mult_{t,s}`.
pub fn scalar_coincidence_s(m: u32, t: f64) -> Result<f64> {
    const NAME: &str = "scalar_coincidence_s";
    let mf = check_degree(m)?;
    check_positive("t", t)?;
    let lowest = 2.0 * mf / (mf + 1.0);
    if lt(t, lowest) {
        return Err(Error::region(
            NAME,
            format!("t < 2m/(m+1) (t = {t}, 2m/(m+1) = {lowest})"),
        ));
    }
    let t = t.max(lowest);
    Ok(if le(t, 2.0) {
        2.0 * mf * t / (mf * t + 2.0 * mf - t)
    } else {
        mf * t / (mf * t + 1.0 - t)
    })
}

/// Upper bound on the multilinear index when `F` has finite cotype `r`,
/// through the coincidence `(t, s)` with `t = sr/(s − msr + mr)`.
///
/// `s` defaults to 1, which drops the restriction on `m` and gives `t = r`.
pub fn cornbd_upper(m: u32, r: f64, p: f64, q: f64, s: Option<f64>) -> Result<BoundResult> {
    let s = s.unwrap_or(1.0);
    let t = cotype_coincidence_t(m, r, s)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    let mf = m as f64;
    let threshold = mf * r * t / (r - t + mf * r * t);
    let region = |label: &str| format!("{label} (t = {t}, q threshold = {threshold})");
    let candidates = [
        (
            "(a) p <= t, q >= mrt/(r-t+mrt)",
            le(p, t) && le(threshold, q),
            mf / p + mf - 1.0 / r - mf / q - (mf - 1.0) / t,
        ),
        (
            "(b) p <= t, q <= mrt/(r-t+mrt)",
            le(p, t) && le(q, threshold),
            mf / p - mf / t,
        ),
        (
            "(c) t <= p, q >= mrt/(r-t+mrt)",
            le(t, p) && le(threshold, q),
            mf - 1.0 / r + 1.0 / t - mf / q,
        ),
        ("(d) t <= p, q <= mrt/(r-t+mrt)", le(t, p) && le(q, threshold), 0.0),
    ];
    let (label, _, value) = candidates
        .into_iter()
        .filter(|c| c.1)
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("the four branches cover every (p, q)");
    Ok(BoundResult::new(value, Direction::Upper, region(label), "cornbd_upper"))
}
