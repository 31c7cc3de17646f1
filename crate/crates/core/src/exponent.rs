use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// An exponent in `[1, ∞]`, as used for `ℓ_p` spaces and their duals.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Parameter(format!("exponent {p} is not in [1, inf]")));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// The conjugate exponent `p*` with `1/p + 1/p* = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Exponent::INFINITY
        } else if self.0.is_infinite() {
            Exponent::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// The `ℓ_p` norm of a real vector.
    pub fn norm(self, v: &[f64]) -> f64 {
        lp_norm(v.iter().map(|x| x.abs()), self.0)
    }
}

/// `(Σ |x|^p)^{1/p}` for any `p > 0`, with `p = ∞` giving the maximum.
pub fn lp_norm(abs_values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return abs_values.fold(0.0, f64::max);
    }
    let values: Vec<f64> = abs_values.collect();
    let scale = values.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return values.iter().sum();
    }
    let sum: f64 = values.iter().map(|&x| (x / scale).powf(p)).sum();
    scale * sum.powf(1.0 / p)
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::INFINITY),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Parameter(format!("cannot parse exponent {other:?}")))
                .and_then(Exponent::new),
        }
    }
}

// JSON has no infinity, so infinite exponents travel as the string "inf".
impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        let parsed = match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Exponent::new(x),
            Repr::Str(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(Exponent::ONE.conjugate(), Exponent::INFINITY);
        assert_eq!(Exponent::INFINITY.conjugate(), Exponent::ONE);
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        let p = Exponent::new(3.0).unwrap();
        assert!((p.reciprocal() + p.conjugate().reciprocal() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_below_one() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn norms() {
        let v = [3.0, -4.0];
        assert_eq!(Exponent::ONE.norm(&v), 7.0);
        assert!((Exponent::TWO.norm(&v) - 5.0).abs() < 1e-15);
        assert_eq!(Exponent::INFINITY.norm(&v), 4.0);
        assert_eq!(lp_norm([1.0, 1.0, 1.0, 1.0].into_iter(), 0.5), 16.0);
    }

    #[test]
    fn json_infinity() {
        let s = serde_json::to_string(&Exponent::INFINITY).unwrap();
        assert_eq!(s, "\"inf\"");
        let back: Exponent = serde_json::from_str(&s).unwrap();
        assert!(back.is_infinite());
        let two: Exponent = serde_json::from_str("2.0").unwrap();
        assert_eq!(two, Exponent::TWO);
    }
}
