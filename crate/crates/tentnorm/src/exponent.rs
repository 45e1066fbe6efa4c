//! Extended exponents in `[1, ∞]` and their conjugates.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An aggregation exponent: either a finite value in `[1, ∞)` or `∞`.
///
/// `∞` turns the corresponding `ℓ^p`-style sum into a maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// Builds an exponent from a float; `f64::INFINITY` maps to [`Exponent::Infinite`].
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 1.0 {
            return Err(Error::InvalidExponent(value));
        }
        if value.is_infinite() {
            Ok(Exponent::Infinite)
        } else {
            Ok(Exponent::Finite(value))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn is_one(self) -> bool {
        matches!(self, Exponent::Finite(v) if v == 1.0)
    }

    /// The numeric value, with `∞` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// The Hölder conjugate: `1/p + 1/p' = 1`, with `1' = ∞` and `∞' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinite => Exponent::ONE,
            Exponent::Finite(v) if v == 1.0 => Exponent::Infinite,
            Exponent::Finite(v) => Exponent::Finite(v / (v - 1.0)),
        }
    }

    /// Two-term aggregation of nonnegative inputs: `(x^p + y^p)^{1/p}`, or
    /// `max(x, y)` when the exponent is `∞`.  A zero operand short-circuits,
    /// so one-sided merges are exact rather than `powf` round-trips.
    pub fn pair_norm(self, x: f64, y: f64) -> f64 {
        debug_assert!(x >= 0.0 && y >= 0.0);
        if x == 0.0 {
            return y;
        }
        if y == 0.0 {
            return x;
        }
        match self {
            Exponent::Infinite => x.max(y),
            Exponent::Finite(p) if p == 1.0 => x + y,
            Exponent::Finite(p) => (x.powf(p) + y.powf(p)).powf(1.0 / p),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Exponent::Infinite);
        }
        let v: f64 = t.parse().map_err(|_| Error::ExponentParse(s.to_string()))?;
        Exponent::new(v).map_err(|_| Error::ExponentParse(s.to_string()))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// `|x|^p` for a finite exponent; shared by every aggregation path so that
/// independently computed sums agree bit for bit.
pub(crate) fn pow_abs(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x.abs()
    } else if p == 2.0 {
        x * x
    } else {
        x.abs().powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_displays() {
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::TWO);
        assert_eq!("1.5".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!("INF".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!(Exponent::Finite(1.5).to_string(), "1.5");
        assert_eq!(Exponent::Infinite.to_string(), "inf");
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("-1".parse::<Exponent>().is_err());
        assert!("nan".parse::<Exponent>().is_err());
        assert!("".parse::<Exponent>().is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(Exponent::ONE.conjugate(), Exponent::Infinite);
        assert_eq!(Exponent::Infinite.conjugate(), Exponent::ONE);
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        let p = Exponent::Finite(1.5).conjugate();
        assert!((p.value() - 3.0).abs() < 1e-15);
        // Conjugation is an involution on the open range.
        let q = Exponent::Finite(3.0).conjugate().conjugate();
        assert!((q.value() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn pair_norm_cases() {
        assert_eq!(Exponent::ONE.pair_norm(1.0, 2.0), 3.0);
        assert_eq!(Exponent::Infinite.pair_norm(1.0, 2.0), 2.0);
        assert!((Exponent::TWO.pair_norm(3.0, 4.0) - 5.0).abs() < 1e-12);
        assert_eq!(Exponent::TWO.pair_norm(0.0, 0.0), 0.0);
    }

    #[test]
    fn serde_round_trip() {
        let e: Exponent = serde_json::from_str("\"1.5\"").unwrap();
        assert_eq!(e, Exponent::Finite(1.5));
        assert_eq!(serde_json::to_string(&Exponent::Infinite).unwrap(), "\"inf\"");
    }
}
