//! Exact rational passenger weights.
//!
//! Weights enter through instance files as decimal strings ("40", "7.2") and
//! are kept as exact rationals so that objective comparisons never hinge on
//! floating-point ties. A weight parsed from a decimal always has a
//! denominator of the form 2^a·5^b and therefore prints back as a finite
//! decimal; printing is canonical (no trailing zeros, no decimal point for
//! integers), which is what makes instance-file round-trips byte-identical.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// A nonnegative exact rational, ordered and hashable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Ratio<i64>);

/// Failure to parse a decimal weight string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWeightError(pub String);

impl fmt::Display for ParseWeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid weight {:?}: expected a nonnegative decimal like \"40\" or \"7.2\"", self.0)
    }
}

impl std::error::Error for ParseWeightError {}

impl Weight {
    pub const ZERO: Weight = Weight(Ratio::new_raw(0, 1));

    pub fn from_integer(v: i64) -> Self {
        Weight(Ratio::from_integer(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Underlying reduced fraction as (numerator, denominator).
    pub fn as_fraction(&self) -> (i64, i64) {
        (*self.0.numer(), *self.0.denom())
    }

    /// Product with an integer tension value.
    pub fn times(&self, factor: i64) -> Weight {
        Weight(self.0 * Ratio::from_integer(factor))
    }

    /// Exact quotient of two integers (reduced).
    pub(crate) fn from_fraction(numer: i64, denom: i64) -> Weight {
        Weight(Ratio::new(numer, denom))
    }

    /// Whether the value has a finite decimal expansion (and therefore an
    /// exact textual form for formats that only speak decimals).
    pub fn has_decimal_form(&self) -> bool {
        let mut rest = *self.0.denom();
        for p in [2, 5] {
            while rest % p == 0 {
                rest /= p;
            }
        }
        rest == 1
    }

    /// Renders the exact decimal expansion if one exists (denominator of the
    /// form 2^a·5^b), which holds for every weight parsed from a decimal
    /// string. Falls back to `numer/denom` otherwise.
    fn write_decimal(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.numer() < &0 {
            f.write_str("-")?;
            return Weight(-self.0).write_decimal(f);
        }
        let numer = *self.0.numer();
        let denom = *self.0.denom();
        if denom == 1 {
            return write!(f, "{numer}");
        }
        // Scale the denominator up to the next power of ten, if possible.
        let (mut twos, mut fives, mut rest) = (0u32, 0u32, denom);
        while rest % 2 == 0 {
            twos += 1;
            rest /= 2;
        }
        while rest % 5 == 0 {
            fives += 1;
            rest /= 5;
        }
        if rest != 1 {
            return write!(f, "{numer}/{denom}");
        }
        let digits = twos.max(fives);
        let scale = 10i64.pow(digits) / denom;
        let scaled = numer * scale;
        let whole = scaled / 10i64.pow(digits);
        let mut frac = (scaled % 10i64.pow(digits)).to_string();
        while frac.len() < digits as usize {
            frac.insert(0, '0');
        }
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            write!(f, "{whole}")
        } else {
            write!(f, "{whole}.{frac}")
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_decimal(f)
    }
}

impl FromStr for Weight {
    type Err = ParseWeightError;

    /// Parses `digits` or `digits.digits` exactly; no sign, no exponent.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseWeightError(s.to_owned());
        let (whole, frac) = match s.split_once('.') {
            Some((w, fr)) => (w, fr),
            None => (s, ""),
        };
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if s.contains('.') && (frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit())) {
            return Err(bad());
        }
        let digits: String = [whole, frac].concat();
        let numer: i64 = digits.parse().map_err(|_| bad())?;
        let denom = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(bad)?;
        Ok(Weight(Ratio::new(numer, denom)))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Mul<i64> for Weight {
    type Output = Weight;
    fn mul(self, rhs: i64) -> Weight {
        self.times(rhs)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl Weight {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl serde::Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_decimals() {
        assert_eq!("40".parse::<Weight>().unwrap(), Weight::from_integer(40));
        let w: Weight = "7.2".parse().unwrap();
        assert_eq!(w.as_fraction(), (36, 5));
        assert_eq!("0".parse::<Weight>().unwrap(), Weight::ZERO);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", ".", "1.", ".5", "-1", "1e3", "1.2.3", " 1", "1/2"] {
            assert!(bad.parse::<Weight>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn prints_canonical_decimals() {
        for (input, canonical) in [
            ("40", "40"),
            ("7.2", "7.2"),
            ("7.20", "7.2"),
            ("0.25", "0.25"),
            ("10.00", "10"),
            ("0", "0"),
            ("25287.14", "25287.14"),
        ] {
            let w: Weight = input.parse().unwrap();
            assert_eq!(w.to_string(), canonical);
        }
    }

    #[test]
    fn arithmetic_is_exact() {
        let a: Weight = "0.1".parse().unwrap();
        let b: Weight = "0.2".parse().unwrap();
        let c: Weight = "0.3".parse().unwrap();
        assert_eq!(a + b, c);
        assert_eq!(c.times(10), Weight::from_integer(3));
    }

    #[test]
    fn sums_match_reordered_sums() {
        let parts: Vec<Weight> = ["7.2", "0.05", "40", "0.75"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let forward: Weight = parts.iter().copied().sum();
        let backward: Weight = parts.iter().rev().copied().sum();
        assert_eq!(forward, backward);
        assert_eq!(forward.to_string(), "48");
    }
}
