//! Discrete valuations on ℚ(t) and the extended integers they take values in.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

use super::rational::is_prime;

/// A value in ℤ ∪ {+∞}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            ExtInt::Infinity => None,
        }
    }
}

impl Add for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinity,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::Infinity => write!(f, "+inf"),
        }
    }
}

/// A prime number, checked at construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Which valuation of ℚ(t) to use.
///
/// `TAdic` is the order of vanishing at t = 0 and `AtInfinity` is
/// deg(den) − deg(num), so that val(t) = −1 and |f| = e^{−val f} grows with t.
/// `PAdic` is only defined on constants.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Valuation {
    TAdic,
    AtInfinity,
    PAdic(Prime),
    Trivial,
}

impl Valuation {
    pub fn p_adic(p: u64) -> Result<Self> {
        Ok(Valuation::PAdic(Prime::new(p)?))
    }

    pub fn is_discrete(self) -> bool {
        !matches!(self, Valuation::Trivial)
    }

    /// Parses `"t-adic"`, `"at-infinity"`, `"p-adic:<p>"`, or `"trivial"`.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "t-adic" => Ok(Valuation::TAdic),
            "at-infinity" => Ok(Valuation::AtInfinity),
            "trivial" => Ok(Valuation::Trivial),
            other => {
                let p = other
                    .strip_prefix("p-adic:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown valuation {text:?}")))?;
                Valuation::p_adic(p)
            }
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::TAdic => write!(f, "t-adic"),
            Valuation::AtInfinity => write!(f, "at-infinity"),
            Valuation::PAdic(p) => write!(f, "p-adic:{}", p.get()),
            Valuation::Trivial => write!(f, "trivial"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_int_order() {
        assert!(ExtInt::Finite(i64::MAX) < ExtInt::Infinity);
        assert_eq!(ExtInt::Finite(2) + ExtInt::Finite(-5), ExtInt::Finite(-3));
        assert_eq!(ExtInt::Finite(2) + ExtInt::Infinity, ExtInt::Infinity);
    }

    #[test]
    fn parse_and_display() {
        for text in ["t-adic", "at-infinity", "p-adic:7", "trivial"] {
            assert_eq!(Valuation::parse(text).unwrap().to_string(), text);
        }
        assert_eq!(Valuation::parse("p-adic:9"), Err(Error::NotPrime(9)));
        assert!(Valuation::parse("p-adic:").is_err());
        assert!(!Valuation::Trivial.is_discrete());
    }
}
