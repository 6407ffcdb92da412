//! Exact rational functions in one variable t over ℚ.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::poly::Poly;
use super::rational::{format_rational, int, padic_valuation, parse_rational, Rational};
use super::valuation::{ExtInt, Valuation};

/// `num / den` with gcd(num, den) = 1 and den monic. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) =
            if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lc = den.leading().cloned().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_i64(c: i64) -> Self {
        RatFunc::constant(int(c))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_i64(1)
    }

    /// The variable t.
    pub fn t() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    /// c · t^k for any integer k.
    pub fn monomial(c: Rational, k: i32) -> Self {
        let m = Poly::monomial(k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc::from_poly(m.scale(&c))
        } else {
            RatFunc::normalized(Poly::constant(c), m)
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value if this function is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::normalized(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::normalized(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        (!self.is_zero()).then(|| RatFunc::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        RatFunc::normalized(self.num.pow(k), self.den.pow(k))
    }

    /// The valuation of this function; `+∞` for zero.
    pub fn val(&self, w: Valuation) -> Result<ExtInt> {
        if self.is_zero() {
            return Ok(ExtInt::Infinity);
        }
        let deg = |p: &Poly| p.degree().expect("nonzero") as i64;
        let ord = |p: &Poly| p.order_at_zero().expect("nonzero") as i64;
        let v = match w {
            Valuation::TAdic => ord(&self.num) - ord(&self.den),
            Valuation::AtInfinity => deg(&self.den) - deg(&self.num),
            Valuation::Trivial => 0,
            Valuation::PAdic(p) => {
                let c = self.as_constant().ok_or_else(|| Error::NonConstantPAdic(self.to_string()))?;
                padic_valuation(&c, p.get())
            }
        };
        Ok(ExtInt::Finite(v))
    }

    /// f(1/u) as a function of u; swaps the roles of `AtInfinity` and `TAdic`.
    pub fn invert_variable(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dn = self.num.degree().expect("nonzero");
        let dd = self.den.degree().expect("nonzero");
        RatFunc::normalized(self.num.reversed().mul(&Poly::monomial(dd)), self.den.reversed().mul(&Poly::monomial(dn)))
    }

    /// Floating evaluation at `s`; fails when the denominator at `s` is below
    /// 1e−12 relative to its coefficient scale.
    pub fn eval_at(&self, s: f64) -> Result<f64> {
        let den = self.den.eval_f64(s);
        let scale = self.den.abs_eval_f64(s);
        if !(den.abs() > 1e-12 * scale) {
            return Err(Error::Pole { s, den });
        }
        Ok(self.num.eval_f64(s) / den)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, s: &Rational) -> Result<Rational> {
        let den = self.den.eval(s);
        if den.is_zero() {
            return Err(Error::Pole { s: super::rational::to_f64(s), den: 0.0 });
        }
        Ok(self.num.eval(s) / den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Serialized form: `{"num": [...], "den": [...]}` with rational strings, low
/// degree first, or a bare rational string for a constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatFuncRepr {
    Constant(ScalarRepr),
    Fraction {
        num: Vec<ScalarRepr>,
        #[serde(default)]
        den: Option<Vec<ScalarRepr>>,
    },
}

/// A rational written as a string (`"p/q"`) or a JSON integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Text(String),
    Integer(i64),
}

impl ScalarRepr {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            ScalarRepr::Text(s) => parse_rational(s),
            ScalarRepr::Integer(i) => Ok(int(*i)),
        }
    }
}

fn poly_from_repr(coeffs: &[ScalarRepr]) -> Result<Poly> {
    Ok(Poly::new(coeffs.iter().map(ScalarRepr::to_rational).collect::<Result<_>>()?))
}

impl RatFuncRepr {
    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        match self {
            RatFuncRepr::Constant(c) => Ok(RatFunc::constant(c.to_rational()?)),
            RatFuncRepr::Fraction { num, den } => {
                let num = poly_from_repr(num)?;
                let den = match den {
                    Some(d) => poly_from_repr(d)?,
                    None => Poly::one(),
                };
                RatFunc::new(num, den).map_err(|_| Error::Parse("zero denominator".into()))
            }
        }
    }
}

impl From<&RatFunc> for RatFuncRepr {
    fn from(f: &RatFunc) -> Self {
        let text = |p: &Poly| p.coeffs().iter().map(|c| ScalarRepr::Text(format_rational(c))).collect::<Vec<_>>();
        RatFuncRepr::Fraction { num: text(&f.num), den: Some(text(&f.den)) }
    }
}
