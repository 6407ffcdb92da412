//! Exact scalar tower: rationals, polynomials, rational functions, their
//! valuations, root moduli and Newton polygons.

pub mod newton;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod roots;
pub mod valuation;

pub use newton::newton_polygon_root_valuations;
pub use poly::Poly;
pub use ratfunc::{RatFunc, RatFuncRepr, ScalarRepr};
pub use rational::{format_rational, frac, int, parse_rational, Rational};
pub use roots::{complex_root_log_moduli, complex_root_moduli};
pub use valuation::{ExtInt, Prime, Valuation};
