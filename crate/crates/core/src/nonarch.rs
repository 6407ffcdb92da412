//! Translation and Cartan vectors over valued fields, computed exactly.
//!
//! The valuation ring of `AtInfinity` is handled by substituting u = 1/t,
//! which turns it into the t-adic ring; the elimination itself only ever
//! sees a discrete valuation with a uniformizer of valuation 1.

use crate::chamber::{project_type, ChamberVector};
use crate::error::{Error, Result};
use crate::exact_arith::{newton_polygon_root_valuations, ExtInt, RatFunc, Rational, Valuation};
use crate::matrix::Matrix;

/// g ∈ SL_n(ℚ(t)) together with the valuation of the field it acts over.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuedMatrix {
    matrix: Matrix<RatFunc>,
    valuation: Valuation,
}

impl ValuedMatrix {
    pub fn new(matrix: Matrix<RatFunc>, valuation: Valuation) -> Result<Self> {
        if let Valuation::PAdic(_) = valuation {
            if let Some(f) = matrix.entries().find(|f| !f.is_constant()) {
                return Err(Error::NonConstantPAdic(f.to_string()));
            }
        }
        let det = matrix.det();
        if det != RatFunc::one() {
            return Err(Error::Determinant(det.to_string()));
        }
        Ok(ValuedMatrix { matrix, valuation })
    }

    pub fn matrix(&self) -> &Matrix<RatFunc> {
        &self.matrix
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn rank(&self) -> usize {
        self.matrix.size()
    }
}

/// Sorted (−val) of the eigenvalues, read off the Newton polygon of the
/// characteristic polynomial.
pub fn jordan_vector_trop(g: &ValuedMatrix) -> Result<ChamberVector<Rational>> {
    let vals = newton_polygon_root_valuations(&g.matrix.charpoly(), g.valuation)?;
    project_type(vals.into_iter().map(|v| -v).collect())
}

fn finite(v: ExtInt) -> i64 {
    v.finite().expect("nonzero entry")
}

/// Exponents a₁ ≤ … ≤ a_n of the Smith form u·diag(π^{a_i})·v over the
/// valuation ring.
pub fn smith_exponents(g: &ValuedMatrix) -> Result<Vec<i64>> {
    let (mut a, w) = match g.valuation {
        Valuation::Trivial => return Err(Error::NonDiscreteValuation(g.valuation.to_string())),
        Valuation::AtInfinity => (g.matrix.map(RatFunc::invert_variable), Valuation::TAdic),
        w => (g.matrix.clone(), w),
    };
    let n = a.size();
    let mut exponents = Vec::with_capacity(n);
    for k in 0..n {
        let mut pivot: Option<(usize, usize, ExtInt)> = None;
        for i in k..n {
            for j in k..n {
                let v = a.get(i, j).val(w)?;
                if pivot.as_ref().is_none_or(|p| v < p.2) {
                    pivot = Some((i, j, v));
                }
            }
        }
        let (pi, pj, pv) = pivot.expect("nonempty block");
        if pv == ExtInt::Infinity {
            return Err(Error::Singular);
        }
        swap_rows(&mut a, k, pi);
        swap_cols(&mut a, k, pj);
        let p = a.get(k, k).clone();
        for i in k + 1..n {
            let factor = a.get(i, k).div(&p).expect("nonzero pivot");
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                a.set(i, j, v);
            }
        }
        // The remaining entries of row k are cleared by column operations
        // with integral multipliers; they do not affect the block below.
        exponents.push(finite(pv));
    }
    Ok(exponents)
}

fn swap_rows(a: &mut Matrix<RatFunc>, r: usize, s: usize) {
    if r == s {
        return;
    }
    for j in 0..a.size() {
        let x = a.get(r, j).clone();
        let y = a.get(s, j).clone();
        a.set(r, j, y);
        a.set(s, j, x);
    }
}

fn swap_cols(a: &mut Matrix<RatFunc>, c: usize, d: usize) {
    if c == d {
        return;
    }
    for i in 0..a.size() {
        let x = a.get(i, c).clone();
        let y = a.get(i, d).clone();
        a.set(i, c, y);
        a.set(i, d, x);
    }
}

/// Cartan projection on the building: sorted decreasing (−a_i).
pub fn cartan_vector_trop(g: &ValuedMatrix) -> Result<ChamberVector<Rational>> {
    let exps = smith_exponents(g)?;
    project_type(exps.into_iter().map(|a| Rational::from_integer((-a).into())).collect())
}
