//! Root valuations from the Newton polygon.

use crate::error::{Error, Result};

use super::ratfunc::RatFunc;
use super::rational::Rational;
use super::valuation::{ExtInt, Valuation};

/// Valuations of the roots of the monic polynomial Σ a_i λ^i (coefficients
/// low degree first) in an algebraic closure, sorted increasing.
///
/// A hull edge from (i, val a_i) to (j, val a_j) contributes j − i roots of
/// valuation (val a_i − val a_j)/(j − i). So λ² − (t + 1/t)λ + 1 at infinity
/// gives {−1, 1}: the roots are t and 1/t.
pub fn newton_polygon_root_valuations(coeffs: &[RatFunc], w: Valuation) -> Result<Vec<Rational>> {
    let Some(lead) = coeffs.last() else {
        return Err(Error::ZeroPolynomial);
    };
    if lead != &RatFunc::one() {
        return Err(Error::NotMonic);
    }
    if coeffs[0].is_zero() {
        return Err(Error::ZeroRoot);
    }
    let mut points = Vec::with_capacity(coeffs.len());
    for (i, a) in coeffs.iter().enumerate() {
        if let ExtInt::Finite(v) = a.val(w)? {
            points.push((i as i64, v));
        }
    }
    let hull = lower_hull(&points);
    let mut out = Vec::with_capacity(coeffs.len() - 1);
    for edge in hull.windows(2) {
        let (i, vi) = edge[0];
        let (j, vj) = edge[1];
        let slope = Rational::new((vi - vj).into(), (j - i).into());
        out.extend(std::iter::repeat_n(slope, (j - i) as usize));
    }
    out.sort();
    Ok(out)
}

/// Lower convex hull of points sorted by abscissa; collinear interior points
/// are dropped.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 - x1) as i128 * (p.1 - y1) as i128 - (y2 - y1) as i128 * (p.0 - x1) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}
