//! Moduli of the complex roots of a rational polynomial.
//!
//! The polynomial is split exactly into square-free parts first, so repeated
//! roots (unipotent characteristic polynomials, say) come out exact and the
//! numerical stage only ever sees simple roots. Each part is rescaled by a
//! power of two so its roots have modulus O(1); linear and quadratic parts use
//! closed forms, higher degrees use Aberth–Ehrlich iteration followed by
//! Newton polishing.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

use super::poly::Poly;
use super::rational::{frac, log2_estimate, scale_pow2, to_f64, Rational};

/// A root modulus written as `mantissa · 2^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct ScaledModulus {
    mantissa: f64,
    exponent: i64,
}

impl ScaledModulus {
    fn value(self) -> f64 {
        self.mantissa * 2f64.powi(self.exponent as i32)
    }

    fn ln(self) -> f64 {
        self.mantissa.ln() + self.exponent as f64 * LN_2
    }
}

/// Moduli of the complex roots of `p`, with multiplicity, sorted decreasing.
pub fn complex_root_moduli(p: &Poly) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = scaled_moduli(p)?.into_iter().map(|m| m.map_or(0.0, ScaledModulus::value)).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Natural logarithms of the root moduli (−∞ for zero roots), sorted
/// decreasing. Robust to moduli outside the range of `f64`.
pub fn complex_root_log_moduli(p: &Poly) -> Result<Vec<f64>> {
    let mut out: Vec<f64> =
        scaled_moduli(p)?.into_iter().map(|m| m.map_or(f64::NEG_INFINITY, ScaledModulus::ln)).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

fn scaled_moduli(p: &Poly) -> Result<Vec<Option<ScaledModulus>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let zero_roots = p.order_at_zero().unwrap_or(0);
    let shifted = Poly::new(p.coeffs()[zero_roots..].to_vec());
    let mut out = vec![None; zero_roots];
    for (factor, multiplicity) in shifted.squarefree_factors() {
        for m in squarefree_moduli(&factor)? {
            out.extend(std::iter::repeat_n(Some(m), multiplicity));
        }
    }
    Ok(out)
}

/// Power-of-two exponent k such that the roots of f(2^k y) are O(1).
fn root_scale_exponent(f: &Poly) -> i64 {
    let d = f.degree().expect("nonzero") as i64;
    let lead = log2_estimate(f.leading().expect("nonzero"));
    f.coeffs()
        .iter()
        .enumerate()
        .take(d as usize)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let e = log2_estimate(c) - lead;
            // ceil(e / (d - i))
            e.div_euclid(d - i as i64) + i64::from(e.rem_euclid(d - i as i64) != 0)
        })
        .max()
        .unwrap_or(0)
}

/// Monic g(y) = f(2^k y) / (lc · 2^{k d}), exact.
fn rescaled(f: &Poly, k: i64) -> Poly {
    let d = f.degree().expect("nonzero") as i64;
    let lc_inv = f.leading().expect("nonzero").recip();
    Poly::new(f.coeffs().iter().enumerate().map(|(i, c)| scale_pow2(&(c * &lc_inv), k * (i as i64 - d))).collect())
}

fn squarefree_moduli(f: &Poly) -> Result<Vec<ScaledModulus>> {
    let d = f.degree().expect("nonzero");
    let k = root_scale_exponent(f);
    let g = rescaled(f, k);
    let wrap = |mantissa: f64| ScaledModulus { mantissa, exponent: k };
    let mantissas = match d {
        1 => vec![to_f64(&g.coeff(0)).abs()],
        2 => quadratic_moduli(&g),
        _ => aberth(g.coeffs())?.into_iter().map(|z| z.norm()).collect(),
    };
    Ok(mantissas.into_iter().map(wrap).collect())
}

/// Moduli of the roots of the monic y² + b y + c.
fn quadratic_moduli(g: &Poly) -> Vec<f64> {
    let b = g.coeff(1);
    let c = g.coeff(0);
    let disc: Rational = &b * &b - &c * frac(4, 1);
    if disc.is_negative() {
        let r = to_f64(&c).sqrt();
        return vec![r, r];
    }
    let sq = to_f64(&disc).sqrt();
    let bf = to_f64(&b);
    let cf = to_f64(&c);
    if bf == 0.0 {
        let r = sq / 2.0;
        return vec![r, r];
    }
    let y1 = -(bf + bf.signum() * sq) / 2.0;
    vec![y1.abs(), (cf / y1).abs()]
}

/// Horner evaluation of p and p' at z (real coefficients, low degree first).
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// (i, log|a_i|).
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> =
        coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| (i, c.abs().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (i1, l1) = hull[hull.len() - 2];
            let (i2, l2) = hull[hull.len() - 1];
            // drop the middle point when it lies on or below the chord
            let cross = (i2 as f64 - i1 as f64) * (p.1 - l1) - (l2 - l1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(d);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp();
        for m in 0..count {
            let angle = 2.0 * PI * (m as f64) / count as f64 + 2.0 * PI * i as f64 / d as f64 + 0.4;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

/// All roots of a monic real polynomial with nonzero constant term.
fn aberth(exact: &[Rational]) -> Result<Vec<Complex64>> {
    let coeffs: Vec<f64> = exact.iter().map(to_f64).collect();
    let coeffs = coeffs.as_slice();
    let d = coeffs.len() - 1;
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; d];
    for _ in 0..2000 {
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(coeffs, z[k]);
            let zn = z[k].norm();
            let noise = 2.0 * d as f64 * f64::EPSILON * coeffs.iter().rev().fold(0.0, |acc, c| acc * zn + c.abs());
            if p.norm() <= noise {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::RootFinding(d));
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&c| c) {
            polish(exact, &mut z);
            return Ok(z);
        }
    }
    Err(Error::RootFinding(d))
}

/// p(z) and p'(z) evaluated exactly at the rational point nearest z.
fn exact_horner(coeffs: &[Rational], z: Complex64) -> (Complex64, Complex64) {
    let re = Rational::from_float(z.re).unwrap_or_else(Rational::zero);
    let im = Rational::from_float(z.im).unwrap_or_else(Rational::zero);
    let zero = || (Rational::zero(), Rational::zero());
    let mul = |a: &(Rational, Rational)| (&a.0 * &re - &a.1 * &im, &a.0 * &im + &a.1 * &re);
    let (mut p, mut dp) = (zero(), zero());
    for c in coeffs.iter().rev() {
        let t = mul(&dp);
        dp = (t.0 + &p.0, t.1 + &p.1);
        let t = mul(&p);
        p = (t.0 + c, t.1);
    }
    let f = |v: (Rational, Rational)| Complex64::new(to_f64(&v.0), to_f64(&v.1));
    (f(p), f(dp))
}

/// Newton steps with exactly evaluated residuals; the attainable accuracy is
/// then set by rounding z, not by the conditioning of the coefficients.
fn polish(coeffs: &[Rational], z: &mut [Complex64]) {
    for zk in z.iter_mut() {
        for _ in 0..4 {
            let (p, dp) = exact_horner(coeffs, *zk);
            if dp == Complex64::zero() || p == Complex64::zero() {
                break;
            }
            let step = p / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *zk -= step;
            if step.norm() <= f64::EPSILON * zk.norm() {
                break;
            }
        }
    }
}

/// Newton inclusion radius d·|p(z)/p'(z)|, with p evaluated exactly: a disc
/// of this radius about z contains a root of p.
pub fn inclusion_radius(p: &Poly, z: Complex64) -> f64 {
    let (v, dv) = exact_horner(p.coeffs(), z);
    p.degree().unwrap_or(0) as f64 * (v / dv).norm()
}

/// Complex roots of a rational polynomial of degree ≥ 1 with nonzero constant
/// term (no square-free splitting, no rescaling). Used to recover root
/// positions for diagnostics.
pub fn complex_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(Vec::new());
    }
    aberth(p.monic().coeffs())
}
