//! Algebraic families ρ_t of representations over ℚ(t): real samples at
//! t = s, the exact tropical spectrum read at the place t = ∞, and the
//! comparison of the two after rescaling by log s.

use num_traits::Zero;

use crate::chamber::{proj_distance, ChamberVector, Spectrum};
use crate::displacement::{min_displacement, MinDisplacement};
use crate::error::{Error, Result};
use crate::exact_arith::{RatFunc, Rational, Valuation};
use crate::groups::{RealRepresentation, Representation, ValuedRepresentation, Word};
use crate::matrix::Matrix;

/// Relative slack allowed when checking that a sequence is non-increasing.
pub const MONOTONE_SLACK: f64 = 0.1;
/// Tolerance of the displacement minimization used by [`RescaleMode::ByLambda`].
pub const LAMBDA_TOL: f64 = 1e-6;

/// Generator images in SL_n(ℚ(t)).
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    rank: usize,
    generators: Vec<Matrix<RatFunc>>,
}

impl Family {
    /// Checks that every generator has determinant identically 1.
    pub fn new(generators: Vec<Matrix<RatFunc>>) -> Result<Self> {
        let rep = Representation::new(generators)?;
        Ok(Family { rank: rep.rank(), generators: rep.images().to_vec() })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Matrix<RatFunc>] {
        &self.generators
    }

    /// The family as a representation over ℚ(t) with the valuation at infinity.
    pub fn valued(&self) -> Result<ValuedRepresentation> {
        Ok(ValuedRepresentation {
            rep: Representation::new(self.generators.clone())?,
            valuation: Valuation::AtInfinity,
        })
    }

    /// ρ_s, evaluated exactly at the binary rational equal to `s`.
    ///
    /// Poles are detected on the floating denominator (relative threshold
    /// 1e−12); the exact evaluation then keeps det ρ_s(g) = 1 exactly.
    pub fn sample(&self, s: f64) -> Result<RealRepresentation> {
        if !(s > 1.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!("sample parameter {s} must be a finite number > 1")));
        }
        let point = Rational::from_float(s).expect("finite");
        let images = self
            .generators
            .iter()
            .map(|g| {
                g.try_map(|f| {
                    f.eval_at(s)?;
                    f.eval_exact(&point)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RealRepresentation::new(images)
    }

    /// v∘ρ_ω on the given words, exact.
    pub fn tropical_spectrum(&self, words: &[Word]) -> Result<Spectrum<Rational>> {
        self.valued()?.spectrum(words)
    }
}

/// Normalization of the sampled spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RescaleMode {
    /// Divide by log s.
    ByLogS,
    /// Divide by the computed λ(ρ_s).
    ByLambda,
}

/// A sampled spectrum divided by a scale factor.
#[derive(Clone, Debug)]
pub struct Rescaled {
    pub spectrum: Spectrum<f64>,
    pub scale: f64,
    /// Present in [`RescaleMode::ByLambda`]; check its `converged` flag.
    pub lambda: Option<MinDisplacement>,
}

pub fn rescaled_spectrum(fam: &Family, s: f64, words: &[Word], mode: RescaleMode) -> Result<Rescaled> {
    let rep = fam.sample(s)?;
    let raw = rep.spectrum(words)?;
    let (scale, lambda) = match mode {
        RescaleMode::ByLogS => (s.ln(), None),
        RescaleMode::ByLambda => {
            let out = min_displacement(&rep, LAMBDA_TOL)?;
            if !(out.lambda_hat > 0.0) {
                return Err(Error::InvalidArgument(format!("λ(ρ_s) vanishes at s = {s}; cannot rescale by it")));
            }
            (out.lambda_hat, Some(out))
        }
    };
    let spectrum = raw.map_entries(|v| v.scaled(1.0 / scale));
    Ok(Rescaled { spectrum, scale, lambda })
}

/// True when each value is at most (1 + slack) times its predecessor.
pub fn non_increasing_within(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack) + 1e-15)
}

/// Comparison at one sample.
#[derive(Clone, Debug)]
pub struct SampleRow {
    pub s: f64,
    /// Projective distance to the tropical spectrum; absent when that is zero.
    pub distance: Option<f64>,
    pub rescaled: Spectrum<f64>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub tropical: Spectrum<Rational>,
    pub rows: Vec<SampleRow>,
    /// Some tropical entry on the word set is nonzero.
    pub limit_nonzero: bool,
    /// The tropical spectrum vanishes on the word set, so the limit action
    /// has a fixed point as far as these words can tell.
    pub bounded_family: bool,
    /// The distance column is non-increasing within 10% slack (vacuous when
    /// there is no distance column).
    pub monotone: bool,
}

impl ConvergenceReport {
    pub fn distances(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.distance).collect()
    }
}

fn check_samples(s_list: &[f64], lower: f64) -> Result<()> {
    if let Some(s) = s_list.iter().find(|s| !(**s > lower) || !s.is_finite()) {
        return Err(Error::InvalidArgument(format!("sample {s} must be a finite number > {lower}")));
    }
    if s_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("samples must be strictly increasing".into()));
    }
    Ok(())
}

pub fn convergence_report(fam: &Family, words: &[Word], s_list: &[f64]) -> Result<ConvergenceReport> {
    check_samples(s_list, std::f64::consts::E)?;
    let tropical = fam.tropical_spectrum(words)?;
    let bounded_family = tropical.is_identically_zero();
    let mut rows = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let rescaled = rescaled_spectrum(fam, s, words, RescaleMode::ByLogS)?.spectrum;
        let distance = if bounded_family { None } else { proj_distance(&rescaled, &tropical)? };
        rows.push(SampleRow { s, distance, rescaled });
    }
    let distances: Vec<f64> = rows.iter().filter_map(|r| r.distance).collect();
    Ok(ConvergenceReport {
        tropical,
        monotone: non_increasing_within(&distances, MONOTONE_SLACK),
        limit_nonzero: !bounded_family,
        bounded_family,
        rows,
    })
}

/// ‖(1/log s)·v(ρ_s(γ)) − v_ω(γ)‖ for one word, unnormalized.
pub fn entry_error(rescaled: &ChamberVector<f64>, tropical: &ChamberVector<Rational>) -> f64 {
    rescaled.distance(&tropical.to_f64())
}

/// Residual |(1/log s)·log|f(s)| + val_∞(f)| at one sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub s: f64,
    /// Absent when f vanishes at s.
    pub residual: Option<f64>,
    pub note: Option<String>,
}

pub fn ultrafield_consistency(f: &RatFunc, s_list: &[f64]) -> Result<Vec<Residual>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_samples(s_list, 1.0)?;
    let v = f.val(Valuation::AtInfinity)?.finite().expect("nonzero") as f64;
    s_list
        .iter()
        .map(|&s| {
            let value = f.eval_at(s)?;
            if value == 0.0 || f.num().eval(&Rational::from_float(s).expect("finite")).is_zero() {
                return Ok(Residual { s, residual: None, note: Some(Error::ZeroAtSample(s).to_string()) });
            }
            Ok(Residual { s, residual: Some((value.abs().ln() / s.ln() + v).abs()), note: None })
        })
        .collect()
}

/// Largest unnormalized entry error, weighted by log s: an estimate of the
/// constant C(γ) in ‖(1/log s)v(ρ_s(γ)) − v_ω(γ)‖ ≤ C(γ)/log s.
pub fn error_constant(rescaled: &ChamberVector<f64>, tropical: &ChamberVector<Rational>, s: f64) -> f64 {
    entry_error(rescaled, tropical) * s.ln()
}
