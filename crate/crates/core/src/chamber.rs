//! The model flat A = {α ∈ ℝⁿ : Σα_i = 0}, its closed Weyl chamber (coordinates
//! sorted non-increasing), and marked spectra with values in the chamber.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::rational::to_f64;
use crate::exact_arith::Rational;
use crate::groups::Word;

/// Tolerance on Σ coords for floating chamber vectors, relative to 1 + Σ|coords|.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Scalar types a chamber vector can carry: `f64` on the archimedean side,
/// exact `Rational` on the building side.
pub trait Coord: Clone + PartialEq + PartialOrd + std::fmt::Debug {
    fn negate(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Whether a list of coordinates sums to zero (exactly or within tolerance).
    fn sums_to_zero(values: &[Self]) -> std::result::Result<(), f64>;
    fn zero() -> Self;
}

impl Coord for f64 {
    fn negate(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sums_to_zero(values: &[f64]) -> std::result::Result<(), f64> {
        let sum: f64 = values.iter().sum();
        let scale: f64 = 1.0 + values.iter().map(|v| v.abs()).sum::<f64>();
        if sum.abs() <= SUM_TOLERANCE * scale {
            Ok(())
        } else {
            Err(sum)
        }
    }
    fn zero() -> Self {
        0.0
    }
}

impl Coord for Rational {
    fn negate(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn sums_to_zero(values: &[Rational]) -> std::result::Result<(), f64> {
        let sum: Rational = values.iter().sum();
        if sum.is_zero() {
            Ok(())
        } else {
            Err(to_f64(&sum))
        }
    }
    fn zero() -> Self {
        Zero::zero()
    }
}

/// A point of the closed Weyl chamber of type A_{n−1}.
#[derive(Clone, PartialEq, Debug)]
pub struct ChamberVector<T = f64> {
    coords: Vec<T>,
}

impl<T: Coord> ChamberVector<T> {
    pub fn zero(n: usize) -> Self {
        ChamberVector { coords: vec![T::zero(); n] }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == T::zero())
    }

    pub fn to_f64(&self) -> ChamberVector<f64> {
        ChamberVector { coords: self.coords.iter().map(Coord::to_f64).collect() }
    }
}

impl ChamberVector<f64> {
    /// Multiplies every coordinate by a nonnegative scalar.
    pub fn scaled(&self, c: f64) -> ChamberVector<f64> {
        assert!(c >= 0.0, "scaling must preserve the chamber");
        ChamberVector { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn distance(&self, other: &ChamberVector<f64>) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

impl ChamberVector<Rational> {
    pub fn scaled(&self, c: &Rational) -> ChamberVector<Rational> {
        assert!(!c.is_negative(), "scaling must preserve the chamber");
        ChamberVector { coords: self.coords.iter().map(|x| x * c).collect() }
    }
}

fn descending<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    b.partial_cmp(a).unwrap_or(Ordering::Equal)
}

/// Sorts a trace-zero vector into the chamber.
pub fn project_type<T: Coord>(v: Vec<T>) -> Result<ChamberVector<T>> {
    T::sums_to_zero(&v).map_err(Error::NonZeroSum)?;
    let mut coords = v;
    coords.sort_by(descending);
    Ok(ChamberVector { coords })
}

/// type(−v).
pub fn opposite<T: Coord>(v: &ChamberVector<T>) -> ChamberVector<T> {
    let mut coords: Vec<T> = v.coords.iter().map(Coord::negate).collect();
    coords.sort_by(descending);
    ChamberVector { coords }
}

/// Euclidean norm on A.
pub fn chamber_norm<T: Coord>(v: &ChamberVector<T>) -> f64 {
    v.coords.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
}

/// Chamber-valued data indexed by reduced words, in length-lexicographic order.
#[derive(Clone, PartialEq, Debug)]
pub struct Spectrum<T = f64> {
    rank: usize,
    entries: BTreeMap<Word, ChamberVector<T>>,
}

impl<T: Coord> Spectrum<T> {
    pub fn new(rank: usize) -> Self {
        Spectrum { rank, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, word: Word, v: ChamberVector<T>) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::Dimension { expected: self.rank, found: v.rank() });
        }
        if word.is_empty() && !v.is_zero() {
            return Err(Error::InvalidArgument("the empty word must map to the zero vector".into()));
        }
        self.entries.insert(word, v);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &Word) -> Option<&ChamberVector<T>> {
        self.entries.get(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &ChamberVector<T>)> {
        self.entries.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.entries.keys()
    }

    /// True when every entry is the zero vector.
    pub fn is_identically_zero(&self) -> bool {
        self.entries.values().all(ChamberVector::is_zero)
    }

    /// sup over words of the chamber norm.
    pub fn sup_norm(&self) -> f64 {
        self.entries.values().map(chamber_norm).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Spectrum<f64> {
        Spectrum { rank: self.rank, entries: self.entries.iter().map(|(w, v)| (w.clone(), v.to_f64())).collect() }
    }

    pub fn map_entries<U: Coord>(&self, mut f: impl FnMut(&ChamberVector<T>) -> ChamberVector<U>) -> Spectrum<U> {
        Spectrum { rank: self.rank, entries: self.entries.iter().map(|(w, v)| (w.clone(), f(v))).collect() }
    }
}

/// Distance between projectivized spectra: each spectrum is divided by its sup
/// norm over the word set, then the sup over words of the entry distance is
/// taken. `None` when either spectrum is identically zero.
pub fn proj_distance<A: Coord, B: Coord>(u: &Spectrum<A>, w: &Spectrum<B>) -> Result<Option<f64>> {
    if u.rank != w.rank {
        return Err(Error::Dimension { expected: u.rank, found: w.rank });
    }
    if u.len() != w.len() || u.words().zip(w.words()).any(|(a, b)| a != b) {
        return Err(Error::WordSetMismatch);
    }
    let mu = u.sup_norm();
    let mw = w.sup_norm();
    if mu == 0.0 || mw == 0.0 {
        return Ok(None);
    }
    let d = u
        .entries
        .values()
        .zip(w.entries.values())
        .map(|(a, b)| {
            a.coords.iter().zip(&b.coords).map(|(x, y)| (x.to_f64() / mu - y.to_f64() / mw).powi(2)).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max);
    Ok(Some(d))
}
