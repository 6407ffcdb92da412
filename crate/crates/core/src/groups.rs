//! Reduced words in a free group, representations into SL_n, and their marked
//! spectra.

use std::cmp::Ordering;
use std::fmt;

use crate::arch::{self, RealMatrix};
use crate::chamber::{chamber_norm, Spectrum};
use crate::error::{Error, Result};
use crate::exact_arith::{RatFunc, Rational, Valuation};
use crate::matrix::{Field, Matrix};
use crate::nonarch::{self, ValuedMatrix};

/// Largest ball radius `ball` will enumerate.
pub const MAX_RADIUS: usize = 8;

/// A freely reduced word. Letter `k > 0` is generator `k − 1`, `−k` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<i32>,
}

fn letter_key(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

impl Ord for Word {
    /// Length first, then lexicographic with a < A < b < B < ...
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.len().cmp(&other.letters.len()).then_with(|| {
            let a = self.letters.iter().map(|&l| letter_key(l));
            let b = other.letters.iter().map(|&l| letter_key(l));
            a.cmp(b)
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Builds a word from signed letters, reducing freely.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Result<Self> {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(Error::InvalidArgument("letter 0 is not a generator".into()));
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Word { letters: out })
    }

    /// Generator `index` (zero-based) as a one-letter word.
    pub fn generator(index: usize) -> Self {
        Word { letters: vec![index as i32 + 1] }
    }

    /// Parses a string over a–z (generators) and A–Z (inverses); `"1"` or the
    /// empty string is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity());
        }
        let letters = text
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(Error::Parse(format!("invalid letter {c:?} in word {text:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(letters)
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(&other.letters).copied()).expect("nonzero letters")
    }

    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::identity(), |acc, _| acc.concat(self))
    }

    /// Largest generator index used, plus one.
    pub fn generators_used(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Image under the endomorphism sending generator i to `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut letters = Vec::new();
        for &l in &self.letters {
            let index = l.unsigned_abs() as usize - 1;
            let image = images.get(index).ok_or(Error::GeneratorOutOfRange { index, count: images.len() })?;
            if l > 0 {
                letters.extend_from_slice(&image.letters);
            } else {
                letters.extend(image.inverse().letters);
            }
        }
        Word::from_letters(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            let offset = (l.unsigned_abs() - 1) as u8;
            let c = if l > 0 { b'a' + offset } else { b'A' + offset };
            write!(f, "{}", c as char)?;
        }
        Ok(())
    }
}

/// All reduced words of length ≤ `radius` over `num_generators` free
/// generators, in length-lexicographic order.
pub fn ball(num_generators: usize, radius: usize) -> Result<Vec<Word>> {
    if radius > MAX_RADIUS {
        return Err(Error::RadiusTooLarge(radius));
    }
    if num_generators == 0 || num_generators > 26 {
        return Err(Error::InvalidArgument(format!("{num_generators} generators (need 1..=26)")));
    }
    let alphabet: Vec<i32> = (1..=num_generators as i32).flat_map(|g| [g, -g]).collect();
    let mut out = vec![Word::identity()];
    let mut shell = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(shell.len() * (alphabet.len() - 1).max(1));
        for w in &shell {
            for &l in &alphabet {
                if w.letters.last() == Some(&-l) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(Word { letters });
            }
        }
        out.extend(next.iter().cloned());
        shell = next;
    }
    Ok(out)
}

/// Generator images in SL_n of some exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation<F> {
    rank: usize,
    images: Vec<Matrix<F>>,
    inverses: Vec<Matrix<F>>,
}

/// Real representation with exact rational entries.
pub type RealRepresentation = Representation<Rational>;

impl<F: Field> Representation<F> {
    /// Checks that every image is n×n with determinant exactly 1.
    pub fn new(images: Vec<Matrix<F>>) -> Result<Self> {
        let rank = images
            .first()
            .map(Matrix::size)
            .ok_or_else(|| Error::InvalidArgument("a representation needs at least one generator".into()))?;
        let mut inverses = Vec::with_capacity(images.len());
        for m in &images {
            if m.size() != rank {
                return Err(Error::Dimension { expected: rank, found: m.size() });
            }
            let det = m.det();
            if det != F::one() {
                return Err(Error::Determinant(det.to_string()));
            }
            inverses.push(m.inverse()?);
        }
        Ok(Representation { rank, images, inverses })
    }

    /// The trivial representation of a free group of the given rank.
    pub fn trivial(rank: usize, num_generators: usize) -> Self {
        let id = Matrix::identity(rank);
        Representation { rank, images: vec![id.clone(); num_generators], inverses: vec![id; num_generators] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_generators(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Matrix<F>] {
        &self.images
    }

    pub fn inverses(&self) -> &[Matrix<F>] {
        &self.inverses
    }

    /// Ordered product of generator images along the word.
    pub fn evaluate(&self, w: &Word) -> Result<Matrix<F>> {
        let mut acc = Matrix::identity(self.rank);
        for &l in w.letters() {
            let index = l.unsigned_abs() as usize - 1;
            let m = if l > 0 { self.images.get(index) } else { self.inverses.get(index) };
            let m = m.ok_or(Error::GeneratorOutOfRange { index, count: self.images.len() })?;
            acc = acc.mul(m);
        }
        Ok(acc)
    }

    /// Generator i ↦ ρ(φ(i)).
    pub fn precompose(&self, phi: &[Word]) -> Result<Self> {
        let images = phi.iter().map(|w| self.evaluate(w)).collect::<Result<Vec<_>>>()?;
        Representation::new(images)
    }

    /// γ ↦ h ρ(γ) h⁻¹.
    pub fn conjugate(&self, h: &Matrix<F>) -> Result<Self> {
        let h_inv = h.inverse()?;
        Representation::new(self.images.iter().map(|m| h.mul(m).mul(&h_inv)).collect())
    }
}

impl RealRepresentation {
    /// γ ↦ v(ρ(γ)) on the given words.
    pub fn spectrum(&self, words: &[Word]) -> Result<Spectrum<f64>> {
        let mut s = Spectrum::new(self.rank);
        for w in words {
            let g: RealMatrix = self.evaluate(w)?;
            s.insert(w.clone(), arch::jordan_vector(&g)?)?;
        }
        Ok(s)
    }
}

/// Representation over ℚ(t) together with the valuation used to read off
/// translation vectors on the building.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuedRepresentation {
    pub rep: Representation<RatFunc>,
    pub valuation: Valuation,
}

impl ValuedRepresentation {
    pub fn spectrum(&self, words: &[Word]) -> Result<Spectrum<Rational>> {
        let mut s = Spectrum::new(self.rep.rank());
        for w in words {
            let g = ValuedMatrix::new(self.rep.evaluate(w)?, self.valuation)?;
            s.insert(w.clone(), nonarch::jordan_vector_trop(&g)?)?;
        }
        Ok(s)
    }
}

/// A word where ‖v(ρ(γ))‖ exceeds `lambda_hat` · |γ|.
#[derive(Clone, Debug, PartialEq)]
pub struct WordBoundViolation {
    pub word: Word,
    pub translation_length: f64,
    pub bound: f64,
}

/// Words γ with ℓ(ρ(γ)) > lambda_hat·|γ| + 1e−9.
pub fn check_word_bound(rep: &RealRepresentation, lambda_hat: f64, words: &[Word]) -> Result<Vec<WordBoundViolation>> {
    let spectrum = rep.spectrum(words)?;
    Ok(spectrum
        .iter()
        .filter_map(|(w, v)| {
            let length = chamber_norm(v);
            let bound = lambda_hat * w.len() as f64;
            (length > bound + 1e-9).then(|| WordBoundViolation { word: w.clone(), translation_length: length, bound })
        })
        .collect())
}
