//! Dense square matrices over an exact field.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::rational::{int, to_f64};
use crate::exact_arith::{Poly, RatFunc, Rational};

/// Exact field operations used by the matrix routines.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        int(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_i64(v: i64) -> Self {
        RatFunc::from_i64(v)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

/// Row-major n×n matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, found: row.len() });
            }
            data.extend(row);
        }
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        Ok(Matrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn diagonal(entries: Vec<F>) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.data.iter()
    }

    pub fn rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<G: Field>(&self, f: impl FnMut(&F) -> G) -> Matrix<G> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field>(&self, f: impl FnMut(&F) -> Result<G>) -> Result<Matrix<G>> {
        Ok(Matrix { n: self.n, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut acc = F::zero();
            for k in 0..n {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.plus(&a.times(b));
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        Matrix::from_fn(self.n, |i, j| self.get(i, j).plus(other.get(i, j)))
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        self.map(|a| a.times(c))
    }

    pub fn transpose(&self) -> Matrix<F> {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> F {
        (0..self.n).fold(F::zero(), |acc, i| acc.plus(self.get(i, i)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn pow(&self, mut k: u32) -> Matrix<F> {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Gaussian elimination to upper-triangular form; returns the determinant.
    pub fn det(&self) -> F {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return F::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = det.negated();
            }
            let p = a[col * n + col].clone();
            det = det.times(&p);
            let p_inv = p.inverse().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].times(&p_inv);
                for j in col..n {
                    let v = a[r * n + j].minus(&factor.times(&a[col * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix<F>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Matrix::<F>::identity(n).data;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = a[col * n + col].inverse().expect("nonzero pivot");
            for j in 0..n {
                a[col * n + j] = a[col * n + j].times(&p_inv);
                inv[col * n + j] = inv[col * n + j].times(&p_inv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let v = a[r * n + j].minus(&factor.times(&a[col * n + j]));
                    a[r * n + j] = v;
                    let w = inv[r * n + j].minus(&factor.times(&inv[col * n + j]));
                    inv[r * n + j] = w;
                }
            }
        }
        Ok(Matrix { n, data: inv })
    }

    /// Coefficients of det(λI − A), low degree first (monic, length n + 1),
    /// by the Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<F> {
        let n = self.n;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Matrix::<F>::from_fn(n, |_, _| F::zero());
        for k in 1..=n {
            let shift = Matrix::identity(n).scale(&coeffs[n - k + 1]);
            m = self.mul(&m).add(&shift);
            let am = self.mul(&m);
            let k_inv = F::from_i64(k as i64).inverse().expect("characteristic zero");
            coeffs[n - k] = am.trace().times(&k_inv).negated();
        }
        coeffs
    }

    /// Leading principal minors, top-left 1×1 first.
    pub fn leading_minors(&self) -> Vec<F> {
        (1..=self.n).map(|k| Matrix::from_fn(k, |i, j| self.get(i, j).clone()).det()).collect()
    }
}

impl Matrix<Rational> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn charpoly_poly(&self) -> Poly {
        Poly::new(self.charpoly())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| to_f64(self.get(i, j)))
    }

    pub fn to_ratfunc(&self) -> Matrix<RatFunc> {
        self.map(|q| RatFunc::constant(q.clone()))
    }
}

impl<F: Field + fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
