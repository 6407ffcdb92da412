//! Built-in fixtures and seeded random generators shared by the test suites
//! and the `check` command.

use rand::Rng;

use crate::arch::{act, NormPoint, RealMatrix};
use crate::degeneration::Family;
use crate::exact_arith::{frac, int, RatFunc};
use crate::groups::RealRepresentation;
use crate::matrix::Matrix;

/// A random element of SL_n(ℤ): a product of `steps` elementary matrices
/// I + c·E_ij with c ∈ {±1, ±2}.
pub fn random_sl_int<R: Rng>(rng: &mut R, n: usize, steps: usize) -> RealMatrix {
    let mut g = Matrix::identity(n);
    if n < 2 {
        return g;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        let mut e = Matrix::identity(n);
        e.set(i, j, int(c));
        g = g.mul(&e);
    }
    g
}

/// A random exact point g·x₀ with g from [`random_sl_int`].
pub fn random_exact_point<R: Rng>(rng: &mut R, n: usize, steps: usize) -> NormPoint {
    act(&random_sl_int(rng, n, steps), &NormPoint::identity(n)).expect("g is invertible")
}

/// a ↦ diag(2, 1/2).
pub fn diagonal_rep() -> RealRepresentation {
    RealRepresentation::new(vec![Matrix::diagonal(vec![int(2), frac(1, 2)])]).expect("det 1")
}

/// a ↦ [[1, 1], [0, 1]].
pub fn unipotent_rep() -> RealRepresentation {
    RealRepresentation::new(vec![Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]).expect("square")]).expect("det 1")
}

/// A Schottky-type pair in SL₂(ℤ).
pub fn hyperbolic_pair_rep() -> RealRepresentation {
    RealRepresentation::new(vec![
        Matrix::from_i64_rows(&[&[2, 1], &[1, 1]]).expect("square"),
        Matrix::from_i64_rows(&[&[1, 1], &[1, 2]]).expect("square"),
    ])
    .expect("det 1")
}

fn diag_t() -> Matrix<RatFunc> {
    Matrix::diagonal(vec![RatFunc::t(), RatFunc::t().inv().expect("t ≠ 0")])
}

/// a ↦ diag(t, 1/t).
pub fn diagonal_family() -> Family {
    Family::new(vec![diag_t()]).expect("det 1")
}

/// a ↦ [[1, t], [0, 1]].
pub fn unipotent_family() -> Family {
    let g = Matrix::from_rows(vec![vec![RatFunc::one(), RatFunc::t()], vec![RatFunc::zero(), RatFunc::one()]])
        .expect("square");
    Family::new(vec![g]).expect("det 1")
}

/// a ↦ diag(t, 1/t), b ↦ c·diag(t, 1/t)·c⁻¹ with c = [[1, 1], [1, 2]].
pub fn free_family() -> Family {
    let c = Matrix::from_i64_rows(&[&[1, 1], &[1, 2]]).expect("square");
    let c_inv = c.inverse().expect("det 1").to_ratfunc();
    let b = c.to_ratfunc().mul(&diag_t()).mul(&c_inv);
    Family::new(vec![diag_t(), b]).expect("det 1")
}
